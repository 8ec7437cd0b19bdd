use super::{GameError, ParityGame, Player, Solution};

pub const BRUTE_MAX_POSITIONS: usize = 10;

/// Exhaustive solver over all memoryless strategy pairs. Used as a reference
/// for small games.
pub fn brute_solve(g: &ParityGame) -> Result<Solution, GameError> {
    let n = g.len();
    if n > BRUTE_MAX_POSITIONS {
        return Err(GameError::TooLarge {
            size: n,
            max: BRUTE_MAX_POSITIONS,
        });
    }
    g.validate()?;
    let mine = |p: Player| -> Vec<usize> { (0..n).filter(|&v| g.owner(v) == p).collect() };
    let even_pos = mine(Player::Even);
    let odd_pos = mine(Player::Odd);
    let even_strats = strategies(g, &even_pos);
    let odd_strats = strategies(g, &odd_pos);

    // outcome[i][j] = bitmask of positions from which the play is won by Even
    let outcome: Vec<Vec<u32>> = even_strats
        .iter()
        .map(|se| {
            odd_strats
                .iter()
                .map(|so| {
                    let choice = |v: usize| if g.owner(v) == Player::Even { se[v] } else { so[v] };
                    (0..n).filter(|&v| play_winner(g, v, &choice) == Player::Even).fold(0, |m, v| m | 1 << v)
                })
                .collect()
        })
        .collect();
    let full = (1u32 << n) - 1;
    let even_won_by = |i: usize| outcome[i].iter().fold(full, |m, &o| m & o);
    let odd_won_by = |j: usize| outcome.iter().fold(full, |m, row| m & !row[j]);

    let even_region = (0..even_strats.len()).fold(0, |m, i| m | even_won_by(i));
    let best_even = (0..even_strats.len()).find(|&i| even_won_by(i) == even_region).expect("uniform strategy");
    let odd_region = (0..odd_strats.len()).fold(0, |m, j| m | odd_won_by(j));
    let best_odd = (0..odd_strats.len()).find(|&j| odd_won_by(j) == odd_region).expect("uniform strategy");
    debug_assert_eq!(even_region | odd_region, full);

    let winner: Vec<Player> =
        (0..n).map(|v| if even_region >> v & 1 == 1 { Player::Even } else { Player::Odd }).collect();
    let strategy = (0..n)
        .map(|v| match (g.owner(v), winner[v]) {
            (Player::Even, Player::Even) => Some(even_strats[best_even][v]),
            (Player::Odd, Player::Odd) => Some(odd_strats[best_odd][v]),
            _ => None,
        })
        .collect();
    Ok(Solution { winner, strategy })
}

/// All choice functions for the given positions, as full-length vectors.
fn strategies(g: &ParityGame, owned: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![usize::MAX; g.len()]];
    for &v in owned {
        out = out
            .into_iter()
            .flat_map(|s| {
                g.succ(v).iter().map(move |&w| {
                    let mut t = s.clone();
                    t[v] = w;
                    t
                })
            })
            .collect();
    }
    out
}

/// Follows the choices from `v` until a position repeats; the cycle's least
/// priority decides.
fn play_winner(g: &ParityGame, v: usize, choice: &impl Fn(usize) -> usize) -> Player {
    let mut seen = vec![usize::MAX; g.len()];
    let mut path = Vec::new();
    let mut cur = v;
    while seen[cur] == usize::MAX {
        seen[cur] = path.len();
        path.push(cur);
        cur = choice(cur);
    }
    let min = path[seen[cur]..].iter().map(|&w| g.priority(w)).min().expect("non-empty cycle");
    Player::of_priority(min)
}
