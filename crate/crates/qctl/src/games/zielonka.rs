use super::{ParityGame, Player, Solution};

/// Solves a min-parity game with the recursive attractor algorithm.
/// Strategies pick the lowest-indexed suitable successor.
pub fn solve(g: &ParityGame) -> Solution {
    let n = g.len();
    let pred = g.predecessors();
    let mut winner = vec![Player::Even; n];
    let mut strategy = vec![None; n];
    let active = vec![true; n];
    let solver = Solver { g, pred: &pred };
    solver.solve(active, &mut winner, &mut strategy);
    Solution { winner, strategy }
}

struct Solver<'a> {
    g: &'a ParityGame,
    pred: &'a [Vec<usize>],
}

impl Solver<'_> {
    /// Attractor of `target` for `p` inside `active`. Records attractor moves
    /// for `p`'s positions outside the target.
    fn attractor(
        &self,
        active: &[bool],
        target: &[usize],
        p: Player,
        strategy: &mut [Option<usize>],
    ) -> Vec<bool> {
        let g = self.g;
        let n = g.len();
        let mut inside = vec![false; n];
        let mut count: Vec<usize> = (0..n)
            .map(|v| if active[v] { g.succ(v).iter().filter(|&&w| active[w]).count() } else { 0 })
            .collect();
        let mut queue: Vec<usize> = Vec::new();
        for &v in target {
            if !inside[v] {
                inside[v] = true;
                queue.push(v);
            }
        }
        while let Some(w) = queue.pop() {
            for &v in &self.pred[w] {
                if !active[v] || inside[v] {
                    continue;
                }
                if g.owner(v) == p {
                    // lowest-indexed successor already inside
                    strategy[v] = g.succ(v).iter().copied().find(|&x| active[x] && inside[x]);
                    inside[v] = true;
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        inside[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        inside
    }

    fn solve(&self, mut active: Vec<bool>, winner: &mut [Player], strategy: &mut [Option<usize>]) {
        let g = self.g;
        loop {
            let Some(p) = (0..g.len()).filter(|&v| active[v]).map(|v| g.priority(v)).min() else {
                return;
            };
            let alpha = Player::of_priority(p);
            let top: Vec<usize> = (0..g.len()).filter(|&v| active[v] && g.priority(v) == p).collect();
            let mut attr_strategy = vec![None; g.len()];
            let a = self.attractor(&active, &top, alpha, &mut attr_strategy);
            let rest: Vec<bool> = (0..g.len()).map(|v| active[v] && !a[v]).collect();
            let mut sub_winner = winner.to_vec();
            let mut sub_strategy = strategy.to_vec();
            self.solve(rest.clone(), &mut sub_winner, &mut sub_strategy);
            let opponent_region: Vec<usize> = (0..g.len())
                .filter(|&v| rest[v] && sub_winner[v] == alpha.opponent())
                .collect();
            if opponent_region.is_empty() {
                for v in (0..g.len()).filter(|&v| active[v]) {
                    winner[v] = alpha;
                    strategy[v] = if rest[v] {
                        sub_strategy[v]
                    } else if g.owner(v) == alpha {
                        attr_strategy[v].or_else(|| g.succ(v).iter().copied().find(|&w| active[w]))
                    } else {
                        None
                    };
                }
                return;
            }
            let mut b_strategy = vec![None; g.len()];
            let b = self.attractor(&active, &opponent_region, alpha.opponent(), &mut b_strategy);
            for v in (0..g.len()).filter(|&v| b[v]) {
                winner[v] = alpha.opponent();
                strategy[v] = if sub_winner[v] == alpha.opponent() && rest[v] {
                    sub_strategy[v]
                } else if g.owner(v) == alpha.opponent() {
                    b_strategy[v]
                } else {
                    None
                };
                active[v] = false;
            }
        }
    }
}
