use std::fmt::Write;

/// The two players. Even wins a play when the least priority seen
/// infinitely often is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("position {0} has no outgoing edge")]
    Dead(usize),
    #[error("edge to unknown position {0}")]
    UnknownPosition(usize),
    #[error("game has {size} positions, the exhaustive solver handles at most {max}")]
    TooLarge { size: usize, max: usize },
}

/// A finite min-parity game. Successor lists are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_position(&mut self, owner: Player, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        let s = &mut self.succ[from];
        if let Err(i) = s.binary_search(&to) {
            s.insert(i, to);
        }
    }

    pub fn set_priority(&mut self, v: usize, p: u32) {
        self.priority[v] = p;
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn succ(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn validate(&self) -> Result<(), GameError> {
        for (v, s) in self.succ.iter().enumerate() {
            if s.is_empty() {
                return Err(GameError::Dead(v));
            }
            if let Some(&w) = s.iter().find(|&&w| w >= self.len()) {
                return Err(GameError::UnknownPosition(w));
            }
        }
        Ok(())
    }

    pub(crate) fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, s) in self.succ.iter().enumerate() {
            for &w in s {
                pred[w].push(v);
            }
        }
        pred
    }

    /// DOT rendering: Even positions as circles, Odd as boxes, labelled by
    /// index and priority.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph game {\n");
        for v in 0..self.len() {
            let shape = match self.owner[v] {
                Player::Even => "circle",
                Player::Odd => "box",
            };
            let _ = writeln!(out, "  v{v} [shape={shape}, label=\"{v}:{}\"];", self.priority[v]);
        }
        for (v, s) in self.succ.iter().enumerate() {
            for w in s {
                let _ = writeln!(out, "  v{v} -> v{w};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Winning regions and memoryless strategies. `strategy[v]` is the chosen
/// successor when `v` is owned and won by the same player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }

    /// Checks that each player's strategy keeps plays inside its region and
    /// that every cycle reachable under it has a winning least priority.
    pub fn verify(&self, g: &ParityGame) -> bool {
        [Player::Even, Player::Odd].into_iter().all(|p| self.verify_player(g, p))
    }

    fn verify_player(&self, g: &ParityGame, p: Player) -> bool {
        let n = g.len();
        let inside = |v: usize| self.winner[v] == p;
        // restricted graph: p's positions follow the strategy, others keep all edges
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in (0..n).filter(|&v| inside(v)) {
            if g.owner(v) == p {
                match self.strategy[v] {
                    Some(w) if g.succ(v).contains(&w) && inside(w) => edges[v].push(w),
                    _ => return false,
                }
            } else {
                for &w in g.succ(v) {
                    if !inside(w) {
                        return false;
                    }
                    edges[v].push(w);
                }
            }
        }
        // a losing cycle exists iff for some priority r favouring the
        // opponent, the subgraph of positions with priority >= r has a cycle
        // through a position of priority r
        let mut prios: Vec<u32> = (0..n).filter(|&v| inside(v)).map(|v| g.priority(v)).collect();
        prios.sort_unstable();
        prios.dedup();
        for r in prios.into_iter().filter(|&r| Player::of_priority(r) != p) {
            let allowed: Vec<bool> = (0..n).map(|v| inside(v) && g.priority(v) >= r).collect();
            let sccs = crate::util::scc(n, |v| {
                if allowed[v] {
                    edges[v].iter().copied().filter(|&w| allowed[w]).collect()
                } else {
                    Vec::new()
                }
            });
            for comp in sccs {
                let cyclic = comp.len() > 1 || edges[comp[0]].contains(&comp[0]);
                if cyclic && comp.iter().any(|&v| allowed[v] && g.priority(v) == r) {
                    return false;
                }
            }
        }
        true
    }
}
