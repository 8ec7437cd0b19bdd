use std::fmt;

/// Automaton state identifier, local to one automaton.
pub type AState = usize;

/// A direction/state pair `(c, q)`: send a copy in state `q` to child `c`.
pub type Move = (usize, AState);

/// Positive boolean formula over moves. The smart constructors keep it
/// flattened and constant-folded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pbf {
    True,
    False,
    Atom(usize, AState),
    And(Vec<Pbf>),
    Or(Vec<Pbf>),
}

/// Minimal satisfying sets were requested beyond the configured bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TooManyModels(pub usize);

impl Pbf {
    pub fn atom(c: usize, q: AState) -> Pbf {
        Pbf::Atom(c, q)
    }

    pub fn and(a: Pbf, b: Pbf) -> Pbf {
        Pbf::conj([a, b])
    }

    pub fn or(a: Pbf, b: Pbf) -> Pbf {
        Pbf::disj([a, b])
    }

    pub fn conj(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = Vec::new();
        for it in items {
            match it {
                Pbf::True => {}
                Pbf::False => return Pbf::False,
                Pbf::And(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Pbf::True,
            1 => out.pop().expect("one element"),
            _ => Pbf::And(out),
        }
    }

    pub fn disj(items: impl IntoIterator<Item = Pbf>) -> Pbf {
        let mut out = Vec::new();
        for it in items {
            match it {
                Pbf::False => {}
                Pbf::True => return Pbf::True,
                Pbf::Or(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Pbf::False,
            1 => out.pop().expect("one element"),
            _ => Pbf::Or(out),
        }
    }

    /// Swaps conjunctions with disjunctions and the two constants.
    pub fn dual(&self) -> Pbf {
        match self {
            Pbf::True => Pbf::False,
            Pbf::False => Pbf::True,
            Pbf::Atom(c, q) => Pbf::Atom(*c, *q),
            Pbf::And(xs) => Pbf::disj(xs.iter().map(Pbf::dual)),
            Pbf::Or(xs) => Pbf::conj(xs.iter().map(Pbf::dual)),
        }
    }

    pub fn map_states(&self, f: &mut impl FnMut(AState) -> AState) -> Pbf {
        match self {
            Pbf::True => Pbf::True,
            Pbf::False => Pbf::False,
            Pbf::Atom(c, q) => Pbf::Atom(*c, f(*q)),
            Pbf::And(xs) => Pbf::conj(xs.iter().map(|x| x.map_states(f))),
            Pbf::Or(xs) => Pbf::disj(xs.iter().map(|x| x.map_states(f))),
        }
    }

    /// Does the set of moves accepted by `holds` satisfy the formula?
    pub fn satisfied_by(&self, holds: &impl Fn(usize, AState) -> bool) -> bool {
        match self {
            Pbf::True => true,
            Pbf::False => false,
            Pbf::Atom(c, q) => holds(*c, *q),
            Pbf::And(xs) => xs.iter().all(|x| x.satisfied_by(holds)),
            Pbf::Or(xs) => xs.iter().any(|x| x.satisfied_by(holds)),
        }
    }

    pub fn atoms(&self, out: &mut Vec<Move>) {
        match self {
            Pbf::True | Pbf::False => {}
            Pbf::Atom(c, q) => out.push((*c, *q)),
            Pbf::And(xs) | Pbf::Or(xs) => xs.iter().for_each(|x| x.atoms(out)),
        }
    }

    pub fn max_direction(&self) -> Option<usize> {
        let mut v = Vec::new();
        self.atoms(&mut v);
        v.into_iter().map(|(c, _)| c).max()
    }

    /// The inclusion-minimal satisfying move sets, each sorted. At most `cap`
    /// sets are built at any intermediate step.
    pub fn minimal_models(&self, cap: usize) -> Result<Vec<Vec<Move>>, TooManyModels> {
        let models = match self {
            Pbf::True => vec![Vec::new()],
            Pbf::False => Vec::new(),
            Pbf::Atom(c, q) => vec![vec![(*c, *q)]],
            Pbf::Or(xs) => {
                let mut all = Vec::new();
                for x in xs {
                    all.extend(x.minimal_models(cap)?);
                    if all.len() > cap {
                        return Err(TooManyModels(cap));
                    }
                }
                minimize(all)
            }
            Pbf::And(xs) => {
                let mut acc: Vec<Vec<Move>> = vec![Vec::new()];
                for x in xs {
                    let ms = x.minimal_models(cap)?;
                    let mut next = Vec::with_capacity(acc.len() * ms.len());
                    for a in &acc {
                        for m in &ms {
                            next.push(union_sorted(a, m));
                        }
                    }
                    if next.len() > cap.saturating_mul(4) {
                        return Err(TooManyModels(cap));
                    }
                    acc = minimize(next);
                    if acc.len() > cap {
                        return Err(TooManyModels(cap));
                    }
                }
                acc
            }
        };
        Ok(models)
    }
}

fn union_sorted(a: &[Move], b: &[Move]) -> Vec<Move> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn is_subset(small: &[Move], big: &[Move]) -> bool {
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Drops duplicates and non-minimal sets.
fn minimize(mut sets: Vec<Vec<Move>>) -> Vec<Vec<Move>> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut kept: Vec<Vec<Move>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| is_subset(k, &s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

impl fmt::Display for Pbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, xs: &[Pbf], op: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Pbf::True => f.write_str("true"),
            Pbf::False => f.write_str("false"),
            Pbf::Atom(c, q) => write!(f, "({c},{q})"),
            Pbf::And(xs) => join(f, xs, "&"),
            Pbf::Or(xs) => join(f, xs, "|"),
        }
    }
}
