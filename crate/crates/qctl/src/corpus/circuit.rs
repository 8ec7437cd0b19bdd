use crate::kripke::{Kripke, KripkeBuilder};
use crate::logic::{Formula, Prop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    One,
    Zero,
    And(Vec<usize>),
    Or(Vec<usize>),
    Not(usize),
}

/// A boolean circuit whose output is gate 0. Inputs of a gate are indices of
/// other gates; the wiring must be acyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("gate {0} is a negation; only monotone circuits are supported")]
    NotMonotone(usize),
    #[error("gate {0} has no inputs")]
    NoInputs(usize),
    #[error("gate {0} reads missing gate {1}")]
    Dangling(usize, usize),
    #[error("wiring is cyclic through gate {0}")]
    Cyclic(usize),
    #[error("circuit has no gate")]
    Empty,
}

impl Circuit {
    fn validate(&self) -> Result<(), CircuitError> {
        if self.gates.is_empty() {
            return Err(CircuitError::Empty);
        }
        for (i, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Not(_) => return Err(CircuitError::NotMonotone(i)),
                Gate::And(ins) | Gate::Or(ins) => {
                    if ins.is_empty() {
                        return Err(CircuitError::NoInputs(i));
                    }
                    if let Some(&j) = ins.iter().find(|&&j| j >= self.gates.len()) {
                        return Err(CircuitError::Dangling(i, j));
                    }
                }
                Gate::One | Gate::Zero => {}
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.gates.len()];
        fn dfs(c: &Circuit, i: usize, mark: &mut [u8]) -> Result<(), CircuitError> {
            match mark[i] {
                1 => return Err(CircuitError::Cyclic(i)),
                2 => return Ok(()),
                _ => {}
            }
            mark[i] = 1;
            if let Gate::And(ins) | Gate::Or(ins) = &c.gates[i] {
                for &j in ins {
                    dfs(c, j, mark)?;
                }
            }
            mark[i] = 2;
            Ok(())
        }
        for i in 0..self.gates.len() {
            dfs(self, i, &mut mark)?;
        }
        Ok(())
    }

    /// The monotone circuit of the corpus, whose output evaluates to 1.
    pub fn example() -> Circuit {
        use Gate::*;
        // 0: A, 1: B1, 2: B2, 3: C1, 4: C2, 5: C3, 6: D1, 7: D2, 8: D3, 9: one, 10: zero
        Circuit {
            gates: vec![
                Or(vec![1, 2]),
                Or(vec![3, 5]),
                And(vec![4, 5]),
                And(vec![6, 7]),
                And(vec![6, 8]),
                Or(vec![8, 10]),
                Or(vec![10, 9]),
                And(vec![9, 9]),
                And(vec![10, 9]),
                One,
                Zero,
            ],
        }
    }
}

/// `AG[(one → p) ∧ (zero → ¬p) ∧ (gand → (p ↔ AX p)) ∧ (gor → (p ↔ EX p))]`
pub fn circuit_constraint() -> Formula {
    let p = Formula::prop("p");
    let atom = Formula::prop;
    Formula::ag(Formula::conj([
        Formula::implies(atom("one"), p.clone()),
        Formula::implies(atom("zero"), Formula::not(p.clone())),
        Formula::implies(atom("gand"), Formula::iff(p.clone(), Formula::ax(p.clone()))),
        Formula::implies(atom("gor"), Formula::iff(p.clone(), Formula::ex(p.clone()))),
    ]))
}

/// `∃p.(p ∧ φ)`
pub fn circuit_formula() -> Formula {
    Formula::exists1(Prop::new("p"), Formula::and(Formula::prop("p"), circuit_constraint()))
}

/// `∀p.(φ → p)`
pub fn circuit_formula_universal() -> Formula {
    Formula::forall1(Prop::new("p"), Formula::implies(circuit_constraint(), Formula::prop("p")))
}

/// One state per gate (`n<i>`, initial `n0`), labelled `gand`, `gor`, `one` or
/// `zero`; terminal gates loop on themselves.
pub fn circuit_to_mc(c: &Circuit) -> Result<(Kripke, Formula), CircuitError> {
    c.validate()?;
    let mut b = KripkeBuilder::new();
    for (i, g) in c.gates.iter().enumerate() {
        let label = match g {
            Gate::One => "one",
            Gate::Zero => "zero",
            Gate::And(_) => "gand",
            Gate::Or(_) => "gor",
            Gate::Not(_) => unreachable!("validated"),
        };
        b.state(&format!("n{i}"), [Prop::new(label)]).expect("fresh names");
    }
    for (i, g) in c.gates.iter().enumerate() {
        match g {
            Gate::And(ins) | Gate::Or(ins) => {
                for &j in ins {
                    b.edge(i, j);
                }
            }
            _ => b.edge(i, i),
        }
    }
    b.init(0);
    Ok((b.build().expect("every gate has a successor"), circuit_formula()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc_structure::{check, CheckOptions};

    #[test]
    fn example_is_one() {
        let (s, f) = circuit_to_mc(&Circuit::example()).unwrap();
        let o = CheckOptions::default();
        assert!(check(&s, 0, &f, &o).unwrap());
        assert!(check(&s, 0, &circuit_formula_universal(), &o).unwrap());
    }

    #[test]
    fn single_one() {
        let (s, f) = circuit_to_mc(&Circuit { gates: vec![Gate::One] }).unwrap();
        assert!(check(&s, 0, &f, &CheckOptions::default()).unwrap());
    }

    #[test]
    fn errors() {
        let c = Circuit {
            gates: vec![Gate::Not(1), Gate::One],
        };
        assert_eq!(circuit_to_mc(&c).unwrap_err(), CircuitError::NotMonotone(0));
        let c = Circuit {
            gates: vec![Gate::And(vec![1]), Gate::Or(vec![0])],
        };
        assert!(matches!(circuit_to_mc(&c), Err(CircuitError::Cyclic(_))));
    }
}
