use std::collections::{BTreeMap, BTreeSet};

use crate::kripke::{Kripke, KripkeBuilder, StateId};
use crate::logic::{Formula, Prop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: &str) -> Literal {
        Literal { var: var.into(), positive: true }
    }

    pub fn neg(var: &str) -> Literal {
        Literal { var: var.into(), positive: false }
    }
}

/// `∃B1 ∀B2 ... . matrix`, with alternating blocks starting existentially.
/// The matrix is a conjunction of clauses when the number of blocks is odd
/// and a disjunction of conjunctive terms when it is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfInstance {
    pub blocks: Vec<Vec<String>>,
    pub matrix: Vec<Vec<Literal>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QbfError {
    #[error("only 1 or 2 quantifier blocks are supported, got {0}")]
    Blocks(usize),
    #[error("variable `{0}` appears in more than one block")]
    Repeated(String),
    #[error("matrix uses unquantified variable `{0}`")]
    Unbound(String),
    #[error("empty clause or term")]
    EmptyClause,
}

impl QbfInstance {
    pub fn is_cnf(&self) -> bool {
        self.blocks.len() % 2 == 1
    }

    fn validate(&self) -> Result<BTreeMap<&str, usize>, QbfError> {
        let k = self.blocks.len();
        if !(1..=2).contains(&k) {
            return Err(QbfError::Blocks(k));
        }
        let mut block_of = BTreeMap::new();
        for (l, block) in self.blocks.iter().enumerate() {
            for v in block {
                if block_of.insert(v.as_str(), l).is_some() {
                    return Err(QbfError::Repeated(v.clone()));
                }
            }
        }
        for clause in &self.matrix {
            if clause.is_empty() {
                return Err(QbfError::EmptyClause);
            }
            if let Some(lit) = clause.iter().find(|l| !block_of.contains_key(l.var.as_str())) {
                return Err(QbfError::Unbound(lit.var.clone()));
            }
        }
        Ok(block_of)
    }
}

fn block_name(l: usize) -> String {
    format!("b{}", l + 1)
}

/// Builds the fixed-formula reduction: a root `phi` with one successor per
/// clause (or term) and one test gadget per variable; literal states `x_<v>`
/// and `nx_<v>` carry self-loops. Test states are labelled `test` and
/// `test_<block>`; with two blocks, literal states of block `l` are labelled
/// `b<l>`. The formula does not depend on the instance beyond its number of
/// blocks.
pub fn qbf_to_mc(inst: &QbfInstance) -> Result<(Kripke, Formula), QbfError> {
    let block_of = inst.validate()?;
    let k = inst.blocks.len();
    let test = Prop::new("test");
    let mut b = KripkeBuilder::new();
    let root = b.state("phi", std::iter::empty::<Prop>()).expect("fresh");
    b.init(root);
    let mut lit_state: BTreeMap<(String, bool), StateId> = BTreeMap::new();
    let mut tests = Vec::new();
    for (l, block) in inst.blocks.iter().enumerate() {
        let mut lit_labels = BTreeSet::new();
        if k > 1 {
            lit_labels.insert(Prop::new(&block_name(l)));
        }
        for v in block {
            let t = b
                .state(&format!("test_{v}"), [test, Prop::new(&format!("test_{}", l + 1))])
                .expect("variables are distinct");
            tests.push(t);
            for positive in [true, false] {
                let name = if positive { format!("x_{v}") } else { format!("nx_{v}") };
                let q = b.state(&name, lit_labels.iter().copied()).expect("variables are distinct");
                b.edge(t, q);
                b.edge(q, q);
                lit_state.insert((v.clone(), positive), q);
            }
        }
    }
    for (i, clause) in inst.matrix.iter().enumerate() {
        let c = b.state(&format!("c{}", i + 1), std::iter::empty::<Prop>()).expect("fresh");
        b.edge(root, c);
        for lit in clause {
            debug_assert!(block_of.contains_key(lit.var.as_str()));
            b.edge(c, lit_state[&(lit.var.clone(), lit.positive)]);
        }
    }
    for t in tests {
        b.edge(root, t);
    }
    if inst.matrix.is_empty() && inst.blocks.iter().all(|b| b.is_empty()) {
        b.edge(root, root);
    }
    let s = b.build().expect("every state has a successor");
    Ok((s, qbf_formula(k)))
}

/// `Φ` for one block, `Φ_2` for two.
pub fn qbf_formula(k: usize) -> Formula {
    let atom = Formula::prop;
    let test_gadget = |t: &str, mark: &str| {
        Formula::ax(Formula::implies(
            atom(t),
            Formula::and(Formula::ex(atom(mark)), Formula::ex(Formula::not(atom(mark)))),
        ))
    };
    match k {
        1 => Formula::exists1(
            Prop::new("mark"),
            Formula::and(
                test_gadget("test", "mark"),
                Formula::ax(Formula::implies(Formula::not(atom("test")), Formula::ex(atom("mark")))),
            ),
        ),
        2 => {
            let chosen = Formula::or(
                Formula::and(atom("b1"), atom("mark1")),
                Formula::and(atom("b2"), atom("mark2")),
            );
            Formula::exists1(
                Prop::new("mark1"),
                Formula::forall1(
                    Prop::new("mark2"),
                    Formula::and(
                        test_gadget("test_1", "mark1"),
                        Formula::implies(
                            test_gadget("test_2", "mark2"),
                            Formula::ex(Formula::and(Formula::not(atom("test")), Formula::ax(chosen))),
                        ),
                    ),
                ),
            )
        }
        _ => panic!("only 1 or 2 blocks"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc_structure::{check, CheckOptions};

    fn truth(inst: &QbfInstance) -> bool {
        let (s, f) = qbf_to_mc(inst).unwrap();
        check(&s, 0, &f, &CheckOptions::default()).unwrap()
    }

    #[test]
    fn single_variable() {
        let yes = QbfInstance {
            blocks: vec![vec!["x".into()]],
            matrix: vec![vec![Literal::pos("x")]],
        };
        assert!(truth(&yes));
        let no = QbfInstance {
            blocks: vec![vec!["x".into()]],
            matrix: vec![vec![Literal::pos("x")], vec![Literal::neg("x")]],
        };
        assert!(!truth(&no));
    }

    #[test]
    fn two_blocks() {
        // ∃x ∀y. (x ∧ y) ∨ (x ∧ ¬y): true with x = 1.
        let yes = QbfInstance {
            blocks: vec![vec!["x".into()], vec!["y".into()]],
            matrix: vec![vec![Literal::pos("x"), Literal::pos("y")], vec![Literal::pos("x"), Literal::neg("y")]],
        };
        assert!(truth(&yes));
        // ∃x ∀y. (x ∧ y): false.
        let no = QbfInstance {
            blocks: vec![vec!["x".into()], vec!["y".into()]],
            matrix: vec![vec![Literal::pos("x"), Literal::pos("y")]],
        };
        assert!(!truth(&no));
    }

    #[test]
    fn rejects_three_blocks() {
        let inst = QbfInstance {
            blocks: vec![vec![], vec![], vec![]],
            matrix: vec![],
        };
        assert_eq!(qbf_to_mc(&inst).unwrap_err(), QbfError::Blocks(3));
    }
}
