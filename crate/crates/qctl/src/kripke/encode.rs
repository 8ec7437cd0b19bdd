use std::collections::HashSet;

use super::{Kripke, KripkeBuilder, StateId, StructureError};
use crate::logic::Prop;

/// Name of the proposition marking the intermediate states of a binary encoding.
pub const P_INT: &str = "p_int";

/// Result of [`binary_encode`].
#[derive(Clone, Debug)]
pub struct BinaryEncoding {
    pub structure: Kripke,
    /// New id of every original state.
    pub original: Vec<StateId>,
    /// Whether a state of the new structure is an intermediate one.
    pub internal: Vec<bool>,
}

/// Replaces every branching of degree `k > 1` by a complete binary tree of
/// `k - 1` intermediate states labelled exactly `{p_int}`. The tree is
/// left-leaning: the left subtree receives the first `ceil(k/2)` successors.
pub fn binary_encode(s: &Kripke) -> Result<BinaryEncoding, StructureError> {
    let p_int = Prop::new(P_INT);
    if s.props().contains(&p_int) {
        return Err(StructureError::ReservedProp(P_INT.to_string()));
    }
    let mut b = KripkeBuilder::new();
    for q in s.states() {
        b.state(s.name(q), s.labels(q).iter().copied())?;
    }
    let mut used: HashSet<String> = s.states().map(|q| s.name(q).to_string()).collect();
    let mut internal = vec![false; s.len()];
    for q in s.states() {
        let succ = s.succ(q);
        if succ.len() == 1 {
            b.edge(q, succ[0]);
            continue;
        }
        let mut counter = 0;
        let root = build(&mut b, &mut used, &mut internal, s.name(q), &mut counter, succ, p_int)?;
        b.edge(q, root);
    }
    Ok(BinaryEncoding {
        structure: b.build()?,
        original: s.states().collect(),
        internal,
    })
}

fn build(
    b: &mut KripkeBuilder,
    used: &mut HashSet<String>,
    internal: &mut Vec<bool>,
    owner: &str,
    counter: &mut usize,
    leaves: &[StateId],
    p_int: Prop,
) -> Result<StateId, StructureError> {
    if leaves.len() == 1 {
        return Ok(leaves[0]);
    }
    let mut name = format!("{owner}_i{counter}");
    *counter += 1;
    while used.contains(&name) {
        name.push('_');
    }
    used.insert(name.clone());
    let node = b.state(&name, [p_int])?;
    internal.push(true);
    let split = leaves.len().div_ceil(2);
    let left = build(b, used, internal, owner, counter, &leaves[..split], p_int)?;
    let right = build(b, used, internal, owner, counter, &leaves[split..], p_int)?;
    b.edge(node, left);
    b.edge(node, right);
    Ok(node)
}
