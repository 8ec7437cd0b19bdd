use std::collections::{BTreeSet, HashMap};

use crate::kripke::{Kripke, KripkeBuilder, StateId};
use crate::logic::Prop;

/// A finite graph whose successor lists are ordered and may repeat a node.
/// Its unwinding from `root` is the regular tree it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TreeGraph {
    pub labels: Vec<BTreeSet<Prop>>,
    pub succ: Vec<Vec<usize>>,
    pub root: usize,
}

impl TreeGraph {
    /// Bypasses every node labelled `marker`: each other node gets as
    /// successors, with multiplicity, the first unmarked nodes below it.
    /// Returns `None` if some marked cycle is reachable, since the tree then
    /// has a branch that never leaves marked nodes.
    pub fn collapse(&self, marker: Prop) -> Option<TreeGraph> {
        if self.labels[self.root].contains(&marker) {
            return None;
        }
        let marked = |v: usize| self.labels[v].contains(&marker);
        let mut leaves_memo: HashMap<usize, Vec<usize>> = HashMap::new();
        // leaves below a marked node, in order
        fn leaves(
            g: &TreeGraph,
            v: usize,
            marked: &dyn Fn(usize) -> bool,
            memo: &mut HashMap<usize, Vec<usize>>,
            on_stack: &mut BTreeSet<usize>,
        ) -> Option<Vec<usize>> {
            if !marked(v) {
                return Some(vec![v]);
            }
            if let Some(l) = memo.get(&v) {
                return Some(l.clone());
            }
            if !on_stack.insert(v) {
                return None;
            }
            let mut out = Vec::new();
            for &w in &g.succ[v] {
                out.extend(leaves(g, w, marked, memo, on_stack)?);
            }
            on_stack.remove(&v);
            memo.insert(v, out.clone());
            Some(out)
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![self.root];
        ids.insert(self.root, 0);
        let mut succ = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let mut out = Vec::new();
            for &w in &self.succ[v] {
                for leaf in leaves(self, w, &marked, &mut leaves_memo, &mut BTreeSet::new())? {
                    let next = ids.len();
                    let id = *ids.entry(leaf).or_insert_with(|| {
                        order.push(leaf);
                        next
                    });
                    out.push(id);
                }
            }
            succ.push(out);
            i += 1;
        }
        let labels = order
            .iter()
            .map(|&v| self.labels[v].iter().copied().filter(|&p| p != marker).collect())
            .collect();
        Some(TreeGraph { labels, succ, root: 0 })
    }

    /// Keeps only the given propositions in the labels.
    pub fn restrict_labels(&mut self, keep: &BTreeSet<Prop>) {
        for l in &mut self.labels {
            l.retain(|p| keep.contains(p));
        }
    }

    /// Quotient by the coarsest partition in which equivalent nodes carry
    /// the same label and the same multiset of successor classes. Such
    /// nodes have isomorphic unwindings, so the regular tree is unchanged.
    pub fn quotient(&self) -> TreeGraph {
        let n = self.labels.len();
        let mut label_ids: HashMap<&BTreeSet<Prop>, usize> = HashMap::new();
        let mut class: Vec<usize> = (0..n)
            .map(|v| {
                let k = label_ids.len();
                *label_ids.entry(&self.labels[v]).or_insert(k)
            })
            .collect();
        loop {
            let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|v| {
                    let mut s: Vec<usize> = self.succ[v].iter().map(|&w| class[w]).collect();
                    s.sort_unstable();
                    let k = sigs.len();
                    *sigs.entry((class[v], s)).or_insert(k)
                })
                .collect();
            let stable = sigs.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes in order of first reach from the root
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut stack = vec![self.root];
        let mut seen = vec![false; n];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(class[v]) {
                e.insert(reps.len());
                reps.push(v);
            }
            stack.extend(self.succ[v].iter().rev());
        }
        let labels = reps.iter().map(|&v| self.labels[v].clone()).collect();
        let succ = reps
            .iter()
            .map(|&v| {
                let mut s: Vec<usize> = self.succ[v].iter().map(|&w| ids[&class[w]]).collect();
                s.sort_unstable();
                s
            })
            .collect();
        TreeGraph {
            labels,
            succ,
            root: ids[&class[self.root]],
        }
    }

    /// A structure with the same unwinding. A node listed `m` times by one
    /// parent becomes `m` identical copies.
    pub fn realize(&self, name: impl Fn(usize) -> String) -> (Kripke, StateId) {
        let n = self.labels.len();
        let mut copies = vec![1usize; n];
        for s in &self.succ {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for &w in s {
                *counts.entry(w).or_default() += 1;
            }
            for (w, c) in counts {
                copies[w] = copies[w].max(c);
            }
        }
        let mut b = KripkeBuilder::new();
        let mut first = Vec::with_capacity(n);
        for (v, &count) in copies.iter().enumerate() {
            first.push(b.len());
            for k in 0..count {
                let nm = if k == 0 { name(v) } else { format!("{}_{k}", name(v)) };
                b.state(&nm, self.labels[v].iter().copied()).expect("distinct names");
            }
        }
        for v in 0..n {
            let mut used: HashMap<usize, usize> = HashMap::new();
            let targets: Vec<usize> = self.succ[v]
                .iter()
                .map(|&w| {
                    let k = used.entry(w).or_default();
                    *k += 1;
                    first[w] + *k - 1
                })
                .collect();
            for k in 0..copies[v] {
                for &t in &targets {
                    b.edge(first[v] + k, t);
                }
            }
        }
        b.init(first[self.root]);
        (b.build().expect("every node has a successor"), first[self.root])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ps: &[&str]) -> BTreeSet<Prop> {
        ps.iter().map(|p| Prop::new(p)).collect()
    }

    #[test]
    fn collapse_bypasses_markers() {
        // 0 -> m -> (1, 1), 1 -> 1
        let g = TreeGraph {
            labels: vec![set(&["a"]), set(&["m"]), set(&["b"])],
            succ: vec![vec![1], vec![2, 2], vec![2]],
            root: 0,
        };
        let c = g.collapse(Prop::new("m")).unwrap();
        assert_eq!(c.succ, vec![vec![1, 1], vec![1]]);
        let (k, root) = c.realize(|v| format!("n{v}"));
        assert_eq!(k.len(), 3);
        assert_eq!(k.degree(root), 2);
    }

    #[test]
    fn marked_cycle_is_rejected() {
        let g = TreeGraph {
            labels: vec![set(&[]), set(&["m"])],
            succ: vec![vec![1], vec![1]],
            root: 0,
        };
        assert!(g.collapse(Prop::new("m")).is_none());
    }

    #[test]
    fn quotient_keeps_multiplicity() {
        // two equal leaves under the root merge into one class listed twice
        let g = TreeGraph {
            labels: vec![set(&["a"]), set(&[]), set(&[]), set(&["a"])],
            succ: vec![vec![1, 2], vec![1], vec![2], vec![1, 1]],
            root: 0,
        };
        let q = g.quotient();
        assert_eq!(q.labels.len(), 2);
        assert_eq!(q.succ[q.root].len(), 2);
    }
}
