use std::collections::BTreeSet;

use super::Kripke;
use crate::logic::Prop;

/// Raised when an enumeration would exceed its configured size.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("enumeration budget exceeded: {bits} labelling bits requested, cap is {cap}")]
pub struct EnumerationBudget {
    pub bits: usize,
    pub cap: usize,
}

/// Iterator over all relabellings of a proposition set, in bit-counter
/// order: bit `j * |P| + k` of the counter decides proposition `k` at state `j`.
pub struct RelabelVariants {
    base: Kripke,
    props: Vec<Prop>,
    next: u64,
    end: u64,
}

/// All structures that differ from `s` only on `props`. `cap_bits` bounds
/// `|Q| * |P|`.
pub fn relabel_variants(
    s: &Kripke,
    props: &BTreeSet<Prop>,
    cap_bits: usize,
) -> Result<RelabelVariants, EnumerationBudget> {
    let bits = s.len() * props.len();
    if bits > cap_bits.min(62) {
        return Err(EnumerationBudget {
            bits,
            cap: cap_bits.min(62),
        });
    }
    Ok(RelabelVariants {
        base: s.clone(),
        props: props.iter().copied().collect(),
        next: 0,
        end: 1u64 << bits,
    })
}

impl Iterator for RelabelVariants {
    type Item = Kripke;

    fn next(&mut self) -> Option<Kripke> {
        if self.next >= self.end {
            return None;
        }
        let counter = self.next;
        self.next += 1;
        let k = self.props.len();
        let labels = self
            .base
            .states()
            .map(|q| {
                let mut l = self.base.labels(q).clone();
                for (i, &p) in self.props.iter().enumerate() {
                    if counter >> (q * k + i) & 1 == 1 {
                        l.insert(p);
                    } else {
                        l.remove(&p);
                    }
                }
                l
            })
            .collect();
        Some(self.base.with_labels(labels))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{p_equivalent, parse_structure, tests::s0};

    #[test]
    fn counts() {
        let z: BTreeSet<Prop> = [Prop::new("z")].into();
        assert_eq!(relabel_variants(&s0(), &z, 20).unwrap().count(), 4);
        let none = relabel_variants(&s0(), &BTreeSet::new(), 20).unwrap().collect::<Vec<_>>();
        assert_eq!(none, vec![s0()]);
    }

    #[test]
    fn three_states_two_props() {
        let s = parse_structure("state a { a }\nstate b { c }\nstate c\nedge a b\nedge b c\nedge c a").unwrap();
        let ab: BTreeSet<Prop> = [Prop::new("a"), Prop::new("b")].into();
        let vs: Vec<Kripke> = relabel_variants(&s, &ab, 20).unwrap().collect();
        assert_eq!(vs.len(), 64);
        let others: BTreeSet<Prop> = [Prop::new("c")].into();
        for (i, v) in vs.iter().enumerate() {
            assert!(p_equivalent(v, &s, &others));
            for w in &vs[i + 1..] {
                assert_ne!(v, w);
            }
        }
    }

    #[test]
    fn cap() {
        let z: BTreeSet<Prop> = [Prop::new("z")].into();
        assert!(relabel_variants(&s0(), &z, 1).is_err());
    }
}
