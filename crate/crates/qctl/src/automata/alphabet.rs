use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::logic::Prop;

/// A letter is a bitmask over an [`Alphabet`]: bit `i` set means the `i`-th
/// proposition holds.
pub type Letter = u64;

/// Largest supported proposition universe.
pub const MAX_PROPS: usize = 63;

/// Ordered proposition universe of a run.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Rc<[Prop]>);

impl Alphabet {
    /// Panics when more than [`MAX_PROPS`] propositions are given; callers
    /// with user-controlled input go through [`Alphabet::try_new`].
    pub fn new(props: impl IntoIterator<Item = Prop>) -> Alphabet {
        Alphabet::try_new(props).expect("alphabet too large")
    }

    pub fn try_new(props: impl IntoIterator<Item = Prop>) -> Option<Alphabet> {
        let set: BTreeSet<Prop> = props.into_iter().collect();
        (set.len() <= MAX_PROPS).then(|| Alphabet(set.into_iter().collect()))
    }

    pub fn props(&self) -> &[Prop] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, p: Prop) -> Option<u32> {
        self.0.binary_search(&p).ok().map(|i| i as u32)
    }

    pub fn mask(&self, props: impl IntoIterator<Item = Prop>) -> Letter {
        props
            .into_iter()
            .filter_map(|p| self.bit(p))
            .fold(0, |m, b| m | 1 << b)
    }

    /// Letter of a state label; propositions outside the alphabet are dropped.
    pub fn letter<'a>(&self, labels: impl IntoIterator<Item = &'a Prop>) -> Letter {
        self.mask(labels.into_iter().copied())
    }

    pub fn holds(&self, letter: Letter, p: Prop) -> bool {
        self.bit(p).is_some_and(|b| letter >> b & 1 == 1)
    }

    /// Every letter, in increasing mask order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..(1u64 << self.0.len())
    }

    /// Letters whose propositions all lie in `mask`.
    pub fn letters_within(&self, mask: Letter) -> Vec<Letter> {
        let mut out = Vec::with_capacity(1 << mask.count_ones());
        let mut sub = mask;
        loop {
            out.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        out.reverse();
        out
    }

    pub fn props_of(&self, letter: Letter) -> BTreeSet<Prop> {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| letter >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    }

    pub fn show(&self, letter: Letter) -> String {
        let names: Vec<&str> = self.props_of(letter).into_iter().map(Prop::name).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        let a = Alphabet::new([Prop::new("q"), Prop::new("p")]);
        assert_eq!(a.bit(Prop::new("p")), Some(0));
        let l = a.mask([Prop::new("q"), Prop::new("zz")]);
        assert_eq!(l, 2);
        assert!(a.holds(l, Prop::new("q")));
        assert_eq!(a.show(3), "{p,q}");
        assert_eq!(a.letters().count(), 4);
    }
}
