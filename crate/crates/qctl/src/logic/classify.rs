use std::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BodyKind {
    Ctl,
    CtlStar,
}

/// Alternation class of the quantifier prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixClass {
    /// `k` alternating blocks, the first existential.
    Eq(usize),
    /// `k` alternating blocks, the first universal.
    Aq(usize),
    Neither,
}

/// Nesting class: `Q(k)` for a CTL body with `k` nested quantifier blocks,
/// `QStar(k)` for a CTL* body.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverallClass {
    Q(usize),
    QStar(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentDescriptor {
    pub body: BodyKind,
    /// Nesting depth counting every single quantifier.
    pub quantifier_depth: usize,
    pub prenex: bool,
    pub prefix_class: PrefixClass,
    pub overall: OverallClass,
}

impl fmt::Display for PrefixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrefixClass::Eq(k) => write!(f, "EQ^{k}"),
            PrefixClass::Aq(k) => write!(f, "AQ^{k}"),
            PrefixClass::Neither => f.write_str("neither"),
        }
    }
}

impl fmt::Display for OverallClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverallClass::Q(k) => write!(f, "Q^{k}"),
            OverallClass::QStar(k) => write!(f, "Q^{k}*"),
        }
    }
}

impl fmt::Display for FragmentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match self.body {
            BodyKind::Ctl => "CTL",
            BodyKind::CtlStar => "CTL*",
        };
        write!(
            f,
            "body={body} depth={} prenex={} prefix={} class={}",
            self.quantifier_depth, self.prenex, self.prefix_class, self.overall
        )
    }
}

pub fn classify(f: &Formula) -> FragmentDescriptor {
    let m = block_depth(f);
    let body = if f.is_qctl() { BodyKind::Ctl } else { BodyKind::CtlStar };
    FragmentDescriptor {
        body,
        quantifier_depth: quantifier_depth(f),
        prenex: is_prenex(f),
        prefix_class: prefix_class(f),
        overall: match body {
            BodyKind::Ctl => OverallClass::Q(m),
            BodyKind::CtlStar => OverallClass::QStar(m),
        },
    }
}

pub fn quantifier_depth(f: &Formula) -> usize {
    match f {
        Formula::Exists(ps, g) | Formula::Forall(ps, g) => ps.len() + quantifier_depth(g),
        _ => f.children().into_iter().map(quantifier_depth).max().unwrap_or(0),
    }
}

/// Nesting depth of quantifier blocks; directly nested quantifiers of the same
/// kind form one block.
pub fn block_depth(f: &Formula) -> usize {
    match f {
        Formula::Exists(_, g) => block_depth(g) + usize::from(!matches!(**g, Formula::Exists(..))),
        Formula::Forall(_, g) => block_depth(g) + usize::from(!matches!(**g, Formula::Forall(..))),
        _ => f.children().into_iter().map(block_depth).max().unwrap_or(0),
    }
}

/// A chain of quantifiers over a quantifier-free matrix.
pub fn is_prenex(f: &Formula) -> bool {
    match f {
        Formula::Exists(_, g) | Formula::Forall(_, g) => is_prenex(g),
        _ => f.is_quantifier_free(),
    }
}

/// Minimal number of prefix blocks when the formula is put in prenex form by
/// boolean rules only, for a prefix starting with ∃ and with ∀ respectively.
/// `None` when some quantifier sits below a temporal operator.
fn alternation(f: &Formula) -> Option<(usize, usize)> {
    if f.is_quantifier_free() {
        return Some((0, 0));
    }
    match f {
        Formula::Not(g) => alternation(g).map(|(e, a)| (a, e)),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (e1, a1) = alternation(a)?;
            let (e2, a2) = alternation(b)?;
            Some((e1.max(e2), a1.max(a2)))
        }
        Formula::Implies(a, b) => {
            let (e1, a1) = alternation(a)?;
            let (e2, a2) = alternation(b)?;
            Some((a1.max(e2), e1.max(a2)))
        }
        Formula::Iff(a, b) => {
            let (e1, a1) = alternation(a)?;
            let (e2, a2) = alternation(b)?;
            let k = e1.max(a1).max(e2).max(a2);
            Some((k, k))
        }
        Formula::Exists(_, g) => {
            let (e, a) = alternation(g)?;
            let e = e.min(a + 1).max(1);
            Some((e, e + 1))
        }
        Formula::Forall(_, g) => {
            let (e, a) = alternation(g)?;
            let a = a.min(e + 1).max(1);
            Some((a + 1, a))
        }
        _ => None,
    }
}

pub fn prefix_class(f: &Formula) -> PrefixClass {
    if f.is_quantifier_free() {
        return PrefixClass::Neither;
    }
    match alternation(f) {
        Some((e, a)) if e <= a => PrefixClass::Eq(e),
        Some((_, a)) => PrefixClass::Aq(a),
        None => PrefixClass::Neither,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn c(s: &str) -> FragmentDescriptor {
        classify(&parse_formula(s).unwrap())
    }

    #[test]
    fn base_case() {
        let d = c("exists p. A G p");
        assert_eq!(d.body, BodyKind::Ctl);
        assert_eq!(d.quantifier_depth, 1);
        assert!(d.prenex);
        assert_eq!(d.prefix_class, PrefixClass::Eq(1));
        assert_eq!(d.overall, OverallClass::Q(1));
    }

    #[test]
    fn two_alternations() {
        let d = c("exists p. forall q. E F (p & q)");
        assert_eq!(d.quantifier_depth, 2);
        assert!(d.prenex);
        assert_eq!(d.prefix_class, PrefixClass::Eq(2));
        assert_eq!(d.overall, OverallClass::Q(2));
    }

    #[test]
    fn quantifier_free() {
        let d = c("A G p");
        assert_eq!(d.quantifier_depth, 0);
        assert!(d.prenex);
        assert_eq!(d.prefix_class, PrefixClass::Neither);
        assert_eq!(d.overall, OverallClass::Q(0));
    }

    #[test]
    fn blocks_and_boolean_pulling() {
        let d = c("exists p, q. E X (p & q)");
        assert_eq!(d.quantifier_depth, 2);
        assert_eq!(d.overall, OverallClass::Q(1));
        assert_eq!(d.prefix_class, PrefixClass::Eq(1));
        let d = c("(exists p. E X p) & !(exists q. q)");
        assert!(!d.prenex);
        assert_eq!(d.prefix_class, PrefixClass::Eq(2));
        let d = c("E X (exists p. p)");
        assert_eq!(d.prefix_class, PrefixClass::Neither);
        assert_eq!(d.overall, OverallClass::Q(1));
    }

    #[test]
    fn universal_prefix() {
        assert_eq!(c("forall z. (z -> E X z)").prefix_class, PrefixClass::Aq(1));
        assert_eq!(c("forall a. exists b. (a | b)").prefix_class, PrefixClass::Aq(2));
    }

    #[test]
    fn star_body() {
        let d = c("exists p. E (X X p)");
        assert_eq!(d.body, BodyKind::CtlStar);
        assert_eq!(d.overall, OverallClass::QStar(1));
    }
}
