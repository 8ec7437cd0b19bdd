use std::collections::BTreeSet;

use super::Prop;

/// Path quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    E,
    A,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::E => Quant::A,
            Quant::A => Quant::E,
        }
    }
}

/// State formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Prop(Prop),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Vec<Prop>, Box<Formula>),
    Forall(Vec<Prop>, Box<Formula>),
    Path(Quant, Box<PathFormula>),
}

/// Path formulas. Boolean nodes whose children are all state formulas are
/// folded into a single `State` node by the smart constructors, so every
/// path formula has one canonical shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathFormula {
    State(Formula),
    Not(Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    Or(Box<PathFormula>, Box<PathFormula>),
    Next(Box<PathFormula>),
    Until(Box<PathFormula>, Box<PathFormula>),
    WeakUntil(Box<PathFormula>, Box<PathFormula>),
    Finally(Box<PathFormula>),
    Globally(Box<PathFormula>),
}

/// A temporal operator applied directly to state formulas, the only shape a
/// path quantifier may take in QCTL.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Temporal<'a> {
    X(&'a Formula),
    F(&'a Formula),
    G(&'a Formula),
    U(&'a Formula, &'a Formula),
    W(&'a Formula, &'a Formula),
}

impl PathFormula {
    pub fn state(f: Formula) -> PathFormula {
        PathFormula::State(f)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: PathFormula) -> PathFormula {
        match p {
            PathFormula::State(f) => PathFormula::State(Formula::not(f)),
            p => PathFormula::Not(Box::new(p)),
        }
    }

    pub fn and(a: PathFormula, b: PathFormula) -> PathFormula {
        match (a, b) {
            (PathFormula::State(x), PathFormula::State(y)) => PathFormula::State(Formula::and(x, y)),
            (a, b) => PathFormula::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: PathFormula, b: PathFormula) -> PathFormula {
        match (a, b) {
            (PathFormula::State(x), PathFormula::State(y)) => PathFormula::State(Formula::or(x, y)),
            (a, b) => PathFormula::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn next(p: PathFormula) -> PathFormula {
        PathFormula::Next(Box::new(p))
    }

    pub fn until(a: PathFormula, b: PathFormula) -> PathFormula {
        PathFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: PathFormula, b: PathFormula) -> PathFormula {
        PathFormula::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn finally(p: PathFormula) -> PathFormula {
        PathFormula::Finally(Box::new(p))
    }

    pub fn globally(p: PathFormula) -> PathFormula {
        PathFormula::Globally(Box::new(p))
    }

    /// Recognizes the QCTL shapes: one temporal operator over state formulas.
    pub fn as_temporal(&self) -> Option<Temporal<'_>> {
        use PathFormula::*;
        match self {
            Next(p) => match &**p {
                State(f) => Some(Temporal::X(f)),
                _ => None,
            },
            Finally(p) => match &**p {
                State(f) => Some(Temporal::F(f)),
                _ => None,
            },
            Globally(p) => match &**p {
                State(f) => Some(Temporal::G(f)),
                _ => None,
            },
            Until(a, b) => match (&**a, &**b) {
                (State(x), State(y)) => Some(Temporal::U(x, y)),
                _ => None,
            },
            WeakUntil(a, b) => match (&**a, &**b) {
                (State(x), State(y)) => Some(Temporal::W(x, y)),
                _ => None,
            },
            _ => None,
        }
    }

    fn state_children<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        use PathFormula::*;
        match self {
            State(f) => out.push(f),
            Not(p) | Next(p) | Finally(p) | Globally(p) => p.state_children(out),
            And(a, b) | Or(a, b) | Until(a, b) | WeakUntil(a, b) => {
                a.state_children(out);
                b.state_children(out);
            }
        }
    }
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(Prop::new(name))
    }

    pub fn atom(p: Prop) -> Formula {
        Formula::Prop(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(props: Vec<Prop>, body: Formula) -> Formula {
        if props.is_empty() {
            return body;
        }
        Formula::Exists(props, Box::new(body))
    }

    pub fn forall(props: Vec<Prop>, body: Formula) -> Formula {
        if props.is_empty() {
            return body;
        }
        Formula::Forall(props, Box::new(body))
    }

    pub fn exists1(p: Prop, body: Formula) -> Formula {
        Formula::exists(vec![p], body)
    }

    pub fn forall1(p: Prop, body: Formula) -> Formula {
        Formula::forall(vec![p], body)
    }

    pub fn path(q: Quant, p: PathFormula) -> Formula {
        Formula::Path(q, Box::new(p))
    }

    pub fn ex(f: Formula) -> Formula {
        Formula::path(Quant::E, PathFormula::next(PathFormula::State(f)))
    }

    pub fn ax(f: Formula) -> Formula {
        Formula::path(Quant::A, PathFormula::next(PathFormula::State(f)))
    }

    pub fn ef(f: Formula) -> Formula {
        Formula::path(Quant::E, PathFormula::finally(PathFormula::State(f)))
    }

    pub fn af(f: Formula) -> Formula {
        Formula::path(Quant::A, PathFormula::finally(PathFormula::State(f)))
    }

    pub fn eg(f: Formula) -> Formula {
        Formula::path(Quant::E, PathFormula::globally(PathFormula::State(f)))
    }

    pub fn ag(f: Formula) -> Formula {
        Formula::path(Quant::A, PathFormula::globally(PathFormula::State(f)))
    }

    pub fn eu(a: Formula, b: Formula) -> Formula {
        Formula::path(Quant::E, PathFormula::until(PathFormula::State(a), PathFormula::State(b)))
    }

    pub fn au(a: Formula, b: Formula) -> Formula {
        Formula::path(Quant::A, PathFormula::until(PathFormula::State(a), PathFormula::State(b)))
    }

    pub fn ew(a: Formula, b: Formula) -> Formula {
        Formula::path(
            Quant::E,
            PathFormula::weak_until(PathFormula::State(a), PathFormula::State(b)),
        )
    }

    pub fn aw(a: Formula, b: Formula) -> Formula {
        Formula::path(
            Quant::A,
            PathFormula::weak_until(PathFormula::State(a), PathFormula::State(b)),
        )
    }

    /// Conjunction of a sequence; `true` when empty. Left-nested.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a sequence; `false` when empty. Left-nested.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// `(AX)^n f`
    pub fn ax_pow(n: usize, f: Formula) -> Formula {
        (0..n).fold(f, |acc, _| Formula::ax(acc))
    }

    /// Immediate state-formula children (path formulas are looked through).
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Prop(_) => Vec::new(),
            Not(f) | Exists(_, f) | Forall(_, f) => vec![&**f],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![&**a, &**b],
            Path(_, p) => {
                let mut out = Vec::new();
                p.state_children(&mut out);
                out
            }
        }
    }

    /// True when every path quantifier has exactly one temporal operator over
    /// state formulas.
    pub fn is_qctl(&self) -> bool {
        match self {
            Formula::Path(_, p) => {
                p.as_temporal().is_some() && self.children().iter().all(|c| c.is_qctl())
            }
            _ => self.children().iter().all(|c| c.is_qctl()),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => false,
            _ => self.children().iter().all(|c| c.is_quantifier_free()),
        }
    }

    /// Plain CTL: QCTL without propositional quantifiers.
    pub fn is_ctl(&self) -> bool {
        self.is_qctl() && self.is_quantifier_free()
    }

    /// Propositions with a free occurrence.
    pub fn free_props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Prop>, out: &mut BTreeSet<Prop>) {
        match self {
            Formula::Prop(p) => {
                if !bound.contains(p) {
                    out.insert(*p);
                }
            }
            Formula::Exists(ps, f) | Formula::Forall(ps, f) => {
                let n = bound.len();
                bound.extend(ps.iter().copied());
                f.collect_free(bound, out);
                bound.truncate(n);
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Every proposition occurring anywhere, bound or free, including binders.
    pub fn all_props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Prop>) {
        match self {
            Formula::Prop(p) => {
                out.insert(*p);
            }
            Formula::Exists(ps, _) | Formula::Forall(ps, _) => {
                out.extend(ps.iter().copied());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_all(out);
        }
    }

    /// Propositions bound by some quantifier.
    pub fn bound_props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut BTreeSet<Prop>) {
        if let Formula::Exists(ps, _) | Formula::Forall(ps, _) = self {
            out.extend(ps.iter().copied());
        }
        for c in self.children() {
            c.collect_bound(out);
        }
    }

    /// Rebuilds the formula with `f` applied to every immediate state child.
    pub fn map_children(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        use Formula::*;
        match self {
            True | False | Prop(_) => self.clone(),
            Not(a) => Not(Box::new(f(a))),
            And(a, b) => And(Box::new(f(a)), Box::new(f(b))),
            Or(a, b) => Or(Box::new(f(a)), Box::new(f(b))),
            Implies(a, b) => Implies(Box::new(f(a)), Box::new(f(b))),
            Iff(a, b) => Iff(Box::new(f(a)), Box::new(f(b))),
            Exists(ps, a) => Exists(ps.clone(), Box::new(f(a))),
            Forall(ps, a) => Forall(ps.clone(), Box::new(f(a))),
            Path(q, p) => Path(*q, Box::new(map_path(p, f))),
        }
    }

    /// Rewrites derived connectives: implications, equivalences, F, G and
    /// universal quantification become combinations of the core operators
    /// (¬, ∧, ∨, ∃, EX, AX, EU, AU, EW, AW).
    pub fn expand_derived(&self) -> Formula {
        use Formula::*;
        match self {
            Implies(a, b) => Formula::or(Formula::not(a.expand_derived()), b.expand_derived()),
            Iff(a, b) => {
                let (a, b) = (a.expand_derived(), b.expand_derived());
                Formula::or(
                    Formula::and(a.clone(), b.clone()),
                    Formula::and(Formula::not(a), Formula::not(b)),
                )
            }
            Forall(ps, f) => Formula::not(Formula::exists(
                ps.clone(),
                Formula::not(f.expand_derived()),
            )),
            Path(q, p) => match p.as_temporal() {
                Some(Temporal::F(f)) => {
                    let f = f.expand_derived();
                    match q {
                        Quant::E => Formula::eu(True, f),
                        Quant::A => Formula::au(True, f),
                    }
                }
                Some(Temporal::G(f)) => {
                    let f = f.expand_derived();
                    match q {
                        Quant::E => Formula::ew(f, False),
                        Quant::A => Formula::aw(f, False),
                    }
                }
                _ => self.map_children(&mut |c| c.expand_derived()),
            },
            _ => self.map_children(&mut |c| c.expand_derived()),
        }
    }
}

fn map_path(p: &PathFormula, f: &mut impl FnMut(&Formula) -> Formula) -> PathFormula {
    use PathFormula::*;
    match p {
        State(s) => State(f(s)),
        Not(a) => Not(Box::new(map_path(a, f))),
        Next(a) => Next(Box::new(map_path(a, f))),
        Finally(a) => Finally(Box::new(map_path(a, f))),
        Globally(a) => Globally(Box::new(map_path(a, f))),
        And(a, b) => And(Box::new(map_path(a, f)), Box::new(map_path(b, f))),
        Or(a, b) => Or(Box::new(map_path(a, f)), Box::new(map_path(b, f))),
        Until(a, b) => Until(Box::new(map_path(a, f)), Box::new(map_path(b, f))),
        WeakUntil(a, b) => WeakUntil(Box::new(map_path(a, f)), Box::new(map_path(b, f))),
    }
}
