use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::corpus::{fresh_named, uniq};
use crate::logic::{syntax_error, Formula, ParseError, Prop};

/// Name of the distinguished free first-order variable.
pub const ROOT_VAR: &str = "x";

/// Monadic second-order formula over graphs. Variables starting with an
/// uppercase letter range over sets of vertices, the others over vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mso {
    True,
    False,
    Eq(String, String),
    Edge(String, String),
    In(String, String),
    Lab(Prop, String),
    Not(Box<Mso>),
    And(Box<Mso>, Box<Mso>),
    Or(Box<Mso>, Box<Mso>),
    Implies(Box<Mso>, Box<Mso>),
    Iff(Box<Mso>, Box<Mso>),
    Exists(String, Box<Mso>),
    Forall(String, Box<Mso>),
}

pub fn is_set_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

impl Mso {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Mso) -> Mso {
        Mso::Not(Box::new(a))
    }

    pub fn and(a: Mso, b: Mso) -> Mso {
        Mso::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Mso, b: Mso) -> Mso {
        Mso::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, a: Mso) -> Mso {
        Mso::Exists(v.into(), Box::new(a))
    }

    pub fn forall(v: &str, a: Mso) -> Mso {
        Mso::Forall(v.into(), Box::new(a))
    }

    /// Free variables, first-order and second-order alike.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut use_var = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Mso::True | Mso::False => {}
            Mso::Eq(a, b) | Mso::Edge(a, b) | Mso::In(a, b) => {
                use_var(a, bound);
                use_var(b, bound);
            }
            Mso::Lab(_, a) => use_var(a, bound),
            Mso::Not(a) => a.collect_free(bound, out),
            Mso::And(a, b) | Mso::Or(a, b) | Mso::Implies(a, b) | Mso::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Mso::Exists(v, a) | Mso::Forall(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of set-variable quantifiers.
    pub fn set_quantifiers(&self) -> usize {
        match self {
            Mso::Not(a) => a.set_quantifiers(),
            Mso::And(a, b) | Mso::Or(a, b) | Mso::Implies(a, b) | Mso::Iff(a, b) => {
                a.set_quantifiers() + b.set_quantifiers()
            }
            Mso::Exists(v, a) | Mso::Forall(v, a) => usize::from(is_set_var(v)) + a.set_quantifiers(),
            _ => 0,
        }
    }
}

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

impl Mso {
    fn level(&self) -> u8 {
        match self {
            Mso::Exists(..) | Mso::Forall(..) => QUANT,
            Mso::Iff(..) => IFF,
            Mso::Implies(..) => IMP,
            Mso::Or(..) => OR,
            Mso::And(..) => AND,
            _ => UNARY,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, QUANT)?;
            return f.write_str(")");
        }
        match self {
            Mso::True => f.write_str("true"),
            Mso::False => f.write_str("false"),
            Mso::Eq(a, b) => write!(f, "{a} = {b}"),
            Mso::Edge(a, b) => write!(f, "edg({a}, {b})"),
            Mso::In(a, b) => write!(f, "{a} in {b}"),
            Mso::Lab(p, a) => write!(f, "lab({p}, {a})"),
            Mso::Not(a) => {
                f.write_str("!")?;
                a.write_at(f, UNARY)
            }
            Mso::And(a, b) => {
                a.write_at(f, AND)?;
                f.write_str(" & ")?;
                b.write_at(f, UNARY)
            }
            Mso::Or(a, b) => {
                a.write_at(f, OR)?;
                f.write_str(" | ")?;
                b.write_at(f, AND)
            }
            Mso::Implies(a, b) => {
                a.write_at(f, OR)?;
                f.write_str(" -> ")?;
                b.write_at(f, IMP)
            }
            Mso::Iff(a, b) => {
                a.write_at(f, IFF)?;
                f.write_str(" <-> ")?;
                b.write_at(f, IMP)
            }
            Mso::Exists(v, a) => {
                write!(f, "exists {v}. ")?;
                a.write_at(f, QUANT)
            }
            Mso::Forall(v, a) => {
                write!(f, "forall {v}. ")?;
                a.write_at(f, QUANT)
            }
        }
    }
}

impl fmt::Display for Mso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, QUANT)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    const SYMS: [&str; 11] = ["<->", "->", "(", ")", "!", "&", "|", ".", ",", "=", "#"];
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        for sym in SYMS {
            if text[i..].starts_with(sym) {
                if sym == "#" {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        i += 1;
                    }
                } else {
                    out.push((Tok::Sym(sym), i));
                    i += sym.len();
                }
                continue 'outer;
            }
        }
        return Err(syntax_error(text, i, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'t> {
    text: &'t str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(syntax_error(self.text, self.offset(), msg))
    }

    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn formula(&mut self) -> Result<Mso, ParseError> {
        if let Tok::Ident(k) = self.peek().clone() {
            let exists = matches!(k.as_str(), "exists" | "E");
            if exists || matches!(k.as_str(), "forall" | "A") {
                self.bump();
                let v = self.ident()?;
                self.expect(".")?;
                let body = self.formula()?;
                return Ok(if exists { Mso::exists(&v, body) } else { Mso::forall(&v, body) });
            }
        }
        self.iff()
    }

    fn iff(&mut self) -> Result<Mso, ParseError> {
        let mut a = self.imp()?;
        while *self.peek() == Tok::Sym("<->") {
            self.bump();
            let b = self.imp()?;
            a = Mso::Iff(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn imp(&mut self) -> Result<Mso, ParseError> {
        let a = self.or()?;
        if *self.peek() == Tok::Sym("->") {
            self.bump();
            let b = self.imp_rhs()?;
            return Ok(Mso::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    /// Right operands may start with a quantifier, which then extends as far
    /// right as possible.
    fn imp_rhs(&mut self) -> Result<Mso, ParseError> {
        if matches!(self.peek(), Tok::Ident(k) if matches!(k.as_str(), "exists" | "forall" | "E" | "A")) {
            return self.formula();
        }
        self.imp()
    }

    fn or(&mut self) -> Result<Mso, ParseError> {
        let mut a = self.and()?;
        while *self.peek() == Tok::Sym("|") {
            self.bump();
            a = Mso::or(a, self.and()?);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<Mso, ParseError> {
        let mut a = self.unary()?;
        while *self.peek() == Tok::Sym("&") {
            self.bump();
            a = Mso::and(a, self.unary()?);
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Mso, ParseError> {
        match self.peek().clone() {
            Tok::Sym("!") => {
                self.bump();
                Ok(Mso::not(self.unary()?))
            }
            Tok::Sym("(") => {
                self.bump();
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "true" => {
                self.bump();
                Ok(Mso::True)
            }
            Tok::Ident(k) if k == "false" => {
                self.bump();
                Ok(Mso::False)
            }
            Tok::Ident(k) if (k == "edg" || k == "lab") && self.toks[self.pos + 1].0 == Tok::Sym("(") => {
                self.bump();
                self.bump();
                let a = self.ident()?;
                self.expect(",")?;
                let b = self.ident()?;
                self.expect(")")?;
                Ok(if k == "edg" {
                    Mso::Edge(a, b)
                } else {
                    Mso::Lab(Prop::new(&a), b)
                })
            }
            Tok::Ident(_) => {
                let a = self.ident()?;
                match self.bump() {
                    Tok::Sym("=") => Ok(Mso::Eq(a, self.ident()?)),
                    Tok::Ident(k) if k == "in" => Ok(Mso::In(a, self.ident()?)),
                    _ => {
                        self.pos -= 1;
                        self.fail("expected `=` or `in`")
                    }
                }
            }
            t => self.fail(format!("unexpected {t:?}")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "exists" | "forall" | "E" | "A" | "true" | "false" | "in")
}

/// Parses `exists X. forall y. (edg(x, y) -> y in X) & lab(a, x)` style text.
pub fn parse_mso(text: &str) -> Result<Mso, ParseError> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail("unexpected trailing input");
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsoSemantics {
    Structure,
    Tree,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MsoError {
    #[error("free variable `{0}`: only `{ROOT_VAR}` may occur free")]
    FreeVariable(String),
    #[error("`{ROOT_VAR}` is the distinguished variable and cannot be quantified")]
    RebindsRoot,
    #[error("`{0}` is used both as a vertex and a set")]
    Sort(String),
}

/// Translates an MSO formula with free vertex variable `x` into QCTL. Every
/// variable `v` becomes a proposition `pa_v`; vertex variables are pinned to
/// a single state with `uniq`. In structure mode the root itself is marked by
/// an outer `∃pa_x.(pa_x ∧ uniq(pa_x) ∧ ...)`.
pub fn mso_to_qctl(phi: &Mso, semantics: MsoSemantics) -> Result<Formula, MsoError> {
    if let Some(v) = phi.free_vars().into_iter().find(|v| v != ROOT_VAR) {
        return Err(MsoError::FreeVariable(v));
    }
    let mut used: BTreeSet<Prop> = BTreeSet::new();
    collect_labels(phi, &mut used);
    let root = fresh_named(&format!("pa_{ROOT_VAR}"), &used);
    used.insert(root);
    let mut t = Translator {
        semantics,
        root,
        used,
        scope: BTreeMap::new(),
    };
    let body = t.hat(phi)?;
    Ok(match semantics {
        MsoSemantics::Tree => body,
        MsoSemantics::Structure => {
            let r = Formula::atom(root);
            Formula::exists1(root, Formula::conj([r.clone(), uniq(&r), body]))
        }
    })
}

fn collect_labels(phi: &Mso, out: &mut BTreeSet<Prop>) {
    match phi {
        Mso::Lab(p, _) => {
            out.insert(*p);
        }
        Mso::Not(a) | Mso::Exists(_, a) | Mso::Forall(_, a) => collect_labels(a, out),
        Mso::And(a, b) | Mso::Or(a, b) | Mso::Implies(a, b) | Mso::Iff(a, b) => {
            collect_labels(a, out);
            collect_labels(b, out);
        }
        _ => {}
    }
}

struct Translator {
    semantics: MsoSemantics,
    root: Prop,
    used: BTreeSet<Prop>,
    scope: BTreeMap<String, Vec<Prop>>,
}

impl Translator {
    fn var(&self, v: &str) -> Prop {
        self.scope[v].last().copied().expect("bound variable")
    }

    fn is_root(&self, v: &str) -> bool {
        v == ROOT_VAR
    }

    fn check_vertex(&self, v: &str) -> Result<(), MsoError> {
        if is_set_var(v) {
            Err(MsoError::Sort(v.to_string()))
        } else {
            Ok(())
        }
    }

    fn hat(&mut self, phi: &Mso) -> Result<Formula, MsoError> {
        use Formula as F;
        let ef_and = |a: Formula, b: Formula| F::ef(F::and(a, b));
        Ok(match phi {
            Mso::True => F::True,
            Mso::False => F::False,
            Mso::Lab(a, v) => {
                self.check_vertex(v)?;
                if self.is_root(v) {
                    F::atom(*a)
                } else {
                    ef_and(F::atom(self.var(v)), F::atom(*a))
                }
            }
            Mso::Eq(a, b) => {
                self.check_vertex(a)?;
                self.check_vertex(b)?;
                match (self.is_root(a), self.is_root(b)) {
                    (true, true) => F::True,
                    (true, false) => F::atom(self.var(b)),
                    (false, true) => F::atom(self.var(a)),
                    (false, false) => ef_and(F::atom(self.var(a)), F::atom(self.var(b))),
                }
            }
            Mso::In(a, set) => {
                self.check_vertex(a)?;
                if !is_set_var(set) {
                    return Err(MsoError::Sort(set.clone()));
                }
                let s = F::atom(self.var(set));
                if self.is_root(a) {
                    s
                } else {
                    ef_and(F::atom(self.var(a)), s)
                }
            }
            Mso::Edge(a, b) => {
                self.check_vertex(a)?;
                self.check_vertex(b)?;
                let target = |t: &Self, v: &str| F::atom(if t.is_root(v) { t.root } else { t.var(v) });
                match (self.is_root(a), self.semantics) {
                    (true, MsoSemantics::Tree) if self.is_root(b) => F::False,
                    (true, _) => F::ex(target(self, b)),
                    (false, MsoSemantics::Tree) if self.is_root(b) => F::False,
                    (false, _) => ef_and(F::atom(self.var(a)), F::ex(target(self, b))),
                }
            }
            Mso::Not(a) => F::not(self.hat(a)?),
            Mso::And(a, b) => F::and(self.hat(a)?, self.hat(b)?),
            Mso::Or(a, b) => F::or(self.hat(a)?, self.hat(b)?),
            Mso::Implies(a, b) => F::implies(self.hat(a)?, self.hat(b)?),
            Mso::Iff(a, b) => F::iff(self.hat(a)?, self.hat(b)?),
            Mso::Exists(v, a) | Mso::Forall(v, a) => {
                if self.is_root(v) {
                    return Err(MsoError::RebindsRoot);
                }
                let p = fresh_named(&format!("pa_{v}"), &self.used);
                self.used.insert(p);
                self.scope.entry(v.clone()).or_default().push(p);
                let body = self.hat(a);
                self.scope.get_mut(v).expect("pushed").pop();
                let body = body?;
                let exists = matches!(phi, Mso::Exists(..));
                if is_set_var(v) {
                    if exists {
                        F::exists1(p, body)
                    } else {
                        F::forall1(p, body)
                    }
                } else {
                    let u = uniq(&F::atom(p));
                    if exists {
                        F::exists1(p, F::and(u, body))
                    } else {
                        F::forall1(p, F::implies(u, body))
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f = parse_mso("exists X. forall y. (edg(x, y) -> y in X) & lab(a, x)").unwrap();
        assert_eq!(f.to_string(), "exists X. forall y. (edg(x, y) -> y in X) & lab(a, x)");
        assert_eq!(parse_mso(&f.to_string()).unwrap(), f);
        assert_eq!(parse_mso("E y. x = y").unwrap(), Mso::exists("y", Mso::Eq("x".into(), "y".into())));
        assert!(parse_mso("edg(x y)").is_err());
    }

    #[test]
    fn rules() {
        let tr = |s: &str, m| mso_to_qctl(&parse_mso(s).unwrap(), m).unwrap().to_string();
        assert_eq!(tr("lab(a, x)", MsoSemantics::Tree), "a");
        assert_eq!(
            tr("exists x1. edg(x, x1)", MsoSemantics::Tree),
            "exists pa_x1. E F pa_x1 & (forall z. E F (pa_x1 & z) -> A G (pa_x1 -> z)) & E X pa_x1"
        );
        assert!(tr("exists y. edg(y, x)", MsoSemantics::Tree).contains("false"));
        assert!(tr("edg(x, x)", MsoSemantics::Structure).contains("E X pa_x"));
    }

    #[test]
    fn errors() {
        let f = parse_mso("edg(x, y)").unwrap();
        assert_eq!(mso_to_qctl(&f, MsoSemantics::Tree), Err(MsoError::FreeVariable("y".into())));
        let f = parse_mso("exists x. lab(a, x)").unwrap();
        assert_eq!(mso_to_qctl(&f, MsoSemantics::Tree), Err(MsoError::RebindsRoot));
    }
}
