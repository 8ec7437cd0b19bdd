use std::collections::HashSet;
use std::fmt;

use super::{fresh::FreshNames, subst::rename_free, Formula, PathFormula, Prop, Quant};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Non-fatal observation made while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseWarning {
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Dot,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DArrow => f.write_str("`<->`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

pub(crate) fn error(text: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = position(text, offset);
    ParseError {
        offset,
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(error(text, i, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

const KEYWORDS: &[&str] = &["exists", "forall", "true", "false", "E", "A"];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
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

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(error(self.text, self.offset(), message))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn prop_name(&mut self) -> Result<Prop, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                if KEYWORDS.contains(&s.as_str()) {
                    return self.fail(format!("keyword `{s}` cannot be used as a proposition"));
                }
                if Prop::is_reserved_name(&s) {
                    return self.fail(format!("`{s}` uses the reserved prefix `__f`"));
                }
                self.bump();
                Ok(Prop::new(&s))
            }
            t => self.fail(format!("expected proposition, found {t}")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.peek_ident("exists") || self.peek_ident("forall") {
            let is_exists = self.peek_ident("exists");
            self.bump();
            let mut props = vec![self.prop_name()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                props.push(self.prop_name()?);
            }
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            return Ok(if is_exists {
                Formula::Exists(props, Box::new(body))
            } else {
                Formula::Forall(props, Box::new(body))
            });
        }
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                "E" | "A" => {
                    self.bump();
                    let q = if s == "E" { Quant::E } else { Quant::A };
                    let p = self.path()?;
                    Ok(Formula::Path(q, Box::new(p)))
                }
                "exists" | "forall" => self.fail("quantifier must be parenthesized here"),
                _ => Ok(Formula::Prop(self.prop_name()?)),
            },
            t => self.fail(format!("expected formula, found {t}")),
        }
    }

    /// The operand of a path quantifier.
    fn path(&mut self) -> Result<PathFormula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "X" || s == "F" || s == "G" => {
                self.bump();
                let arg = PathFormula::State(self.unary()?);
                Ok(match s.as_str() {
                    "X" => PathFormula::next(arg),
                    "F" => PathFormula::finally(arg),
                    _ => PathFormula::globally(arg),
                })
            }
            Tok::LBrack => self.bracket(),
            Tok::LParen => {
                self.bump();
                let p = self.pformula()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            t => self.fail(format!("expected X, F, G, `[` or `(` after path quantifier, found {t}")),
        }
    }

    fn bracket(&mut self) -> Result<PathFormula, ParseError> {
        self.expect(Tok::LBrack)?;
        let lhs = self.pformula()?;
        let weak = if self.peek_ident("U") {
            false
        } else if self.peek_ident("W") {
            true
        } else {
            return self.fail(format!("expected U or W, found {}", self.peek()));
        };
        self.bump();
        let rhs = self.pformula()?;
        self.expect(Tok::RBrack)?;
        Ok(if weak {
            PathFormula::weak_until(lhs, rhs)
        } else {
            PathFormula::until(lhs, rhs)
        })
    }

    // Path-level grammar: the state grammar extended with X, F, G and bracketed
    // until operators over path formulas. Implications between path formulas
    // are expanded.
    fn pformula(&mut self) -> Result<PathFormula, ParseError> {
        if self.peek_ident("exists") || self.peek_ident("forall") {
            return Ok(PathFormula::State(self.formula()?));
        }
        self.piff()
    }

    fn piff(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.pimp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.pimp()?;
            lhs = match (lhs, rhs) {
                (PathFormula::State(a), PathFormula::State(b)) => PathFormula::State(Formula::iff(a, b)),
                (a, b) => PathFormula::or(
                    PathFormula::and(a.clone(), b.clone()),
                    PathFormula::and(PathFormula::not(a), PathFormula::not(b)),
                ),
            };
        }
        Ok(lhs)
    }

    fn pimp(&mut self) -> Result<PathFormula, ParseError> {
        let lhs = self.por()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.pimp()?;
            return Ok(match (lhs, rhs) {
                (PathFormula::State(a), PathFormula::State(b)) => PathFormula::State(Formula::implies(a, b)),
                (a, b) => PathFormula::or(PathFormula::not(a), b),
            });
        }
        Ok(lhs)
    }

    fn por(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.pand()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.pand()?;
            lhs = PathFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn pand(&mut self) -> Result<PathFormula, ParseError> {
        let mut lhs = self.punary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.punary()?;
            lhs = PathFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn punary(&mut self) -> Result<PathFormula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(PathFormula::not(self.punary()?))
            }
            Tok::LParen => {
                self.bump();
                let p = self.pformula()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::LBrack => self.bracket(),
            Tok::Ident(s) if s == "X" || s == "F" || s == "G" => {
                self.bump();
                let arg = self.punary()?;
                Ok(match s.as_str() {
                    "X" => PathFormula::next(arg),
                    "F" => PathFormula::finally(arg),
                    _ => PathFormula::globally(arg),
                })
            }
            _ => Ok(PathFormula::State(self.unary()?)),
        }
    }
}

/// Parses a formula. Duplicate binders are renamed apart; see
/// [`parse_formula_with_warnings`] for the list of renamings.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with_warnings(text).map(|(f, _)| f)
}

pub fn parse_formula_with_warnings(text: &str) -> Result<(Formula, Vec<ParseWarning>), ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { text, toks, pos: 0 };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return parser.fail(format!("unexpected {} after formula", parser.peek()));
    }
    let mut warnings = Vec::new();
    let f = rename_duplicate_binders(&f, &mut warnings);
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok((f, warnings))
}

/// Renames every binder that shadows an enclosing binder of the same
/// proposition. Reuse in disjoint scopes is left alone.
pub fn rename_duplicate_binders(f: &Formula, warnings: &mut Vec<ParseWarning>) -> Formula {
    let mut fresh = FreshNames::for_formula(f);
    let mut seen = HashSet::new();
    rename_rec(f, &mut seen, &mut fresh, warnings)
}

fn rename_rec(
    f: &Formula,
    seen: &mut HashSet<Prop>,
    fresh: &mut FreshNames,
    warnings: &mut Vec<ParseWarning>,
) -> Formula {
    match f {
        Formula::Exists(ps, body) | Formula::Forall(ps, body) => {
            let mut new_ps = Vec::with_capacity(ps.len());
            let mut body = (**body).clone();
            let mut added = Vec::new();
            for &p in ps {
                if seen.insert(p) {
                    added.push(p);
                    new_ps.push(p);
                } else {
                    let q = fresh.next();
                    warnings.push(ParseWarning {
                        message: format!("proposition `{p}` quantified twice; inner binder renamed to `{q}`"),
                    });
                    body = rename_free(&body, p, q);
                    seen.insert(q);
                    added.push(q);
                    new_ps.push(q);
                }
            }
            let body = rename_rec(&body, seen, fresh, warnings);
            for p in added {
                seen.remove(&p);
            }
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(new_ps, Box::new(body))
            } else {
                Formula::Forall(new_ps, Box::new(body))
            }
        }
        _ => f.map_children(&mut |c| rename_rec(c, seen, fresh, warnings)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::prop(s)
    }

    #[test]
    fn fig2_formula_parses() {
        let f = parse_formula("exists z. (!z | E X z)").unwrap();
        let z = Prop::new("z");
        assert_eq!(
            f,
            Formula::Exists(vec![z], Box::new(Formula::or(Formula::not(p("z")), Formula::ex(p("z")))))
        );
    }

    #[test]
    fn constants() {
        assert_eq!(parse_formula("true").unwrap(), Formula::True);
        assert_eq!(parse_formula("false").unwrap(), Formula::False);
    }

    #[test]
    fn quantifier_inside_until() {
        let f = parse_formula("E [p U exists q. q]").unwrap();
        assert_eq!(
            f,
            Formula::eu(p("p"), Formula::Exists(vec![Prop::new("q")], Box::new(p("q"))))
        );
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a | b & c -> d <-> e").unwrap();
        let expected = Formula::iff(
            Formula::implies(Formula::or(p("a"), Formula::and(p("b"), p("c"))), p("d")),
            p("e"),
        );
        assert_eq!(f, expected);
        let g = parse_formula("a -> b -> c").unwrap();
        assert_eq!(g, Formula::implies(p("a"), Formula::implies(p("b"), p("c"))));
    }

    #[test]
    fn comments_and_blocks() {
        let f = parse_formula("# leading comment\nforall p, q. (p | q) # trailing").unwrap();
        assert!(matches!(f, Formula::Forall(ref ps, _) if ps.len() == 2));
    }

    #[test]
    fn reserved_prefix_rejected() {
        assert!(parse_formula("__f3 & p").is_err());
        assert!(parse_formula("exists __f1. p").is_err());
    }

    #[test]
    fn error_position() {
        let e = parse_formula("p &\n  & q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
    }

    #[test]
    fn duplicate_binders_renamed() {
        let (f, warnings) = parse_formula_with_warnings("exists p. (p & (exists p. E X p))").unwrap();
        assert_eq!(warnings.len(), 1);
        match f {
            Formula::Exists(_, body) => match *body {
                Formula::And(_, b) => match *b {
                    Formula::Exists(ps, body) => {
                        assert!(Prop::is_reserved_name(ps[0].name()));
                        assert_eq!(*body, Formula::ex(Formula::atom(ps[0])));
                    }
                other => panic!("unexpected {other:?}"),
                },
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
        let (_, warnings) = parse_formula_with_warnings("(exists p. p) & (exists p. E X p)").unwrap();
        assert!(warnings.is_empty());
    }

    #[test]
    fn ctl_star_path_formula() {
        let f = parse_formula("E (X X p & F q)").unwrap();
        assert!(!f.is_qctl());
        let g = parse_formula("E (X p)").unwrap();
        assert_eq!(g, Formula::ex(p("p")));
    }

    #[test]
    fn bare_quantifier_needs_parentheses() {
        assert!(parse_formula("p & exists q. q").is_err());
        assert!(parse_formula("p & (exists q. q)").is_ok());
    }
}
