use std::fmt::{self, Write};

use super::{Formula, PathFormula, Quant, Temporal};

// Binding strength, weakest first.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_state(out: &mut impl Write, f: &Formula, min: u8) -> fmt::Result {
    let paren = level(f) < min;
    if paren {
        out.write_char('(')?;
    }
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Prop(p) => out.write_str(p.name())?,
        Formula::Not(a) => {
            out.write_char('!')?;
            write_state(out, a, UNARY)?;
        }
        Formula::And(a, b) => {
            write_state(out, a, AND)?;
            out.write_str(" & ")?;
            write_state(out, b, UNARY)?;
        }
        Formula::Or(a, b) => {
            write_state(out, a, OR)?;
            out.write_str(" | ")?;
            write_state(out, b, AND)?;
        }
        Formula::Implies(a, b) => {
            write_state(out, a, OR)?;
            out.write_str(" -> ")?;
            write_state(out, b, IMP)?;
        }
        Formula::Iff(a, b) => {
            write_state(out, a, IFF)?;
            out.write_str(" <-> ")?;
            write_state(out, b, IMP)?;
        }
        Formula::Exists(ps, body) | Formula::Forall(ps, body) => {
            out.write_str(if matches!(f, Formula::Exists(..)) { "exists " } else { "forall " })?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                out.write_str(p.name())?;
            }
            out.write_str(". ")?;
            write_state(out, body, QUANT)?;
        }
        Formula::Path(q, p) => {
            out.write_str(match q {
                Quant::E => "E ",
                Quant::A => "A ",
            })?;
            match p.as_temporal() {
                Some(Temporal::X(a)) => {
                    out.write_str("X ")?;
                    write_state(out, a, UNARY)?;
                }
                Some(Temporal::F(a)) => {
                    out.write_str("F ")?;
                    write_state(out, a, UNARY)?;
                }
                Some(Temporal::G(a)) => {
                    out.write_str("G ")?;
                    write_state(out, a, UNARY)?;
                }
                Some(Temporal::U(a, b)) => {
                    out.write_char('[')?;
                    write_state(out, a, IFF)?;
                    out.write_str(" U ")?;
                    write_state(out, b, QUANT)?;
                    out.write_char(']')?;
                }
                Some(Temporal::W(a, b)) => {
                    out.write_char('[')?;
                    write_state(out, a, IFF)?;
                    out.write_str(" W ")?;
                    write_state(out, b, QUANT)?;
                    out.write_char(']')?;
                }
                None => {
                    out.write_char('(')?;
                    write_path(out, p, OR)?;
                    out.write_char(')')?;
                }
            }
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

fn path_level(p: &PathFormula) -> u8 {
    match p {
        PathFormula::Or(..) => OR,
        PathFormula::And(..) => AND,
        PathFormula::State(f) if level(f) < OR => UNARY,
        PathFormula::State(f) => level(f),
        _ => UNARY,
    }
}

fn write_path(out: &mut impl Write, p: &PathFormula, min: u8) -> fmt::Result {
    let paren = path_level(p) < min;
    if paren {
        out.write_char('(')?;
    }
    match p {
        // Quantifiers and implications are parenthesized so that the path
        // grammar reads them back as state formulas.
        PathFormula::State(f) => write_state(out, f, if level(f) < OR { UNARY } else { OR })?,
        PathFormula::Not(a) => {
            out.write_char('!')?;
            write_path(out, a, UNARY)?;
        }
        PathFormula::And(a, b) => {
            write_path(out, a, AND)?;
            out.write_str(" & ")?;
            write_path(out, b, UNARY)?;
        }
        PathFormula::Or(a, b) => {
            write_path(out, a, OR)?;
            out.write_str(" | ")?;
            write_path(out, b, AND)?;
        }
        PathFormula::Next(a) => {
            out.write_str("X ")?;
            write_path(out, a, UNARY)?;
        }
        PathFormula::Finally(a) => {
            out.write_str("F ")?;
            write_path(out, a, UNARY)?;
        }
        PathFormula::Globally(a) => {
            out.write_str("G ")?;
            write_path(out, a, UNARY)?;
        }
        PathFormula::Until(a, b) | PathFormula::WeakUntil(a, b) => {
            out.write_char('[')?;
            write_path(out, a, OR)?;
            out.write_str(if matches!(p, PathFormula::Until(..)) { " U " } else { " W " })?;
            write_path(out, b, OR)?;
            out.write_char(']')?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_state(f, self, QUANT)
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_path(f, self, OR)
    }
}
