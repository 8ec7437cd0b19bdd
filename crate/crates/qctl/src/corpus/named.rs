//! Lookup of corpus formulas by name, for the command line and for formula
//! arguments such as `uniq(p)`.

use crate::logic::{parse_formula, Formula, Prop};

use super::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    Unknown(String),
    #[error("`{name}` takes {expected}, got {got} argument(s)")]
    Arity { name: String, expected: &'static str, got: usize },
    #[error("bad argument `{arg}`: {reason}")]
    Argument { arg: String, reason: String },
}

/// Every name accepted by [`named_formula`], with its argument list.
pub const NAMES: &[(&str, &str)] = &[
    ("selfloop", ""),
    ("acyclic", ""),
    ("uniq", "PHI"),
    ("ex1", "PHI"),
    ("exgeq", "K PHI"),
    ("once", "PHI"),
    ("delimiters", "S T"),
    ("yardstick0", "N S T"),
    ("yardstick", "K N [S T]"),
    ("graduation", "K N R S T"),
    ("counter", "K N C R S T"),
    ("zeros", "C R S"),
    ("ones", "C R T"),
    ("increment", "K N C R S"),
    ("grid1d", ""),
    ("grid2d", ""),
];

fn canonical(name: &str) -> String {
    name.to_ascii_lowercase().replace(['_', '-'], "")
}

/// Builds the corpus formula `name` from textual arguments: formulas for
/// `PHI`, proposition names for `S`, `T`, `R`, `C`, and integers for `K`, `N`.
pub fn named_formula<S: AsRef<str>>(name: &str, args: &[S]) -> Result<Formula, CorpusError> {
    let args: Vec<&str> = args.iter().map(|a| a.as_ref().trim()).collect();
    let key = canonical(name);
    let (_, shape) = NAMES
        .iter()
        .find(|(n, _)| *n == key || (key == "yardstickk" && *n == "yardstick"))
        .ok_or_else(|| CorpusError::Unknown(name.to_string()))?;
    let (fixed, extra) = shape.split_once('[').unwrap_or((shape, ""));
    let required = fixed.split_whitespace().count();
    let optional = extra.split_whitespace().count();
    if args.len() != required && args.len() != required + optional {
        return Err(CorpusError::Arity {
            name: name.to_string(),
            expected: if shape.is_empty() { "no arguments" } else { shape },
            got: args.len(),
        });
    }
    let phi = |i: usize| -> Result<Formula, CorpusError> {
        parse_formula(args[i]).map_err(|e| CorpusError::Argument {
            arg: args[i].to_string(),
            reason: e.to_string(),
        })
    };
    let prop = |i: usize| -> Result<Prop, CorpusError> {
        let a = args[i];
        if a.is_empty() || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(CorpusError::Argument {
                arg: a.to_string(),
                reason: "expected a proposition name".into(),
            });
        }
        Ok(Prop::new(a))
    };
    let int = |i: usize, min: usize| -> Result<usize, CorpusError> {
        let bad = |reason: String| CorpusError::Argument {
            arg: args[i].to_string(),
            reason,
        };
        let v: usize = args[i].parse().map_err(|_| bad("expected a non-negative integer".into()))?;
        if v < min {
            return Err(bad(format!("must be at least {min}")));
        }
        Ok(v)
    };
    Ok(match key.as_str() {
        "selfloop" => selfloop(),
        "acyclic" => acyclic(),
        "grid1d" => grid1d(),
        "grid2d" => grid2d(),
        "uniq" => uniq(&phi(0)?),
        "ex1" => ex1(&phi(0)?),
        "exgeq" => ex_geq(int(0, 0)?, &phi(1)?),
        "once" => once(&phi(0)?),
        "delimiters" => delimiters(prop(0)?, prop(1)?),
        "yardstick0" => yardstick0(int(0, 1)?, prop(1)?, prop(2)?),
        "zeros" => zeros(prop(0)?, prop(1)?, prop(2)?),
        "ones" => ones(prop(0)?, prop(1)?, prop(2)?),
        "graduation" => graduation(int(0, 1)?, int(1, 1)?, prop(2)?, prop(3)?, prop(4)?),
        "counter" => counter(int(0, 1)?, int(1, 1)?, prop(2)?, prop(3)?, prop(4)?, prop(5)?),
        "increment" => increment(int(0, 1)?, int(1, 1)?, prop(2)?, prop(3)?, prop(4)?),
        _ => {
            let (s, t) = if args.len() == 4 {
                (prop(2)?, prop(3)?)
            } else {
                (Prop::new("s"), Prop::new("t"))
            };
            yardstick(int(0, 0)?, int(1, 1)?, s, t)
        }
    })
}

/// Splits `name(a, b)` or a bare `name` into its parts; `None` when the text
/// does not have that shape.
fn split_call(text: &str) -> Option<(&str, Vec<&str>)> {
    let text = text.trim();
    let name_end = text.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(text.len());
    let (name, rest) = text.split_at(name_end);
    if name.is_empty() {
        return None;
    }
    let rest = rest.trim();
    if rest.is_empty() {
        return Some((name, Vec::new()));
    }
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    let mut args = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                args.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    if !inner.trim().is_empty() {
        args.push(&inner[start..]);
    }
    Some((name, args))
}

/// Reads `text` as a corpus call such as `acyclic` or `uniq(E X p)` when its
/// head names a corpus entry, and as a plain formula otherwise. Corpus names
/// therefore shadow atoms of the same name at top level.
pub fn formula_or_named(text: &str) -> Result<Formula, CorpusError> {
    if let Some((name, args)) = split_call(text) {
        let key = canonical(name);
        if NAMES.iter().any(|(n, _)| *n == key) || key == "yardstickk" {
            return named_formula(name, &args);
        }
    }
    parse_formula(text).map_err(|e| CorpusError::Argument {
        arg: text.to_string(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{classify, PrefixClass};

    #[test]
    fn names_resolve() {
        assert_eq!(named_formula::<&str>("selfloop", &[]).unwrap(), selfloop());
        assert_eq!(named_formula("EXgeq", &["2", "p"]).unwrap(), ex_geq(2, &Formula::atom(Prop::new("p"))));
        assert_eq!(
            named_formula("yardstick_0", &["3", "s", "t"]).unwrap(),
            yardstick0(3, Prop::new("s"), Prop::new("t"))
        );
        assert_eq!(
            named_formula("yardstick_k", &["1", "2"]).unwrap(),
            yardstick(1, 2, Prop::new("s"), Prop::new("t"))
        );
    }

    #[test]
    fn bad_calls() {
        assert!(matches!(named_formula::<&str>("nope", &[]), Err(CorpusError::Unknown(_))));
        assert!(matches!(named_formula::<&str>("uniq", &[]), Err(CorpusError::Arity { .. })));
        assert!(matches!(named_formula("yardstick0", &["0", "s", "t"]), Err(CorpusError::Argument { .. })));
        assert!(matches!(named_formula("delimiters", &["s", "E X t"]), Err(CorpusError::Argument { .. })));
    }

    #[test]
    fn call_syntax() {
        let p = Formula::atom(Prop::new("p"));
        assert_eq!(formula_or_named("acyclic").unwrap(), acyclic());
        assert_eq!(formula_or_named("uniq(E X p)").unwrap(), uniq(&Formula::ex(p.clone())));
        assert_eq!(formula_or_named("exgeq(2, p | q)").unwrap(), named_formula("exgeq", &["2", "p | q"]).unwrap());
        assert_eq!(formula_or_named("p & q").unwrap(), Formula::and(p, Formula::atom(Prop::new("q"))));
        assert_eq!(classify(&formula_or_named("yardstick(1, 2)").unwrap()).prefix_class, PrefixClass::Eq(1));
    }
}
