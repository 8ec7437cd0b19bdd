use std::fmt::{self, Write};

use super::{Kripke, KripkeBuilder};
use crate::logic::Prop;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("relation not total: state `{0}` has no successor")]
    NotTotal(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("structure has no state")]
    Empty,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("structure already uses proposition `{0}`")]
    ReservedProp(String),
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-based structure format:
///
/// ```text
/// state q0 { r }
/// state q1
/// edge q0 q1
/// init q0
/// ```
pub fn parse_structure(text: &str) -> Result<Kripke, StructureError> {
    let mut b = KripkeBuilder::new();
    let mut edges = Vec::new();
    let mut init = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| StructureError::Syntax {
            line: line_no,
            message,
        };
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "state" => {
                let (name, labels) = match rest.find('{') {
                    Some(i) => {
                        let body = rest[i + 1..]
                            .strip_suffix('}')
                            .ok_or_else(|| syntax("missing `}`".into()))?;
                        (rest[..i].trim(), body.split_whitespace().collect::<Vec<_>>())
                    }
                    None => (rest, Vec::new()),
                };
                if !is_ident(name) {
                    return Err(syntax(format!("invalid state name `{name}`")));
                }
                if let Some(bad) = labels.iter().find(|l| !is_ident(l)) {
                    return Err(syntax(format!("invalid proposition `{bad}`")));
                }
                b.state(name, labels.into_iter().map(Prop::new))?;
            }
            "edge" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(syntax("expected `edge <from> <to>`".into()));
                }
                edges.push((parts[0].to_string(), parts[1].to_string()));
            }
            "init" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax("expected `init <state>`".into()));
                }
                init = Some(rest.to_string());
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    for (f, t) in &edges {
        b.edge_by_name(f, t)?;
    }
    if let Some(name) = init {
        let id = b.id(&name).ok_or(StructureError::UnknownState(name))?;
        b.init(id);
    }
    b.build()
}

impl fmt::Display for Kripke {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in self.states() {
            write!(f, "state {} {{", self.name(q))?;
            for p in self.labels(q) {
                write!(f, " {p}")?;
            }
            writeln!(f, " }}")?;
        }
        for q in self.states() {
            for &t in self.succ(q) {
                writeln!(f, "edge {} {}", self.name(q), self.name(t))?;
            }
        }
        if let Some(q) = self.init() {
            writeln!(f, "init {}", self.name(q))?;
        }
        Ok(())
    }
}

/// Graphviz rendering of the structure.
pub fn to_dot(s: &Kripke) -> String {
    let mut out = String::new();
    out.push_str("digraph kripke {\n");
    for q in s.states() {
        let labels: Vec<&str> = s.labels(q).iter().map(|p| p.name()).collect();
        let shape = if s.init() == Some(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  \"{}\" [shape={shape}, label=\"{}\\n{{{}}}\"];",
            s.name(q),
            s.name(q),
            labels.join(",")
        );
    }
    for q in s.states() {
        for (i, &t) in s.succ(q).iter().enumerate() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{i}\"];", s.name(q), s.name(t));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_roundtrip() {
        let text = "state a { p q }\nstate b { }\nedge a b\nedge b a\nedge b b\ninit b\n";
        let s = parse_structure(text).unwrap();
        assert_eq!(s.to_string(), text);
        assert_eq!(parse_structure(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_structure("state a\nstate a\nedge a a"),
            Err(StructureError::DuplicateState("a".into()))
        );
        assert_eq!(
            parse_structure("state a\nedge a b"),
            Err(StructureError::UnknownState("b".into()))
        );
        assert!(matches!(parse_structure("node a"), Err(StructureError::Syntax { line: 1, .. })));
    }

    #[test]
    fn dot_mentions_every_edge() {
        let s = parse_structure("state a { p }\nstate b\nedge a b\nedge b b").unwrap();
        let dot = to_dot(&s);
        assert!(dot.contains("\"a\" -> \"b\""));
        assert!(dot.contains("\"b\" -> \"b\""));
    }
}
