use std::collections::BTreeMap;

use crate::kripke::{Kripke, StateId};
use crate::transforms::{is_set_var, Mso, ROOT_VAR};

pub const MSO_MAX_STATES: usize = 8;
pub const MSO_MAX_SET_VARS: usize = 3;

/// Value of an MSO variable: a vertex or a set of vertices, as state ids of
/// the input structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MsoValue {
    Vertex(StateId),
    Set(Vec<StateId>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MsoEvalError {
    #[error("reachable part has {0} states, the evaluator handles at most {MSO_MAX_STATES}")]
    TooManyStates(usize),
    #[error("{0} set quantifiers, the evaluator handles at most {MSO_MAX_SET_VARS}")]
    TooManySetVars(usize),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{0}` is used with the wrong sort")]
    Sort(String),
}

/// Brute-force MSO evaluation on the part of `s` reachable from `q`, with
/// `x` bound to `q`. Set quantifiers enumerate every subset.
pub fn eval_mso(
    s: &Kripke,
    q: StateId,
    phi: &Mso,
    assignment: &BTreeMap<String, MsoValue>,
) -> Result<bool, MsoEvalError> {
    let domain = s.reachable(q);
    if domain.len() > MSO_MAX_STATES {
        return Err(MsoEvalError::TooManyStates(domain.len()));
    }
    let sets = phi.set_quantifiers();
    if sets > MSO_MAX_SET_VARS {
        return Err(MsoEvalError::TooManySetVars(sets));
    }
    let mut env: BTreeMap<String, Value> = BTreeMap::new();
    for (v, val) in assignment {
        let val = match val {
            MsoValue::Vertex(w) => Value::Vertex(*w),
            MsoValue::Set(ws) => Value::Set(ws.iter().fold(0u64, |m, w| m | 1 << w)),
        };
        env.insert(v.clone(), val);
    }
    env.insert(ROOT_VAR.to_string(), Value::Vertex(q));
    Eval { s, domain }.eval(phi, &mut env)
}

#[derive(Clone, Copy)]
enum Value {
    Vertex(StateId),
    /// Bitmask over state ids; domains are tiny.
    Set(u64),
}

struct Eval<'a> {
    s: &'a Kripke,
    domain: Vec<StateId>,
}

impl Eval<'_> {
    fn vertex(&self, env: &BTreeMap<String, Value>, v: &str) -> Result<StateId, MsoEvalError> {
        match env.get(v) {
            Some(Value::Vertex(w)) => Ok(*w),
            Some(Value::Set(_)) => Err(MsoEvalError::Sort(v.to_string())),
            None => Err(MsoEvalError::Unbound(v.to_string())),
        }
    }

    fn set(&self, env: &BTreeMap<String, Value>, v: &str) -> Result<u64, MsoEvalError> {
        match env.get(v) {
            Some(Value::Set(m)) => Ok(*m),
            Some(Value::Vertex(_)) => Err(MsoEvalError::Sort(v.to_string())),
            None => Err(MsoEvalError::Unbound(v.to_string())),
        }
    }

    fn eval(&self, phi: &Mso, env: &mut BTreeMap<String, Value>) -> Result<bool, MsoEvalError> {
        Ok(match phi {
            Mso::True => true,
            Mso::False => false,
            Mso::Eq(a, b) => self.vertex(env, a)? == self.vertex(env, b)?,
            Mso::Edge(a, b) => {
                let (a, b) = (self.vertex(env, a)?, self.vertex(env, b)?);
                self.s.succ(a).contains(&b)
            }
            Mso::In(a, set) => {
                let a = self.vertex(env, a)?;
                self.set(env, set)? >> a & 1 == 1
            }
            Mso::Lab(p, a) => self.s.has_label(self.vertex(env, a)?, *p),
            Mso::Not(a) => !self.eval(a, env)?,
            Mso::And(a, b) => self.eval(a, env)? && self.eval(b, env)?,
            Mso::Or(a, b) => self.eval(a, env)? || self.eval(b, env)?,
            Mso::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Mso::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Mso::Exists(v, body) | Mso::Forall(v, body) => {
                let want = matches!(phi, Mso::Exists(..));
                let values: Vec<Value> = if is_set_var(v) {
                    (0u64..1 << self.domain.len())
                        .map(|bits| {
                            let mask = self
                                .domain
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| bits >> i & 1 == 1)
                                .fold(0u64, |m, (_, &w)| m | 1 << w);
                            Value::Set(mask)
                        })
                        .collect()
                } else {
                    self.domain.iter().map(|&w| Value::Vertex(w)).collect()
                };
                let saved = env.get(v).copied();
                let mut result = !want;
                for val in values {
                    env.insert(v.clone(), val);
                    let r = self.eval(body, env);
                    match r {
                        Ok(b) if b == want => {
                            result = want;
                            break;
                        }
                        Ok(_) => {}
                        Err(e) => {
                            restore(env, v, saved);
                            return Err(e);
                        }
                    }
                }
                restore(env, v, saved);
                result
            }
        })
    }
}

fn restore(env: &mut BTreeMap<String, Value>, v: &str, saved: Option<Value>) {
    match saved {
        Some(val) => env.insert(v.to_string(), val),
        None => env.remove(v),
    };
}
