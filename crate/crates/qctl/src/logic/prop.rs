use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// An interned atomic proposition.
///
/// Comparison follows the name, so sorted containers of propositions print the
/// same way regardless of interning order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prop(u32);

struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn interner() -> &'static Mutex<Interner> {
    static INTERNER: OnceLock<Mutex<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        Mutex::new(Interner {
            names: Vec::new(),
            ids: HashMap::new(),
        })
    })
}

impl Prop {
    pub fn new(name: &str) -> Prop {
        let mut table = interner().lock().expect("interner poisoned");
        if let Some(&id) = table.ids.get(name) {
            return Prop(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = table.names.len() as u32;
        table.names.push(leaked);
        table.ids.insert(leaked, id);
        Prop(id)
    }

    pub fn name(self) -> &'static str {
        interner().lock().expect("interner poisoned").names[self.0 as usize]
    }

    /// Names of the form `__f<digits>` are reserved for generated propositions.
    pub fn is_reserved_name(name: &str) -> bool {
        name.strip_prefix("__f")
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    }
}

impl PartialOrd for Prop {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Prop {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            return std::cmp::Ordering::Equal;
        }
        self.name().cmp(other.name())
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<&str> for Prop {
    fn from(name: &str) -> Self {
        Prop::new(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Prop::new("alpha");
        let b = Prop::new("alpha");
        assert_eq!(a, b);
        assert_eq!(a.name(), "alpha");
    }

    #[test]
    fn reserved_names() {
        assert!(Prop::is_reserved_name("__f0"));
        assert!(Prop::is_reserved_name("__f123"));
        assert!(!Prop::is_reserved_name("__f"));
        assert!(!Prop::is_reserved_name("__fx"));
        assert!(!Prop::is_reserved_name("f0"));
    }

    #[test]
    fn ordering_by_name() {
        let z = Prop::new("zz_order");
        let a = Prop::new("aa_order");
        assert!(a < z);
    }
}
