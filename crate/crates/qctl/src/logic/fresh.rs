use super::{Formula, Prop};

/// Generator of reserved `__f<N>` propositions that do not clash with the
/// formulas it was seeded from.
#[derive(Clone, Debug)]
pub struct FreshNames {
    next: u64,
}

impl FreshNames {
    pub fn new() -> Self {
        FreshNames { next: 0 }
    }

    pub fn for_formula(f: &Formula) -> Self {
        let mut g = FreshNames::new();
        g.avoid(f);
        g
    }

    /// Makes sure later names are above every reserved name used in `f`.
    pub fn avoid(&mut self, f: &Formula) {
        for p in f.all_props() {
            self.avoid_prop(p);
        }
    }

    pub fn avoid_prop(&mut self, p: Prop) {
        if let Some(n) = p.name().strip_prefix("__f").and_then(|s| s.parse::<u64>().ok()) {
            self.next = self.next.max(n + 1);
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Prop {
        let p = Prop::new(&format!("__f{}", self.next));
        self.next += 1;
        p
    }
}

impl Default for FreshNames {
    fn default() -> Self {
        FreshNames::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_used_names() {
        let f = Formula::and(Formula::prop("__f4"), Formula::prop("p"));
        let mut g = FreshNames::for_formula(&f);
        assert_eq!(g.next().name(), "__f5");
        assert_eq!(g.next().name(), "__f6");
    }
}
