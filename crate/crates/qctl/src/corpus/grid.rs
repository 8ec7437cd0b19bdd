use crate::kripke::{Kripke, KripkeBuilder};
use crate::logic::Prop;
use crate::mc_structure::{Labelling, StateSet};

use super::GRID_PROPS;

/// The `m × n` grid: state `g_i_j` moves right to `g_i_(j+1)` and down to
/// `g_(i+1)_j`; the bottom-right corner loops. Returns the structure (initial
/// state `g_0_0`) with the labelling that witnesses the grid formula.
pub fn build_grid(m: usize, n: usize) -> (Kripke, Labelling) {
    assert!(m >= 2 && n >= 2, "grids are at least 2x2");
    let id = |i: usize, j: usize| i * n + j;
    let mut b = KripkeBuilder::new();
    for i in 0..m {
        for j in 0..n {
            b.state(&format!("g_{i}_{j}"), std::iter::empty::<Prop>()).expect("fresh names");
        }
    }
    for i in 0..m {
        for j in 0..n {
            if j + 1 < n {
                b.edge(id(i, j), id(i, j + 1));
            }
            if i + 1 < m {
                b.edge(id(i, j), id(i + 1, j));
            }
        }
    }
    b.edge(id(m - 1, n - 1), id(m - 1, n - 1));
    b.init(0);
    let s = b.build().expect("grid is total");

    let holds = |name: &str, i: usize, j: usize| match name {
        "s" => i == m - 1 && j == n - 1,
        "h" => i.is_multiple_of(2),
        "v" => j.is_multiple_of(2),
        "l" => j == 0,
        "r" => j == n - 1,
        "t" => i == 0,
        "b" => i == m - 1,
        _ => unreachable!(),
    };
    let witness = GRID_PROPS
        .iter()
        .map(|&name| {
            let set = StateSet::from_fn(m * n, |q| holds(name, q / n, q % n));
            (Prop::new(name), set)
        })
        .collect();
    (s, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{grid2d, grid2d_conjuncts};
    use crate::mc_structure::{check, CheckOptions, HintMode};

    #[test]
    fn two_by_two() {
        let (s, w) = build_grid(2, 2);
        assert_eq!(s.len(), 4);
        assert_eq!(s.succ(3), &[3]);
        let opts = CheckOptions {
            hints: vec![w.clone()],
            hint_mode: HintMode::Only,
            ..Default::default()
        };
        for (i, c) in grid2d_conjuncts().iter().enumerate() {
            let f = crate::logic::Formula::exists(GRID_PROPS.iter().map(|n| Prop::new(n)).collect(), c.clone());
            assert!(check(&s, 0, &f, &opts).unwrap(), "conjunct {i}");
        }
        assert!(check(&s, 0, &grid2d(), &opts).unwrap());
    }
}
