//! Finite two-player min-parity games.

mod brute;
mod game;
mod zielonka;

pub use brute::{brute_solve, BRUTE_MAX_POSITIONS};
pub use game::{GameError, ParityGame, Player, Solution};
pub use zielonka::solve;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn self_loops() {
        for (p, w) in [(0, Player::Even), (1, Player::Odd)] {
            let mut g = ParityGame::new();
            let v = g.add_position(Player::Even, p);
            g.add_edge(v, v);
            assert_eq!(solve(&g).winner, vec![w]);
            assert_eq!(brute_solve(&g).unwrap().winner, vec![w]);
        }
    }

    #[test]
    fn forced_alternation() {
        let mut g = ParityGame::new();
        let a = g.add_position(Player::Even, 0);
        let b = g.add_position(Player::Odd, 1);
        g.add_edge(a, b);
        g.add_edge(b, a);
        assert_eq!(solve(&g).winner, vec![Player::Even, Player::Even]);
    }

    #[test]
    fn dead_end_rejected() {
        let mut g = ParityGame::new();
        g.add_position(Player::Even, 0);
        assert_eq!(g.validate(), Err(GameError::Dead(0)));
        assert!(brute_solve(&g).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn zielonka_matches_brute(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = crate::random::game(&mut rng, 7, 3);
            let z = solve(&g);
            let b = brute_solve(&g).unwrap();
            prop_assert_eq!(&z.winner, &b.winner);
            prop_assert!(z.verify(&g));
            prop_assert!(b.verify(&g));
        }
    }
}
