use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_lab::decomposition::{reparametrize, NewtonOptions};
use szego_lab::manifold::{act, soliton_profile, GroupElement};
use szego_lab::random::random_field;
use szego_lab::spectral::{inner_real, symplectic_pair, SpectralGrid};

fn grid() -> Arc<SpectralGrid> {
    static GRID: OnceLock<Arc<SpectralGrid>> = OnceLock::new();
    GRID.get_or_init(|| SpectralGrid::new(1024, 1.0).unwrap()).clone()
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-1.0..1.0f64, 0.7..1.4f64, -3.0..3.0f64, 0.7..1.4f64)
        .prop_map(|(a, alpha, phi, mu)| GroupElement::new(a, alpha, phi, mu).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_is_a_group_action(g in element(), h in element()) {
        let grid = grid();
        let lhs = act(&g, &soliton_profile(&grid, &h));
        let rhs = soliton_profile(&grid, &g.compose(&h));
        prop_assert!((&lhs - &rhs).l2_norm() < 1e-9 * rhs.l2_norm());
    }

    #[test]
    fn inverse_undoes_composition(g in element(), h in element()) {
        let back = g.inverse().compose(&g.compose(&h));
        prop_assert!(back.distance(&h) < 1e-12);
    }

    #[test]
    fn mass_scales_by_the_conformal_factor(g in element(), seed in any::<u64>()) {
        let grid = grid();
        let u = random_field(&grid, &mut ChaCha8Rng::seed_from_u64(seed), 12);
        let m = act(&g, &u).l2_norm_sq();
        prop_assert!((m - g.conformal_factor() * u.l2_norm_sq()).abs() < 1e-8 * m);
    }

    #[test]
    fn pairings_have_their_symmetries(s1 in any::<u64>(), s2 in any::<u64>()) {
        let grid = grid();
        let u = random_field(&grid, &mut ChaCha8Rng::seed_from_u64(s1), 16);
        let v = random_field(&grid, &mut ChaCha8Rng::seed_from_u64(s2), 16);
        let scale = u.l2_norm() * v.l2_norm();
        prop_assert!((inner_real(&u, &v).unwrap() - inner_real(&v, &u).unwrap()).abs() < 1e-12 * scale);
        prop_assert!((symplectic_pair(&u, &v).unwrap() + symplectic_pair(&v, &u).unwrap()).abs() < 1e-12 * scale);
        prop_assert!(symplectic_pair(&u, &u).unwrap().abs() < 1e-12 * scale);
    }

    #[test]
    fn decomposition_recovers_solitons(g in element(), da in -0.05..0.05f64, dm in -0.05..0.05f64) {
        let grid = grid();
        let u = soliton_profile(&grid, &g);
        let guess = GroupElement::new(g.a + da, g.alpha, g.phi + da, g.mu * (1.0 + dm)).unwrap();
        let d = reparametrize(&u, &guess, &NewtonOptions::default()).unwrap();
        prop_assert!(d.g.distance(&g) < 1e-9);
        prop_assert!(d.w.l2_norm() < 1e-9);
    }
}
