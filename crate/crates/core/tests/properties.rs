//! Property tests for the multiplier algebra and norm machinery.

use std::sync::Arc;

use proptest::prelude::*;

use fnls_core::dynamics::Trajectory;
use fnls_core::field::Field;
use fnls_core::grid::Grid;
use fnls_core::lp::{self, Part};
use fnls_core::norms::{spacetime_norm, spatial_lq};
use fnls_core::symbol::{RadialSymbol, Transition, ZeroMode};
use fnls_core::Cx;

// splitmix64: small self-contained generator, avoids coupling the test to a
// specific rand version
fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

fn random_field(grid: &Arc<Grid>, seed: u64) -> Field {
    let mut state = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(1);
    let vals: Vec<Cx> = (0..grid.len())
        .map(|_| Cx::new(splitmix(&mut state), splitmix(&mut state)))
        .collect();
    Field::from_physical(grid, vals)
}

fn rel_err(a: &Field, b: &Field) -> f64 {
    let diff = spatial_lq(&a.sub(b).unwrap(), 2.0).unwrap();
    diff / spatial_lq(a, 2.0).unwrap().max(1e-300)
}

fn sample_symbol(which: u8) -> RadialSymbol {
    match which % 5 {
        0 => RadialSymbol::power(0.5),
        1 => RadialSymbol::japanese_bracket(-1.0),
        2 => RadialSymbol::i_operator(2.0, 1.5).unwrap(),
        3 => RadialSymbol::bump_scaled(4.0),
        _ => RadialSymbol::propagator(0.3),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn apply_symbol_is_linear(seed1 in 0u64..1000, seed2 in 0u64..1000, which in 0u8..5,
                              a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let f = random_field(&grid, seed1);
        let g = random_field(&grid, seed2);
        let sym = sample_symbol(which);
        let combo = f.scale(Cx::new(a, 0.0)).add(&g.scale(Cx::new(0.0, b))).unwrap();
        let lhs = combo.apply_symbol(&sym).unwrap();
        let rhs = f.apply_symbol(&sym).unwrap().scale(Cx::new(a, 0.0))
            .add(&g.apply_symbol(&sym).unwrap().scale(Cx::new(0.0, b))).unwrap();
        let denom = spatial_lq(&lhs, 2.0).unwrap().max(1e-12);
        let diff = spatial_lq(&lhs.sub(&rhs).unwrap(), 2.0).unwrap();
        prop_assert!(diff <= 1e-12 * denom.max(1.0), "defect {diff:e}");
    }

    #[test]
    fn composition_matches_product_symbol(seed in 0u64..1000, w1 in 0u8..5, w2 in 0u8..5) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let f = random_field(&grid, seed);
        let s1 = sample_symbol(w1);
        let s2 = sample_symbol(w2);
        let sequential = f.apply_symbol(&s1).unwrap().apply_symbol(&s2).unwrap();
        let product = f.apply_symbol(&RadialSymbol::product(&s1, &s2)).unwrap();
        prop_assert!(rel_err(&sequential, &product) <= 1e-12);
    }

    #[test]
    fn radial_multipliers_commute(seed in 0u64..1000, s in 0.25f64..2.0) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let f = random_field(&grid, seed);
        let derivative = RadialSymbol::power(s);
        let smoothing = RadialSymbol::i_operator(2.0, 1.5).unwrap();
        // composed as product symbols the two orders are bitwise identical
        let ab = f.apply_symbol(&RadialSymbol::product(&derivative, &smoothing)).unwrap();
        let ba = f.apply_symbol(&RadialSymbol::product(&smoothing, &derivative)).unwrap();
        let (sa, sb) = (ab.spectral_or_compute(), ba.spectral_or_compute());
        prop_assert!(sa.iter().zip(sb.iter()).all(|(x, y)| x == y));
        // successive applications commute up to one rounding per entry
        let seq_ab = f.apply_symbol(&derivative).unwrap().apply_symbol(&smoothing).unwrap();
        let seq_ba = f.apply_symbol(&smoothing).unwrap().apply_symbol(&derivative).unwrap();
        prop_assert!(rel_err(&seq_ab, &seq_ba) <= 1e-14);
    }

    #[test]
    fn zero_mode_policy_only_touches_the_mean(seed in 0u64..1000) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let mut f = random_field(&grid, seed);
        let annihilating = RadialSymbol::power_with_zero_mode(0.0, ZeroMode::Annihilate);
        let out = f.apply_symbol(&annihilating).unwrap();
        let hat_in = f.to_spectral().to_vec();
        let hat_out = out.spectral_or_compute();
        prop_assert_eq!(hat_out[0], Cx::new(0.0, 0.0));
        for i in 1..hat_in.len() {
            prop_assert_eq!(hat_in[i], hat_out[i]);
        }
    }

    #[test]
    fn i_symbol_monotone_everywhere(n_pow in 0u32..4, gamma in 0.0f64..1.99,
                                    r1 in 0.0f64..50.0, dr in 0.0f64..50.0,
                                    smoothed in proptest::bool::ANY) {
        let n = 2f64.powi(n_pow as i32);
        let transition = if smoothed { Transition::Smoothed } else { Transition::Sharp };
        let m = RadialSymbol::i_operator_with(n, gamma, transition).unwrap();
        let (v1, v2) = (m.eval_real(r1), m.eval_real(r1 + dr));
        prop_assert!(v2 <= v1 + 1e-12);
        prop_assert!(v1 <= 1.0 + 1e-15 && v2 >= 0.0);
    }

    #[test]
    fn lp_partition_reconstructs(seed in 0u64..1000, m0_pow in -2i32..3) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let f = random_field(&grid, seed);
        let m0 = 2f64.powi(m0_pow);
        let mut sum = lp::project(&f, m0, Part::Leq).unwrap();
        let top = 2.0 * grid.xi_max_radial();
        let mut m = 2.0 * m0;
        while m <= top {
            sum = sum.add(&lp::project(&f, m, Part::Band).unwrap()).unwrap();
            m *= 2.0;
        }
        prop_assert!(rel_err(&sum, &f) <= 1e-12);
    }

    #[test]
    fn spacetime_norm_monotone_under_restriction(seed in 0u64..1000, p in 1.0f64..6.0, q in 1.0f64..6.0) {
        let grid = Grid::new_tau(2, 8).unwrap();
        let times: Vec<f64> = (0..=6).map(|k| k as f64 * 0.1).collect();
        let samples: Vec<Arc<Field>> = (0..=6)
            .map(|k| Arc::new(random_field(&grid, seed.wrapping_add(k))))
            .collect();
        let traj = Trajectory::from_samples(times, samples).unwrap();
        let full = spacetime_norm(&traj, p, q).unwrap();
        for hi in 1..traj.len() {
            let sub = spacetime_norm(&traj.window(0, hi), p, q).unwrap();
            prop_assert!(sub <= full + 1e-15 * full.abs());
        }
    }
}
