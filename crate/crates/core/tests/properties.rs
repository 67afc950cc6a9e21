use proptest::prelude::*;
use thermest_core::bounds::{
    c_r_closed_2param, c_r_closed_3param, c_r_general, rld_inverse_2param, rld_inverse_3param,
    squeezed_heterodyne_cost, WeightMatrix,
};
use thermest_core::linalg::RealMatrix;
use thermest_core::rng::RngStream;
use thermest_core::states::photon_from_uniform;

/// `(g1, g2, g3)` with `g1 > 0` and `g2² + g3² ≤ g1²`.
fn admissible() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.01f64..10.0, 0.0f64..=1.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(g1, frac, angle)| (g1, g1 * frac * angle.cos(), g1 * frac * angle.sin()))
}

fn n_mean() -> impl Strategy<Value = f64> {
    0.01f64..20.0
}

fn c_r2(g: (f64, f64, f64), n: f64) -> f64 {
    c_r_closed_2param(g.0, g.1, g.2, n).unwrap().value
}

proptest! {
    #[test]
    fn general_matches_closed_form_2param(g in admissible(), n in n_mean()) {
        let w = WeightMatrix::from_two_param(g.0, g.1, g.2).unwrap();
        let general = c_r_general(&w, &rld_inverse_2param(n).unwrap()).unwrap().value;
        prop_assert!((general - c_r2(g, n)).abs() <= 1e-10 * general.max(1.0));
    }

    #[test]
    fn general_matches_closed_form_3param(g in admissible(), g0 in 0.0f64..10.0, n in n_mean()) {
        let w = WeightMatrix::from_block(g0, g.0, g.1, g.2).unwrap();
        let general = c_r_general(&w, &rld_inverse_3param(n).unwrap()).unwrap().value;
        let closed = c_r_closed_3param(g0, g.0, g.1, g.2, n).unwrap().value;
        prop_assert!((general - closed).abs() <= 1e-10 * general.max(1.0));
    }

    #[test]
    fn bound_is_homogeneous(g in admissible(), n in n_mean(), c in 0.01f64..100.0) {
        let scaled = c_r2((c * g.0, c * g.1, c * g.2), n);
        prop_assert!((scaled - c * c_r2(g, n)).abs() <= 1e-10 * scaled.max(1.0));
    }

    #[test]
    fn bound_is_superadditive(a in admissible(), b in admissible(), n in n_mean()) {
        // Minkowski: √det(A + B) ≥ √det A + √det B
        let sum = c_r2((a.0 + b.0, a.1 + b.1, a.2 + b.2), n);
        prop_assert!(sum >= c_r2(a, n) + c_r2(b, n) - 1e-9 * sum.max(1.0));
    }

    #[test]
    fn bound_increases_with_photon_number(g in admissible(), n in n_mean(), dn in 0.01f64..5.0) {
        prop_assert!(c_r2(g, n + dn) > c_r2(g, n));
    }

    #[test]
    fn no_squeezed_heterodyne_beats_the_bound(
        g in admissible(),
        n in n_mean(),
        r in -4.0f64..4.0,
        angle in 0.0f64..std::f64::consts::PI,
    ) {
        let w = RealMatrix::from_row_major(2, 2, vec![g.0 + g.1, g.2, g.2, g.0 - g.1]).unwrap();
        let cost = squeezed_heterodyne_cost(&w, n, r, angle);
        let bound = c_r2(g, n);
        prop_assert!(cost >= bound - 1e-9 * bound);
    }

    #[test]
    fn weight_text_round_trip(g in admissible(), g0 in 0.0f64..10.0) {
        let w = WeightMatrix::from_block(g0, g.0, g.1, g.2).unwrap();
        let m = w.matrix();
        let mut text = String::from("3\n");
        for i in 0..3 {
            for j in 0..3 {
                text.push_str(&format!("{:e} ", m[(i, j)]));
            }
            text.push('\n');
        }
        let parsed = WeightMatrix::parse_text(&text).unwrap();
        prop_assert_eq!(parsed.matrix().as_slice(), m.as_slice());
    }

    #[test]
    fn photon_inverse_cdf_is_monotone(n in n_mean(), u in 0.0f64..0.999, du in 0.0f64..0.001) {
        prop_assert!(photon_from_uniform(n, u).0 <= photon_from_uniform(n, u + du).0);
    }

    #[test]
    fn uniforms_lie_in_unit_interval(seed in any::<u64>(), stream in any::<u64>()) {
        let mut rng = RngStream::new(seed, stream);
        for _ in 0..64 {
            let u = rng.next_f64();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }
}
