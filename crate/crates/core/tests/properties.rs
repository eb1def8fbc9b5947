use proptest::prelude::*;

use periodic_approx::lemma_lab::{sign_sum_1, sign_sum_2};
use periodic_approx::smoothness::{check_bound, omega2, GridConfig};
use periodic_approx::spectral::{
    coefficients_from_samples, from_amplitude_phase, sample_grid, to_amplitude_phase, FourierSeries, Tail,
    Term, TrigPoly,
};
use periodic_approx::summators::{fejer_error_sq, MeanSpec};

fn series_strategy(max_k: usize) -> impl Strategy<Value = FourierSeries> {
    (
        -2.0f64..2.0,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), max_k),
        0.0f64..1e-3,
    )
        .prop_map(|(a0, coeffs, tail)| FourierSeries::new(a0, &coeffs, Tail::Certified(tail)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn amplitude_phase_round_trip(alpha in -1e3f64..1e3, beta in -1e3f64..1e3) {
        let (rho, phi) = to_amplitude_phase(alpha, beta);
        prop_assert!(rho >= 0.0);
        prop_assert!(phi > -std::f64::consts::PI && phi <= std::f64::consts::PI);
        let (a, b) = from_amplitude_phase(rho, phi);
        let scale = 1.0 + rho;
        prop_assert!((a - alpha).abs() <= 1e-15 * scale * 4.0);
        prop_assert!((b - beta).abs() <= 1e-15 * scale * 4.0);
    }

    #[test]
    fn sampling_recovers_polynomials(
        a0 in -1.0f64..1.0,
        amps in prop::collection::vec((0.0f64..1.0, -3.0f64..3.0), 1..12),
    ) {
        let d = amps.len();
        let terms: Vec<Term> = amps.iter().enumerate().map(|(i, &(rho, phi))| Term { k: i + 1, rho, phi }).collect();
        let p = TrigPoly::new(a0, terms).unwrap();
        let n = 4 * d.max(2) + 4;
        let samples = p.evaluate_many(&sample_grid(n));
        let s = coefficients_from_samples(&samples, d).unwrap();
        prop_assert!((s.a0() - a0).abs() < 1e-12);
        for t in p.terms() {
            let h = s.harmonic(t.k).unwrap();
            let (alpha, beta) = from_amplitude_phase(t.rho, t.phi);
            prop_assert!((h.alpha() - alpha).abs() < 1e-12);
            prop_assert!((h.beta() - beta).abs() < 1e-12);
        }
    }

    #[test]
    fn ledgers_scale_quadratically(s in series_strategy(24), c in -4.0f64..4.0, n in 1usize..24) {
        let base = fejer_error_sq(&s, n).unwrap().value;
        let scaled = fejer_error_sq(&s.scaled(c).unwrap(), n).unwrap().value;
        prop_assert!((scaled - c * c * base).abs() <= 1e-12 * (1.0 + c * c * base));
    }

    #[test]
    fn multipliers_have_the_expected_shape(n in 1usize..64, m_frac in 0.0f64..1.0) {
        let m = ((n as f64) * m_frac) as usize;
        let m = m.min(n - 1);
        let fejer = MeanSpec::fejer(n).unwrap();
        let vp = MeanSpec::vallee_poussin(m, n).unwrap();
        for k in 0..=n + 2 {
            let (f, v) = (fejer.multiplier(k), vp.multiplier(k));
            prop_assert!((0.0..=1.0).contains(&f) && (0.0..=1.0).contains(&v));
            prop_assert!(v >= f);
            if k <= m {
                prop_assert_eq!(v, 1.0);
            }
            if k >= n {
                prop_assert_eq!(f, 0.0);
                prop_assert_eq!(v, 0.0);
            }
            if k > 0 {
                prop_assert!(fejer.multiplier(k) <= fejer.multiplier(k - 1));
                prop_assert!(vp.multiplier(k) <= vp.multiplier(k - 1));
            }
        }
    }

    #[test]
    fn regrouping_matches_for_any_sequence(
        values in prop::collection::vec(-5.0f64..5.0, 400),
        n in 2usize..24,
        blocks in 1usize..6,
    ) {
        if (2 * blocks + 1) * n - 1 <= values.len() {
            prop_assert!(sign_sum_1(&values, n, blocks).unwrap().grouping_consistent());
        }
        if (blocks + 1) * n - 1 <= values.len() {
            prop_assert!(sign_sum_2(&values, n, blocks).unwrap().grouping_consistent());
        }
    }

    #[test]
    fn monotone_quotients_give_the_predicted_signs(
        steps in prop::collection::vec(0.0f64..1.0, 300),
        n in 2usize..16,
        blocks in 1usize..4,
    ) {
        // v_k/k non-increasing by construction
        let mut q = 10.0;
        let values: Vec<f64> = steps.iter().enumerate().map(|(i, d)| { q -= d * 0.03; q = q.max(0.0); q * (i + 1) as f64 }).collect();
        for p in 1..values.len() {
            prop_assert!(values[p] / (p + 1) as f64 <= values[p - 1] / p as f64);
        }
        let first = sign_sum_1(&values, n, blocks).unwrap();
        prop_assert!(first.direct <= first.tolerance());
        let second = sign_sum_2(&values, n, blocks).unwrap();
        prop_assert!(second.direct >= -second.tolerance());
    }

    #[test]
    fn omega2_is_monotone_and_homogeneous(s in series_strategy(16), lo in 0.01f64..1.5, c in -3.0f64..3.0) {
        // nested t-grids: [0, 2δ] with 2p − 1 nodes contains [0, δ] with p
        let hi = 2.0 * lo;
        let w_lo = omega2(&s, lo, 65).unwrap();
        let w_hi = omega2(&s, hi, 129).unwrap();
        prop_assert!(w_lo <= w_hi + 1e-12 * (1.0 + w_hi));
        let w_c = omega2(&s.scaled(c).unwrap(), hi, 129).unwrap();
        prop_assert!((w_c - c.abs() * w_hi).abs() <= 1e-10 * (1.0 + w_c));
    }

    #[test]
    fn verdict_is_scale_invariant(s in series_strategy(12), c in 0.1f64..10.0, n in 2usize..10) {
        let cfg = GridConfig { quad_points: 64, t_points: 65 };
        let spec = MeanSpec::fejer(n).unwrap();
        let a = check_bound(&s, &spec, &cfg).unwrap();
        let b = check_bound(&s.scaled(c).unwrap(), &spec, &cfg).unwrap();
        if a.ratio.is_finite() && a.ratio > 0.0 {
            prop_assert!((a.ratio - b.ratio).abs() <= 1e-9 * a.ratio);
        }
    }
}
