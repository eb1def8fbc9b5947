use periodic_approx::corpus::{corpus_entries, lookup, materialize};
use periodic_approx::smoothness::{jackson_integral, GridConfig};
use periodic_approx::spectral::{coefficients_from_samples, ledger_norm_sq, quadrature_norm_sq, sample_grid};

#[test]
fn parseval_matches_quadrature_for_every_entry() {
    for entry in corpus_entries() {
        let s = materialize(&entry, 4096).unwrap();
        let ledger = ledger_norm_sq(&s, true);
        let tail = s.tail().energy_bound();
        let quad = quadrature_norm_sq(|x| entry.evaluate(x), 16384).unwrap();
        assert!(
            (ledger - quad).abs() <= 1e-6 * ledger + tail,
            "{}: ledger {ledger} quadrature {quad} tail {tail}",
            entry.id
        );
    }
}

#[test]
fn jackson_integral_is_stable_under_refinement() {
    let cfg = GridConfig::default();
    let fine = cfg.refined();
    for entry in corpus_entries() {
        let s = materialize(&entry, 1024).unwrap();
        for n in [1, 2, 3, 8, 17, 32, 64] {
            let a = jackson_integral(&s, n, &cfg).unwrap();
            let b = jackson_integral(&s, n, &fine).unwrap();
            assert!((a - b).abs() <= 1e-6 * b.max(f64::MIN_POSITIVE), "{} n={n}: {a} vs {b}", entry.id);
        }
    }
}

#[test]
fn sampled_sawtooth_recovers_its_sine_series() {
    let entry = lookup("sawtooth").unwrap();
    let samples: Vec<f64> = sample_grid(4096).into_iter().map(|x| entry.evaluate(x)).collect();
    let s = coefficients_from_samples(&samples, 64).unwrap();
    assert!(!s.tail().is_certified());
    assert!(s.a0().abs() < 1e-12);
    for h in s.harmonics() {
        let (alpha, beta) = entry.coefficient(h.k());
        assert!(alpha.abs() < 1e-12 && (beta - 1.0 / h.k() as f64).abs() < 1e-15);
        assert!(h.alpha().abs() < 1e-3, "k={} alpha {}", h.k(), h.alpha());
        assert!((h.beta() - beta).abs() < 1e-3, "k={} beta {}", h.k(), h.beta());
    }
}

#[test]
fn unknown_tail_blocks_certified_work() {
    let entry = lookup("geometric_0.5").unwrap();
    let samples: Vec<f64> = sample_grid(256).into_iter().map(|x| entry.evaluate(x)).collect();
    let s = coefficients_from_samples(&samples, 16).unwrap();
    assert!(s.require_certified().is_err());
    assert!(periodic_approx::summators::fejer_error_sq(&s, 4).is_err());
}
