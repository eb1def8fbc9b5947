//! Built-in periodic test functions with closed-form Fourier coefficients,
//! certified tail-energy bounds and pointwise evaluators.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{FourierSeries, Tail};

/// Shape of a corpus entry; all closed forms hang off this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `Σ sin(kx)/k = (π − x)/2` on `(0, 2π)`.
    Sawtooth,
    /// `Σ r^k cos(kx)`, `0 < r < 1`.
    Geometric(f64),
    /// `e^{cos x}`, coefficients `2·I_k(1)`.
    ExpCos,
    /// `|sin x|`, nonzero harmonics only at even `k`.
    AbsSin,
    /// `cos x`.
    PureCosine,
    /// `f ≡ 1`.
    Constant,
    /// `Σ_{k=1}^{d} cos(kx)`.
    TrigPoly(usize),
}

/// A periodic function with everything needed to compare spectral and
/// pointwise computations.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFunction {
    pub id: String,
    pub description: String,
    pub shape: Shape,
    /// Index from which `ρ_k²` is non-increasing; `None` when it never is.
    pub n0: Option<usize>,
    /// Whether `ρ_k²` is eventually non-increasing without interleaved zeros.
    pub hypothesis_ok: bool,
}

impl CorpusFunction {
    fn new(id: &str, description: &str, shape: Shape, n0: Option<usize>, hypothesis_ok: bool) -> Self {
        CorpusFunction {
            id: id.to_string(),
            description: description.to_string(),
            shape,
            n0,
            hypothesis_ok,
        }
    }

    pub fn trig_poly(degree: usize) -> Self {
        CorpusFunction::new(
            &format!("trigpoly_{degree}"),
            &format!("sum of cos(kx) for k = 1..{degree}"),
            Shape::TrigPoly(degree),
            Some(1),
            true,
        )
    }

    /// `f(x)`; jump points return the midpoint of the jump.
    pub fn evaluate(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Sawtooth => {
                let y = x.rem_euclid(2.0 * PI);
                if y == 0.0 {
                    0.0
                } else {
                    (PI - y) / 2.0
                }
            }
            Shape::Geometric(r) => {
                let c = x.cos();
                (r * c - r * r) / (1.0 - 2.0 * r * c + r * r)
            }
            Shape::ExpCos => x.cos().exp(),
            Shape::AbsSin => x.sin().abs(),
            Shape::PureCosine => x.cos(),
            Shape::Constant => 1.0,
            Shape::TrigPoly(d) => (1..=d).map(|k| (k as f64 * x).cos()).sum(),
        }
    }

    /// Constant-term coefficient `a0` (the series starts with `a0/2`).
    pub fn a0(&self) -> f64 {
        match self.shape {
            Shape::ExpCos => 2.0 * bessel_i(0, 1.0),
            Shape::AbsSin => 4.0 / PI,
            Shape::Constant => 2.0,
            _ => 0.0,
        }
    }

    /// `(α_k, β_k)` for `k ≥ 1`.
    pub fn coefficient(&self, k: usize) -> (f64, f64) {
        debug_assert!(k >= 1);
        match self.shape {
            Shape::Sawtooth => (0.0, 1.0 / k as f64),
            Shape::Geometric(r) => (r.powi(k as i32), 0.0),
            Shape::ExpCos => (2.0 * bessel_i(k, 1.0), 0.0),
            Shape::AbsSin => {
                if k.is_multiple_of(2) {
                    let kk = (k * k) as f64;
                    (-4.0 / (PI * (kk - 1.0)), 0.0)
                } else {
                    (0.0, 0.0)
                }
            }
            Shape::PureCosine => (if k == 1 { 1.0 } else { 0.0 }, 0.0),
            Shape::Constant => (0.0, 0.0),
            Shape::TrigPoly(d) => (if k <= d { 1.0 } else { 0.0 }, 0.0),
        }
    }

    /// Certified upper bound on `Σ_{k>K} ρ_k²`.
    pub fn tail_bound(&self, max_k: usize) -> f64 {
        let kf = max_k as f64;
        let bound = match self.shape {
            // Σ_{k>K} 1/k² < ∫_K^∞ dx/x²
            Shape::Sawtooth => {
                if max_k == 0 {
                    PI * PI / 6.0
                } else {
                    1.0 / kf
                }
            }
            Shape::Geometric(r) => r.powi(2 * max_k as i32 + 2) / (1.0 - r * r),
            Shape::ExpCos => exp_cos_tail_bound(max_k),
            Shape::AbsSin => abs_sin_tail_bound(max_k),
            Shape::PureCosine => {
                if max_k >= 1 {
                    0.0
                } else {
                    1.0
                }
            }
            Shape::Constant => 0.0,
            Shape::TrigPoly(d) => d.saturating_sub(max_k) as f64,
        };
        // keep a nonzero bound when the true tail is positive but underflows
        if bound == 0.0 && self.has_infinite_spectrum() {
            f64::MIN_POSITIVE
        } else {
            bound
        }
    }

    fn has_infinite_spectrum(&self) -> bool {
        matches!(
            self.shape,
            Shape::Sawtooth | Shape::Geometric(_) | Shape::ExpCos | Shape::AbsSin
        )
    }

    /// `Σ_{k>K} ρ_k²` from closed forms (not a bound); used by consistency
    /// checks against quadrature.
    pub fn exact_tail(&self, max_k: usize) -> f64 {
        match self.shape {
            Shape::Sawtooth => {
                PI * PI / 6.0 - (1..=max_k).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>()
            }
            Shape::Geometric(r) => r.powi(2 * max_k as i32 + 2) / (1.0 - r * r),
            Shape::AbsSin => {
                // ‖|sin x|‖² = 1 under the (1/π)∫ convention
                let total = 1.0 - 8.0 / (PI * PI);
                total - (1..=max_k).map(|k| self.rho_sq(k)).sum::<f64>()
            }
            Shape::ExpCos => {
                let mut acc = 0.0;
                for k in (max_k + 1..max_k + 200).rev() {
                    acc += self.rho_sq(k);
                }
                acc
            }
            _ => self.tail_bound(max_k),
        }
    }

    fn rho_sq(&self, k: usize) -> f64 {
        let (a, b) = self.coefficient(k);
        a * a + b * b
    }
}

/// `I_k(x) = Σ_{m≥0} (x/2)^{2m+k} / (m!·(m+k)!)`, summed until terms drop
/// below `1e-18` relative to the running total.
pub fn bessel_i(k: usize, x: f64) -> f64 {
    let half = x / 2.0;
    // (x/2)^k / k!
    let mut term = 1.0;
    for j in 1..=k {
        term *= half / j as f64;
    }
    let mut sum = term;
    let mut m = 0usize;
    while term > 1e-18 * sum {
        m += 1;
        term *= half * half / (m as f64 * (m + k) as f64);
        sum += term;
    }
    sum
}

/// `Σ_{k>K} 4·I_k(1)²` with `I_k(1) ≤ e^{1/4}/(k!·2^k)`; successive bound
/// terms shrink by at least 1/16, so twice the first term dominates.
fn exp_cos_tail_bound(max_k: usize) -> f64 {
    let k = max_k + 1;
    let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    let ln_first = (4.0f64).ln() + 0.5 - 2.0 * ln_fact - (k as f64) * (4.0f64).ln();
    2.0 * ln_first.exp()
}

/// `ρ_{2j} = 4/(π(4j² − 1)) ≤ 4/(3πj²)`, so the tail beyond `K` is at most
/// `(16/(9π²))·Σ_{j>J} j⁻⁴` with `J = ⌊K/2⌋`.
fn abs_sin_tail_bound(max_k: usize) -> f64 {
    let c = 16.0 / (9.0 * PI * PI);
    let j = (max_k / 2) as f64;
    if j == 0.0 {
        c * PI.powi(4) / 90.0
    } else {
        c / (3.0 * j * j * j)
    }
}

/// The built-in entries.
pub fn corpus_entries() -> Vec<CorpusFunction> {
    vec![
        CorpusFunction::new(
            "sawtooth",
            "(pi - x)/2 on (0, 2pi); beta_k = 1/k",
            Shape::Sawtooth,
            Some(1),
            true,
        ),
        CorpusFunction::new(
            "geometric_0.5",
            "sum of 0.5^k cos(kx)",
            Shape::Geometric(0.5),
            Some(1),
            true,
        ),
        CorpusFunction::new(
            "geometric_0.9",
            "sum of 0.9^k cos(kx)",
            Shape::Geometric(0.9),
            Some(1),
            true,
        ),
        CorpusFunction::new(
            "exp_cos",
            "exp(cos x); alpha_k = 2 I_k(1)",
            Shape::ExpCos,
            Some(1),
            true,
        ),
        CorpusFunction::new(
            "abs_sin",
            "|sin x|; even harmonics only (monotone-tail hypothesis fails)",
            Shape::AbsSin,
            None,
            false,
        ),
        CorpusFunction::new("pure_cosine", "cos x", Shape::PureCosine, Some(1), true),
        CorpusFunction::new("constant", "f = 1", Shape::Constant, Some(1), true),
        CorpusFunction::trig_poly(3),
        CorpusFunction::trig_poly(8),
    ]
}

/// Find a corpus entry by id; `trigpoly_<d>` accepts any degree `d ≥ 1`.
pub fn lookup(id: &str) -> Result<CorpusFunction> {
    if let Some(found) = corpus_entries().into_iter().find(|e| e.id == id) {
        return Ok(found);
    }
    if let Some(d) = id.strip_prefix("trigpoly_").and_then(|d| d.parse::<usize>().ok()) {
        if d >= 1 {
            return Ok(CorpusFunction::trig_poly(d));
        }
    }
    let valid = corpus_entries()
        .iter()
        .map(|e| e.id.as_str())
        .chain(["trigpoly_<d>"])
        .collect::<Vec<_>>()
        .join(", ");
    Err(Error::UnknownFunction { id: id.to_string(), valid })
}

/// Dense series for `k = 1..=K` with the certified tail bound.
pub fn materialize(entry: &CorpusFunction, max_k: usize) -> Result<FourierSeries> {
    if max_k < 1 {
        return Err(crate::error::precondition("materialize needs K >= 1"));
    }
    let coeffs: Vec<_> = (1..=max_k).map(|k| entry.coefficient(k)).collect();
    FourierSeries::new(entry.a0(), &coeffs, Tail::Certified(entry.tail_bound(max_k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemma_lab::detect_n0;

    #[test]
    fn coefficient_examples() {
        let saw = lookup("sawtooth").unwrap();
        assert_eq!(saw.coefficient(3), (0.0, 1.0 / 3.0));
        let c = lookup("pure_cosine").unwrap();
        assert_eq!(c.coefficient(1), (1.0, 0.0));
        assert_eq!(c.coefficient(2), (0.0, 0.0));
        let g = lookup("geometric_0.5").unwrap();
        assert!((g.tail_bound(4) - 0.001_302_083).abs() < 1e-9);
    }

    #[test]
    fn materialize_examples() {
        let s = materialize(&lookup("pure_cosine").unwrap(), 8).unwrap();
        assert_eq!(s.tail(), Tail::Certified(0.0));
        assert_eq!(s.max_k(), 8);

        let saw = lookup("sawtooth").unwrap();
        let s = materialize(&saw, 100).unwrap();
        assert_eq!(s.tail(), Tail::Certified(0.01));
        let true_tail = saw.exact_tail(100);
        assert!(true_tail > 1.0 / 101.0 && true_tail < 1.0 / 100.0);

        let s = materialize(&lookup("geometric_0.9").unwrap(), 50).unwrap();
        let want = 0.9f64.powi(102) / 0.19;
        assert!((s.tail().energy_bound() - want).abs() < 1e-15 * want.max(1.0));
        assert!(materialize(&saw, 0).is_err());
    }

    #[test]
    fn bessel_values() {
        // reference values of I_0(1), I_1(1), I_2(1)
        assert!((bessel_i(0, 1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((bessel_i(1, 1.0) - 0.565_159_103_992_485).abs() < 1e-15);
        assert!((bessel_i(2, 1.0) - 0.135_747_669_767_038_28).abs() < 1e-15);
        assert!(bessel_i(40, 1.0) > 0.0);
    }

    #[test]
    fn tails_are_certified() {
        for e in corpus_entries() {
            for k in [1usize, 2, 3, 7, 16, 64, 500] {
                let exact = e.exact_tail(k);
                let bound = e.tail_bound(k);
                assert!(
                    exact <= bound * (1.0 + 1e-12) + 1e-300,
                    "{} K={k}: exact {exact} > bound {bound}",
                    e.id
                );
            }
        }
    }

    #[test]
    fn declared_n0_matches_spectrum() {
        for e in corpus_entries().into_iter().filter(|e| e.hypothesis_ok) {
            let s = materialize(&e, 4096).unwrap();
            assert_eq!(detect_n0(&s.rho_sq()).unwrap(), e.n0.unwrap(), "{}", e.id);
        }
        let abs_sin = materialize(&lookup("abs_sin").unwrap(), 64).unwrap();
        assert_eq!(detect_n0(&abs_sin.rho_sq()).unwrap(), 64);
    }

    #[test]
    fn sawtooth_jump_convention() {
        let saw = lookup("sawtooth").unwrap();
        assert_eq!(saw.evaluate(0.0), 0.0);
        assert_eq!(saw.evaluate(2.0 * PI), 0.0);
        assert!((saw.evaluate(1e-9) - PI / 2.0).abs() < 1e-8);
        assert!((saw.evaluate(-1e-9) + PI / 2.0).abs() < 1e-8);
        assert!((saw.evaluate(PI / 2.0) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn lookup_handles_trig_poly_and_unknown_ids() {
        let p = lookup("trigpoly_5").unwrap();
        assert_eq!(p.shape, Shape::TrigPoly(5));
        assert_eq!(p.tail_bound(3), 2.0);
        assert!(lookup("trigpoly_0").is_err());
        match lookup("nosuch") {
            Err(Error::UnknownFunction { valid, .. }) => assert!(valid.contains("sawtooth")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abs_sin_coefficients() {
        let e = lookup("abs_sin").unwrap();
        assert_eq!(e.coefficient(3), (0.0, 0.0));
        assert!((e.coefficient(2).0 + 4.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((e.a0() - 4.0 / PI).abs() < 1e-15);
    }
}
