//! Partial sums, Fejér means and de la Vallée Poussin means as coefficient
//! multipliers, with their exact squared-error ledgers and pointwise oracles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::spectral::{quadrature_grid, FourierSeries, Term, TrigPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Partial,
    Fejer,
    ValleePoussin,
}

impl MeanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeanKind::Partial => "partial",
            MeanKind::Fejer => "fejer",
            MeanKind::ValleePoussin => "vp",
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial" => Ok(MeanKind::Partial),
            "fejer" => Ok(MeanKind::Fejer),
            "vp" | "vallee_poussin" | "vallee-poussin" => Ok(MeanKind::ValleePoussin),
            other => Err(Error::InvalidInput(format!(
                "unknown mean kind `{other}` (expected partial, fejer or vp)"
            ))),
        }
    }
}

/// Which summation operator to apply, with its indices.
///
/// For `Partial` the operator is `S_n`; for `Fejer` it is `σ_{n-1}`; for
/// `ValleePoussin` it is `V_m^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeanSpec {
    kind: MeanKind,
    n: usize,
    m: usize,
}

impl MeanSpec {
    pub fn partial(n: usize) -> Self {
        MeanSpec { kind: MeanKind::Partial, n, m: 0 }
    }

    pub fn fejer(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(precondition("Fejér mean needs n >= 1"));
        }
        Ok(MeanSpec { kind: MeanKind::Fejer, n, m: 0 })
    }

    pub fn vallee_poussin(m: usize, n: usize) -> Result<Self> {
        if m >= n {
            return Err(precondition(format!(
                "de la Vallée Poussin mean needs m < n, got m = {m}, n = {n}"
            )));
        }
        Ok(MeanSpec { kind: MeanKind::ValleePoussin, n, m })
    }

    pub fn kind(&self) -> MeanKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Some(m)` only for de la Vallée Poussin means.
    pub fn m(&self) -> Option<usize> {
        (self.kind == MeanKind::ValleePoussin).then_some(self.m)
    }

    /// Multiplier applied to harmonic `k ≥ 1`.
    pub fn multiplier(&self, k: usize) -> f64 {
        let n = self.n;
        match self.kind {
            MeanKind::Partial => {
                if k <= n {
                    1.0
                } else {
                    0.0
                }
            }
            MeanKind::Fejer => {
                if k < n {
                    // (n − k)/n, the m = 0 case of the dlVP multiplier
                    (n - k) as f64 / n as f64
                } else {
                    0.0
                }
            }
            MeanKind::ValleePoussin => {
                if k <= self.m {
                    1.0
                } else if k < n {
                    (n - k) as f64 / (n - self.m) as f64
                } else {
                    0.0
                }
            }
        }
    }

    /// Largest harmonic the operator needs from the ledger.
    fn highest_harmonic(&self) -> usize {
        match self.kind {
            MeanKind::Partial => self.n,
            _ => self.n - 1,
        }
    }

    /// Apply the operator to `s`.
    pub fn apply(&self, s: &FourierSeries) -> Result<TrigPoly> {
        let top = self.highest_harmonic();
        if top > s.max_k() {
            return Err(Error::TruncationExceeded { requested: top, available: s.max_k() });
        }
        let terms = s.harmonics()[..top]
            .iter()
            .map(|h| Term { k: h.k(), rho: self.multiplier(h.k()) * h.rho(), phi: h.phi() })
            .collect();
        TrigPoly::new(s.a0(), terms)
    }
}

/// `S_n(f)`.
pub fn partial_sum(s: &FourierSeries, n: usize) -> Result<TrigPoly> {
    MeanSpec::partial(n).apply(s)
}

/// `σ_{n-1}(f)`, multiplier `1 - k/n` on `k < n`.
pub fn fejer_mean(s: &FourierSeries, n: usize) -> Result<TrigPoly> {
    MeanSpec::fejer(n)?.apply(s)
}

/// `V_m^{n-1}(f)`, multiplier 1 on `k ≤ m` then `(n-k)/(n-m)`.
pub fn vallee_poussin_mean(s: &FourierSeries, m: usize, n: usize) -> Result<TrigPoly> {
    MeanSpec::vallee_poussin(m, n)?.apply(s)
}

/// Pointwise average of `S_m, …, S_{n-1}` at every grid point, computed by
/// literally summing the partial sums. `m = 0` gives the Fejér mean.
pub fn averaging_oracle(s: &FourierSeries, m: usize, n: usize, grid: &[f64]) -> Result<Vec<f64>> {
    if m >= n {
        return Err(precondition(format!("averaging needs m < n, got m = {m}, n = {n}")));
    }
    if n - 1 > s.max_k() {
        return Err(Error::TruncationExceeded { requested: n - 1, available: s.max_k() });
    }
    let harmonics = &s.harmonics()[..n - 1];
    let count = (n - m) as f64;
    Ok(grid
        .iter()
        .map(|&x| {
            let mut partial = s.a0() / 2.0;
            let mut total = if m == 0 { partial } else { 0.0 };
            for h in harmonics {
                partial += h.rho() * (h.k() as f64 * x + h.phi()).cos();
                if h.k() >= m {
                    total += partial;
                }
            }
            total / count
        })
        .collect())
}

/// Squared error split into the ledger value and the energy that truncation
/// may have hidden: the true quantity lies in `[value, value + truncation_budget]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ledger {
    pub value: f64,
    pub truncation_budget: f64,
}

impl Ledger {
    /// Upper end of the certified interval.
    pub fn upper(&self) -> f64 {
        self.value + self.truncation_budget
    }
}

/// `Σ_{k<n} w(k) ρ_k² + Σ_{k=n}^{K} ρ_k²`, summed in a fixed order so that
/// termwise-ordered weights give ordered results in floating point.
fn error_ledger(s: &FourierSeries, n: usize, weight: impl Fn(usize) -> f64) -> Result<Ledger> {
    let budget = s.require_certified()?;
    if n < 1 {
        return Err(precondition("error ledger needs n >= 1"));
    }
    if n > s.max_k() {
        return Err(Error::TruncationExceeded { requested: n, available: s.max_k() });
    }
    let h = s.harmonics();
    let head: f64 = h[..n - 1]
        .iter()
        .map(|h| weight(h.k()) * (h.rho() * h.rho()))
        .sum();
    let tail: f64 = h[n - 1..].iter().rev().map(|h| h.rho() * h.rho()).sum();
    Ok(Ledger { value: head + tail, truncation_budget: budget })
}

fn fejer_weight(k: usize, n: usize) -> f64 {
    let r = k as f64 / n as f64;
    r * r
}

/// `‖f − σ_{n-1}(f)‖² = Σ_{k<n} (k/n)² ρ_k² + Σ_{k≥n} ρ_k²`.
pub fn fejer_error_sq(s: &FourierSeries, n: usize) -> Result<Ledger> {
    error_ledger(s, n, |k| fejer_weight(k, n))
}

/// `‖f − V_m^{n-1}(f)‖² = Σ_{m<k<n} ((k−m)/(n−m))² ρ_k² + Σ_{k≥n} ρ_k²`.
pub fn vp_error_sq(s: &FourierSeries, m: usize, n: usize) -> Result<Ledger> {
    if m >= n {
        return Err(precondition(format!("need m < n, got m = {m}, n = {n}")));
    }
    if m == 0 {
        // identical arithmetic to the Fejér ledger
        return fejer_error_sq(s, n);
    }
    error_ledger(s, n, |k| {
        if k <= m {
            0.0
        } else {
            let r = (k - m) as f64 / (n - m) as f64;
            r * r
        }
    })
}

/// Ledger for any [`MeanSpec`]; partial sums leave only the tail beyond `n`.
pub fn error_sq(s: &FourierSeries, spec: &MeanSpec) -> Result<Ledger> {
    match spec.kind() {
        MeanKind::Fejer => fejer_error_sq(s, spec.n()),
        MeanKind::ValleePoussin => vp_error_sq(s, spec.m, spec.n()),
        MeanKind::Partial => {
            let budget = s.require_certified()?;
            if spec.n() > s.max_k() {
                return Err(Error::TruncationExceeded {
                    requested: spec.n(),
                    available: s.max_k(),
                });
            }
            let value = s.harmonics()[spec.n()..]
                .iter()
                .rev()
                .map(|h| h.rho() * h.rho())
                .sum();
            Ok(Ledger { value, truncation_budget: budget })
        }
    }
}

/// `(1/π)·(2π/N)·Σ (f(x_j) − p(x_j))²` on the quadrature grid.
pub fn residual_quadrature_error_sq<F: Fn(f64) -> f64>(f: F, p: &TrigPoly, n: usize) -> Result<f64> {
    let values: Vec<f64> = quadrature_grid(n).into_iter().map(f).collect();
    residual_quadrature_error_sq_sampled(&values, p)
}

/// Same as [`residual_quadrature_error_sq`] with `f` already sampled on
/// [`quadrature_grid`] of length `N`; lets sweeps evaluate `f` once.
pub fn residual_quadrature_error_sq_sampled(f_values: &[f64], p: &TrigPoly) -> Result<f64> {
    let n = f_values.len();
    if n < 4 * (p.degree() + 1) {
        return Err(precondition(format!(
            "quadrature grid N = {n} is below 4·(degree + 1) = {}",
            4 * (p.degree() + 1)
        )));
    }
    let grid = quadrature_grid(n);
    let p_values = evaluate_on_grid(p, &grid);
    let sum: f64 = f_values
        .iter()
        .zip(&p_values)
        .map(|(f, q)| (f - q) * (f - q))
        .sum();
    Ok(2.0 * sum / n as f64)
}

/// Evaluate `p` at every node; uses the rotation recurrence for
/// `e^{ikx}` per node, which is accurate to a few ulps per step for the
/// degrees used here.
pub(crate) fn evaluate_on_grid(p: &TrigPoly, grid: &[f64]) -> Vec<f64> {
    let degree = p.degree();
    if degree > 256 {
        return p.evaluate_many(grid);
    }
    // dense (c_k, s_k) with c_k = ρ cos φ, s_k = ρ sin φ
    let mut dense = vec![(0.0, 0.0); degree + 1];
    for t in p.terms().iter().filter(|t| t.k <= degree) {
        dense[t.k] = (t.rho * t.phi.cos(), t.rho * t.phi.sin());
    }
    grid.iter()
        .map(|&x| {
            let (s1, c1) = x.sin_cos();
            let (mut ck, mut sk) = (1.0, 0.0);
            let mut acc = p.a0 / 2.0;
            for &(a, b) in &dense[1..] {
                let c = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = c;
                // ρ cos(kx + φ) = c_k cos kx − s_k sin kx
                acc += a * ck - b * sk;
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{sample_grid, Tail};
    use std::f64::consts::PI;

    fn sawtooth(k: usize) -> FourierSeries {
        let coeffs: Vec<_> = (1..=k).map(|k| (0.0, 1.0 / k as f64)).collect();
        FourierSeries::new(0.0, &coeffs, Tail::Certified(1.0 / k as f64)).unwrap()
    }

    fn ones(k: usize) -> FourierSeries {
        FourierSeries::new(0.0, &vec![(1.0, 0.0); k], Tail::Certified(0.0)).unwrap()
    }

    fn cosine(k: usize) -> FourierSeries {
        let mut c = vec![(0.0, 0.0); k];
        c[0] = (1.0, 0.0);
        FourierSeries::new(0.0, &c, Tail::Certified(0.0)).unwrap()
    }

    fn sawtooth_tail(from: usize) -> f64 {
        // Σ_{k≥from} 1/k² via ζ(2)
        PI * PI / 6.0 - (1..from).map(|k| 1.0 / (k * k) as f64).sum::<f64>()
    }

    #[test]
    fn partial_sum_examples() {
        let s = sawtooth(10);
        let p = partial_sum(&s, 0).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(p.evaluate(0.3), 0.0);

        let p = partial_sum(&s, 2).unwrap();
        assert_eq!(p.degree(), 2);
        for (t, rho) in p.terms().iter().zip([1.0, 0.5]) {
            assert!((t.rho - rho).abs() < 1e-15);
            assert!((t.phi + PI / 2.0).abs() < 1e-15);
        }

        assert!(matches!(
            partial_sum(&s, 11),
            Err(Error::TruncationExceeded { requested: 11, available: 10 })
        ));
    }

    #[test]
    fn partial_sum_reproduces_polynomials() {
        let s = ones(5);
        let p = partial_sum(&s, 5).unwrap();
        let grid = sample_grid(40);
        for &x in &grid {
            let want: f64 = (1..=5).map(|k| (k as f64 * x).cos()).sum();
            assert!((p.evaluate(x) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn fejer_multipliers() {
        let p = fejer_mean(&ones(8), 4).unwrap();
        let rhos: Vec<_> = (1..=8).map(|k| p.term(k).rho).collect();
        assert_eq!(&rhos[..3], &[0.75, 0.5, 0.25]);
        assert!(rhos[3..].iter().all(|&r| r == 0.0));

        let p = fejer_mean(&sawtooth(4), 1).unwrap();
        assert_eq!(p.degree(), 0);
        assert!(fejer_mean(&sawtooth(4), 0).is_err());
        // n = K + 1 is allowed for means
        assert!(fejer_mean(&sawtooth(4), 5).is_ok());
        assert!(fejer_mean(&sawtooth(4), 6).is_err());
    }

    #[test]
    fn fejer_matches_averaging_oracle() {
        let s = sawtooth(16);
        let grid = sample_grid(1024);
        let mean = fejer_mean(&s, 7).unwrap().evaluate_many(&grid);
        let oracle = averaging_oracle(&s, 0, 7, &grid).unwrap();
        let worst = mean
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn vp_multipliers() {
        let p = vallee_poussin_mean(&ones(6), 2, 5).unwrap();
        let rhos: Vec<_> = (1..=5).map(|k| p.term(k).rho).collect();
        let want = [1.0, 1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0];
        for (r, w) in rhos.iter().zip(want) {
            assert!((r - w).abs() < 1e-15);
        }
        assert!(vallee_poussin_mean(&ones(6), 5, 5).is_err());

        let s = sawtooth(12);
        assert_eq!(
            vallee_poussin_mean(&s, 0, 9).unwrap(),
            fejer_mean(&s, 9).unwrap()
        );
        // degree 5 reproduced once m >= 5
        let p = vallee_poussin_mean(&ones(5), 5, 6).unwrap();
        assert!((1..=5).all(|k| p.term(k).rho == 1.0));
    }

    #[test]
    fn averaging_oracle_constant_case() {
        let s = FourierSeries::new(3.0, &[(1.0, 2.0)], Tail::Certified(0.0)).unwrap();
        let vals = averaging_oracle(&s, 0, 1, &sample_grid(8)).unwrap();
        assert!(vals.iter().all(|&v| v == 1.5));
        assert!(averaging_oracle(&s, 2, 2, &[0.0]).is_err());
    }

    #[test]
    fn fejer_ledger_examples() {
        let s = sawtooth(200);
        let l = fejer_error_sq(&s, 2).unwrap();
        let want = PI * PI / 6.0 - 0.75;
        assert!((want - 0.894934).abs() < 1e-6);
        // ledger misses the tail beyond K; the budget covers it
        assert!(l.value <= want && want <= l.upper());
        assert!((l.value + sawtooth_tail(201) - want).abs() < 1e-13);

        for n in 2..6 {
            let l = fejer_error_sq(&cosine(8), n).unwrap();
            assert!((l.value - 1.0 / (n * n) as f64).abs() < 1e-16);
        }
        let c = FourierSeries::new(2.0, &[(0.0, 0.0); 4], Tail::Certified(0.0)).unwrap();
        assert_eq!(fejer_error_sq(&c, 3).unwrap().value, 0.0);
    }

    #[test]
    fn ledger_rejects_unknown_tail_and_overrun() {
        let s = FourierSeries::new(0.0, &[(1.0, 0.0); 4], Tail::Unknown).unwrap();
        assert_eq!(fejer_error_sq(&s, 2), Err(Error::TailUnknown));
        assert_eq!(vp_error_sq(&s, 1, 2), Err(Error::TailUnknown));
        // ledgers need the split at k = n to be stored
        assert!(matches!(fejer_error_sq(&ones(4), 5), Err(Error::TruncationExceeded { .. })));
    }

    #[test]
    fn vp_ledger_examples() {
        let s = sawtooth(300);
        for n in 1..20 {
            assert_eq!(vp_error_sq(&s, 0, n).unwrap(), fejer_error_sq(&s, n).unwrap());
        }
        let mut c = vec![(0.0, 0.0); 9];
        c[..3].copy_from_slice(&[(1.0, 0.0); 3]);
        let p3 = FourierSeries::new(0.0, &c, Tail::Certified(0.0)).unwrap();
        assert_eq!(vp_error_sq(&p3, 3, 8).unwrap().value, 0.0);
        assert!(vp_error_sq(&ones(9), 3, 8).unwrap().value > 0.0);
        assert!(vp_error_sq(&p3, 8, 8).is_err());

        let l = vp_error_sq(&s, 1, 3).unwrap();
        let want = 1.0 / 16.0 + PI * PI / 6.0 - 1.25;
        assert!((want - 0.457434).abs() < 1e-6);
        assert!((l.value + sawtooth_tail(301) - want).abs() < 1e-13);
    }

    #[test]
    fn residual_quadrature_examples() {
        let p = fejer_mean(&cosine(4), 2).unwrap();
        let r = residual_quadrature_error_sq(f64::cos, &p, 64).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
        let q = partial_sum(&ones(3), 3).unwrap();
        let r = residual_quadrature_error_sq(|x| q.evaluate(x), &q, 64).unwrap();
        assert!(r < 1e-28);
        assert!(residual_quadrature_error_sq(f64::cos, &q, 15).is_err());
    }

    #[test]
    fn grid_evaluation_matches_direct() {
        let s = sawtooth(64);
        let p = fejer_mean(&s, 60).unwrap();
        let grid = quadrature_grid(512);
        let fast = evaluate_on_grid(&p, &grid);
        for (x, v) in grid.iter().zip(fast) {
            assert!((p.evaluate(*x) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_error_is_tail() {
        let s = sawtooth(50);
        let l = error_sq(&s, &MeanSpec::partial(10)).unwrap();
        assert!((l.value - (11..=50).map(|k| 1.0 / (k * k) as f64).sum::<f64>()).abs() < 1e-15);
    }

    #[test]
    fn mean_kind_parsing() {
        assert_eq!("vp".parse::<MeanKind>().unwrap(), MeanKind::ValleePoussin);
        assert_eq!("fejer".parse::<MeanKind>().unwrap(), MeanKind::Fejer);
        assert!("riesz".parse::<MeanKind>().is_err());
        assert_eq!(MeanSpec::vallee_poussin(2, 5).unwrap().m(), Some(2));
        assert_eq!(MeanSpec::fejer(5).unwrap().m(), None);
    }
}
