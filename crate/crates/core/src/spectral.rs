//! Fourier coefficient ledgers, amplitude-phase conversion, evaluation and
//! norms.

use std::f64::consts::PI;

use crate::error::{precondition, Error, Result};

/// Convert `α cos kx + β sin kx` into `ρ cos(kx + φ)`.
///
/// `φ` lies in `(-π, π]`; a zero amplitude gets `φ = 0`.
pub fn to_amplitude_phase(alpha: f64, beta: f64) -> (f64, f64) {
    let rho = alpha.hypot(beta);
    if rho == 0.0 {
        return (0.0, 0.0);
    }
    let phi = (-beta).atan2(alpha);
    // atan2(-0.0, negative) lands on -π
    let phi = if phi <= -PI { PI } else { phi };
    (rho, phi)
}

/// Inverse of [`to_amplitude_phase`].
pub fn from_amplitude_phase(rho: f64, phi: f64) -> (f64, f64) {
    (rho * phi.cos(), -rho * phi.sin())
}

/// One harmonic of a Fourier series, stored in both coefficient forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    k: usize,
    alpha: f64,
    beta: f64,
    rho: f64,
    phi: f64,
}

impl Harmonic {
    pub fn new(k: usize, alpha: f64, beta: f64) -> Result<Self> {
        if k == 0 {
            return Err(precondition("harmonic index must be >= 1"));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coefficient at k = {k}"
            )));
        }
        let (rho, phi) = to_amplitude_phase(alpha, beta);
        Ok(Harmonic { k, alpha, beta, rho, phi })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// What is known about the energy `Σ_{k>K} ρ_k²` beyond the stored harmonics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// A proven upper bound on the discarded energy.
    Certified(f64),
    /// Coefficients were estimated from samples; nothing is known.
    Unknown,
}

impl Tail {
    /// The bound, or 0 for an unknown tail.
    pub fn energy_bound(&self) -> f64 {
        match *self {
            Tail::Certified(b) => b,
            Tail::Unknown => 0.0,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Tail::Certified(_))
    }
}

/// Truncated Fourier series with harmonics stored densely for `k = 1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    a0: f64,
    harmonics: Vec<Harmonic>,
    tail: Tail,
}

impl FourierSeries {
    /// Build from `(α_k, β_k)` pairs for `k = 1..=coeffs.len()`.
    pub fn new(a0: f64, coeffs: &[(f64, f64)], tail: Tail) -> Result<Self> {
        if !a0.is_finite() {
            return Err(Error::InvalidInput("non-finite a0".into()));
        }
        if let Tail::Certified(b) = tail {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tail energy bound must be finite and nonnegative, got {b}"
                )));
            }
        }
        let harmonics = coeffs
            .iter()
            .enumerate()
            .map(|(i, &(alpha, beta))| Harmonic::new(i + 1, alpha, beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(FourierSeries { a0, harmonics, tail })
    }

    /// The zero function, truncated at `max_k` with an exact (zero) tail.
    pub fn zero(max_k: usize) -> Self {
        FourierSeries::new(0.0, &vec![(0.0, 0.0); max_k], Tail::Certified(0.0))
            .expect("zero series is valid")
    }

    /// Embed a trigonometric polynomial as a series truncated at its degree
    /// (or at `max_k` if larger). The tail is exactly zero.
    pub fn from_trig_poly(p: &TrigPoly, max_k: usize) -> Self {
        let k_max = max_k.max(p.degree());
        let mut coeffs = vec![(0.0, 0.0); k_max];
        for term in &p.terms {
            let (a, b) = from_amplitude_phase(term.rho, term.phi);
            coeffs[term.k - 1].0 += a;
            coeffs[term.k - 1].1 += b;
        }
        FourierSeries::new(p.a0, &coeffs, Tail::Certified(0.0))
            .expect("finite polynomial coefficients")
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    /// Truncation degree `K`.
    pub fn max_k(&self) -> usize {
        self.harmonics.len()
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Harmonic `k` (1-based), if stored.
    pub fn harmonic(&self, k: usize) -> Option<&Harmonic> {
        k.checked_sub(1).and_then(|i| self.harmonics.get(i))
    }

    /// `ρ_k²` for `k = 1..=K`, index 0 holding `k = 1`.
    pub fn rho_sq(&self) -> Vec<f64> {
        self.harmonics.iter().map(|h| h.rho * h.rho).collect()
    }

    /// Fails with [`Error::TailUnknown`] unless the tail is certified.
    pub fn require_certified(&self) -> Result<f64> {
        match self.tail {
            Tail::Certified(b) => Ok(b),
            Tail::Unknown => Err(Error::TailUnknown),
        }
    }

    /// True when every harmonic amplitude and the tail bound are zero.
    pub fn is_constant(&self) -> bool {
        self.harmonics.iter().all(|h| h.rho == 0.0) && self.tail.energy_bound() == 0.0
    }

    /// Multiply the function by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let coeffs: Vec<_> = self
            .harmonics
            .iter()
            .map(|h| (c * h.alpha, c * h.beta))
            .collect();
        let tail = match self.tail {
            Tail::Certified(b) => Tail::Certified(c * c * b),
            Tail::Unknown => Tail::Unknown,
        };
        FourierSeries::new(c * self.a0, &coeffs, tail)
    }
}

/// One `ρ cos(kx + φ)` term of a trigonometric polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub k: usize,
    pub rho: f64,
    pub phi: f64,
}

/// Finite trigonometric polynomial `a0/2 + Σ ρ cos(kx + φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub a0: f64,
    terms: Vec<Term>,
}

impl TrigPoly {
    /// Terms must have distinct indices `k ≥ 1`; they are kept sorted by `k`.
    pub fn new(a0: f64, mut terms: Vec<Term>) -> Result<Self> {
        terms.sort_by_key(|t| t.k);
        if terms.iter().any(|t| t.k == 0) {
            return Err(precondition("term index must be >= 1"));
        }
        if terms.windows(2).any(|w| w[0].k == w[1].k) {
            return Err(precondition("duplicate harmonic index in polynomial"));
        }
        Ok(TrigPoly { a0, terms })
    }

    pub fn constant(a0: f64) -> Self {
        TrigPoly { a0, terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Largest index carrying a nonzero amplitude (0 for a constant).
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .rev()
            .find(|t| t.rho != 0.0)
            .map_or(0, |t| t.k)
    }

    /// `ρ` and `φ` of harmonic `k`, or zeros when absent.
    pub fn term(&self, k: usize) -> Term {
        self.terms
            .iter()
            .find(|t| t.k == k)
            .copied()
            .unwrap_or(Term { k, rho: 0.0, phi: 0.0 })
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.a0 / 2.0
            + self
                .terms
                .iter()
                .map(|t| t.rho * (t.k as f64 * x + t.phi).cos())
                .sum::<f64>()
    }

    /// Evaluate on many points.
    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.evaluate(x)).collect()
    }
}

/// Free-function form of [`TrigPoly::evaluate`].
pub fn evaluate(p: &TrigPoly, x: f64) -> f64 {
    p.evaluate(x)
}

/// `x_j = 2πj/N`, `j = 0..N`.
pub fn sample_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Node set used by the quadrature oracles: the uniform grid shifted by half
/// a step, `x_j = 2π(j + 1/2)/N`.
///
/// Corpus functions with a jump have it at `x = 0`; keeping the nodes off the
/// jump makes the rule second-order for piecewise-smooth squared integrands
/// instead of first-order.
pub fn quadrature_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| 2.0 * PI * (j as f64 + 0.5) / n as f64)
        .collect()
}

/// Recover `a0`, `α_k`, `β_k` for `k = 1..=max_k` from samples on the grid
/// `x_j = 2πj/N`.
///
/// Requires `N ≥ 4K` and `N ≥ 4`. The result carries [`Tail::Unknown`].
pub fn coefficients_from_samples(samples: &[f64], max_k: usize) -> Result<FourierSeries> {
    let n = samples.len();
    if n < 4 {
        return Err(precondition(format!("need at least 4 samples, got {n}")));
    }
    if n < 4 * max_k {
        return Err(precondition(format!(
            "N = {n} samples is below the anti-aliasing margin 4K = {}",
            4 * max_k
        )));
    }
    if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite sample at index {j}")));
    }
    let scale = 2.0 / n as f64;
    let a0 = scale * samples.iter().sum::<f64>();
    let coeffs: Vec<(f64, f64)> = (1..=max_k)
        .map(|k| {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &f) in samples.iter().enumerate() {
                // reduce k·j mod N before forming the angle
                let theta = 2.0 * PI * ((k * j) % n) as f64 / n as f64;
                let (s, c) = theta.sin_cos();
                a += f * c;
                b += f * s;
            }
            (scale * a, scale * b)
        })
        .collect();
    FourierSeries::new(a0, &coeffs, Tail::Unknown)
}

/// `a0²/2·[include_a0] + Σ_{k≤K} ρ_k²`. The tail is never included.
pub fn ledger_norm_sq(s: &FourierSeries, include_a0: bool) -> f64 {
    let head = if include_a0 { s.a0 * s.a0 / 2.0 } else { 0.0 };
    head + s.harmonics.iter().map(|h| h.rho * h.rho).sum::<f64>()
}

/// `(1/π)·(2π/N)·Σ f(x_j)²` over [`quadrature_grid`].
pub fn quadrature_norm_sq<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<f64> {
    if n < 16 {
        return Err(precondition(format!("quadrature grid needs N >= 16, got {n}")));
    }
    let sum: f64 = quadrature_grid(n).into_iter().map(|x| f(x).powi(2)).sum();
    Ok(2.0 * sum / n as f64)
}
