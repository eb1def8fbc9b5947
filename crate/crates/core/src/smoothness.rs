//! Second symmetric difference, the second modulus of smoothness and the
//! Jackson-type bound explorer.
//!
//! The explorer compares `‖f − mean‖` against
//! `(1/√6)·{(n/π)∫_0^{π/n} ω₂²(f, t) dt}^{1/2}` and reports the ratio. It does
//! not assume the inequality holds; for `f = cos x` it fails at every `n ≥ 2`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{precondition, Result};
use crate::spectral::FourierSeries;
use crate::summators::{error_sq, Ledger, MeanKind, MeanSpec};

/// `‖f(x−t) − 2f(x) + f(x+t)‖² = 4 Σ ρ_k² (1 − cos kt)²`.
///
/// Evaluated as `16 Σ ρ_k² sin⁴(kt/2)` to avoid cancellation at small `t`.
/// The truncated tail can add at most `16·tail_energy_bound`.
pub fn second_difference_norm_sq(s: &FourierSeries, t: f64) -> Result<Ledger> {
    let tail = s.require_certified()?;
    Ok(Ledger { value: second_difference_raw(s, t), truncation_budget: 16.0 * tail })
}

fn second_difference_raw(s: &FourierSeries, t: f64) -> f64 {
    let half = 0.5 * t;
    16.0 * s
        .harmonics()
        .iter()
        .rev()
        .map(|h| {
            let sn = (h.k() as f64 * half).sin();
            let s2 = sn * sn;
            h.rho() * h.rho() * s2 * s2
        })
        .sum::<f64>()
}

/// Grid sizes for ω₂ sup-approximation and Simpson integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig {
    /// Simpson intervals on `[0, π/n]`; even, at least 4.
    pub quad_points: usize,
    /// Nodes of the ascending `t` grid for the running maximum; at least 2.
    pub t_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { quad_points: 512, t_points: 513 }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.quad_points < 4 || !self.quad_points.is_multiple_of(2) {
            return Err(precondition(format!(
                "quad_points must be even and >= 4, got {}",
                self.quad_points
            )));
        }
        if self.t_points < 2 {
            return Err(precondition(format!("t_points must be >= 2, got {}", self.t_points)));
        }
        Ok(())
    }

    /// Both grids refined by a factor of two.
    pub fn refined(&self) -> Self {
        GridConfig { quad_points: 2 * self.quad_points, t_points: 2 * self.t_points - 1 }
    }
}

/// `d/dt` of [`second_difference_raw`]: `32 Σ k ρ_k² sin³(kt/2) cos(kt/2)`.
fn second_difference_slope(s: &FourierSeries, t: f64) -> f64 {
    let half = 0.5 * t;
    32.0 * s
        .harmonics()
        .iter()
        .rev()
        .map(|h| {
            let k = h.k() as f64;
            let (sn, cs) = (k * half).sin_cos();
            k * h.rho() * h.rho() * sn * sn * sn * cs
        })
        .sum::<f64>()
}

/// Largest value on `[a, b]` when the slope turns from rising to falling.
fn interior_peak(s: &FourierSeries, mut a: f64, mut b: f64) -> Option<f64> {
    if !(second_difference_slope(s, a) > 0.0 && second_difference_slope(s, b) < 0.0) {
        return None;
    }
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if second_difference_slope(s, mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(second_difference_raw(s, a).max(second_difference_raw(s, b)))
}

/// `sup_{0 ≤ u ≤ t} ‖Δ²_u f‖²` at each of the ascending nodes `ts`.
///
/// Node values are exact up to rounding: every interior local maximum
/// between neighbouring nodes is located by bisection on the slope.
fn running_sup(s: &FourierSeries, ts: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ts.len());
    let mut running = 0.0f64;
    let mut prev: Option<f64> = None;
    for &t in ts {
        if let Some(p) = prev {
            if let Some(peak) = interior_peak(s, p, t) {
                running = running.max(peak);
            }
        }
        running = running.max(second_difference_raw(s, t));
        out.push(running);
        prev = Some(t);
    }
    out
}

/// `ω₂(f, δ)`: the supremum over `[0, δ]`, from `t_points` uniform nodes
/// refined at interior peaks.
pub fn omega2(s: &FourierSeries, delta: f64, t_points: usize) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(precondition(format!("delta must be >= 0, got {delta}")));
    }
    if t_points < 2 {
        return Err(precondition(format!("t_points must be >= 2, got {t_points}")));
    }
    let step = delta / (t_points - 1) as f64;
    let ts: Vec<f64> = (0..t_points).map(|i| i as f64 * step).collect();
    Ok(running_sup(s, &ts).last().copied().unwrap_or(0.0).sqrt())
}

/// `ω₂²(f, ·)` at the Simpson nodes `j·δ/q`, `j = 0..=q`, from the running
/// supremum over the union of the `t` grid and the Simpson nodes.
fn omega2_sq_at_simpson_nodes(s: &FourierSeries, delta: f64, cfg: &GridConfig) -> Vec<f64> {
    let q = cfg.quad_points;
    let tp = cfg.t_points;
    // (t, is_simpson_node)
    let mut nodes: Vec<(f64, bool)> = (0..=q).map(|j| (delta * j as f64 / q as f64, true)).collect();
    if tp != q + 1 {
        nodes.extend((0..tp).map(|i| (delta * i as f64 / (tp - 1) as f64, false)));
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    }
    let ts: Vec<f64> = nodes.iter().map(|n| n.0).collect();
    running_sup(s, &ts)
        .into_iter()
        .zip(&nodes)
        .filter(|(_, n)| n.1)
        .map(|(v, _)| v)
        .collect()
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let last = values.len() - 1;
    let interior: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + interior + values[last])
}

/// Composite Simpson approximation of `∫_0^{π/n} ω₂²(f, t) dt`.
pub fn jackson_integral(s: &FourierSeries, n: usize, cfg: &GridConfig) -> Result<f64> {
    if n < 1 {
        return Err(precondition("jackson integral needs n >= 1"));
    }
    cfg.validate()?;
    let delta = PI / n as f64;
    let nodes = omega2_sq_at_simpson_nodes(s, delta, cfg);
    Ok(simpson(&nodes, delta / cfg.quad_points as f64))
}

/// Right-hand side value with an upper end that absorbs the truncated tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rhs {
    pub value: f64,
    pub upper: f64,
}

/// `(1/√6)·{(n/π)·jackson_integral}^{1/2}`.
pub fn theorem_rhs(s: &FourierSeries, n: usize, cfg: &GridConfig) -> Result<f64> {
    let integral = jackson_integral(s, n, cfg)?;
    Ok(rhs_from_integral(integral, n))
}

fn rhs_from_integral(integral: f64, n: usize) -> f64 {
    (n as f64 / PI * integral / 6.0).sqrt()
}

/// [`theorem_rhs`] together with the bound obtained when every ω₂² value is
/// raised by the `16·tail` budget.
pub fn theorem_rhs_interval(s: &FourierSeries, n: usize, cfg: &GridConfig) -> Result<Rhs> {
    let tail = s.require_certified()?;
    let integral = jackson_integral(s, n, cfg)?;
    let widened = integral + PI / n as f64 * 16.0 * tail;
    Ok(Rhs { value: rhs_from_integral(integral, n), upper: rhs_from_integral(widened, n) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One `(function, mean, n, m)` comparison of the approximation error against
/// the smoothness bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub function: String,
    pub kind: MeanKind,
    pub n: usize,
    pub m: Option<usize>,
    pub n0: Option<usize>,
    /// `‖f − mean‖` from the ledger (truncated tail excluded).
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; 0 when `lhs = 0`, infinite when only `rhs` vanishes.
    pub ratio: f64,
    /// How far the true `lhs` may exceed the reported one.
    pub lhs_truncation_budget: f64,
    /// How far the true `rhs` may exceed the reported one.
    pub rhs_truncation_budget: f64,
    pub quadrature_points: usize,
    pub t_grid_points: usize,
    pub verdict: Verdict,
}

impl BoundReport {
    /// Attach the function id and its declared `n0`.
    pub fn for_function(mut self, id: &str, n0: Option<usize>) -> Self {
        self.function = id.to_string();
        self.n0 = n0;
        self
    }

    /// True when the row sits below the monotone-tail index `n0` (or `n0`
    /// is unknown), i.e. outside the hypothesis of the stated bound.
    pub fn below_n0(&self) -> bool {
        self.n0.is_none_or(|n0| self.n < n0)
    }
}

/// Assemble a report from a precomputed right-hand side; sweeps share one
/// [`Rhs`] across every mean with the same `n`.
pub fn bound_report(s: &FourierSeries, spec: &MeanSpec, rhs: &Rhs, cfg: &GridConfig) -> Result<BoundReport> {
    let ledger = error_sq(s, spec)?;
    let lhs = ledger.value.sqrt();
    let lhs_upper = ledger.upper().sqrt();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs.value };
    let verdict = if lhs_upper <= rhs.value {
        Verdict::Holds
    } else if lhs > rhs.upper {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    Ok(BoundReport {
        function: String::new(),
        kind: spec.kind(),
        n: spec.n(),
        m: spec.m(),
        n0: None,
        lhs,
        rhs: rhs.value,
        ratio,
        lhs_truncation_budget: lhs_upper - lhs,
        rhs_truncation_budget: rhs.upper - rhs.value,
        quadrature_points: cfg.quad_points,
        t_grid_points: cfg.t_points,
        verdict,
    })
}

/// Evaluate both sides of the bound for one mean.
pub fn check_bound(s: &FourierSeries, spec: &MeanSpec, cfg: &GridConfig) -> Result<BoundReport> {
    let rhs = theorem_rhs_interval(s, spec.n(), cfg)?;
    bound_report(s, spec, &rhs, cfg)
}
