//! Checkable forms of the combinatorial steps behind the Fejér bound: the
//! monotone-tail index `n0`, the two sign lemmas on
//! `Σ ρ_k²/k · sin(kπ/n)` and `Σ ρ_k²/k · sin(2kπ/n)` in direct and
//! block-regrouped form, and the pointwise inequality
//! `(k/n)² ≤ sin²(kπ/(2n))`.
//!
//! Sequences are 1-based in the mathematics and stored 0-based: `values[k-1]`
//! holds the `k`-th entry.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};

/// `sin(π·p/q)` with exact argument reduction, so multiples of `π` give
/// exactly zero and symmetric arguments give identical values.
pub fn sin_pi_ratio(p: usize, q: usize) -> f64 {
    assert!(q > 0, "sin_pi_ratio: zero denominator");
    let period = 2 * q;
    let r = p % period;
    let (r, sign) = if r >= q { (r - q, -1.0) } else { (r, 1.0) };
    if r == 0 {
        return 0.0;
    }
    // sin(π − x) = sin x
    let r = r.min(q - r);
    if 2 * r == q {
        return sign;
    }
    sign * (PI * r as f64 / q as f64).sin()
}

/// Smallest 1-based index from which `values` is non-increasing to the end.
pub fn detect_n0(values: &[f64]) -> Result<usize> {
    if values.is_empty() {
        return Err(precondition("detect_n0 needs a non-empty sequence"));
    }
    if let Some(i) = values.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "sequence entry {} is negative or NaN: {}",
            i + 1,
            values[i]
        )));
    }
    let mut start = values.len();
    while start > 1 && values[start - 2] >= values[start - 1] {
        start -= 1;
    }
    Ok(start)
}

/// Nonnegative sequence (the role of `ρ_k²`) together with the index from
/// which it is non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneSeq {
    values: Vec<f64>,
    n0: usize,
}

impl MonotoneSeq {
    /// `n0` is detected from the data.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n0 = detect_n0(&values)?;
        Ok(MonotoneSeq { values, n0 })
    }

    /// Use a declared `n0`, checked against the data.
    pub fn with_n0(values: Vec<f64>, n0: usize) -> Result<Self> {
        let detected = detect_n0(&values)?;
        if n0 < 1 || n0 < detected {
            return Err(precondition(format!(
                "declared n0 = {n0} but the sequence is only non-increasing from {detected}"
            )));
        }
        Ok(MonotoneSeq { values, n0 })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry `k` (1-based).
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// Direct and regrouped evaluation of one sign-lemma window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignSums {
    pub direct: f64,
    pub grouped: f64,
    /// `Σ |terms|` of the direct sum, the scale for rounding tolerances.
    pub magnitude: f64,
}

impl SignSums {
    /// `1e-12·(1 + Σ|terms|)`.
    pub fn tolerance(&self) -> f64 {
        1e-12 * (1.0 + self.magnitude)
    }

    pub fn grouping_consistent(&self) -> bool {
        (self.direct - self.grouped).abs() <= self.tolerance()
    }
}

fn require_window(values: &[f64], last: usize) -> Result<()> {
    if last > values.len() {
        return Err(precondition(format!(
            "window ends at index {last} but the sequence has {} entries",
            values.len()
        )));
    }
    Ok(())
}

/// `Σ_{k=n}^{(2L+1)n−1} (v_k/k)·sin(kπ/n)` directly and as
/// `Σ_{l=1}^{L} Σ_{j=0}^{n−1} [v_{2nl+j}/(2nl+j) − v_{(2l−1)n+j}/((2l−1)n+j)]·sin(jπ/n)`.
///
/// Non-positive when `v_k/k` is non-increasing on the window.
pub fn sign_sum_1(values: &[f64], n: usize, blocks: usize) -> Result<SignSums> {
    if n < 1 || blocks < 1 {
        return Err(precondition("sign_sum_1 needs n >= 1 and at least one block"));
    }
    let last = (2 * blocks + 1) * n - 1;
    require_window(values, last)?;
    let v = |k: usize| values[k - 1] / k as f64;

    let (mut direct, mut magnitude) = (0.0, 0.0);
    for k in n..=last {
        let term = v(k) * sin_pi_ratio(k, n);
        direct += term;
        magnitude += term.abs();
    }
    let mut grouped = 0.0;
    for l in 1..=blocks {
        for j in 0..n {
            let hi = 2 * n * l + j;
            let lo = (2 * l - 1) * n + j;
            grouped += (v(hi) - v(lo)) * sin_pi_ratio(j, n);
        }
    }
    Ok(SignSums { direct, grouped, magnitude })
}

/// `Σ_{k=n}^{(L+1)n−1} (v_k/k)·sin(2kπ/n)` directly and as
/// `Σ_{l=1}^{L} Σ_j [v_{ln+j}/(ln+j) − v_{(l+1)n−j}/((l+1)n−j)]·sin(2jπ/n)`,
/// `j = 1..=⌊n/2⌋` for odd `n` and `j = 1..n/2` for even `n`.
///
/// Non-negative when `v_k/k` is non-increasing on the window.
pub fn sign_sum_2(values: &[f64], n: usize, blocks: usize) -> Result<SignSums> {
    if n < 2 || blocks < 1 {
        return Err(precondition("sign_sum_2 needs n >= 2 and at least one block"));
    }
    let last = (blocks + 1) * n - 1;
    require_window(values, last)?;
    let v = |k: usize| values[k - 1] / k as f64;

    let (mut direct, mut magnitude) = (0.0, 0.0);
    for k in n..=last {
        let term = v(k) * sin_pi_ratio(2 * k, n);
        direct += term;
        magnitude += term.abs();
    }
    // for even n the j = n/2 pair has sin(π) = 0 and is dropped
    let j_max = if n % 2 == 1 { n / 2 } else { n / 2 - 1 };
    let mut grouped = 0.0;
    for l in 1..=blocks {
        for j in 1..=j_max {
            let lo = l * n + j;
            let hi = (l + 1) * n - j;
            grouped += (v(lo) - v(hi)) * sin_pi_ratio(2 * j, n);
        }
    }
    Ok(SignSums { direct, grouped, magnitude })
}

/// Result of checking `(k/n)² ≤ sin²(kπ/(2n))` for `1 ≤ k ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChuiScan {
    pub n: usize,
    /// `max_k [(k/n)² − sin²(kπ/(2n))]`; never positive when the check passes.
    pub max_violation: f64,
}

impl ChuiScan {
    pub fn passed(&self) -> bool {
        self.max_violation <= 0.0
    }
}

/// Scan every `k` in `1..=n`.
pub fn chui_scan(n: usize) -> Result<ChuiScan> {
    if n < 1 {
        return Err(precondition("chui check needs n >= 1"));
    }
    let max_violation = (1..=n)
        .map(|k| {
            let r = k as f64 / n as f64;
            let s = sin_pi_ratio(k, 2 * n);
            r * r - s * s
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ChuiScan { n, max_violation })
}

/// True iff `(k/n)² ≤ sin²(kπ/(2n))` for every `1 ≤ k ≤ n`.
pub fn chui_check(n: usize) -> bool {
    chui_scan(n).map(|s| s.passed()).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    HarmonicLike,
    Geometric,
    RandomGaps,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::HarmonicLike, Family::Geometric, Family::RandomGaps];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::HarmonicLike => "harmonic-like",
            Family::Geometric => "geometric",
            Family::RandomGaps => "random-gaps",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sequence family `{s}`")))
    }
}

/// Seeded sequence of length `kmax`, arbitrary before a random `n0 ≤ kmax/4`
/// and non-increasing from `n0` on.
pub fn random_monotone_seq(seed: u64, kmax: usize, family: Family) -> Result<MonotoneSeq> {
    random_monotone_seq_capped(seed, kmax, family, kmax / 4)
}

/// [`random_monotone_seq`] with the monotone onset drawn from `1..=n0_cap`
/// (clamped to `kmax/4`, and to at least 1).
pub fn random_monotone_seq_capped(
    seed: u64,
    kmax: usize,
    family: Family,
    n0_cap: usize,
) -> Result<MonotoneSeq> {
    if kmax < 2 {
        return Err(precondition(format!("kmax must be >= 2, got {kmax}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = n0_cap.min(kmax / 4).max(1);
    let n0 = rng.gen_range(1..=cap);
    let scale: f64 = rng.gen_range(0.1..10.0);

    let mut monotone = Vec::with_capacity(kmax - n0 + 1);
    match family {
        Family::HarmonicLike => {
            let p: f64 = rng.gen_range(0.5..3.0);
            for k in n0..=kmax {
                monotone.push(scale / (k as f64).powf(p));
            }
        }
        Family::Geometric => {
            let r: f64 = rng.gen_range(0.05..0.999);
            for k in n0..=kmax {
                monotone.push(scale * r.powi(k as i32));
            }
        }
        Family::RandomGaps => {
            let mut v = scale;
            for _ in n0..=kmax {
                monotone.push(v);
                // plateaus are allowed
                if rng.gen_bool(0.6) {
                    v *= rng.gen_range(0.5..1.0);
                }
            }
        }
    }
    // the free prefix may sit above or below the monotone part
    let top = monotone[0];
    let mut values: Vec<f64> = (1..n0).map(|_| rng.gen_range(0.0..2.0 * top)).collect();
    values.extend(monotone);
    MonotoneSeq::with_n0(values, n0)
}

/// Per-trial verdict in a lemma run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialVerdict {
    /// Inside the monotone regime; both signs and both regroupings hold.
    Ok,
    /// Window starts below `n0`; signs are not guaranteed, regroupings held.
    OutsideRegime,
    /// Inside the monotone regime but a sign failed beyond tolerance.
    SignViolation,
    /// Direct and regrouped sums disagree.
    GroupingMismatch,
    /// Adversarial input that pushed the first sum above zero.
    SpikeWitness,
    /// Adversarial input that did not break the sign.
    SpikeNoWitness,
}

impl TrialVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialVerdict::Ok => "ok",
            TrialVerdict::OutsideRegime => "outside_regime",
            TrialVerdict::SignViolation => "sign_violation",
            TrialVerdict::GroupingMismatch => "grouping_mismatch",
            TrialVerdict::SpikeWitness => "spike_witness",
            TrialVerdict::SpikeNoWitness => "spike_no_witness",
        }
    }
}

/// One sign-lemma evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaTrial {
    pub seed: u64,
    pub family: String,
    pub n: usize,
    pub blocks: usize,
    pub n0: usize,
    pub first: SignSums,
    /// Absent when `n < 2`.
    pub second: Option<SignSums>,
    pub verdict: TrialVerdict,
}

/// Settings for a batch of seeded trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive range for `n`.
    pub n_range: (usize, usize),
    /// Inclusive range for the block count `L`.
    pub block_range: (usize, usize),
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig { seed: 7, trials: 1000, n_range: (2, 32), block_range: (1, 8) }
    }
}

const SPIKE_SEED_SALT: u64 = 0x5eed_0000_5b1c_e000;

fn trial_seeds(base: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    (0..count).map(|_| rng.gen()).collect()
}

fn evaluate_window(
    seed: u64,
    family: &str,
    values: &[f64],
    n0: usize,
    n: usize,
    blocks: usize,
) -> Result<LemmaTrial> {
    let first = sign_sum_1(values, n, blocks)?;
    let second = if n >= 2 { Some(sign_sum_2(values, n, blocks)?) } else { None };
    let grouping_ok = first.grouping_consistent() && second.is_none_or(|s| s.grouping_consistent());
    let signs_ok = first.direct <= first.tolerance()
        && second.is_none_or(|s| s.direct >= -s.tolerance());
    let verdict = if !grouping_ok {
        TrialVerdict::GroupingMismatch
    } else if n < n0 {
        TrialVerdict::OutsideRegime
    } else if signs_ok {
        TrialVerdict::Ok
    } else {
        TrialVerdict::SignViolation
    };
    Ok(LemmaTrial { seed, family: family.to_string(), n, blocks, n0, first, second, verdict })
}

/// Seeded trials on monotone sequences whose windows start at or beyond `n0`.
pub fn run_monotone_trials(cfg: &TrialConfig) -> Result<Vec<LemmaTrial>> {
    let (n_lo, n_hi) = cfg.n_range;
    let (b_lo, b_hi) = cfg.block_range;
    if n_lo < 1 || n_lo > n_hi || b_lo < 1 || b_lo > b_hi {
        return Err(precondition("trial ranges must be non-empty with n >= 1 and L >= 1"));
    }
    trial_seeds(cfg.seed, cfg.trials)
        .into_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let family = Family::ALL[rng.gen_range(0..Family::ALL.len())];
            let n = rng.gen_range(n_lo..=n_hi);
            let blocks = rng.gen_range(b_lo..=b_hi);
            let kmax = ((2 * blocks + 1) * n).max(2);
            let seq = random_monotone_seq_capped(rng.gen(), kmax, family, n)?;
            evaluate_window(seed, family.as_str(), seq.values(), seq.n0(), n, blocks)
        })
        .collect()
}

/// Start from monotone sequences and add one spike at an index where
/// `sin(kπ/n) > 0` inside the first lemma's window. Each trial that drives
/// the first sum above tolerance is a witness that the monotonicity
/// hypothesis is needed.
pub fn run_spike_search(cfg: &TrialConfig) -> Result<Vec<LemmaTrial>> {
    let (n_lo, n_hi) = cfg.n_range;
    let (b_lo, b_hi) = cfg.block_range;
    if n_lo < 2 || n_lo > n_hi || b_lo < 1 || b_lo > b_hi {
        return Err(precondition("spike search needs n >= 2 and non-empty ranges"));
    }
    trial_seeds(cfg.seed ^ SPIKE_SEED_SALT, cfg.trials)
        .into_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let family = Family::ALL[rng.gen_range(0..Family::ALL.len())];
            let n = rng.gen_range(n_lo..=n_hi);
            let blocks = rng.gen_range(b_lo..=b_hi);
            let kmax = (2 * blocks + 1) * n;
            let seq = random_monotone_seq_capped(rng.gen(), kmax, family, n)?;
            let mut values = seq.values().to_vec();
            // k = 2nl + j with 1 ≤ j < n has sin(kπ/n) = sin(jπ/n) > 0
            let l = rng.gen_range(1..=blocks);
            let j = rng.gen_range(1..n);
            let k = 2 * n * l + j;
            let peak = values.iter().copied().fold(0.0, f64::max).max(1e-3);
            values[k - 1] += peak * rng.gen_range(1.0..100.0) * k as f64;
            let mut trial = evaluate_window(seed, "spike", &values, seq.n0(), n, blocks)?;
            if trial.verdict != TrialVerdict::GroupingMismatch {
                trial.verdict = if trial.first.direct > trial.first.tolerance() {
                    TrialVerdict::SpikeWitness
                } else {
                    TrialVerdict::SpikeNoWitness
                };
            }
            Ok(trial)
        })
        .collect()
}
