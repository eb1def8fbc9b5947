//! Approximation of 2π-periodic functions by Fejér and de la Vallée Poussin
//! means.
//!
//! Everything works in coefficient space: a function is a [`FourierSeries`]
//! (dense amplitude-phase ledger plus a certified bound on the discarded tail
//! energy), summation operators are multipliers on that ledger, and squared
//! L2 errors are exact weighted sums of squared amplitudes. Pointwise
//! quadrature routines are kept alongside as independent oracles.
//!
//! The norm convention throughout is `‖f‖² = (1/π) ∫_{-π}^{π} f(x)² dx`, so
//! that Parseval reads `‖f‖² = a0²/2 + Σ ρ_k²`.

pub mod config;
pub mod corpus;
pub mod error;
pub mod lemma_lab;
pub mod report;
pub mod smoothness;
pub mod spectral;
pub mod summators;

pub use corpus::{corpus_entries, lookup, materialize, CorpusFunction};
pub use error::{Error, Result};
pub use lemma_lab::{chui_check, detect_n0, random_monotone_seq, sign_sum_1, sign_sum_2, MonotoneSeq};
pub use smoothness::{check_bound, BoundReport, GridConfig, Verdict};
pub use spectral::{FourierSeries, Harmonic, Tail, TrigPoly};
pub use summators::{Ledger, MeanKind, MeanSpec};
