//! Run configuration for the command-line tools.
//!
//! Values come from three layers: built-in defaults, an optional flat
//! `key = value` config file, and command-line flags, each overriding the
//! previous one.

use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidInput(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// How to choose `m` for de la Vallée Poussin rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    Fixed(usize),
    /// `m = ⌊n/2⌋`.
    Half,
}

impl MRule {
    pub fn select(&self, n: usize) -> usize {
        match *self {
            MRule::Fixed(m) => m,
            MRule::Half => n / 2,
        }
    }
}

impl FromStr for MRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" | "floor-half" => Ok(MRule::Half),
            "fixed" => Err(Error::InvalidInput("m-rule `fixed` needs --m".into())),
            other => Err(Error::InvalidInput(format!("unknown m-rule `{other}` (half or fixed)"))),
        }
    }
}

/// Inclusive index range written `A..B` (or a single `A`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(precondition(format!("empty range {start}..{end}")));
        }
        Ok(IndexRange { start, end })
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for IndexRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad range `{s}` (expected A..B)"));
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                IndexRange::new(parse(a)?, parse(b)?)
            }
            None => {
                let a = parse(s)?;
                IndexRange::new(a, a)
            }
        }
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Which means a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanSelection {
    Partial,
    Fejer,
    ValleePoussin,
    /// Fejér and de la Vallée Poussin rows side by side.
    Both,
}

impl FromStr for MeanSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial" => Ok(MeanSelection::Partial),
            "fejer" => Ok(MeanSelection::Fejer),
            "vp" | "vallee_poussin" | "vallee-poussin" => Ok(MeanSelection::ValleePoussin),
            "both" => Ok(MeanSelection::Both),
            other => Err(Error::InvalidInput(format!(
                "unknown mean `{other}` (partial, fejer, vp or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub functions: Vec<String>,
    pub mean: MeanSelection,
    pub n_range: IndexRange,
    pub m_rule: MRule,
    pub max_k: usize,
    pub grid: usize,
    pub points: usize,
    pub t_points: usize,
    pub quad_points: usize,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            functions: vec!["sawtooth".into()],
            mean: MeanSelection::Fejer,
            n_range: IndexRange { start: 2, end: 16 },
            m_rule: MRule::Half,
            max_k: 4096,
            grid: 16384,
            points: 64,
            t_points: 513,
            quad_points: 512,
            trials: 1000,
            seed: 7,
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad value `{value}` for `{key}`")))
}

impl RunConfig {
    /// Set one key. Keys match the long flag names without dashes.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "function" => {
                self.functions = value.split(',').map(|s| s.trim().to_string()).collect();
            }
            "mean" => self.mean = value.parse()?,
            "n-range" => self.n_range = value.parse()?,
            "m" => self.m_rule = MRule::Fixed(parse_value(key, value)?),
            "m-rule" => {
                if value != "fixed" {
                    self.m_rule = value.parse()?;
                } else if !matches!(self.m_rule, MRule::Fixed(_)) {
                    return Err(Error::InvalidInput("m-rule `fixed` needs m".into()));
                }
            }
            "max-k" => self.max_k = parse_value(key, value)?,
            "grid" => self.grid = parse_value(key, value)?,
            "points" => self.points = parse_value(key, value)?,
            "t-points" => self.t_points = parse_value(key, value)?,
            "quad-points" => self.quad_points = parse_value(key, value)?,
            "trials" => self.trials = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(value.to_string()),
            other => return Err(Error::InvalidInput(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Apply a config file: `key = value` per line, `#` comments, blank lines
    /// ignored.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("config line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() || self.functions.iter().any(|f| f.is_empty()) {
            return Err(precondition("no function selected"));
        }
        if self.max_k < 1 {
            return Err(precondition("max-k must be >= 1"));
        }
        if self.trials < 1 {
            return Err(precondition("trials must be >= 1"));
        }
        Ok(())
    }

    /// Warnings that do not stop a run.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.grid < 4 * self.max_k {
            out.push(format!(
                "grid N = {} is below 4K = {}; sampled coefficients will be rejected",
                self.grid,
                4 * self.max_k
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("2..64".parse::<IndexRange>().unwrap(), IndexRange { start: 2, end: 64 });
        assert_eq!("2..=64".parse::<IndexRange>().unwrap(), IndexRange { start: 2, end: 64 });
        assert_eq!("5".parse::<IndexRange>().unwrap(), IndexRange { start: 5, end: 5 });
        assert!("9..3".parse::<IndexRange>().is_err());
        assert!("a..3".parse::<IndexRange>().is_err());
    }

    #[test]
    fn config_file_then_override() {
        let mut cfg = RunConfig::default();
        cfg.apply_file_text(
            "# sweep\nfunction = sawtooth, pure_cosine\nn-range = 2..8\nm = 3\n\nformat = json # trailing\n",
        )
        .unwrap();
        assert_eq!(cfg.functions, vec!["sawtooth", "pure_cosine"]);
        assert_eq!(cfg.m_rule, MRule::Fixed(3));
        assert_eq!(cfg.format, OutputFormat::Json);
        cfg.set("m-rule", "half").unwrap();
        assert_eq!(cfg.m_rule.select(9), 4);
        assert!(cfg.apply_file_text("nonsense").is_err());
        assert!(cfg.apply_file_text("colour = red").is_err());
    }

    #[test]
    fn warns_on_thin_grid() {
        let cfg = RunConfig { grid: 100, max_k: 64, ..RunConfig::default() };
        assert_eq!(cfg.warnings().len(), 1);
        assert!(RunConfig::default().warnings().is_empty());
    }
}
