//! Machine-readable tables behind every subcommand.
//!
//! Every table is built in a fixed row order so that identical inputs give
//! byte-identical output. Numbers are printed with 12 significant digits.

use std::collections::BTreeMap;

use serde_json::{Map, Number, Value};

use crate::config::{IndexRange, MRule, MeanSelection, OutputFormat};
use crate::corpus::{materialize, CorpusFunction};
use crate::error::{precondition, Error, Result};
use crate::lemma_lab::{chui_scan, detect_n0, LemmaTrial};
use crate::smoothness::{bound_report, theorem_rhs_interval, BoundReport, GridConfig};
use crate::spectral::{quadrature_grid, sample_grid, FourierSeries};
use crate::summators::{error_sq, residual_quadrature_error_sq_sampled, MeanKind, MeanSpec};

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(i) => i.to_string(),
            Field::Num(x) => fmt_num(*x),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(i) => Value::from(*i),
            Field::Num(x) => fmt_num(*x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Empty => Value::Null,
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        // seeds use the full u64 range
        Field::Text(v.to_string())
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

/// Header plus rows, renderable as CSV or as a JSON array of flat records.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 csv")
    }

    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (key, field) in self.header.iter().zip(row) {
                    obj.insert((*key).to_string(), field.json());
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(records)).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }
}

pub fn corpus_table(entries: &[CorpusFunction]) -> Table {
    let mut t = Table::new(&["id", "n0", "hypothesis_ok", "description"]);
    for e in entries {
        t.push(vec![e.id.as_str().into(), e.n0.into(), e.hypothesis_ok.into(), e.description.as_str().into()]);
    }
    t
}

/// `k,alpha,beta,rho,phi`; row 0 carries `a0` with blank amplitude/phase.
pub fn coefficient_table(s: &FourierSeries) -> Table {
    let mut t = Table::new(&["k", "alpha", "beta", "rho", "phi"]);
    t.push(vec![0usize.into(), s.a0().into(), 0usize.into(), Field::Empty, Field::Empty]);
    for h in s.harmonics() {
        t.push(vec![h.k().into(), h.alpha().into(), h.beta().into(), h.rho().into(), h.phi().into()]);
    }
    t
}

/// Mean specs for one `n`, in row order.
pub fn specs_for(selection: MeanSelection, n: usize, m_rule: MRule) -> Vec<MeanSpec> {
    let vp = || {
        let m = m_rule.select(n);
        MeanSpec::vallee_poussin(m, n).ok()
    };
    match selection {
        MeanSelection::Partial => vec![MeanSpec::partial(n)],
        MeanSelection::Fejer => MeanSpec::fejer(n).ok().into_iter().collect(),
        MeanSelection::ValleePoussin => vp().into_iter().collect(),
        MeanSelection::Both => MeanSpec::fejer(n).ok().into_iter().chain(vp()).collect(),
    }
}

fn kinds_in_order(selection: MeanSelection) -> Vec<MeanKind> {
    match selection {
        MeanSelection::Partial => vec![MeanKind::Partial],
        MeanSelection::Fejer => vec![MeanKind::Fejer],
        MeanSelection::ValleePoussin => vec![MeanKind::ValleePoussin],
        MeanSelection::Both => vec![MeanKind::Fejer, MeanKind::ValleePoussin],
    }
}

/// Pointwise values of the selected means on a `points`-node grid
/// `x_j = 2πj/P`.
pub fn approx_table(
    entry: &CorpusFunction,
    series: &FourierSeries,
    selection: MeanSelection,
    n_range: IndexRange,
    m_rule: MRule,
    points: usize,
) -> Result<Table> {
    if points < 1 {
        return Err(precondition("approx needs at least one grid point"));
    }
    let grid = sample_grid(points);
    let mut t = Table::new(&["function", "kind", "n", "m", "x", "f", "approx"]);
    for kind in kinds_in_order(selection) {
        for n in n_range.iter() {
            for spec in specs_for(selection, n, m_rule).into_iter().filter(|s| s.kind() == kind) {
                let p = spec.apply(series)?;
                for &x in &grid {
                    t.push(vec![
                        entry.id.as_str().into(),
                        kind.as_str().into(),
                        n.into(),
                        spec.m().into(),
                        x.into(),
                        entry.evaluate(x).into(),
                        p.evaluate(x).into(),
                    ]);
                }
            }
        }
    }
    Ok(t)
}

/// One row of the ledger-versus-quadrature error table, errors as norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub function: String,
    pub spec: MeanSpec,
    pub ledger_sq: f64,
    pub quadrature_sq: f64,
    pub truncation_budget_sq: f64,
}

impl ErrorRow {
    pub fn error_ledger(&self) -> f64 {
        self.ledger_sq.sqrt()
    }

    pub fn error_quadrature(&self) -> f64 {
        self.quadrature_sq.sqrt()
    }

    /// Slack of the norm: `sqrt(value + budget) − sqrt(value)`.
    pub fn truncation_budget(&self) -> f64 {
        (self.ledger_sq + self.truncation_budget_sq).sqrt() - self.ledger_sq.sqrt()
    }
}

/// Ledger and quadrature-oracle errors for every `(function, kind, n, m)`.
pub fn error_rows(
    entries: &[CorpusFunction],
    selection: MeanSelection,
    n_range: IndexRange,
    m_rule: MRule,
    max_k: usize,
    grid: usize,
) -> Result<Vec<ErrorRow>> {
    if n_range.end > max_k {
        return Err(precondition(format!(
            "n-range {n_range} exceeds the truncation degree K = {max_k}"
        )));
    }
    if n_range.start < 1 {
        return Err(precondition("error ledgers need n >= 1"));
    }
    let mut rows = Vec::new();
    for entry in entries {
        let series = materialize(entry, max_k)?;
        let f_values: Vec<f64> = quadrature_grid(grid).into_iter().map(|x| entry.evaluate(x)).collect();
        for kind in kinds_in_order(selection) {
            for n in n_range.iter() {
                for spec in specs_for(selection, n, m_rule).into_iter().filter(|s| s.kind() == kind) {
                    let ledger = error_sq(&series, &spec)?;
                    let p = spec.apply(&series)?;
                    let quadrature_sq = residual_quadrature_error_sq_sampled(&f_values, &p)?;
                    rows.push(ErrorRow {
                        function: entry.id.clone(),
                        spec,
                        ledger_sq: ledger.value,
                        quadrature_sq,
                        truncation_budget_sq: ledger.truncation_budget,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn error_table(rows: &[ErrorRow]) -> Table {
    let mut t = Table::new(&[
        "function",
        "kind",
        "n",
        "m",
        "error_ledger",
        "error_quadrature",
        "truncation_budget",
    ]);
    for r in rows {
        t.push(vec![
            r.function.as_str().into(),
            r.spec.kind().as_str().into(),
            r.spec.n().into(),
            r.spec.m().into(),
            r.error_ledger().into(),
            r.error_quadrature().into(),
            r.truncation_budget().into(),
        ]);
    }
    t
}

/// Bound reports for every `(function, kind, n, m)`. Constant functions are
/// rejected: the bound is stated for `f ≠ const`.
pub fn bound_reports(
    entries: &[CorpusFunction],
    selection: MeanSelection,
    n_range: IndexRange,
    m_rule: MRule,
    max_k: usize,
    grid: &GridConfig,
) -> Result<Vec<BoundReport>> {
    grid.validate()?;
    if n_range.start < 1 || n_range.end > max_k {
        return Err(precondition(format!(
            "n-range {n_range} must lie within 1..{max_k}"
        )));
    }
    let mut out = Vec::new();
    for entry in entries {
        let series = materialize(entry, max_k)?;
        if series.is_constant() {
            return Err(Error::InvalidInput(format!(
                "`{}` is constant; the bound is stated for f(x) != const",
                entry.id
            )));
        }
        let n0 = match entry.n0 {
            Some(n0) => n0,
            None => detect_n0(&series.rho_sq())?,
        };
        let mut rhs_by_n = BTreeMap::new();
        for n in n_range.iter() {
            rhs_by_n.insert(n, theorem_rhs_interval(&series, n, grid)?);
        }
        for kind in kinds_in_order(selection) {
            for n in n_range.iter() {
                for spec in specs_for(selection, n, m_rule).into_iter().filter(|s| s.kind() == kind) {
                    let report = bound_report(&series, &spec, &rhs_by_n[&n], grid)?;
                    out.push(report.for_function(&entry.id, Some(n0)));
                }
            }
        }
    }
    Ok(out)
}

pub fn bound_table(reports: &[BoundReport]) -> Table {
    let mut t = Table::new(&[
        "function", "kind", "n", "m", "n0", "lhs", "rhs", "ratio", "budget", "verdict",
    ]);
    for r in reports {
        t.push(vec![
            r.function.as_str().into(),
            r.kind.as_str().into(),
            r.n.into(),
            r.m.into(),
            r.n0.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
            r.lhs_truncation_budget.into(),
            r.verdict.as_str().into(),
        ]);
    }
    t
}

pub fn lemma_table(trials: &[LemmaTrial]) -> Table {
    let mut t = Table::new(&[
        "seed", "family", "n", "L", "n0", "direct1", "grouped1", "direct2", "grouped2", "verdict",
    ]);
    for tr in trials {
        t.push(vec![
            tr.seed.into(),
            tr.family.as_str().into(),
            tr.n.into(),
            tr.blocks.into(),
            tr.n0.into(),
            tr.first.direct.into(),
            tr.first.grouped.into(),
            tr.second.map(|s| s.direct).into(),
            tr.second.map(|s| s.grouped).into(),
            tr.verdict.as_str().into(),
        ]);
    }
    t
}

/// `n,max_violation` for each `n`, plus whether every row passed.
pub fn chui_table(range: IndexRange) -> Result<(Table, bool)> {
    let mut t = Table::new(&["n", "max_violation"]);
    let mut all_passed = true;
    for n in range.iter() {
        let scan = chui_scan(n)?;
        all_passed &= scan.passed();
        t.push(vec![n.into(), scan.max_violation.into()]);
    }
    Ok((t, all_passed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lookup;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_num(std::f64::consts::PI * 1e3), "3141.59265359");
        assert_eq!(fmt_num(1.5e-7), "1.5e-7");
        assert_eq!(fmt_num(2.5e15), "2.5e15");
        assert_eq!(fmt_num(9.9999999999999), "10");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn coefficient_csv_layout() {
        let s = materialize(&lookup("pure_cosine").unwrap(), 2).unwrap();
        let csv = coefficient_table(&s).to_csv();
        assert_eq!(csv, "k,alpha,beta,rho,phi\n0,0,0,,\n1,1,0,1,0\n2,0,0,0,0\n");
    }

    #[test]
    fn json_mirrors_rows() {
        let s = materialize(&lookup("pure_cosine").unwrap(), 1).unwrap();
        let v: Value = serde_json::from_str(&coefficient_table(&s).to_json()).unwrap();
        assert_eq!(v[0]["rho"], Value::Null);
        assert_eq!(v[1]["alpha"], Value::from(1.0));
    }

    #[test]
    fn error_rows_reject_overlong_range() {
        let e = vec![lookup("sawtooth").unwrap()];
        let r = error_rows(&e, MeanSelection::Fejer, IndexRange { start: 2, end: 40 }, MRule::Half, 32, 256);
        assert!(r.is_err());
    }

    #[test]
    fn bound_reports_reject_constants() {
        let e = vec![lookup("constant").unwrap()];
        let r = bound_reports(
            &e,
            MeanSelection::Fejer,
            IndexRange { start: 2, end: 3 },
            MRule::Half,
            16,
            &GridConfig::default(),
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn vp_rows_skip_invalid_fixed_m() {
        let specs = specs_for(MeanSelection::Both, 3, MRule::Fixed(3));
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].kind(), MeanKind::Fejer);
    }
}
