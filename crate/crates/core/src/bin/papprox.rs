use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use periodic_approx::config::{IndexRange, RunConfig};
use periodic_approx::corpus::{corpus_entries, lookup, materialize, CorpusFunction};
use periodic_approx::lemma_lab::{run_monotone_trials, run_spike_search, TrialConfig, TrialVerdict};
use periodic_approx::report::{
    approx_table, bound_reports, bound_table, chui_table, coefficient_table, corpus_table, error_rows,
    error_table, lemma_table, Table,
};
use periodic_approx::smoothness::GridConfig;
use periodic_approx::spectral::{coefficients_from_samples, sample_grid};
use periodic_approx::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_BREACH: u8 = 3;

#[derive(Parser)]
#[command(name = "papprox", version, about = "Fejér / de la Vallée Poussin approximation lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in test functions.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Fourier coefficient table of one function.
    Coeffs {
        #[command(flatten)]
        common: Common,
        /// Recover coefficients from `--grid` samples instead of closed forms.
        #[arg(long)]
        sampled: bool,
    },
    /// Values of the selected means on a uniform grid.
    Approx {
        #[command(flatten)]
        common: Common,
    },
    /// Squared-error ledgers against the quadrature oracle.
    ErrorTable {
        #[command(flatten)]
        common: Common,
    },
    /// Approximation error against the smoothness bound (reports, never fails on a violated bound).
    BoundCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Seeded trials of the two sign lemmas.
    LemmaCheck {
        #[command(flatten)]
        common: Common,
        /// Run the adversarial search instead (`spike`).
        #[arg(long)]
        adversarial: Option<String>,
        /// Fix n for every trial.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Scan (k/n)² ≤ sin²(kπ/(2n)) over an n-range.
    ChuiCheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// `id,n0,hypothesis_ok,description` for every entry.
    List {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Default)]
struct Common {
    /// Function id(s), comma separated, or `all`.
    #[arg(long)]
    function: Option<String>,
    /// partial | fejer | vp | both
    #[arg(long)]
    mean: Option<String>,
    /// Inclusive range `A..B`.
    #[arg(long = "n-range")]
    n_range: Option<String>,
    /// Fixed m for de la Vallée Poussin means.
    #[arg(long)]
    m: Option<usize>,
    /// `half` (m = floor(n/2)) or `fixed` (use --m).
    #[arg(long = "m-rule")]
    m_rule: Option<String>,
    #[arg(long = "max-k")]
    max_k: Option<usize>,
    /// Quadrature grid size N (also the sample count for --sampled).
    #[arg(long)]
    grid: Option<usize>,
    /// Points per mean for `approx`.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long = "t-points")]
    t_points: Option<usize>,
    #[arg(long = "quad-points")]
    quad_points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    /// Flat `key = value` config file; flags take precedence.
    #[arg(long)]
    config: Option<String>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read config `{path}`: {e}")))?;
            cfg.apply_file_text(&text)?;
        }
        let flags: [(&str, Option<String>); 13] = [
            ("function", self.function.clone()),
            ("mean", self.mean.clone()),
            ("n-range", self.n_range.clone()),
            ("m", self.m.map(|v| v.to_string())),
            ("m-rule", self.m_rule.clone()),
            ("max-k", self.max_k.map(|v| v.to_string())),
            ("grid", self.grid.map(|v| v.to_string())),
            ("points", self.points.map(|v| v.to_string())),
            ("t-points", self.t_points.map(|v| v.to_string())),
            ("quad-points", self.quad_points.map(|v| v.to_string())),
            ("trials", self.trials.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("format", self.format.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.set("out", out)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn entries(cfg: &RunConfig) -> Result<Vec<CorpusFunction>, Error> {
    if cfg.functions.iter().any(|f| f == "all") {
        return Ok(corpus_entries());
    }
    cfg.functions.iter().map(|id| lookup(id)).collect()
}

fn single_entry(cfg: &RunConfig) -> Result<CorpusFunction, Error> {
    match entries(cfg)?.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(Error::InvalidInput("this subcommand takes exactly one --function".into())),
    }
}

fn grid_config(cfg: &RunConfig) -> GridConfig {
    GridConfig { quad_points: cfg.quad_points, t_points: cfg.t_points }
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<(), Error> {
    let text = table.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write `{path}`: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidInput(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Corpus { action: CorpusAction::List { common } } => {
            let cfg = common.resolve()?;
            emit(&cfg, &corpus_table(&corpus_entries()))?;
        }
        Command::Coeffs { common, sampled } => {
            let cfg = common.resolve()?;
            let entry = single_entry(&cfg)?;
            let series = if sampled {
                for w in cfg.warnings() {
                    eprintln!("warning: {w}");
                }
                let samples: Vec<f64> = sample_grid(cfg.grid).into_iter().map(|x| entry.evaluate(x)).collect();
                coefficients_from_samples(&samples, cfg.max_k)?
            } else {
                materialize(&entry, cfg.max_k)?
            };
            emit(&cfg, &coefficient_table(&series))?;
        }
        Command::Approx { common } => {
            let cfg = common.resolve()?;
            let entry = single_entry(&cfg)?;
            let series = materialize(&entry, cfg.max_k)?;
            let table = approx_table(&entry, &series, cfg.mean, cfg.n_range, cfg.m_rule, cfg.points)?;
            emit(&cfg, &table)?;
        }
        Command::ErrorTable { common } => {
            let cfg = common.resolve()?;
            let rows = error_rows(&entries(&cfg)?, cfg.mean, cfg.n_range, cfg.m_rule, cfg.max_k, cfg.grid)?;
            emit(&cfg, &error_table(&rows))?;
        }
        Command::BoundCheck { common } => {
            let cfg = common.resolve()?;
            let reports = bound_reports(
                &entries(&cfg)?,
                cfg.mean,
                cfg.n_range,
                cfg.m_rule,
                cfg.max_k,
                &grid_config(&cfg),
            )?;
            emit(&cfg, &bound_table(&reports))?;
        }
        Command::LemmaCheck { common, adversarial, n } => {
            let cfg = common.resolve()?;
            let mut trial_cfg = TrialConfig { seed: cfg.seed, trials: cfg.trials, ..TrialConfig::default() };
            if let Some(n) = n {
                trial_cfg.n_range = (n, n);
            }
            match adversarial.as_deref() {
                None => {
                    let trials = run_monotone_trials(&trial_cfg)?;
                    emit(&cfg, &lemma_table(&trials))?;
                    let bad = trials
                        .iter()
                        .filter(|t| {
                            matches!(t.verdict, TrialVerdict::SignViolation | TrialVerdict::GroupingMismatch)
                        })
                        .count();
                    if bad > 0 {
                        eprintln!("{bad} trial(s) breached a sign lemma or its regrouping");
                        return Ok(EXIT_BREACH);
                    }
                }
                Some("spike") => {
                    let trials = run_spike_search(&trial_cfg)?;
                    emit(&cfg, &lemma_table(&trials))?;
                    if trials.iter().any(|t| t.verdict == TrialVerdict::GroupingMismatch) {
                        eprintln!("regrouping mismatch in adversarial trials");
                        return Ok(EXIT_BREACH);
                    }
                    let witnesses = trials.iter().filter(|t| t.verdict == TrialVerdict::SpikeWitness).count();
                    eprintln!("{witnesses} of {} spike trials break the first sign lemma", trials.len());
                }
                Some(other) => {
                    return Err(Error::InvalidInput(format!("unknown adversarial mode `{other}` (spike)")));
                }
            }
        }
        Command::ChuiCheck { common } => {
            let cfg = common.resolve()?;
            let range: IndexRange = cfg.n_range;
            let (table, all_passed) = chui_table(range)?;
            emit(&cfg, &table)?;
            if !all_passed {
                eprintln!("chui check failed for at least one n");
                return Ok(EXIT_BREACH);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::InvariantBreach(_) => EXIT_BREACH,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}
