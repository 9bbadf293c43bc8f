//! Benchmark harness: inject seeded missingness into complete data, impute
//! with each method, count incorrect estimates against the ground truth, and
//! average over trials into a method × rate grid.
//!
//! Trial seeds are derived as `derive_seed(base_seed, rate_index,
//! trial_index)` — the method is deliberately excluded, so every method at a
//! given (rate, trial) sees the identical missingness mask and the
//! comparison is paired. Rules are re-mined per trial from the injected
//! snapshot, never from the complete data.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{encode_missing, inject_missing, mcv_table, Dataset};
use crate::error::{Error, Result};
use crate::impute::{impute_mcv, impute_v1, impute_v2, impute_v3, ImputationOutcome};
use crate::ratio::Ratio;
use crate::rng::derive_seed;
use crate::rulemine::mine_sorted_rules;

/// Default grid of missing-value percentages.
pub const DEFAULT_RATES_PCT: &[f64] = &[1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 70.0];

/// Default number of trials averaged per grid cell.
pub const DEFAULT_TRIALS: usize = 5;

/// An imputation method under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Most common attribute value baseline.
    Mcv,
    /// Rules only; unmatched cells stay missing and score as incorrect.
    V1,
    /// Rules with most-common-value fallback.
    V2,
    /// Rules thresholded by the zero-attribute-rule confidence, then fallback.
    V3,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mcv => "mcv",
            Method::V1 => "v1",
            Method::V2 => "v2",
            Method::V3 => "v3",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mcv" => Ok(Method::Mcv),
            "v1" => Ok(Method::V1),
            "v2" => Ok(Method::V2),
            "v3" => Ok(Method::V3),
            other => Err(Error::InvalidArgument(format!(
                "unknown method `{other}` (expected one of mcv, v1, v2, v3)"
            ))),
        }
    }
}

/// Outcome of one seeded trial of one method at one missing rate.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub method: Method,
    /// Missing rate as a fraction of all cells.
    pub rate: f64,
    pub seed: u64,
    pub missing_cells: u64,
    /// Masked cells whose imputed value differs from the ground truth;
    /// unfilled cells count here too.
    pub incorrect: u64,
    pub unfilled: u64,
}

impl TrialResult {
    /// Exact error percentage `incorrect / missing_cells × 100`.
    pub fn error_pct(&self) -> Ratio {
        Ratio::new(self.incorrect * 100, self.missing_cells)
    }
}

/// Runs one trial: inject, sentinel-code, mine (rule methods), impute, score.
pub fn run_trial(
    complete: &Dataset,
    rate: f64,
    method: Method,
    min_support_count: u64,
    seed: u64,
) -> Result<TrialResult> {
    let (injected, mask) = inject_missing(complete, rate, seed)?;
    if mask.is_empty() {
        return Err(Error::DegenerateTrial { rate });
    }
    let coded = encode_missing(&injected);
    let outcome: ImputationOutcome = match method {
        Method::Mcv => impute_mcv(&coded)?,
        Method::V1 => {
            let rules = mine_sorted_rules(&coded, min_support_count, coded.n_attrs() - 1)?;
            impute_v1(&coded, &rules)
        }
        Method::V2 | Method::V3 => {
            let rules = mine_sorted_rules(&coded, min_support_count, coded.n_attrs() - 1)?;
            let mcv = mcv_table(&coded)?;
            match method {
                Method::V2 => impute_v2(&coded, &rules, &mcv),
                _ => impute_v3(&coded, &rules, &mcv),
            }
        }
    };
    debug_assert!(outcome
        .cells
        .iter()
        .map(|c| (c.row, c.attr))
        .eq(mask.iter()));
    let mut incorrect = 0u64;
    for (r, a) in mask.iter() {
        let truth = complete.cell(r, a).as_observed().expect("complete input");
        let got = outcome
            .filled
            .cell(r, a)
            .as_observed()
            .expect("coded output has no structurally missing cells");
        if got != truth {
            incorrect += 1;
        }
    }
    Ok(TrialResult {
        method,
        rate,
        seed,
        missing_cells: mask.len() as u64,
        incorrect,
        unfilled: outcome.unfilled_count() as u64,
    })
}

/// Accumulated trials for one (method, rate) grid cell. Every trial at a
/// given rate masks the same number of cells, so the mean error percentage is
/// the exact ratio `100 × Σ incorrect / (trials × missing_per_trial)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportCell {
    pub total_incorrect: u64,
    pub total_unfilled: u64,
    pub missing_per_trial: u64,
    pub trials: usize,
}

impl ReportCell {
    pub fn mean_error_pct(&self) -> Ratio {
        Ratio::new(
            self.total_incorrect * 100,
            self.missing_per_trial * self.trials as u64,
        )
    }
}

/// Method × rate grid of averaged error percentages.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub label: String,
    pub methods: Vec<Method>,
    /// Missing rates as fractions, column order.
    pub rates: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub min_support_count: u64,
    /// Indexed `[method][rate]`.
    pub cells: Vec<Vec<ReportCell>>,
}

impl Report {
    pub fn cell(&self, method_idx: usize, rate_idx: usize) -> &ReportCell {
        &self.cells[method_idx][rate_idx]
    }
}

/// Experiment parameters for [`run_experiment`].
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub label: String,
    /// Missing rates as fractions of all cells.
    pub rates: Vec<f64>,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub base_seed: u64,
    pub min_support_count: u64,
}

impl ExperimentConfig {
    pub fn new(label: impl Into<String>, base_seed: u64) -> Self {
        ExperimentConfig {
            label: label.into(),
            rates: DEFAULT_RATES_PCT.iter().map(|p| p / 100.0).collect(),
            methods: vec![Method::V3, Method::Mcv],
            trials: DEFAULT_TRIALS,
            base_seed,
            min_support_count: 1,
        }
    }
}

/// Runs `trials` seeded trials of every method at every rate. The trial seed
/// for (rate index `ri`, trial index `t`) is `derive_seed(base_seed, ri, t)`
/// regardless of method, so methods are compared on identical masks.
pub fn run_experiment(complete: &Dataset, config: &ExperimentConfig) -> Result<Report> {
    if config.trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.rates.is_empty() {
        return Err(Error::InvalidArgument("rates must be non-empty".into()));
    }
    let mut cells: Vec<Vec<ReportCell>> = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let mut row = Vec::with_capacity(config.rates.len());
        for (ri, &rate) in config.rates.iter().enumerate() {
            let mut cell = ReportCell {
                total_incorrect: 0,
                total_unfilled: 0,
                missing_per_trial: 0,
                trials: config.trials,
            };
            for t in 0..config.trials {
                let seed = derive_seed(config.base_seed, ri as u64, t as u64);
                let trial = run_trial(complete, rate, method, config.min_support_count, seed)?;
                cell.total_incorrect += trial.incorrect;
                cell.total_unfilled += trial.unfilled;
                cell.missing_per_trial = trial.missing_cells;
            }
            row.push(cell);
        }
        cells.push(row);
    }
    Ok(Report {
        label: config.label.clone(),
        methods: config.methods.clone(),
        rates: config.rates.clone(),
        trials: config.trials,
        base_seed: config.base_seed,
        min_support_count: config.min_support_count,
        cells,
    })
}

/// Formats a rate fraction as a percentage label without trailing zeros.
pub fn format_rate_pct(rate: f64) -> String {
    let pct = rate * 100.0;
    let mut s = format!("{pct:.4}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s
}

/// Renders the fixed-width table: methods as rows, rates as columns, one
/// decimal place per cell.
pub fn render_report(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Average % of incorrectly estimated missing values — {} (trials={}, seed={}, min support={})\n",
        report.label, report.trials, report.base_seed, report.min_support_count
    ));
    let name_width = report
        .methods
        .iter()
        .map(|m| m.to_string().len())
        .chain(std::iter::once("method".len()))
        .max()
        .unwrap_or(6);
    out.push_str(&format!("{:<name_width$}", "method"));
    for &rate in &report.rates {
        out.push_str(&format!("{:>8}", format!("{}%", format_rate_pct(rate))));
    }
    out.push('\n');
    for (mi, method) in report.methods.iter().enumerate() {
        out.push_str(&format!("{:<name_width$}", method.to_string()));
        for ri in 0..report.rates.len() {
            out.push_str(&format!(
                "{:>8.1}",
                report.cell(mi, ri).mean_error_pct().as_f64()
            ));
        }
        out.push('\n');
    }
    out
}

/// Machine-readable companion: `method,rate,mean_error_pct,trials,seed`.
pub fn report_csv(report: &Report) -> String {
    let mut out = String::from("method,rate,mean_error_pct,trials,seed\n");
    for (mi, method) in report.methods.iter().enumerate() {
        for (ri, &rate) in report.rates.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:.6},{},{}\n",
                method,
                format_rate_pct(rate),
                report.cell(mi, ri).mean_error_pct().as_f64(),
                report.trials,
                report.base_seed
            ));
        }
    }
    out
}
