//! Command-line interface: `gen`, `mine`, `impute` and `bench` subcommands.
//!
//! Exit codes: 0 on success, 2 for usage errors (unknown flags, missing
//! files named by flags that fail to parse, out-of-range values), 1 for
//! runtime failures.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{
    render_report, report_csv, run_experiment, ExperimentConfig, Method, DEFAULT_TRIALS,
};
use crate::dataset::{
    encode_missing, gen_dependent, gen_random, load_csv, mcv_table, save_csv, Dataset,
    LoadOptions, DEFAULT_SENTINEL,
};
use crate::error::Error;
use crate::impute::{impute_v1, impute_with, write_provenance, Variant, VariantConfig};
use crate::rulemine::{filter_rules, mine_sorted_rules, read_rules, sort_rules, write_rules};

#[derive(Parser, Debug)]
#[command(
    name = "rulefill",
    version,
    about = "Categorical missing-value imputation with association rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// First attribute uniform, remaining attributes bijective functions of it.
    Dependent,
    /// Every cell independently uniform.
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Which synthetic generator to use.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of rows.
    #[arg(long, default_value_t = 2000)]
    cases: usize,
    /// Number of attributes.
    #[arg(long, default_value_t = 3)]
    attrs: usize,
    /// Distinct values per attribute.
    #[arg(long, default_value_t = 3)]
    values: usize,
    /// Generator seed.
    #[arg(long, env = "RULEFILL_SEED", default_value_t = 42)]
    seed: u64,
    /// Output CSV path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct MineArgs {
    /// Input CSV path.
    #[arg(short, long)]
    input: PathBuf,
    /// Minimum rule support in rows.
    #[arg(long, default_value_t = 1)]
    min_support: u64,
    /// Maximum antecedent length; defaults to attribute count − 1.
    #[arg(long)]
    max_len: Option<usize>,
    /// Sentinel token standing in for missing values.
    #[arg(long, default_value = DEFAULT_SENTINEL)]
    sentinel: String,
    /// Output rules path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct ImputeArgs {
    /// Input CSV path.
    #[arg(short, long)]
    input: PathBuf,
    /// Rules file in the canonical format; mined internally when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Algorithm variant (1, 2 or 3).
    #[arg(long, default_value_t = 3)]
    variant: u8,
    /// Minimum rule support for internal mining.
    #[arg(long, default_value_t = 1)]
    min_support: u64,
    /// Sentinel token standing in for missing values.
    #[arg(long, default_value = DEFAULT_SENTINEL)]
    sentinel: String,
    /// Output CSV path for the filled dataset.
    #[arg(short, long)]
    output: PathBuf,
    /// Optional provenance sidecar (row,attr,value,source per filled cell).
    #[arg(long)]
    provenance: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Which synthetic generator to benchmark on.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of rows.
    #[arg(long, default_value_t = 2000)]
    cases: usize,
    /// Number of attributes.
    #[arg(long, default_value_t = 3)]
    attrs: usize,
    /// Distinct values per attribute.
    #[arg(long, default_value_t = 3)]
    values: usize,
    /// Missing-value percentages, comma separated.
    #[arg(long, default_value = "1,2,5,10,20,40,70")]
    rates: String,
    /// Trials per grid cell.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Base seed: generates the dataset and derives every trial seed.
    #[arg(long, env = "RULEFILL_SEED", default_value_t = 42)]
    seed: u64,
    /// Methods to compare, comma separated (mcv, v1, v2, v3).
    #[arg(long, default_value = "v3,mcv")]
    methods: String,
    /// Minimum rule support for mining.
    #[arg(long, default_value_t = 1)]
    min_support: u64,
    /// Optional path for the machine-readable CSV report.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic dataset CSV.
    Gen(GenArgs),
    /// Mine association rules from a CSV into the canonical rule format.
    Mine(MineArgs),
    /// Fill missing values of a CSV.
    Impute(ImputeArgs),
    /// Run the benchmark grid and print the report table.
    Bench(BenchArgs),
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses and runs the command line, returning the process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Mine(args) => cmd_mine(args),
        Command::Impute(args) => cmd_impute(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn generate(kind: Kind, cases: usize, attrs: usize, values: usize, seed: u64) -> Result<Dataset, Failure> {
    let min_attrs = match kind {
        Kind::Dependent => 2,
        Kind::Random => 1,
    };
    if cases < 1 || attrs < min_attrs || values < 2 {
        return Err(usage(format!(
            "generator needs cases ≥ 1, attrs ≥ {min_attrs}, values ≥ 2 \
             (got {cases}, {attrs}, {values})"
        )));
    }
    let ds = match kind {
        Kind::Dependent => gen_dependent(cases, attrs, values, seed),
        Kind::Random => gen_random(cases, attrs, values, seed),
    }?;
    Ok(ds)
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let ds = generate(args.kind, args.cases, args.attrs, args.values, args.seed)?;
    save_csv(&ds, &args.output)?;
    Ok(())
}

fn load(input: &PathBuf, sentinel: &str) -> Result<Dataset, Failure> {
    let opts = LoadOptions {
        sentinel: sentinel.to_string(),
        ..LoadOptions::default()
    };
    Ok(load_csv(input, &opts)?)
}

fn cmd_mine(args: MineArgs) -> Result<(), Failure> {
    if args.min_support < 1 {
        return Err(usage("--min-support must be at least 1"));
    }
    let ds = load(&args.input, &args.sentinel)?;
    let coded = encode_missing(&ds);
    let max_len = args
        .max_len
        .unwrap_or_else(|| coded.n_attrs().saturating_sub(1));
    let rules = mine_sorted_rules(&coded, args.min_support, max_len)?;
    write_rules(&rules, coded.schema(), &args.output)?;
    Ok(())
}

fn cmd_impute(args: ImputeArgs) -> Result<(), Failure> {
    if args.min_support < 1 {
        return Err(usage("--min-support must be at least 1"));
    }
    let config = VariantConfig {
        variant: Variant::from_number(args.variant)
            .map_err(|_| usage("--variant must be 1, 2 or 3"))?,
        min_support_count: args.min_support,
    };
    let ds = load(&args.input, &args.sentinel)?;
    let coded = encode_missing(&ds);
    let rules = match &args.rules {
        Some(path) => {
            let parsed = read_rules(path, coded.schema(), coded.sentinel())?;
            let filtered = filter_rules(parsed, 1, coded.sentinel());
            sort_rules(filtered, coded.schema())
        }
        None => mine_sorted_rules(
            &coded,
            config.min_support_count,
            coded.n_attrs().saturating_sub(1),
        )?,
    };
    let outcome = match config.variant {
        Variant::V1 => impute_v1(&coded, &rules),
        _ => {
            let mcv = mcv_table(&coded)?;
            impute_with(&coded, &rules, &mcv, config.variant)
        }
    };
    save_csv(&outcome.filled, &args.output)?;
    if let Some(path) = &args.provenance {
        write_provenance(&outcome, path)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    if args.min_support < 1 {
        return Err(usage("--min-support must be at least 1"));
    }
    if args.trials < 1 {
        return Err(usage("--trials must be at least 1"));
    }
    let mut rates = Vec::new();
    for part in args.rates.split(',') {
        let pct: f64 = part
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad rate `{part}` in --rates")))?;
        if !(pct > 0.0 && pct <= 100.0) {
            return Err(usage(format!(
                "rate {pct} out of range: percentages must be in (0, 100]"
            )));
        }
        rates.push(pct / 100.0);
    }
    if rates.is_empty() {
        return Err(usage("--rates must name at least one percentage"));
    }
    let mut methods = Vec::new();
    for part in args.methods.split(',') {
        let method: Method = part.parse().map_err(|e| usage(format!("{e}")))?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    if methods.is_empty() {
        return Err(usage("--methods must name at least one method"));
    }
    let ds = generate(args.kind, args.cases, args.attrs, args.values, args.seed)?;
    let label = format!(
        "{:?} (cases={}, attrs={}, values={})",
        args.kind, args.cases, args.attrs, args.values
    )
    .to_lowercase();
    let config = ExperimentConfig {
        label,
        rates,
        methods,
        trials: args.trials,
        base_seed: args.seed,
        min_support_count: args.min_support,
    };
    let report = run_experiment(&ds, &config)?;
    print!("{}", render_report(&report));
    if let Some(path) = &args.output {
        std::fs::write(path, report_csv(&report)).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}
