//! `alc`: cross-validation, ablation, optimizer benchmarking, dataset
//! fetching and prediction for the artificial liver classifier.
//!
//! Exit codes: 0 success, 2 configuration error, 3 ingest or integrity
//! error, 4 numeric failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alc_core::cec2019::FunctionId;
use alc_core::data::LabelColumn;
use alc_core::experiment::{
    crossval_dataset, fetch_dataset, load_dataset, lobule_search, run_ablation, run_optbench, write_ablation,
    write_crossval, write_grid, write_optbench, DatasetSpec, ExperimentConfig, OptbenchConfig, ReportFormat,
    RunOptions, DATASETS,
};
use alc_core::optim::OptimizerKind;
use alc_core::{Error, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alc", version, about = "Artificial liver classifier experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratified k-fold cross-validation on one dataset.
    Crossval(CrossvalArgs),
    /// Runs every model variant on the same folds.
    Ablate(ExperimentArgs),
    /// Compares optimizers on the CEC2019 benchmark functions.
    Optbench(OptbenchArgs),
    /// Downloads and verifies an external dataset.
    Fetch(FetchArgs),
    /// Scores a feature CSV with a saved model.
    Predict(PredictArgs),
}

#[derive(Args)]
struct Common {
    /// Directory for report files.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: ReportFormat,
    /// Worker threads; 1 gives the reference serial order.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Dataset id (iris, wine, breast_cancer, voice_gender, mnist).
    #[arg(long)]
    dataset: Option<String>,
    /// Plain-text key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    lobules: Option<usize>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    optimizer: Option<String>,
    #[arg(long)]
    lda_dims: Option<usize>,
    #[arg(long)]
    no_standardize: bool,
    /// Stratified subsample size.
    #[arg(long, conflicts_with = "full")]
    subsample: Option<usize>,
    /// Use every row, overriding the dataset's default subsample.
    #[arg(long)]
    full: bool,
    /// Extra `key=value` settings applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    settings: Vec<String>,
    /// Dataset cache directory (defaults to $ALC_DATA_DIR).
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CrossvalArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    /// Select the lobule count by mean CV accuracy over a grid; without a
    /// value the dataset's default grid is used.
    #[arg(long, num_args = 0..=1, value_delimiter = ',', value_name = "P,P,...")]
    lobule_grid: Option<Vec<usize>>,
    /// Skip training the final model on all rows.
    #[arg(long)]
    no_model: bool,
}

#[derive(Args)]
struct OptbenchArgs {
    /// Functions such as F1,F4 (default all).
    #[arg(long, value_delimiter = ',', value_parser = parse_function)]
    functions: Vec<FunctionId>,
    /// Optimizers (default ifox,fox).
    #[arg(long, value_delimiter = ',', value_parser = parse_optimizer)]
    optimizers: Vec<OptimizerKind>,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 10)]
    agents: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Directory with shift_data_{n}.txt and M_{n}_D10.txt; identity
    /// transforms when omitted.
    #[arg(long)]
    transform_dir: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct FetchArgs {
    dataset: String,
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Model file written by crossval.
    #[arg(long)]
    model: PathBuf,
    /// CSV of raw feature rows, optionally with a header.
    #[arg(long)]
    input: PathBuf,
    /// Column to ignore: header name, 0-based index or `last`.
    #[arg(long)]
    drop_column: Option<String>,
    /// Write labels here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_function(s: &str) -> std::result::Result<FunctionId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_optimizer(s: &str) -> std::result::Result<OptimizerKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Crossval(a) => crossval(a),
        Command::Ablate(a) => ablate(a),
        Command::Optbench(a) => optbench(a),
        Command::Fetch(a) => fetch(a),
        Command::Predict(a) => predict(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match (&self.config, &self.dataset) {
            (Some(path), dataset) => {
                let cfg = ExperimentConfig::from_file(path)?;
                if let Some(d) = dataset {
                    if DatasetSpec::lookup(d)?.id != cfg.dataset_id {
                        return Err(Error::Config(format!(
                            "--dataset {d} disagrees with dataset {} in {}",
                            cfg.dataset_id,
                            path.display()
                        )));
                    }
                }
                cfg
            }
            (None, Some(d)) => ExperimentConfig::for_dataset(d).map_err(|e| Error::Config(e.to_string()))?,
            (None, None) => return Err(Error::Config("give --dataset or --config".into())),
        };
        let mut overrides: Vec<(&str, String)> = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                overrides.push((k, v));
            }
        };
        push("seed", self.seed.map(|v| v.to_string()));
        push("epochs", self.epochs.map(|v| v.to_string()));
        push("agents", self.agents.map(|v| v.to_string()));
        push("k_folds", self.folds.map(|v| v.to_string()));
        push("lobules", self.lobules.map(|v| v.to_string()));
        push("variant", self.variant.clone());
        push("optimizer", self.optimizer.clone());
        push("lda_dims", self.lda_dims.map(|v| v.to_string()));
        push("subsample", self.subsample.map(|v| v.to_string()));
        if self.no_standardize {
            overrides.push(("standardize", "false".into()));
        }
        if self.full {
            overrides.push(("subsample", "none".into()));
        }
        for (k, v) in overrides {
            cfg.set(k, &v).map_err(as_config)?;
        }
        for kv in &self.settings {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects key=value, got '{kv}'")))?;
            cfg.set(k.trim(), v.trim()).map_err(as_config)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn options(&self) -> RunOptions {
        let mut opts = RunOptions {
            jobs: self.common.jobs,
            ..RunOptions::default()
        };
        if let Some(d) = &self.data_dir {
            opts.data_dir = d.clone();
        }
        opts
    }
}

/// Bad values given on the command line are configuration errors.
fn as_config(e: Error) -> Error {
    match e {
        Error::Param(m) => Error::Config(m),
        other => other,
    }
}

fn print_written(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn crossval(args: CrossvalArgs) -> Result<()> {
    let mut cfg = args.exp.config()?;
    let mut opts = args.exp.options();
    opts.refit = !args.no_model;
    let ds = load_dataset(&cfg, &opts.data_dir)?;
    let out = args.exp.common.out_dir.join(format!("crossval-{}", cfg.dataset_id));

    if let Some(grid) = &args.lobule_grid {
        let grid = if grid.is_empty() {
            DatasetSpec::lookup(&cfg.dataset_id)?.lobule_grid.to_vec()
        } else {
            grid.clone()
        };
        let (points, best) = lobule_search(&ds, &cfg, &grid, &opts)?;
        for p in &points {
            println!("p={:<6} accuracy={:.4} loss={:.4}", p.lobules, p.accuracy, p.loss);
        }
        println!("selected p={best}");
        print_written(&write_grid(&points, best, &out)?);
        cfg.lobules = Some(best);
    }

    let result = crossval_dataset(&ds, &cfg, &opts)?;
    for n in &result.notices {
        eprintln!("note: {n}");
    }
    for f in &result.folds {
        println!(
            "fold {:>2}: accuracy={:.4} loss={:.4} gap={:+.4}",
            f.fold, f.report.accuracy, f.report.loss, f.report.overfitting_gap
        );
    }
    let m = &result.mean;
    println!(
        "{} ({} rows, p={}): mean accuracy={:.4} loss={:.4} precision={:.4} recall={:.4} f1={:.4} gap={:+.4} in {:.1}s",
        cfg.dataset_id,
        result.rows,
        result.lobules,
        m.accuracy,
        m.loss,
        m.precision,
        m.recall,
        m.f1,
        m.overfitting_gap,
        result.total_time
    );
    print_written(&write_crossval(&result, &out, args.exp.common.format)?);
    Ok(())
}

fn ablate(args: ExperimentArgs) -> Result<()> {
    let cfg = args.config()?;
    let opts = RunOptions {
        refit: false,
        ..args.options()
    };
    let rows = run_ablation(&cfg, &opts)?;
    for r in &rows {
        match (&r.report, &r.skipped) {
            (Some(m), _) => println!(
                "{:<17} accuracy={:.4} loss={:.4} gap={:+.4}",
                r.variant.as_str(),
                m.accuracy,
                m.loss,
                m.overfitting_gap
            ),
            (None, why) => println!("{:<17} skipped: {}", r.variant.as_str(), why.as_deref().unwrap_or("")),
        }
    }
    let out = args.common.out_dir.join(format!("ablate-{}", cfg.dataset_id));
    print_written(&write_ablation(&rows, &out, args.common.format)?);
    Ok(())
}

fn optbench(args: OptbenchArgs) -> Result<()> {
    let defaults = OptbenchConfig::default();
    let cfg = OptbenchConfig {
        functions: if args.functions.is_empty() {
            defaults.functions
        } else {
            args.functions
        },
        optimizers: if args.optimizers.is_empty() {
            defaults.optimizers
        } else {
            args.optimizers
        },
        runs: args.runs,
        epochs: args.epochs,
        agents: args.agents,
        seed: args.seed,
        transform_dir: args.transform_dir,
    };
    if cfg.runs == 0 {
        return Err(Error::Config("--runs must be at least 1".into()));
    }
    let result = run_optbench(&cfg, args.common.jobs)?;
    for c in &result.cells {
        println!(
            "{:<4} {:<6} mean={:.6e} std={:.3e} min={:.6e}",
            c.function.to_string(),
            c.optimizer.as_str(),
            c.mean,
            c.std,
            c.min
        );
    }
    for (oi, o) in result.ranks.optimizers.iter().enumerate() {
        println!(
            "{:<6} total rank={} average rank={:.2}",
            o.as_str(),
            result.ranks.totals[oi],
            result.ranks.averages[oi]
        );
    }
    print_written(&write_optbench(
        &result,
        &args.common.out_dir.join("optbench"),
        args.common.format,
    )?);
    Ok(())
}

fn fetch(args: FetchArgs) -> Result<()> {
    let dir = args.data_dir.unwrap_or_else(alc_core::experiment::data_dir);
    let known = DatasetSpec::lookup(&args.dataset).map_err(|_| {
        let ids: Vec<&str> = DATASETS.iter().map(|d| d.id).collect();
        Error::Param(format!(
            "unknown dataset '{}', expected one of {}",
            args.dataset,
            ids.join(", ")
        ))
    })?;
    let report = fetch_dataset(known.id, &dir)?;
    for n in &report.notices {
        eprintln!("note: {n}");
    }
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn predict(args: PredictArgs) -> Result<()> {
    let model = alc_core::experiment::load_model(&args.model)?;
    let drop = args.drop_column.as_deref().map(|c| match (c, c.parse::<usize>()) {
        ("last", _) => LabelColumn::Last,
        (_, Ok(i)) => LabelColumn::Index(i),
        _ => LabelColumn::Name(c.to_string()),
    });
    let x = alc_core::data::load_features(&args.input, drop.as_ref())?;
    let labels: String = model
        .predict(&x)?
        .into_iter()
        .map(|c| model.label_name(c) + "\n")
        .collect();
    match &args.output {
        Some(path) => write_file(path, &labels),
        None => {
            print!("{labels}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}
