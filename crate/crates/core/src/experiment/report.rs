//! Files written by each experiment. Numbers use shortest round-trip
//! formatting, so rerunning with the same configuration reproduces the
//! metric files byte for byte; wall-clock times go to separate files.
//!
//! crossval: `folds.csv` (fold, loss, accuracy, precision, recall, f1,
//! overfitting), `mean.csv` (same columns without fold), `timing.csv`,
//! `history.csv` (run_id, epoch, best_f), `model.json`.
//! ablation: `ablation.csv` (variant, status, metric columns, note).
//! optbench: `stats.csv`, `ranks.csv`, `history_{F}_{optimizer}.csv`.
//! With `--format json` the metric tables are written as `.json` instead.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::json;

use super::crossval::{AblationRow, CrossvalResult, GridPoint};
use super::optbench::OptbenchResult;
use super::persist::save_model;
use crate::error::{Error, Result};
use crate::metrics::MetricReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Config(format!("unknown format '{s}', expected csv or json"))),
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    written.push(path);
    Ok(())
}

fn metrics_json(r: &MetricReport) -> serde_json::Value {
    json!({
        "loss": r.loss,
        "accuracy": r.accuracy,
        "precision": r.precision,
        "recall": r.recall,
        "f1": r.f1,
        "overfitting": r.overfitting_gap,
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// Writes one crossval result into `dir` (created if needed).
pub fn write_crossval(result: &CrossvalResult, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Csv => {
            let mut folds = format!("fold,{}\n", MetricReport::csv_header(false));
            for f in &result.folds {
                let _ = writeln!(folds, "{},{}", f.fold, f.report.csv_row(false));
            }
            write(dir, "folds.csv", &folds, &mut written)?;
            let mean = format!("{}\n{}\n", MetricReport::csv_header(false), result.mean.csv_row(false));
            write(dir, "mean.csv", &mean, &mut written)?;
        }
        ReportFormat::Json => {
            let folds: Vec<_> = result
                .folds
                .iter()
                .map(|f| {
                    let mut v = metrics_json(&f.report);
                    v["fold"] = json!(f.fold);
                    v
                })
                .collect();
            write(dir, "folds.json", &pretty(&json!(folds)), &mut written)?;
            let mean = json!({
                "dataset": result.config.dataset_id,
                "lobules": result.lobules,
                "rows": result.rows,
                "mean": metrics_json(&result.mean),
            });
            write(dir, "mean.json", &pretty(&mean), &mut written)?;
        }
    }
    let mut timing = String::from("fold,time_sec\n");
    for f in &result.folds {
        let _ = writeln!(timing, "{},{}", f.fold, f.report.wall_time);
    }
    let _ = writeln!(timing, "total,{}", result.total_time);
    write(dir, "timing.csv", &timing, &mut written)?;

    let mut history = String::from("run_id,epoch,best_f\n");
    for f in &result.folds {
        for (e, v) in f.history.iter().enumerate() {
            let _ = writeln!(history, "{},{},{}", f.fold, e, v);
        }
    }
    write(dir, "history.csv", &history, &mut written)?;

    if let Some(model) = &result.model {
        let path = dir.join("model.json");
        save_model(model, &path)?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_ablation(rows: &[AblationRow], dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header = [
                "variant",
                "status",
                "loss",
                "accuracy",
                "precision",
                "recall",
                "f1",
                "overfitting",
                "note",
            ];
            w.write_record(header).map_err(|e| Error::Io(e.into()))?;
            for row in rows {
                let mut record = vec![row.variant.to_string()];
                match (&row.report, &row.skipped) {
                    (Some(r), _) => {
                        record.push("ok".into());
                        record.extend(r.csv_row(false).split(',').map(str::to_string));
                        record.push(String::new());
                    }
                    (None, why) => {
                        record.push("skipped".into());
                        record.extend(std::iter::repeat_n(String::new(), 6));
                        record.push(why.clone().unwrap_or_default());
                    }
                }
                w.write_record(&record).map_err(|e| Error::Io(e.into()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            write(dir, "ablation.csv", &String::from_utf8_lossy(&bytes), &mut written)?;
        }
        ReportFormat::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "variant": r.variant.as_str(),
                        "metrics": r.report.as_ref().map(metrics_json),
                        "skipped": r.skipped,
                    })
                })
                .collect();
            write(dir, "ablation.json", &pretty(&json!(v)), &mut written)?;
        }
    }
    Ok(written)
}

pub fn write_grid(points: &[GridPoint], best: usize, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = String::from("lobules,accuracy,loss,selected\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p.lobules, p.accuracy, p.loss, p.lobules == best);
    }
    let mut written = Vec::new();
    write(dir, "lobule_grid.csv", &out, &mut written)?;
    Ok(written)
}

pub fn write_optbench(result: &OptbenchResult, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let ranks = &result.ranks;
    match format {
        ReportFormat::Csv => {
            let mut stats = String::from("function,optimizer,mean,std,min,out_of_bounds_runs\n");
            for c in &result.cells {
                let _ = writeln!(
                    stats,
                    "{},{},{},{},{},{}",
                    c.function, c.optimizer, c.mean, c.std, c.min, c.out_of_bounds
                );
            }
            write(dir, "stats.csv", &stats, &mut written)?;

            let mut table = String::from("optimizer");
            for f in &ranks.functions {
                let _ = write!(table, ",{f}");
            }
            table.push_str(",total,average\n");
            for (oi, o) in ranks.optimizers.iter().enumerate() {
                let _ = write!(table, "{o}");
                for r in &ranks.ranks[oi] {
                    let _ = write!(table, ",{r}");
                }
                let _ = writeln!(table, ",{},{}", ranks.totals[oi], ranks.averages[oi]);
            }
            write(dir, "ranks.csv", &table, &mut written)?;
        }
        ReportFormat::Json => {
            let stats: Vec<_> = result
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "function": c.function.to_string(),
                        "optimizer": c.optimizer.as_str(),
                        "mean": c.mean,
                        "std": c.std,
                        "min": c.min,
                        "out_of_bounds_runs": c.out_of_bounds,
                    })
                })
                .collect();
            write(dir, "stats.json", &pretty(&json!(stats)), &mut written)?;
            let table: Vec<_> = ranks
                .optimizers
                .iter()
                .enumerate()
                .map(|(oi, o)| {
                    let per: serde_json::Map<String, serde_json::Value> = ranks
                        .functions
                        .iter()
                        .zip(&ranks.ranks[oi])
                        .map(|(f, r)| (f.to_string(), json!(r)))
                        .collect();
                    json!({"optimizer": o.as_str(), "ranks": per, "total": ranks.totals[oi], "average": ranks.averages[oi]})
                })
                .collect();
            write(dir, "ranks.json", &pretty(&json!(table)), &mut written)?;
        }
    }
    for c in &result.cells {
        let mut h = String::from("run_id,epoch,best_f\n");
        for (run, hist) in c.histories.iter().enumerate() {
            for (e, v) in hist.iter().enumerate() {
                let _ = writeln!(h, "{run},{e},{v}");
            }
        }
        write(
            dir,
            &format!("history_{}_{}.csv", c.function, c.optimizer),
            &h,
            &mut written,
        )?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{crossval_dataset, load_dataset, ExperimentConfig, RunOptions};

    #[test]
    fn crossval_files() {
        let cfg = ExperimentConfig {
            epochs: 10,
            k_folds: 2,
            ..ExperimentConfig::for_dataset("iris").unwrap()
        };
        let ds = load_dataset(&cfg, Path::new(".")).unwrap();
        let r = crossval_dataset(&ds, &cfg, &RunOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_crossval(&r, dir.path(), ReportFormat::Csv).unwrap();
        let folds = std::fs::read_to_string(dir.path().join("folds.csv")).unwrap();
        assert!(folds.starts_with("fold,loss,accuracy,precision,recall,f1,overfitting\n"));
        assert_eq!(folds.lines().count(), 3);
        let history = std::fs::read_to_string(dir.path().join("history.csv")).unwrap();
        assert_eq!(history.lines().count(), 1 + 2 * 10);
        assert!(dir.path().join("model.json").exists());

        let jdir = tempfile::tempdir().unwrap();
        write_crossval(&r, jdir.path(), ReportFormat::Json).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(jdir.path().join("mean.json")).unwrap()).unwrap();
        assert_eq!(v["mean"]["accuracy"].as_f64().unwrap(), r.mean.accuracy);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
