//! Acceptance checks at full experiment budgets. Prints one line per
//! criterion: PASS, FAIL, or SKIP when a dataset cannot be fetched.
//!
//! The process exits 0 regardless so the workspace test run stays usable;
//! set `ALC_ACCEPTANCE_STRICT=1` to exit 1 on any FAIL. `ALC_ACCEPTANCE_ONLY`
//! takes a comma-separated list of criterion numbers to run.

use std::path::Path;
use std::time::Instant;

use alc_core::cec2019::FunctionId;
use alc_core::data::{stratified_kfold, Dataset};
use alc_core::error::Error;
use alc_core::experiment::{
    ablation_dataset, crossval_dataset, data_dir, fetch_dataset, load_dataset, load_model, run_optbench, save_model,
    write_crossval, CrossvalResult, ExperimentConfig, OptbenchConfig, ReportFormat, RunOptions, SavedModel,
    TrainingMeta,
};
use alc_core::metrics::wilcoxon_signed_rank;
use alc_core::model::{init_params, objective, pre_softmax, AlcParams, ModelShape, Variant};
use alc_core::numkit::{Matrix, RngStream};
use alc_core::optim::{optimize, OptimizerConfig, OptimizerKind};

enum Verdict {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    verdict: Verdict,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        Outcome { verdict, detail }
    }
}

type Check = fn() -> alc_core::Result<Outcome>;
type Suite = fn() -> alc_core::Result<bool>;

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ALC_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let strict = std::env::var("ALC_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [(&str, Check); 8] = [
        ("iris 10-fold CV, 3 seeds", iris),
        ("wine 10-fold CV", wine),
        ("breast cancer 10-fold CV", breast_cancer),
        ("ablation ordering on breast cancer", ablation),
        ("optimizer benchmark", optbench),
        ("mnist desk scale", mnist),
        ("property suites", properties),
        ("voice gender 10-fold CV", voice_gender),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let t0 = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::check(false, format!("error: {e}")));
        let tag = match outcome.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => {
                failed += 1;
                "FAIL"
            }
            Verdict::Skip => "SKIP",
        };
        println!(
            "{tag} criterion {n}: {name}: {} [{:.1}s]",
            outcome.detail,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {failed} failing criteria");
    if strict && failed > 0 {
        std::process::exit(1);
    }
}

fn options() -> RunOptions {
    RunOptions {
        refit: false,
        ..RunOptions::default()
    }
}

fn crossval(id: &str, seed: u64) -> alc_core::Result<CrossvalResult> {
    let cfg = ExperimentConfig {
        seed,
        ..ExperimentConfig::for_dataset(id)?
    };
    let opts = options();
    let ds = load_dataset(&cfg, &opts.data_dir)?;
    crossval_dataset(&ds, &cfg, &opts)
}

fn iris() -> alc_core::Result<Outcome> {
    let mut acc = 0.0;
    let mut loss = 0.0;
    let mut slowest: f64 = 0.0;
    let mut per_seed = Vec::new();
    for seed in [42, 43, 44] {
        let r = crossval("iris", seed)?;
        acc += r.mean.accuracy / 3.0;
        loss += r.mean.loss / 3.0;
        slowest = slowest.max(r.total_time);
        per_seed.push(format!("{:.4}", r.mean.accuracy));
    }
    Ok(Outcome::check(
        acc >= 0.97 && loss <= 0.15 && slowest <= 120.0,
        format!(
            "accuracy {acc:.4} (>= 0.97; seeds {}), loss {loss:.4} (<= 0.15), slowest seed {slowest:.1}s (<= 120s)",
            per_seed.join(", ")
        ),
    ))
}

fn wine() -> alc_core::Result<Outcome> {
    let r = crossval("wine", 42)?;
    let gap = r.mean.overfitting_gap;
    Ok(Outcome::check(
        r.mean.accuracy >= 0.97 && gap.abs() <= 0.03,
        format!(
            "accuracy {:.4} (>= 0.97), gap {gap:+.4} (|gap| <= 0.03)",
            r.mean.accuracy
        ),
    ))
}

fn breast_cancer() -> alc_core::Result<Outcome> {
    let r = crossval("breast_cancer", 42)?;
    let m = &r.mean;
    Ok(Outcome::check(
        m.accuracy >= 0.95 && m.loss <= 0.12 && m.overfitting_gap <= 0.03,
        format!(
            "accuracy {:.4} (>= 0.95), loss {:.4} (<= 0.12), gap {:+.4} (<= 0.03), p = {}",
            m.accuracy, m.loss, m.overfitting_gap, r.lobules
        ),
    ))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn ablation() -> alc_core::Result<Outcome> {
    let base = ExperimentConfig::for_dataset("breast_cancer")?;
    let opts = options();
    let ds = load_dataset(&base, &opts.data_dir)?;
    let variants = [Variant::Full, Variant::Phase1Only, Variant::RandomCofactor];
    let mut acc: Vec<Vec<f64>> = vec![Vec::new(); variants.len()];
    for seed in 42..47 {
        let rows = ablation_dataset(&ds, &ExperimentConfig { seed, ..base.clone() }, &opts)?;
        for (i, v) in variants.iter().enumerate() {
            let row = rows.iter().find(|r| r.variant == *v).and_then(|r| r.report.as_ref());
            let report = row.ok_or_else(|| Error::Variant(format!("{v} produced no report")))?;
            acc[i].push(report.accuracy);
        }
    }
    let m: Vec<f64> = acc.into_iter().map(median).collect();
    Ok(Outcome::check(
        m[0] > m[1] && m[1] > m[2],
        format!(
            "median accuracy full {:.4} > phase1-only {:.4} > random-cofactor {:.4}",
            m[0], m[1], m[2]
        ),
    ))
}

fn optbench() -> alc_core::Result<Outcome> {
    let cfg = OptbenchConfig::default();
    let r = run_optbench(&cfg, None)?;
    let mut wins = 0;
    for f in FunctionId::ALL {
        let ifox = r.cell(f, OptimizerKind::Ifox).expect("cell").mean;
        let fox = r.cell(f, OptimizerKind::Fox).expect("cell").mean;
        if ifox <= fox {
            wins += 1;
        }
    }
    let history = r
        .cell(FunctionId::F4, OptimizerKind::Ifox)
        .expect("cell")
        .mean_history();
    let last = *history.last().expect("non-empty history");
    let reached = history
        .iter()
        .position(|&h| (h - last).abs() <= 0.1 * last.abs())
        .expect("final epoch always qualifies")
        + 1;
    let limit = 0.6 * cfg.epochs as f64;
    Ok(Outcome::check(
        wins >= 6 && reached as f64 <= limit,
        format!(
            "IFOX <= FOX on {wins}/10 functions (>= 6); F4 within 10% of final after {reached} of {} epochs (<= {limit})",
            cfg.epochs
        ),
    ))
}

/// Fetches `id` when absent; `None` means the download is unavailable.
fn ensure_fetched(id: &str) -> alc_core::Result<Option<String>> {
    match fetch_dataset(id, &data_dir()) {
        Ok(_) => Ok(None),
        Err(e @ Error::Download { .. }) => Ok(Some(e.to_string())),
        Err(e) => Err(e),
    }
}

fn mnist() -> alc_core::Result<Outcome> {
    if let Some(why) = ensure_fetched("mnist")? {
        return Ok(Outcome {
            verdict: Verdict::Skip,
            detail: format!("dataset unavailable ({why})"),
        });
    }
    let r = crossval("mnist", 42)?;
    Ok(Outcome::check(
        r.mean.accuracy >= 0.90,
        format!(
            "accuracy {:.4} (>= 0.90) on {} rows, LDA d = {:?}, gap {:+.4}",
            r.mean.accuracy, r.rows, r.config.preprocessing.lda_dims, r.mean.overfitting_gap
        ),
    ))
}

fn voice_gender() -> alc_core::Result<Outcome> {
    if let Some(why) = ensure_fetched("voice_gender")? {
        return Ok(Outcome {
            verdict: Verdict::Skip,
            detail: format!("dataset unavailable ({why})"),
        });
    }
    let r = crossval("voice_gender", 42)?;
    Ok(Outcome::check(
        r.mean.accuracy >= 0.95,
        format!("accuracy {:.4} (>= 0.95)", r.mean.accuracy),
    ))
}

fn properties() -> alc_core::Result<Outcome> {
    let suites: [(&str, Suite); 8] = [
        ("softmax rows", softmax_rows),
        ("objective at zero", objective_at_zero),
        ("phase loop oracle", phase_oracle),
        ("incumbent monotonicity", monotone_incumbents),
        ("fold histograms", fold_histograms),
        ("wilcoxon enumeration", wilcoxon_enumeration),
        ("save/load bitwise", save_load_bitwise),
        ("pipeline determinism", pipeline_determinism),
    ];
    let mut broken = Vec::new();
    for (name, suite) in suites {
        if !suite()? {
            broken.push(name);
        }
    }
    let detail = if broken.is_empty() {
        "all 8 suites hold".to_string()
    } else {
        format!("violated: {}", broken.join(", "))
    };
    Ok(Outcome::check(broken.is_empty(), detail))
}

fn softmax_rows() -> alc_core::Result<bool> {
    let mut rng = RngStream::new(1);
    for _ in 0..1000 {
        let rows = 1 + rng.below(20);
        let cols = 2 + rng.below(11);
        let m = rng.uniform_matrix(-50.0, 50.0, rows, cols)?.softmax_rows();
        if m.row_iter().any(|r| (r.iter().sum::<f64>() - 1.0).abs() > 1e-9) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn objective_at_zero() -> alc_core::Result<bool> {
    let mut rng = RngStream::new(2);
    for _ in 0..50 {
        let (f, o) = (1 + rng.below(10), 2 + rng.below(9));
        let shape = ModelShape::new(f, f + rng.below(20), o)?;
        let n = 5 + rng.below(30);
        let x = rng.uniform_matrix(-3.0, 3.0, n, f)?;
        let labels: Vec<usize> = (0..n).map(|_| rng.below(o)).collect();
        let y = alc_core::data::one_hot::<f64>(&labels, o)?;
        let theta = vec![0.0; shape.features * shape.lobules + shape.lobules * shape.classes];
        let value = objective(&theta, &x, &y, shape, Variant::Full)?;
        if (value - (o as f64).ln()).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Phase I then ReLU then Phase II written as plain loops.
fn loop_scores(x: &Matrix<f64>, params: &AlcParams<f64>) -> Vec<Vec<f64>> {
    let (c, v) = (params.cofactor(), params.vitamin());
    let (f, p, o) = (c.rows(), c.cols(), v.cols());
    let c_mean = c.as_slice().iter().sum::<f64>() / (f * p) as f64;
    let v_mean = v.as_slice().iter().sum::<f64>() / (p * o) as f64;
    let mut out = Vec::new();
    for i in 0..x.rows() {
        let mut hidden = vec![0.0; p];
        for (j, h) in hidden.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in 0..f {
                s += x.row(i)[k] * c.row(k)[j];
            }
            *h = (s / f as f64 + c_mean).max(0.0);
        }
        let mut scores = vec![0.0; o];
        for (m, score) in scores.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, h) in hidden.iter().enumerate() {
                s += h * v.row(j)[m];
            }
            *score = s / p as f64 + v_mean;
        }
        out.push(scores);
    }
    out
}

fn phase_oracle() -> alc_core::Result<bool> {
    let mut rng = RngStream::new(3);
    for _ in 0..100 {
        let f = 1 + rng.below(12);
        let shape = ModelShape::new(f, f + rng.below(30), 2 + rng.below(8))?;
        let params = init_params(shape, &mut rng)?;
        let n = 1 + rng.below(15);
        let x = rng.uniform_matrix(-2.0, 2.0, n, f)?;
        let fast = pre_softmax(&x, &params, Variant::Full)?;
        let slow = loop_scores(&x, &params);
        for (i, row) in slow.iter().enumerate() {
            if row.iter().zip(fast.row(i)).any(|(a, b)| (a - b).abs() > 1e-12) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn monotone_incumbents() -> alc_core::Result<bool> {
    let rastrigin = |x: &[f64]| -> f64 {
        x.iter()
            .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos() + 10.0)
            .sum()
    };
    for seed in 0..50 {
        for kind in [OptimizerKind::Ifox, OptimizerKind::Fox] {
            let cfg = OptimizerConfig::new(60, 8, 5, -5.12, 5.12, seed)?;
            let run = optimize(kind, rastrigin, &cfg, None)?;
            if run.history.windows(2).any(|w| w[1] > w[0]) || run.history.last() != Some(&run.best_f) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn fold_histograms() -> alc_core::Result<bool> {
    let mut rng = RngStream::new(5);
    for _ in 0..200 {
        let c = 2 + rng.below(6);
        let n = 20 + rng.below(300);
        let y: Vec<usize> = (0..n).map(|_| rng.below(c)).collect();
        let k = 2 + rng.below(9);
        let plan = stratified_kfold(&y, k, &mut rng)?;
        let h = plan.class_histograms(&y, c);
        for class in 0..c {
            let counts: Vec<usize> = h.iter().map(|fold| fold[class]).collect();
            if counts.iter().max().unwrap() - counts.iter().min().unwrap() > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two-sided exact p by enumerating all 2^n sign patterns of the average
/// ranks of |d|.
fn enumerate_p(d: &[f64]) -> f64 {
    let n = d.len();
    let mut rank = vec![0.0; n];
    for i in 0..n {
        let less = d.iter().filter(|v| v.abs() < d[i].abs()).count();
        let equal = d.iter().filter(|v| v.abs() == d[i].abs()).count();
        rank[i] = less as f64 + (equal as f64 + 1.0) / 2.0;
    }
    let total: f64 = rank.iter().sum();
    let w_plus: f64 = d.iter().zip(&rank).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let w = w_plus.min(total - w_plus);
    let mut at_most = 0u64;
    for mask in 0u32..(1 << n) {
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| rank[i]).sum();
        if s <= w + 1e-9 {
            at_most += 1;
        }
    }
    (2.0 * at_most as f64 / (1u64 << n) as f64).min(1.0)
}

fn wilcoxon_enumeration() -> alc_core::Result<bool> {
    let mut rng = RngStream::new(6);
    for _ in 0..100 {
        let n = 5 + rng.below(8);
        // coarse values so tied magnitudes occur
        let a: Vec<f64> = (0..n)
            .map(|_| (rng.uniform(-5.0, 5.0_f64) * 2.0).round() / 2.0)
            .collect();
        let b: Vec<f64> = (0..n)
            .map(|_| (rng.uniform(-5.0, 5.0_f64) * 2.0).round() / 2.0)
            .collect();
        let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
        if d.len() < 5 {
            continue;
        }
        let r = wilcoxon_signed_rank(&a, &b)?;
        if !r.exact || (r.p_two_sided - enumerate_p(&d)).abs() > 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn save_load_bitwise() -> alc_core::Result<bool> {
    let dir = tempfile::tempdir()?;
    let mut rng = RngStream::new(7);
    for i in 0..20 {
        let shape = ModelShape::new(1 + rng.below(10), 10 + rng.below(20), 2 + rng.below(5))?;
        let model = SavedModel {
            params: init_params(shape, &mut rng)?,
            variant: Variant::Full,
            meta: TrainingMeta {
                seed: i,
                epochs: 500,
                agents: 10,
                dataset_id: "random".into(),
                preprocessing: None,
                label_names: Vec::new(),
            },
        };
        let path = dir.path().join(format!("m{i}.json"));
        save_model(&model, &path)?;
        let back = load_model(&path)?;
        let bits = |m: &SavedModel| m.params.flatten().iter().map(|v| v.to_bits()).collect::<Vec<u64>>();
        if bits(&model) != bits(&back) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn report_bytes(ds: &Dataset, cfg: &ExperimentConfig, dir: &Path) -> alc_core::Result<Vec<Vec<u8>>> {
    let r = crossval_dataset(ds, cfg, &RunOptions::default())?;
    write_crossval(&r, dir, ReportFormat::Csv)?;
    ["folds.csv", "mean.csv", "history.csv", "model.json"]
        .iter()
        .map(|f| Ok(std::fs::read(dir.join(f))?))
        .collect()
}

fn pipeline_determinism() -> alc_core::Result<bool> {
    let cfg = ExperimentConfig::for_dataset("wine")?;
    let ds = load_dataset(&cfg, &data_dir())?;
    let (a, b) = (tempfile::tempdir()?, tempfile::tempdir()?);
    Ok(report_bytes(&ds, &cfg, a.path())? == report_bytes(&ds, &cfg, b.path())?)
}
