use std::path::Path;
use std::process::{Command, Output};

fn alc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alc"))
        .args(args)
        .current_dir(dir)
        .env("ALC_DATA_DIR", dir.join("data"))
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

const QUICK: [&str; 6] = ["--epochs", "20", "--folds", "3", "--jobs", "1"];

#[test]
fn crossval_writes_reports_and_model() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["crossval", "--dataset", "iris", "--seed", "7"];
    args.extend(QUICK);
    let out = alc(dir.path(), &args);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let report = dir.path().join("out/crossval-iris");
    for f in ["folds.csv", "mean.csv", "timing.csv", "history.csv", "model.json"] {
        assert!(report.join(f).exists(), "{f}");
    }
    let mean = std::fs::read_to_string(report.join("mean.csv")).unwrap();
    assert!(mean.starts_with("loss,accuracy,precision,recall,f1,overfitting\n"));

    let pred = alc(
        dir.path(),
        &[
            "predict",
            "--model",
            "out/crossval-iris/model.json",
            "--input",
            concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/iris.csv"),
            "--drop-column",
            "species",
        ],
    );
    assert!(pred.status.success(), "{}", text(&pred.stderr));
    let labels = text(&pred.stdout);
    assert_eq!(labels.lines().count(), 150);
    assert!(labels
        .lines()
        .all(|l| ["setosa", "versicolor", "virginica"].contains(&l)));
}

#[test]
fn identical_runs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let mut args = vec!["crossval", "--dataset", "wine", "--out-dir", sub];
        args.extend(QUICK);
        let out = alc(dir.path(), &args);
        assert!(out.status.success(), "{}", text(&out.stderr));
        ["folds.csv", "mean.csv", "history.csv", "model.json"]
            .map(|f| std::fs::read(dir.path().join(sub).join("crossval-wine").join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn config_file_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "dataset = breast_cancer\nepochs = 10\nk_folds = 2\nlobules = 30\n",
    )
    .unwrap();
    let out = alc(
        dir.path(),
        &["crossval", "--config", "run.cfg", "--format", "json", "--no-model"],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    let mean = std::fs::read_to_string(dir.path().join("out/crossval-breast_cancer/mean.json")).unwrap();
    assert!(mean.contains("\"lobules\": 30"), "{mean}");
    assert!(!dir.path().join("out/crossval-breast_cancer/model.json").exists());
}

#[test]
fn lobule_grid_picks_a_listed_value() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["crossval", "--dataset", "iris", "--lobule-grid", "4,8", "--no-model"];
    args.extend(QUICK);
    let out = alc(dir.path(), &args);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let grid = std::fs::read_to_string(dir.path().join("out/crossval-iris/lobule_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 3);
    assert_eq!(grid.lines().filter(|l| l.ends_with(",true")).count(), 1);
}

#[test]
fn ablate_reports_every_variant() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["ablate", "--dataset", "iris"];
    args.extend(QUICK);
    let out = alc(dir.path(), &args);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("out/ablate-iris/ablation.csv")).unwrap();
    assert_eq!(table.lines().count(), 6);
    assert!(table.contains("identity-vitamin,skipped"));
}

#[test]
fn optbench_single_optimizer_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let out = alc(
        dir.path(),
        &[
            "optbench",
            "--optimizers",
            "ifox",
            "--runs",
            "2",
            "--epochs",
            "10",
            "--jobs",
            "1",
        ],
    );
    assert!(out.status.success(), "{}", text(&out.stderr));
    let ranks = std::fs::read_to_string(dir.path().join("out/optbench/ranks.csv")).unwrap();
    assert_eq!(ranks.lines().nth(1).unwrap(), "ifox,1,1,1,1,1,1,1,1,1,1,10,1");
    assert!(dir.path().join("out/optbench/history_F7_ifox.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| alc(dir.path(), args).status.code();
    assert_eq!(code(&["crossval", "--dataset", "iris", "--folds", "1"]), Some(2));
    assert_eq!(
        code(&["crossval", "--dataset", "iris", "--set", "colour=blue"]),
        Some(2)
    );
    assert_eq!(code(&["crossval", "--dataset", "iris", "--variant", "nope"]), Some(2));
    assert_eq!(code(&["crossval", "--dataset", "cifar"]), Some(2));
    assert_eq!(code(&["crossval", "--dataset", "mnist"]), Some(3));
    assert_eq!(code(&["fetch", "nope"]), Some(2));
    std::fs::write(dir.path().join("bad.json"), "{\"format_version\": 9}").unwrap();
    std::fs::write(dir.path().join("x.csv"), "1,2,3,4\n").unwrap();
    assert_eq!(code(&["predict", "--model", "bad.json", "--input", "x.csv"]), Some(3));
}

#[test]
fn fetch_bundled_is_a_notice() {
    let dir = tempfile::tempdir().unwrap();
    let out = alc(dir.path(), &["fetch", "iris"]);
    assert!(out.status.success());
    assert!(text(&out.stderr).contains("bundled"));
}
