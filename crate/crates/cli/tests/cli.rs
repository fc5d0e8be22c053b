//! End-to-end checks of the `hexplore` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hexplore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexplore"))
        .args(args)
        .env_remove("HEXPLORE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SMALL_RUN: &str = "schema_version = 1\nstrategy = \"WHRNN-SRC\"\nseed = 11\n\
height = 16\nwidth = 16\nn_drones = 5\n";

#[test]
fn valid_run_writes_one_record() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SMALL_RUN);
    let out = tmp.path().join("out");
    let o = hexplore(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_path(out.join("metrics.csv")).unwrap();
    let header = rd.headers().unwrap().clone();
    let rows: Vec<_> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(&rows[0][col("completed")], "true");
    assert_eq!(&rows[0][col("seed")], "11");
    assert!(out.join("config.toml").exists());
    assert!(!out.join("trace.jsonl").exists());
}

#[test]
fn indivisible_subarea_exits_with_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "bad.toml",
        "schema_version = 1\nstrategy = \"QRNN\"\nseed = 1\nsubarea_height = 7\nsubarea_width = 7\n",
    );
    let o = hexplore(&[
        "run",
        "--config",
        &cfg,
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("subarea"), "{err}");
}

#[test]
fn missing_config_exits_with_two() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("nope.toml");
    let o = hexplore(&["run", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn same_config_twice_gives_identical_files() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SMALL_RUN);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let o = hexplore(&[
            "run",
            "--config",
            &cfg,
            "--out",
            dir.to_str().unwrap(),
            "--trace",
        ]);
        assert!(o.status.success());
    }
    for f in ["metrics.csv", "config.toml", "trace.jsonl"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn seed_override_and_echoed_config_reproduce_the_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SMALL_RUN);
    let first = tmp.path().join("first");
    let o = hexplore(&[
        "run",
        "--config",
        &cfg,
        "--out",
        first.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert!(o.status.success());
    let echoed = first.join("config.toml");
    assert!(fs::read_to_string(&echoed).unwrap().contains("seed = 99"));
    let second = tmp.path().join("second");
    let o = hexplore(&[
        "run",
        "--config",
        echoed.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read(first.join("metrics.csv")).unwrap(),
        fs::read(second.join("metrics.csv")).unwrap()
    );
}

#[test]
fn trace_renders_back() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SMALL_RUN);
    let out = tmp.path().join("out");
    let o = hexplore(&[
        "run",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--trace",
        "--render-every",
        "5",
    ]);
    assert!(o.status.success());
    let live = String::from_utf8(o.stdout).unwrap();
    let o = hexplore(&[
        "render-trace",
        "--trace",
        out.join("trace.jsonl").to_str().unwrap(),
        "--render-every",
        "5",
    ]);
    assert!(o.status.success());
    let replayed = String::from_utf8(o.stdout).unwrap();
    // the live run prints the same frames, plus the summary line
    let tick5 = replayed.split("tick 10").next().unwrap();
    assert!(tick5.starts_with("tick 5\n"), "{tick5}");
    assert!(live.starts_with(tick5), "{live}");
}

const SWEEP: &str = "schema_version = 1\ngrid_sizes = [[12, 12], [16, 16]]\n\
subarea_sizes = [[4, 4], [3, 3]]\ndrone_counts = [2, 4]\n\
strategies = [\"PSO\", \"QRNN-SRC\", \"WHRNN-SRC\"]\nseeds_per_cell = 2\nbase_seed = 5\n";

fn sweep(dir: &Path, spec: &str, parallelism: &str) -> Output {
    hexplore(&[
        "sweep",
        "--config",
        spec,
        "--out",
        dir.to_str().unwrap(),
        "--parallelism",
        parallelism,
    ])
}

#[test]
fn sweep_is_identical_at_any_parallelism() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "sweep.toml", SWEEP);
    let one = tmp.path().join("one");
    let eight = tmp.path().join("eight");
    assert!(sweep(&one, &spec, "1").status.success());
    assert!(sweep(&eight, &spec, "8").status.success());
    for f in ["results.csv", "summary.csv", "skipped.csv"] {
        assert_eq!(
            fs::read(one.join(f)).unwrap(),
            fs::read(eight.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn sweep_rows_are_valid_combinations_times_seeds() {
    let tmp = TempDir::new().unwrap();
    let spec = write(tmp.path(), "sweep.toml", SWEEP);
    let out = tmp.path().join("out");
    let o = sweep(&out, &spec, "2");
    assert!(o.status.success());
    // 3x3 subareas do not divide 16x16: 1 grid x 2 counts x 3 strategies skipped
    let skipped = csv::Reader::from_path(out.join("skipped.csv"))
        .unwrap()
        .records()
        .count();
    assert_eq!(skipped, 6);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.matches("skipped").count(), 6, "{err}");
    let rows = csv::Reader::from_path(out.join("results.csv"))
        .unwrap()
        .records()
        .count();
    assert_eq!(rows, (2 * 2 * 2 * 3 - 6) * 2);
    let summary = csv::Reader::from_path(out.join("summary.csv"))
        .unwrap()
        .records()
        .count();
    assert_eq!(summary, 2 * 2 * 2 * 3 - 6);
}

#[test]
fn out_dir_comes_from_the_environment() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SMALL_RUN);
    let out = tmp.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_hexplore"))
        .args(["run", "--config", &cfg])
        .env("HEXPLORE_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(out.join("metrics.csv").exists());
}
