//! End-to-end checks of the benchmark CLI: every subcommand runs, artifacts
//! land where promised, and identical configuration yields byte-identical
//! deterministic output.

use std::path::Path;
use std::process::Command;

fn bench(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rapg-bench"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rapg-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn usage_without_arguments() {
    let (ok, stdout, _) = bench(&[]);
    assert!(ok);
    assert!(stdout.contains("Subcommands"));
    assert!(stdout.contains("slope"));
}

#[test]
fn unknown_subcommand_fails() {
    let (ok, _, stderr) = bench(&["frobnicate"]);
    assert!(!ok);
    assert!(stderr.contains("unknown subcommand"));
}

#[test]
fn gen_writes_data_and_config() {
    let dir = tmp("gen");
    let (ok, stdout, stderr) = bench(&[
        "gen", "--model", "spca-sphere", "--m", "5", "--n", "30", "--c", "0.3", "--seed", "9",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(stdout.contains("wrote data"));
    assert!(dir.join("data_a.csv").exists());
    assert!(dir.join("data_v.csv").exists());
    let config = std::fs::read_to_string(dir.join("config.txt")).unwrap();
    assert!(config.contains("model=spca-sphere"));
    assert!(config.contains("data_noise_std=0.00001"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn run_produces_traces_summary_and_plots() {
    let dir = tmp("run");
    let (ok, stdout, stderr) = bench(&[
        "run", "--model", "spca-oblique", "--m", "8", "--n", "40", "--p", "2", "--lambda", "1",
        "--seed", "3", "--max-iters", "400", "--out", dir.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(stdout.contains("rpg"));
    for algo in ["rpg", "rapg", "ar-rapg"] {
        assert!(dir.join(format!("trace_{algo}_seed3.csv")).exists(), "{algo} trace");
        assert!(dir.join(format!("plot_fgap_{algo}_seed3.csv")).exists());
        assert!(dir.join(format!("plot_eta_{algo}_seed3.csv")).exists());
    }
    let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with("# schema: rapg-summary v1"));
    assert_eq!(summary.lines().count(), 2 + 3, "header lines plus one row per run");
    let trace = std::fs::read_to_string(dir.join("trace_rpg_seed3.csv")).unwrap();
    assert!(trace.starts_with("# schema: rapg-trace v1"));
    assert!(trace.lines().nth(1).unwrap().starts_with("k,f,eta_norm,a_k,beta,gamma,tau,l_est"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn identical_config_and_seed_yield_byte_identical_output() {
    let dir1 = tmp("det1");
    let dir2 = tmp("det2");
    for dir in [&dir1, &dir2] {
        let (ok, _, stderr) = bench(&[
            "run", "--model", "spca-oblique", "--m", "6", "--n", "30", "--p", "2", "--lambda",
            "0.5", "--seed", "17", "--max-iters", "150", "--no-timing", "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(ok, "stderr: {stderr}");
    }
    for name in [
        "trace_rpg_seed17.csv",
        "trace_rapg_seed17.csv",
        "trace_ar-rapg_seed17.csv",
        "summary.csv",
        "plot_fgap_rapg_seed17.csv",
    ] {
        let a = std::fs::read(dir1.join(name)).unwrap();
        let b = std::fs::read(dir2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let _ = std::fs::remove_dir_all(&dir1);
    let _ = std::fs::remove_dir_all(&dir2);
}

#[test]
fn config_file_round_trip() {
    let dir = tmp("cfg");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exp.cfg");
    std::fs::write(
        &path,
        "model=spca-oblique\nm=6\nn=30\np=2\nlambda=0.5\nseed=4\nmax_iters=100\nalgos=rpg,rapg\n",
    )
    .unwrap();
    let out = dir.join("out");
    let (ok, _, stderr) = bench(&[
        "run", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(out.join("trace_rpg_seed4.csv").exists());
    assert!(out.join("trace_rapg_seed4.csv").exists());
    assert!(!out.join("trace_ar-rapg_seed4.csv").exists(), "algos list was overridden");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn compare_emits_means_table() {
    let dir = tmp("cmp");
    let (ok, stdout, stderr) = bench(&[
        "compare", "--model", "spca-oblique", "--m", "6", "--p", "2", "--lambda", "1",
        "--n-list", "24,32", "--seeds", "2", "--seed", "5", "--max-iters", "2000",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(stdout.contains("mean iters"));
    let table = std::fs::read_to_string(dir.join("compare.csv")).unwrap();
    assert!(table.starts_with("# schema: rapg-compare v1"));
    // 2 sizes x 3 algorithms plus two header lines.
    assert_eq!(table.lines().count(), 2 + 6);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn slope_emits_series_and_fit() {
    let dir = tmp("slope");
    let (ok, stdout, stderr) = bench(&[
        "slope", "--model", "spca-sphere", "--m", "8", "--n", "60", "--lambda", "0.0001",
        "--seed", "2", "--points", "3", "--max-iters", "4000", "--out", dir.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    assert!(stdout.contains("log-log exponents"));
    assert!(dir.join("kappa_rapg.csv").exists());
    assert!(dir.join("kappa_rpg.csv").exists());
    assert!(std::fs::read_to_string(dir.join("kappa_fit.txt"))
        .unwrap()
        .contains("rpg_loglog_exponent"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn path_matters_not_for_determinism_check() {
    // Worker-count environment variable is honored without changing results.
    let dir1 = tmp("w1");
    let dir2 = tmp("w2");
    for (dir, workers) in [(&dir1, "1"), (&dir2, "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_rapg-bench"))
            .env("RAPG_BENCH_WORKERS", workers)
            .args([
                "run", "--model", "spca-oblique", "--m", "6", "--n", "30", "--p", "2",
                "--lambda", "0.5", "--seeds", "2", "--seed", "8", "--max-iters", "100",
                "--no-timing", "--out", dir.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for seed in [8, 9] {
        let name = format!("trace_rapg_seed{seed}.csv");
        let a = std::fs::read(dir1.join(&name)).unwrap();
        let b = std::fs::read(dir2.join(&name)).unwrap();
        assert_eq!(a, b, "{name} depends on worker count");
    }
    let _ = std::fs::remove_dir_all(&dir1);
    let _ = std::fs::remove_dir_all(&dir2);
}

#[test]
fn distinct_seeds_differ() {
    let dir = tmp("seeds");
    let (ok, _, stderr) = bench(&[
        "run", "--model", "spca-oblique", "--m", "6", "--n", "30", "--p", "2", "--lambda",
        "0.5", "--seeds", "2", "--seed", "21", "--max-iters", "100", "--no-timing", "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(ok, "stderr: {stderr}");
    let a = std::fs::read(dir.join("trace_rpg_seed21.csv")).unwrap();
    let b = std::fs::read(dir.join("trace_rpg_seed22.csv")).unwrap();
    assert_ne!(a, b);
    assert!(Path::new(&dir.join("means.csv")).exists(), "averaging mode writes means");
    let _ = std::fs::remove_dir_all(&dir);
}
