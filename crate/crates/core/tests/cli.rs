use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ldpc_forge::alist::{read_alist, write_alist};
use ldpc_forge::bec::exact_fer;
use ldpc_forge::generate::sample_regular;
use ldpc_forge::TannerGraph;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_ldpc-forge");

fn forge(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("LDPC_FORGE_SEED")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = forge(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_code(dir: &Path, name: &str, g: &TannerGraph) -> String {
    let p = dir.join(name);
    fs::write(&p, write_alist(g)).unwrap();
    p.to_str().unwrap().to_string()
}

fn four_cycle() -> TannerGraph {
    TannerGraph::from_dense(&[[1u8, 1], [1, 1]]).unwrap()
}

#[test]
fn analyze_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_code(dir.path(), "c4.alist", &four_cycle());
    let v = ok(dir.path(), &["analyze", &code, "--d-cap", "3"]);
    assert_eq!(v["d_stp"], 2);
    assert_eq!(v["m_s"], 1);
    let profile = json(&dir.path().join("profile.json"));
    assert_eq!(profile["profile"]["min_sets"], serde_json::json!([[1, 2]]));
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["command"], "analyze");
    assert_eq!(manifest["artifacts"], serde_json::json!(["profile.json"]));
}

#[test]
fn suppress_four_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_code(dir.path(), "c4.alist", &four_cycle());
    let v = ok(
        dir.path(),
        &["suppress", &code, "--K", "2", "--set", "1,2", "--oracle"],
    );
    assert_eq!(v["first_order_expectation"], "1");
    let s = json(&dir.path().join("suppress.json"));
    assert_eq!(s["sets"][0]["w_sup"], 0);
    assert_eq!(s["sets"][0]["oracle"]["expected_first_order"], "1");
}

#[test]
fn simulate_matches_exact_fer() {
    let dir = tempfile::tempdir().unwrap();
    let g = TannerGraph::from_dense(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
    let code = write_code(dir.path(), "c.alist", &g);
    ok(
        dir.path(),
        &[
            "simulate",
            &code,
            "--eps",
            "0.2",
            "--eps",
            "0.5",
            "--min-frame-errors",
            "2000",
            "--seed",
            "4",
            "--exact",
        ],
    );
    let curve = json(&dir.path().join("curve.json"));
    for p in curve["points"].as_array().unwrap() {
        let eps = p["eps"].as_f64().unwrap();
        let truth = exact_fer(&g, eps).unwrap();
        let (lo, hi) = (
            p["fer_ci_lo"].as_f64().unwrap(),
            p["fer_ci_hi"].as_f64().unwrap(),
        );
        let half = (hi - lo) / 2.0;
        assert!(
            (p["fer"].as_f64().unwrap() - truth).abs() <= 1.5 * half + 1e-12,
            "eps {eps}"
        );
    }
    let csv = fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = write_code(d, "c4.alist", &four_cycle());
    fs::write(d.join("bad.alist"), "2 2\n2 2\n").unwrap();

    assert_eq!(
        forge(d, &["analyze", "--no-such-flag"]).status.code(),
        Some(2)
    );
    assert_eq!(
        forge(d, &["gen", "--n", "10", "--dv", "3", "--dc", "7"])
            .status
            .code(),
        Some(2)
    );
    let bad = d.join("bad.alist");
    let out = forge(d, &["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    let out = forge(d, &["analyze", &code, "--budget-expansions", "1"]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        forge(d, &["suppress", &code, "--K", "2", "--set", "1"])
            .status
            .code(),
        Some(5)
    );
    let missing = forge(d, &["analyze", "no/such/file.alist"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("no/such/file.alist"));
}

#[test]
fn gen_is_seeded_by_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(
        &a,
        &["gen", "--n", "24", "--dv", "3", "--dc", "6", "--seed", "7"],
    );
    let out = Command::new(BIN)
        .args(["gen", "--n", "24", "--dv", "3", "--dc", "6", "--out"])
        .arg(&b)
        .env("LDPC_FORGE_SEED", "7")
        .output()
        .unwrap();
    assert!(out.status.success());
    let ga = fs::read_to_string(a.join("code.alist")).unwrap();
    assert_eq!(ga, fs::read_to_string(b.join("code.alist")).unwrap());
    assert_eq!(
        read_alist(&ga).unwrap(),
        sample_regular(24, 3, 6, 7).unwrap()
    );
}

#[test]
fn anneal_and_lift_are_reproducible_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_code(dir.path(), "g.alist", &sample_regular(32, 3, 6, 3).unwrap());
    let run = |name: &str, workers: &str| {
        let d = dir.path().join(name);
        let flags = [
            "--seed",
            "5",
            "--workers",
            workers,
            "--per-d-attempt-cap",
            "300",
            "--trial-batch",
            "4",
        ];
        let mut a = vec!["anneal", code.as_str()];
        a.extend(flags);
        ok(&d, &a);
        let annealed = d.join("annealed.alist");
        let mut l = vec!["lift", annealed.to_str().unwrap(), "--K", "3", "--anneal"];
        l.extend(flags);
        ok(&d.join("lift"), &l);
        d
    };
    let one = run("one", "1");
    let many = run("many", "4");
    for f in [
        "annealed.alist",
        "report.json",
        "lift/lifted.alist",
        "lift/spec.json",
        "lift/report.json",
    ] {
        assert_eq!(
            fs::read(one.join(f)).unwrap(),
            fs::read(many.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn anneal_config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_code(dir.path(), "g.alist", &sample_regular(24, 3, 6, 1).unwrap());
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"seed": 9, "per_d_attempt_cap": 50, "max_trials": 10}"#,
    )
    .unwrap();
    ok(
        dir.path(),
        &[
            "anneal",
            &code,
            "--config",
            cfg.to_str().unwrap(),
            "--max-trials",
            "20",
        ],
    );
    let m = json(&dir.path().join("manifest.json"));
    assert_eq!(m["config"]["anneal"]["seed"], 9);
    assert_eq!(m["config"]["anneal"]["per_d_attempt_cap"], 50);
    assert_eq!(m["config"]["anneal"]["max_trials"], 20);
    let r = json(&dir.path().join("report.json"));
    assert!(r["trials"].as_u64().unwrap() <= 20);
}

#[test]
fn pipeline_run_directory() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "pipeline",
        "--n",
        "24",
        "--dv",
        "3",
        "--dc",
        "6",
        "--K",
        "2",
        "--seed",
        "3",
        "--budget-total",
        "20000000",
        "--per-d-attempt-cap",
        "200",
        "--eps",
        "0.3",
        "--min-frame-errors",
        "10",
        "--max-frames",
        "4096",
    ];
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&a, &args);
    let mut one_worker = args.to_vec();
    one_worker.extend(["--workers", "1"]);
    ok(&b, &one_worker);
    for f in ldpc_forge::pipeline::RUN_FILES {
        assert!(a.join(f).exists(), "{f}");
        if f != "manifest.json" {
            assert_eq!(
                fs::read(a.join(f)).unwrap(),
                fs::read(b.join(f)).unwrap(),
                "{f}"
            );
        }
    }
    let m = json(&a.join("manifest.json"));
    assert_eq!(m["stages"].as_array().unwrap().len(), 3);
    assert!(m["d_prime_stp"].is_u64());
    assert!(m["census"]["min_w_sup"].is_number());
    assert!(m["volatile"]["unix_time"].is_u64());

    let cfg = a.join("replay.json");
    fs::write(&cfg, m["config"].to_string()).unwrap();
    let c = dir.path().join("c");
    ok(&c, &["pipeline", "--config", cfg.to_str().unwrap()]);
    for f in [
        "base.alist",
        "lifted.alist",
        "spec.json",
        "profile.json",
        "census.json",
        "curves.csv",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(c.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn pipeline_degenerates_to_identity() {
    let dir = tempfile::tempdir().unwrap();
    let code = write_code(dir.path(), "g.alist", &sample_regular(12, 3, 6, 0).unwrap());
    ok(
        dir.path(),
        &[
            "pipeline",
            "--base",
            &code,
            "--K",
            "1",
            "--d-u",
            "1",
            "--budget-total",
            "0",
        ],
    );
    let g = read_alist(&fs::read_to_string(&code).unwrap()).unwrap();
    let base = read_alist(&fs::read_to_string(dir.path().join("base.alist")).unwrap()).unwrap();
    let lifted = read_alist(&fs::read_to_string(dir.path().join("lifted.alist")).unwrap()).unwrap();
    assert_eq!(base, g);
    assert_eq!(lifted, g);
    let csv = fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let m = json(&dir.path().join("manifest.json"));
    assert!(m["stages"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["skipped"] == true));
}
