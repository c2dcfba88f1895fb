use std::path::Path;
use std::process::{Command, Output};

use dft_cli::sweep::{run_sweep, strip_timing, SweepConfig};
use dft_core::Bounds;
use serde_json::Value;

fn dft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dft"))
        .args(args)
        .env_remove("DFT_MAX_SPAN_ORDER")
        .env_remove("DFT_MAX_ENUM_ORDER")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Value {
    let out = dft(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn err(args: &[&str], code: i32) -> Value {
    let out = dft(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["exit_code"], code);
    assert!(v["error"]["kind"].is_string());
    v
}

#[test]
fn info_examples() {
    let v = ok(&["info", "3^-1"]);
    assert_eq!((v["order"].as_u64(), v["level"].as_u64(), v["signature"].as_u64()), (Some(3), Some(3), Some(2)));
    let v = ok(&["info", "1"]);
    assert_eq!((v["order"].as_u64(), v["level"].as_u64(), v["signature"].as_u64()), (Some(1), Some(1), Some(0)));
    let v = ok(&["info", "2_II^+2"]);
    assert_eq!(v["isotropic_elements"], 2);
    assert_eq!(v["isotropic_subgroups"], 2);
    assert_eq!(err(&["info", "2^+1"], 2)["error"]["kind"], "ValidityError");
    assert_eq!(err(&["info", "3^"], 2)["error"]["kind"], "SyntaxError");
}

#[test]
fn classify_examples() {
    let v = ok(&["classify", "2_2^+6"]);
    assert_eq!(v["small"], true);
    assert_eq!(v["rule"], "D3:2_t^±6,t≡2(4)");
    assert_eq!(ok(&["classify", "3^+6"])["small"], false);
    let v = ok(&["classify", "2_1^+1.3^-1"]);
    assert_eq!(v["small"], true);
    assert!(v["per_prime"]["2"].is_object() && v["per_prime"]["3"].is_object());
}

#[test]
fn image_examples() {
    let v = ok(&["image", "2_II^+2", "--witnesses"]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["full_image"], false);
    let w: Vec<&str> = v["witnesses"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(w.contains(&"(0,0)") && w.contains(&"(1,1)"));
    let v = ok(&["image", "3^+6"]);
    assert_eq!((v["rank"].as_u64(), v["full_image"].as_bool()), (Some(729), Some(true)));
    assert_eq!(ok(&["image", "2_II^-6"])["full_image"], true);

    let v = ok(&["image", "2_II^+2.4_II^+2", "--per-element"]);
    assert_eq!(v["graph_agrees"], true);
    let rows = v["per_element"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r["in_image"] == r["graph_in_image"]));
    assert!(ok(&["image", "3^-2", "--per-element"]).get("graph_agrees").is_none());
}

#[test]
fn bound_errors_exit_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_dft"))
        .args(["image", "3^+2"])
        .env("DFT_MAX_SPAN_ORDER", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    err(&["weil", "2_II^+8", "--check"], 3);
    let out = Command::new(env!("CARGO_BIN_EXE_dft"))
        .args(["info", "3^-1"])
        .env("DFT_MAX_ENUM_ORDER", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn graph_and_dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let v = ok(&["graph", "2_II^+2.4_1^+1", "--dot", dot.to_str().unwrap()]);
    assert_eq!(v["vertices"], 16);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph isotropy {"));
    assert_eq!(text.matches(" -- ").count() as u64, v["edges"].as_u64().unwrap());
    err(&["graph", "3^-1"], 2);
}

#[test]
fn weil_output_and_check() {
    let v = ok(&["weil", "3^-1"]);
    assert_eq!(v["rho_t_exponents"], serde_json::json!(["0", "1/3", "1/3"]));
    assert_eq!(v["w_exponents"][0][0], "3/4");
    let v = ok(&["weil", "2_II^+2.3^-1", "--check"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["relations"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_suites() {
    for suite in ["relations", "lemmas", "constructions"] {
        let v = ok(&["verify", "--suite", suite, "--max-order", "27"]);
        assert_eq!(v["pass"], true, "{suite}");
        for p in v["properties"].as_array().unwrap() {
            assert_eq!(p["pass"], true, "{suite} {}", p["name"]);
        }
    }
    let v = ok(&["verify", "--suite", "constructions", "--max-order", "4"]);
    let rank5 = v["properties"].as_array().unwrap().iter().find(|p| p["name"] == "rank-five expressions").unwrap();
    assert_eq!(rank5["checked"], 2);
    assert_eq!(err(&["verify", "--suite", "bogus"], 2)["error"]["kind"], "UnknownSuite");
}

#[test]
fn usage_errors_are_json() {
    assert_eq!(err(&["frobnicate"], 2)["error"]["kind"], "UsageError");
    err(&["classify-sweep", "--max-order", "9", "--primes", "4", "--out", "/dev/null"], 2);
}

fn config(out: &Path, max_order: u64, primes: &[u64], jobs: usize, resume: bool) -> SweepConfig {
    SweepConfig {
        max_order,
        primes: primes.to_vec(),
        bounds: Bounds::default(),
        jobs,
        out: out.to_path_buf(),
        resume,
        witnesses: true,
    }
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn trivial_sweep_has_one_small_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let r = run_sweep(&config(&out, 1, &[3], 1, false)).unwrap();
    assert_eq!(r.code, 0);
    let lines: Vec<Value> = read(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["type"], "header");
    assert_eq!(lines[1]["symbol"], "1");
    assert_eq!(lines[1]["image_rank"], 0);
    assert_eq!(lines[1]["small"], true);
    assert_eq!(lines[2]["type"], "summary");
}

#[test]
fn sweep_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    let ra = run_sweep(&config(&a, 128, &[2, 3], 1, false)).unwrap();
    let rb = run_sweep(&config(&b, 128, &[2, 3], 4, false)).unwrap();
    assert_eq!((ra.code, rb.code), (0, 0));
    assert_eq!(ra.summary.disagreements, Vec::<String>::new());
    assert_eq!(strip_timing(&read(&a)), strip_timing(&read(&b)));
    // primes order does not change the hash
    assert_eq!(config(&a, 9, &[3, 2], 1, false).hash(), config(&a, 9, &[2, 3], 7, true).hash());
    assert_ne!(config(&a, 9, &[2], 1, false).hash(), config(&a, 10, &[2], 1, false).hash());
}

#[test]
fn resumed_sweep_equals_a_fresh_one() {
    let dir = tempfile::tempdir().unwrap();
    let (fresh, partial) = (dir.path().join("f.jsonl"), dir.path().join("p.jsonl"));
    run_sweep(&config(&fresh, 256, &[2], 2, false)).unwrap();
    let text = read(&fresh);
    // an interrupted run: header, some records and a torn line
    let mut cut: String = text.lines().take(300).map(|l| format!("{l}\n")).collect();
    cut.push_str("{\"type\":\"record\",\"sym");
    std::fs::write(&partial, cut).unwrap();
    let r = run_sweep(&config(&partial, 256, &[2], 3, true)).unwrap();
    assert_eq!(r.summary.reused, 299);
    assert_eq!(strip_timing(&read(&partial)), strip_timing(&text));

    // a different configuration refuses to resume and leaves the file alone
    let before = read(&partial);
    let e = run_sweep(&config(&partial, 128, &[2], 1, true)).err().unwrap();
    assert_eq!((e.code, e.kind.as_str()), (2, "ConfigMismatch"));
    assert_eq!(read(&partial), before);
}

#[test]
fn sweep_reports_bound_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.jsonl");
    let mut cfg = config(&out, 27, &[3], 1, false);
    cfg.bounds.max_span_order = 9;
    let r = run_sweep(&cfg).unwrap();
    assert_eq!(r.code, 3);
    assert!(!r.summary.errors.is_empty());
    let bad: Value = read(&out)
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|v| v["error"].is_object())
        .unwrap();
    assert_eq!(bad["error"]["kind"], "BoundExceeded");
}
