use std::path::{Path, PathBuf};
use std::process::Command;

use loopcell::arch::ArchConfig;
use loopcell::cli::{builtin_workloads, render_workloads, BENCH_CSV_HEADER};
use loopcell::lowprec::float8_table_csv;

fn crate_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

/// Compares `actual` with a checked-in file; `LOOPCELL_BLESS=1` rewrites it.
fn golden(rel: &str, actual: &str) {
    let path = crate_path(rel);
    if std::env::var_os("LOOPCELL_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{rel} is stale");
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_loopcell"))
        .args(args)
        .output()
        .unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn workload_table_is_byte_stable() {
    golden(
        "data/deepbench.toml",
        &render_workloads(&builtin_workloads()),
    );
    let (out, _, code) = run(&["table"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        std::fs::read_to_string(crate_path("data/deepbench.toml")).unwrap()
    );
}

#[test]
fn float8_vectors_are_byte_stable() {
    golden("data/float8_e4m3_v1.csv", &float8_table_csv());
}

#[test]
fn arch_configs_round_trip() {
    golden(
        "data/arch/default.toml",
        &ArchConfig::default_config().to_toml_string(),
    );
    golden(
        "data/arch/plasticine.toml",
        &ArchConfig::original_plasticine().to_toml_string(),
    );
    for f in ["data/arch/default.toml", "data/arch/plasticine.toml"] {
        ArchConfig::from_file(&crate_path(f)).unwrap();
    }
}

#[test]
fn simulate_csv_matches_golden_sample() {
    let (out, _, code) = run(&["simulate", "--workload", "lstm-512", "--format", "csv"]);
    assert_eq!(code, 0);
    golden("tests/golden/simulate_lstm512.csv", &out);
    let header = out.lines().next().unwrap();
    assert!(header
        .ends_with("ref_latency_ms,latency_ratio,ref_tflops,tflops_ratio,ref_power_w,power_ratio"));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[9], "6421");
}

#[test]
fn simulate_json_and_explicit_params() {
    let (out, _, code) = run(&["simulate", "--workload", "gru-512", "--params", "2,8,64"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dot_pcus"], 48);
    assert_eq!(v["workload"], "gru-512");
    assert!(v["comparison"]["latency_ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["simulate", "--workload", "gru-2816"]).2, 3);
    assert_eq!(
        run(&[
            "simulate",
            "--workload",
            "gru-2816",
            "--allow-oversubscribed"
        ])
        .2,
        0
    );
    let (_, err, code) = run(&[
        "--arch",
        "/definitely/missing.toml",
        "simulate",
        "--workload",
        "lstm-256",
    ]);
    assert_eq!(code, 4);
    assert!(err.contains("missing.toml"));
    assert_eq!(run(&["simulate", "--workload", "nope"]).2, 2);
    assert_eq!(
        run(&["simulate", "--workload", "lstm-256", "--params", "1,2"]).2,
        2
    );
    assert_eq!(run(&["frobnicate"]).2, 2);
    assert_eq!(
        run(&["describe", "--workload", "lstm-256", "--format", "csv"]).2,
        2
    );
}

#[test]
fn golden_command_passes_and_is_deterministic() {
    let a = run(&["golden", "--workload", "lstm-256", "--seed", "42"]);
    let b = run(&["golden", "--workload", "lstm-256", "--seed", "42"]);
    assert_eq!(a.2, 0);
    assert_eq!(a, b);
    assert!(a.0.contains("PASS"));
    let g = run(&["golden", "--workload", "gru-1024", "--format", "json"]);
    assert_eq!(g.2, 0);
    let v: serde_json::Value = serde_json::from_str(&g.0).unwrap();
    assert_eq!(v[0]["h"], 64);
}

#[test]
fn bench_schema_and_flags() {
    let (out, _, code) = run(&["bench"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), BENCH_CSV_HEADER);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    let width = BENCH_CSV_HEADER.split(',').count();
    assert!(rows.iter().all(|r| r.len() == width));
    for r in &rows {
        let over = r[5] == "oversubscribed";
        assert_eq!(
            over,
            ["lstm-2048", "gru-2560", "gru-2816"].contains(&r[0]),
            "{}",
            r[0]
        );
    }
}

#[test]
fn custom_table_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.toml");
    std::fs::write(
        &table,
        "[[workload]]\nname = \"tiny\"\nkind = \"LSTM\"\nh = 1\nt = 1\nparams = \"1,1,1\"\n",
    )
    .unwrap();
    let trace = dir.path().join("trace.csv");
    let (out, _, code) = run(&[
        "--table",
        table.to_str().unwrap(),
        "simulate",
        "--workload",
        "tiny",
        "--format",
        "csv",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.lines().next().unwrap().contains("ref_latency_ms"));
    let t = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(t.lines().count(), 1 + 17);
    assert_eq!(
        t.lines().next().unwrap(),
        "cycle,step,dot_pcus_active,elem_pcus_active,pmu_reads,hops"
    );

    let out_file = dir.path().join("dse.csv");
    let (_, _, code) = run(&[
        "--table",
        table.to_str().unwrap(),
        "dse",
        "--workload",
        "tiny",
        "-o",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(out_file)
        .unwrap()
        .starts_with("model,kind"));

    std::fs::write(&table, "[[workload]]\nname = 3\n").unwrap();
    assert_eq!(run(&["--table", table.to_str().unwrap(), "bench"]).2, 2);
}

#[test]
fn describe_renders_layout() {
    let (out, _, code) = run(&["describe", "--workload", "gru-512"]);
    assert_eq!(code, 0);
    assert!(out.contains("engine 1: rows 256..512"));
    assert!(out.contains("h = (1 - z) * n + z * h"));
    assert!(out.contains("fits the architecture"));
    let (json, _, _) = run(&["describe", "--workload", "gru-2816", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(!v["violations"].as_array().unwrap().is_empty());
}
