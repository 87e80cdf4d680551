mod common;

use std::fs;

use common::*;
use robust_chaos::robustfamily::{FamilyCurve, Seed};
use serde_json::Value;

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn seed_writes_the_frozen_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("seed.json");
    let run = cli(["seed", "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let seed: Seed = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(seed, default_seed());
}

#[test]
fn seed_in_a_bad_box_exits_2() {
    assert_eq!(cli(["seed", "--a-min", "0", "--a-max", "2", "--b-min", "-1", "--b-max", "1"]).code, 2);
    assert_eq!(cli(["seed", "--a-min", "5", "--a-max", "1"]).code, 2);
}

#[test]
fn malformed_flags_exit_64_with_usage() {
    let run = cli(["seed", "--grid", "many"]);
    assert_eq!(run.code, 64);
    assert!(run.stderr.contains("Usage"));
    assert_eq!(cli(["trace"]).code, 64);
    assert_eq!(cli(["--jobs", "0", "kneading", "--mu", "4"]).code, 64);
    assert_eq!(cli(["kneading", "--a", "9"]).code, 64);
}

#[test]
fn trace_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(["trace", "--seed-file", path_str(&dir.path().join("missing.json"))]).code, 64);

    let corrupt = dir.path().join("corrupt.json");
    fs::write(&corrupt, r#"{"a": 9.0, "b": -24.0, "residual": 0.0}"#).unwrap();
    assert_eq!(cli(["trace", "--seed-file", path_str(&corrupt)]).code, 3);

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "not json").unwrap();
    assert_eq!(cli(["trace", "--seed-file", path_str(&garbage)]).code, 64);

    let seed = default_seed();
    let good = dir.path().join("seed.json");
    fs::write(&good, serde_json::to_string(&seed).unwrap()).unwrap();
    let out = dir.path().join("curve.csv");
    let run = cli(["trace", "--seed-file", path_str(&good), "--max-samples", "50", "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let curve = FamilyCurve::read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(curve.len(), 50);
    assert_eq!(cli(["trace", "--seed-file", path_str(&good), "--step", "0"]).code, 64);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let curve = robust_curve();
    let short =
        FamilyCurve::from_points(&curve.samples.iter().step_by(100).map(|s| (s.a, s.b)).collect::<Vec<_>>());
    let good = dir.path().join("good.csv");
    short.write_csv(fs::File::create(&good).unwrap()).unwrap();
    let cert = dir.path().join("cert.json");
    let run = cli(["verify", "--curve", path_str(&good), "--out", path_str(&cert)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["overall"], Value::Bool(true));

    let mut points: Vec<(f64, f64)> = short.samples.iter().map(|s| (s.a, s.b)).collect();
    points.insert(3, (9.0, -24.0));
    let bad = dir.path().join("bad.csv");
    FamilyCurve::from_points(&points).write_csv(fs::File::create(&bad).unwrap()).unwrap();
    assert_eq!(cli(["verify", "--curve", path_str(&bad)]).code, 1);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(cli(["verify", "--curve", path_str(&empty)]).code, 64);
    fs::write(&empty, "t,a,b\n").unwrap();
    assert_eq!(cli(["verify", "--curve", path_str(&empty)]).code, 64);
}

#[test]
fn scan_of_a_quadratic_range_is_mixed() {
    let run = cli(["scan", "--family", "quadratic:2,4", "--grid", "41", "--lyapunov-n", "20000"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let mut reader = csv::Reader::from_reader(&run.stdout[..]);
    let flags: Vec<bool> = reader.records().map(|r| &r.unwrap()[3] == "true").collect();
    assert_eq!(flags.len(), 41);
    assert!(flags.iter().any(|&h| h) && flags.iter().any(|&h| !h));
    assert_eq!(cli(["scan", "--family", "quadratic:2,4", "--grid", "1"]).code, 64);
    assert_eq!(cli(["scan", "--family", "wobbly:1"]).code, 64);
}

#[test]
fn baire_exit_codes() {
    let run = cli(["baire"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["trials_used"], 1);
    assert_eq!(doc["accepted_fraction"], 1.0);

    let covering = data_file("obstacles_covering.json");
    let run = cli(["baire", "--obstacles", path_str(&covering), "--trials", "100"]);
    assert_eq!(run.code, 1);
    assert_eq!(serde_json::from_slice::<Value>(&run.stdout).unwrap(), Value::Null);

    let lattice = data_file("obstacles_default.json");
    assert_eq!(cli(["baire", "--curve", "segment:0,0,0:1,0,0", "--obstacles", path_str(&lattice)]).code, 64);
    assert_eq!(cli(["baire", "--delta", "0.001"]).code, 64);
}

#[test]
fn kneading_dump() {
    let run = cli(["kneading", "--a", "9", "--b", "-24", "--len", "3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["invariant"], "RRR|LLL");
    let run = cli(["kneading", "--mu", "4", "--len", "6"]);
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["invariant"], "RLLLLL");
    assert_eq!(cli(["kneading", "--a", "1", "--b", "0"]).code, 3);
}

#[test]
fn config_supplies_flags_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"kneading": {"mu": 4.0, "len": 4}}"#).unwrap();
    let run = cli(["--config", path_str(&cfg), "kneading"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["invariant"], "RLLL");
    let run = cli(["--config", path_str(&cfg), "kneading", "--len", "2"]);
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["invariant"], "RL");

    fs::write(&cfg, r#"{"kneading": {"len": "long"}}"#).unwrap();
    assert_eq!(cli(["--config", path_str(&cfg), "kneading", "--mu", "4"]).code, 64);
    assert_eq!(cli(["--config", path_str(&dir.path().join("nope.json")), "kneading", "--mu", "4"]).code, 64);
}
