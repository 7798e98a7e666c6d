//! End-to-end tests of the `jitliq` binary: exit codes, report contents,
//! CSV/JSONL schemas, and config handling.

use std::io::Write;
use std::process::{Command, Output};

fn jitliq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jitliq"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

#[test]
fn equilibrium_reference_set_straddles_lambda_star() {
    let below = stdout_json(&jitliq(&[
        "equilibrium",
        "--set",
        "mode=two_tier",
        "--set",
        "lambda=0.8",
    ]));
    assert_eq!(below["outcome"]["exists"], true);
    assert!(below["outcome"]["per_unit_utility"].as_f64().unwrap() >= 0.0);

    let above = stdout_json(&jitliq(&[
        "equilibrium",
        "--set",
        "mode=two_tier",
        "--set",
        "lambda=0.9",
    ]));
    assert!(above["outcome"]["per_unit_utility"].as_f64().unwrap() < 0.0);
    assert_eq!(above["outcome"]["passive_deposit"], 0.0);
}

#[test]
fn equilibrium_freeze_is_exit_zero_but_nonexistence_is_exit_two() {
    // alpha = 1: utility negative, passive LPs stay out, still exit 0
    let freeze = jitliq(&["equilibrium", "--set", "alpha=1.0"]);
    assert_eq!(freeze.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&freeze.stdout).unwrap();
    assert_eq!(v["outcome"]["passive_deposit"], 0.0);

    // zeta_u below the existence threshold: exit 2 with the trivial outcome
    let missing = jitliq(&["equilibrium", "--set", "zeta_u=1.0035"]);
    assert_eq!(missing.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&missing.stdout).unwrap();
    assert_eq!(v["outcome"]["exists"], false);
}

#[test]
fn thresholds_reference_values() {
    let report = stdout_json(&jitliq(&[
        "thresholds",
        "--set",
        "f=0.03",
        "--set",
        "pi=1.0",
        "--set",
        "zeta=1.5",
        "--set",
        "zeta_u=1.5",
    ]));
    let z = report["report"]["zeta_star"]["Threshold"].as_f64().unwrap();
    assert!((z - 1.4116).abs() < 1e-3, "zeta* = {z}");
    assert_eq!(report["report"]["closed_form_match"], true);

    // zero fee: complementing everywhere
    let zero_fee = stdout_json(&jitliq(&["thresholds", "--set", "f=0.0", "--set", "zeta_u=1.01"]));
    assert_eq!(zero_fee["report"]["zeta_star"], "AlwaysComplement");
}

#[test]
fn thresholds_cournot_sits_below_monopolist() {
    let report = stdout_json(&jitliq(&[
        "thresholds",
        "--set",
        "mode=cournot",
        "--set",
        "f=0.01",
        "--set",
        "pi=0.5",
        "--set",
        "e_j=3.0",
        "--set",
        "e_p=1.0",
        "--set",
        "zeta_u=1.15",
    ]));
    let mono = report["report"]["zeta_star"]["Threshold"].as_f64().unwrap();
    let comp = report["report"]["zeta_star_cournot"]["Threshold"].as_f64().unwrap();
    assert!(comp < mono, "zeta*_C = {comp} should sit below zeta* = {mono}");
}

#[test]
fn fee_design_reports_the_optimal_transfer_rate() {
    let report = stdout_json(&jitliq(&["fee-design"]));
    let lambda = report["report"]["lambda_star"].as_f64().unwrap();
    assert!((lambda - 0.8156).abs() < 0.01, "lambda* = {lambda}");
    assert_eq!(report["report"]["fbar_ok"], true);
}

#[test]
fn welfare_sweep_rises_then_freezes() {
    let out = jitliq(&[
        "sweep",
        "--set",
        "target=W",
        "--set",
        "axis1=lambda",
        "--set",
        "axis1_lo=0",
        "--set",
        "axis1_hi=1",
        "--set",
        "axis1_n=101",
        "--set",
        "mode=two_tier",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "axis1,axis2,target,value,status");
    assert_eq!(lines.len(), 102);
    // CSV stability: LF endings only, 17-significant-digit scientific floats
    assert!(!text.contains('\r'));
    let first_value = lines[1].split(',').nth(3).unwrap();
    assert!(first_value.contains('e') && first_value.contains('.'));
    let mantissa_digits =
        first_value.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(mantissa_digits, 17);

    let values: Vec<f64> =
        lines[1..].iter().map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    // nondecreasing while positive, then exactly zero after the freeze
    let freeze_at = values.iter().position(|v| *v == 0.0).expect("freeze region expected");
    for w in values[..freeze_at].windows(2) {
        assert!(w[1] >= w[0] - 1e-15, "welfare dipped before the freeze");
    }
    assert!(values[freeze_at..].iter().all(|v| *v == 0.0));
    assert!(freeze_at > 70 && freeze_at < 90, "freeze started at index {freeze_at}");
}

#[test]
fn classification_sweep_has_two_contiguous_blocks() {
    let out = jitliq(&[
        "sweep",
        "--set",
        "target=classification",
        "--set",
        "axis1=zeta_u",
        "--set",
        "axis1_lo=1.2",
        "--set",
        "axis1_hi=1.6",
        "--set",
        "axis1_n=101",
        "--set",
        "f=0.03",
        "--set",
        "pi=1.0",
        "--set",
        "zeta=1.6",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    let flips = values.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1, "classification must flip exactly once");
}

#[test]
fn sweeps_are_deterministic_across_job_counts() {
    let args = [
        "sweep",
        "--set",
        "target=U",
        "--set",
        "axis1=lambda",
        "--set",
        "axis1_n=41",
        "--set",
        "mode=two_tier",
    ];
    let one = jitliq(&[&args[..], &["--jobs", "1"]].concat());
    let four = jitliq(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout, "output must not depend on the thread count");
}

#[test]
fn simulate_trace_row_counts() {
    // uninformed sell with one JIT arrival: seven rows
    let with_jit = jitliq(&["simulate", "--set", "scenario=US", "--set", "jit_arrivals=1"]);
    assert!(with_jit.status.success());
    let rows: Vec<serde_json::Value> = String::from_utf8(with_jit.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0]["label"], "passive LPs deposit");
    assert_eq!(rows[3]["label"], "JIT LP deposits");
    assert_eq!(rows[5]["label"], "JIT LP withdraws");
    assert_eq!(rows[6]["label"], "possible reverse trade");

    // informed sell without a JIT LP: five rows, reserves end displaced
    let without = jitliq(&["simulate", "--set", "scenario=IS"]);
    let rows: Vec<serde_json::Value> = String::from_utf8(without.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 5);
    let first = rows[0]["reserve_risky"].as_f64().unwrap();
    let last = rows[4]["reserve_risky"].as_f64().unwrap();
    assert!(last > first, "informed sell leaves extra risky coins in the pool");

    // zero swap order: reserves constant across all rows
    let idle = jitliq(&["simulate", "--set", "scenario=US", "--set", "q_r=0"]);
    let rows: Vec<serde_json::Value> = String::from_utf8(idle.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let r0 = rows[0]["reserve_risky"].as_f64().unwrap();
    assert!(rows.iter().all(|r| r["reserve_risky"].as_f64().unwrap() == r0));
}

#[test]
fn verify_passes_and_records_the_seed() {
    let out = jitliq(&["verify", "--set", "draws=3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["seed"], 20240101);
    assert_eq!(v["report"]["pass"], true);
    assert!(v["report"]["checks"].as_array().unwrap().len() > 50);

    let seeded = jitliq(&["verify", "--seed", "7", "--set", "draws=2"]);
    let v: serde_json::Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(v["report"]["seed"], 7);
}

#[test]
fn config_file_with_flag_overrides() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# reference parameter set").unwrap();
    writeln!(file, "mode = two_tier").unwrap();
    writeln!(file, "alpha = 0.1").unwrap();
    writeln!(file, "lambda = 0.9").unwrap();
    file.flush().unwrap();
    let path = file.path().to_str().unwrap();

    // the file alone: lambda = 0.9 (frozen side)
    let from_file = stdout_json(&jitliq(&["equilibrium", "--config", path]));
    assert!(from_file["outcome"]["per_unit_utility"].as_f64().unwrap() < 0.0);

    // --set wins over the file: lambda = 0.5 participates
    let overridden = stdout_json(&jitliq(&[
        "equilibrium",
        "--config",
        path,
        "--set",
        "lambda=0.5",
    ]));
    assert!(overridden["outcome"]["per_unit_utility"].as_f64().unwrap() > 0.0);
}

#[test]
fn bad_configuration_is_exit_one() {
    // unknown key
    let unknown = jitliq(&["equilibrium", "--set", "verbosity=11"]);
    assert_eq!(unknown.status.code(), Some(1));
    // malformed value
    let malformed = jitliq(&["equilibrium", "--set", "alpha=much"]);
    assert_eq!(malformed.status.code(), Some(1));
    // domain violation
    let domain = jitliq(&["equilibrium", "--set", "alpha=2.0"]);
    assert_eq!(domain.status.code(), Some(1));
    // sweep without a target
    let no_target = jitliq(&["sweep", "--set", "axis1=lambda"]);
    assert_eq!(no_target.status.code(), Some(1));
}

#[test]
fn output_file_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = jitliq(&["equilibrium", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["outcome"]["exists"], true);
}
