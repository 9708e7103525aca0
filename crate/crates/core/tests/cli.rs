//! End-to-end checks of the `betaint` binary.

use beta_integrals::identities::{from_csv, from_json, to_json, IdentityId, Verdict};
use std::process::{Command, Output};

const ENV_VARS: [&str; 10] = [
    "BETAINT_SEED",
    "BETAINT_REL_TOL",
    "BETAINT_ABS_FLOOR",
    "BETAINT_MC_SAMPLES",
    "BETAINT_PARALLELISM",
    "BETAINT_FORMAT",
    "BETAINT_OUT",
    "BETAINT_TIMINGS",
    "BETAINT_SUITE",
    "BETAINT_ONLY",
];

fn betaint(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_betaint"));
    for v in ENV_VARS {
        cmd.env_remove(v);
    }
    cmd.args(args).envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A quick slice of the bundled suite: quadrature and Monte Carlo cases.
const QUICK: &str = "CB-1,BK-1,GD-1";

#[test]
fn reports_are_byte_identical_across_runs_and_threads() {
    let args = ["verify", "--only", QUICK, "--seed", "7", "--format", "json", "--mc-samples", "50000"];
    let a = betaint(&args, &[]);
    let b = betaint(&args, &[("BETAINT_PARALLELISM", "1")]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn only_filter_and_json_round_trip() {
    let o = betaint(&["verify", "--only", QUICK, "--format", "json", "--mc-samples", "50000"], &[]);
    let text = stdout(&o);
    let records = from_json(&text).unwrap();
    let ids = [IdentityId::Cb1, IdentityId::Bk1, IdentityId::Gd1];
    assert!(records.iter().all(|r| ids.contains(&r.id)));
    for id in ids {
        assert!(records.iter().any(|r| r.id == id), "{id} missing");
    }
    assert!(records.iter().all(|r| r.verdict == Verdict::Pass));
    assert_eq!(to_json(&records).unwrap(), text);
    let summary = String::from_utf8(o.stderr).unwrap();
    assert!(summary.contains(&format!("{} cases: {} passed", records.len(), records.len())), "{summary}");
}

#[test]
fn csv_and_table_carry_the_json_numbers() {
    let base = ["verify", "--only", "CB-1,GD-1", "--seed", "3", "--mc-samples", "20000"];
    let json = from_json(&stdout(&betaint(&[&base[..], &["--format", "json"]].concat(), &[]))).unwrap();
    let csv = from_csv(&stdout(&betaint(&[&base[..], &["--format", "csv"]].concat(), &[]))).unwrap();
    assert_eq!(json, csv);
    let table = stdout(&betaint(&base, &[]));
    for r in &json {
        let lhs = r.lhs.unwrap();
        assert!(table.contains(&format!("{:.16e}", lhs.re)), "{} missing from table", lhs.re);
    }
}

#[test]
fn flags_override_environment() {
    let env = [("BETAINT_SEED", "11"), ("BETAINT_FORMAT", "json"), ("BETAINT_MC_SAMPLES", "20000")];
    let from_env = from_json(&stdout(&betaint(&["verify", "--only", "GD-1"], &env))).unwrap();
    let from_flag = from_json(&stdout(&betaint(&["verify", "--only", "GD-1", "--seed", "12"], &env))).unwrap();
    assert_eq!(from_env[0].evals_or_samples, 20_000);
    assert_ne!(from_env[0].seed, from_flag[0].seed);
    let explicit = from_json(&stdout(&betaint(
        &["verify", "--only", "GD-1", "--seed", "11", "--format", "json", "--mc-samples", "20000"],
        &[],
    )))
    .unwrap();
    assert_eq!(from_env, explicit);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = betaint(&["eval", "CB-1", "--alpha1", "2", "--alpha2", "1", "--sigma1", "1", "--sigma2", "1", "--format", "json", "--out", path.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let records = from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rhs = records[0].rhs.unwrap();
    assert!((rhs.re - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    assert_eq!(betaint(&["list"], &[]).status.code(), Some(0));
    // Unknown identity, unknown parameter, violated hypothesis, bad flag value.
    assert_eq!(betaint(&["verify", "--only", "XX-9"], &[]).status.code(), Some(2));
    assert_eq!(betaint(&["eval", "CB-1", "--alpha1", "1", "--alpha2", "1", "--sigma1", "1", "--sigma2", "1", "--mu", "2"], &[]).status.code(), Some(2));
    assert_eq!(betaint(&["eval", "CB-1", "--alpha1", "0.2", "--alpha2", "0.2", "--sigma1", "1", "--sigma2", "1"], &[]).status.code(), Some(2));
    assert_eq!(betaint(&["verify", "--rel-tol", "-1"], &[]).status.code(), Some(2));
    assert_eq!(betaint(&["verify", "--suite", "/nonexistent/suite.toml"], &[]).status.code(), Some(2));
    // A tolerance no engine can meet.
    let o = betaint(&["eval", "CB-1", "--alpha1", "1.3", "--alpha2", "1.1", "--sigma1", "0.7", "--sigma2", "1", "--rel-tol", "1e-300", "--abs-floor", "1e-300"], &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
