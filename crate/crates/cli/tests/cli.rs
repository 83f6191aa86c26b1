//! The `ttw` binary end to end: output shapes and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

use ttw_cli::report::{parse_csv, parse_json};

fn ttw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttw")).args(args).env_remove("TTW_CONFIG").output().expect("binary runs")
}

fn ttw_env(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttw")).args(args).env("TTW_CONFIG", config).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn trig_k9_passes() {
    let o = ttw(&["verify", "trig", "--k", "9"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = parse_json(&o.stdout).unwrap();
    assert!(doc.pass);
    assert!(!doc.entries.is_empty());
    for e in &doc.entries {
        assert!(e.report.relative() <= 1e-12, "{}: {}", e.report.check, e.report.relative());
    }
}

#[test]
fn spectrum_table_has_ground_level() {
    let o = ttw(&["spectrum", "--k", "3", "--a", "2", "--b", "2", "--omega", "1", "--max-level", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    let ground = rows.iter().find(|r| r["N"] == 0 && r["n"] == 0).expect("ground row");
    assert_eq!(ground["energy"].as_f64().unwrap(), 26.0);
    // N + 3n <= 3: (0,0), (1,0), (2,0), (3,0), (0,1)
    assert_eq!(rows.len(), 5);
}

#[test]
fn spectrum_csv_has_header() {
    let o = ttw(&["spectrum", "--format", "csv", "--max-level", "0"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,n,m,energy,susy_energy,tau,q"));
    assert!(lines.next().unwrap().starts_with("0,0,0,26"));
}

#[test]
fn even_k_is_a_domain_error() {
    let o = ttw(&["verify", "dunkl", "--k", "2"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("odd"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn negative_omega_is_a_domain_error() {
    assert_eq!(code(&ttw(&["spectrum", "--omega=-1"])), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&ttw(&["verify", "--frobnicate"])), 2);
    assert_eq!(code(&ttw(&["verify", "hydra"])), 2);
    assert_eq!(code(&ttw(&["verify", "trig", "--tol", "trig"])), 2);
    assert_eq!(code(&ttw(&["verify", "trig", "--tol", "nope=1e-3"])), 2);
    assert_eq!(code(&ttw(&["eigensolve", "--sector", "half"])), 2);
    assert_eq!(code(&ttw(&[])), 2);
    assert_eq!(code(&ttw(&["--help"])), 0);
}

#[test]
fn no_suites_is_an_empty_passing_report() {
    let o = ttw(&["verify"]);
    assert_eq!(code(&o), 0);
    let doc = parse_json(&o.stdout).unwrap();
    assert!(doc.pass);
    assert!(doc.entries.is_empty() && doc.suites.is_empty());
}

#[test]
fn tight_tolerance_fails_with_exit_1() {
    let o = ttw(&["verify", "trig", "--tol", "trig=1e-300"]);
    assert_eq!(code(&o), 1);
    let doc = parse_json(&o.stdout).unwrap();
    assert!(!doc.pass);
    assert_eq!(doc.config.tolerances["trig"], 1e-300);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verify", "dihedral", "trig", "--k", "5", "--parallel"];
    let first = ttw(&args);
    let second = ttw(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn suites_merge_in_name_order() {
    let a = ttw(&["verify", "trig", "dihedral"]);
    let b = ttw(&["verify", "dihedral", "trig", "trig"]);
    assert_eq!(a.stdout, b.stdout);
    let doc = parse_json(&a.stdout).unwrap();
    let names: Vec<String> = doc.suites.iter().map(|s| s.suite.to_string()).collect();
    assert_eq!(names, ["dihedral", "trig"]);
}

#[test]
fn timings_only_on_request() {
    let plain = parse_json(&ttw(&["verify", "trig"]).stdout).unwrap();
    assert!(plain.suites.iter().all(|s| s.seconds.is_none()));
    let timed = parse_json(&ttw(&["verify", "trig", "--timings"]).stdout).unwrap();
    assert!(timed.suites.iter().all(|s| s.seconds.is_some()));
}

#[test]
fn csv_report_round_trips_to_the_json_entries() {
    let json = parse_json(&ttw(&["verify", "trig"]).stdout).unwrap();
    let o = ttw(&["verify", "trig", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("suite,check,residual,scale,tolerance,pass\n"));
    assert_eq!(parse_csv(&o.stdout).unwrap(), json.entries);
}

#[test]
fn config_from_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ttw.toml");
    std::fs::write(&cfg, "[params]\nk = 7\n[tolerances]\ntrig = 1e-11\n[verify]\nsuites = [\"trig\"]\n").unwrap();
    let doc = parse_json(&ttw_env(&["verify"], &cfg).stdout).unwrap();
    assert_eq!(doc.config.params.k, 7.0);
    assert_eq!(doc.config.tolerances["trig"], 1e-11);
    assert_eq!(doc.entries.len(), parse_json(&ttw(&["verify", "trig", "--k", "7"]).stdout).unwrap().entries.len());

    let doc = parse_json(&ttw_env(&["verify", "--k", "3", "--tol", "trig=1e-10"], &cfg).stdout).unwrap();
    assert_eq!(doc.config.params.k, 3.0);
    assert_eq!(doc.config.tolerances["trig"], 1e-10);

    // an explicit --config wins over the environment
    let other = dir.path().join("other.toml");
    std::fs::write(&other, "[params]\nk = 1\n").unwrap();
    let doc = parse_json(&ttw_env(&["verify", "trig", "--config", other.to_str().unwrap()], &cfg).stdout).unwrap();
    assert_eq!(doc.config.params.k, 1.0);
}

#[test]
fn bad_config_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[params]\nkappa = 3\n").unwrap();
    assert_eq!(code(&ttw_env(&["verify"], &cfg)), 2);
    assert_eq!(code(&ttw_env(&["verify"], &dir.path().join("missing.toml"))), 2);
}

#[test]
fn out_writes_a_file_and_unwritable_paths_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ttw(&["verify", "trig", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert!(parse_json(&std::fs::read(&path).unwrap()).unwrap().pass);

    let bad = dir.path().join("no/such/dir/report.json");
    assert_eq!(code(&ttw(&["verify", "trig", "--out", bad.to_str().unwrap()])), 2);
}

#[test]
fn wavefunction_at_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    std::fs::write(&pts, "r,phi\n0.5,0.2\n1.0,0.4\n2.0,0.1\n").unwrap();
    let o = ttw(&["wavefunction", "--N", "1", "--n", "0", "--points", pts.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["value"].as_f64().unwrap().is_finite()));
    assert!(rows.iter().any(|r| r["value"].as_f64().unwrap() != 0.0));

    std::fs::write(&pts, "r,phi\n0.5\n").unwrap();
    assert_eq!(code(&ttw(&["wavefunction", "--N", "0", "--n", "0", "--points", pts.to_str().unwrap()])), 2);
    assert_eq!(code(&ttw(&["wavefunction", "--N", "0", "--n", "0", "--points", "/nonexistent.csv"])), 2);
}

#[test]
fn eigensolve_matches_exact_levels() {
    let o = ttw(&["eigensolve", "--count", "3", "--grid-M", "48", "--grid-Nr", "24"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["exact"].as_f64().unwrap(), 26.0);
    assert!(rows.iter().all(|r| r["relative_error"].as_f64().unwrap() < 1e-6));
}
