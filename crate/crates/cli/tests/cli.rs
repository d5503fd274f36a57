use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_typicality");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("run typicality")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn tails_csv_header_and_threshold_row() {
    let out = run(&["tails", "--ds", "2", "--de", "6", "--threshold", "0.95", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["p", "exact_density", "gaussian_density", "exact_tail", "gaussian_tail"]);
    let row = rows.iter().find(|r| r[0] == "0.95").expect("threshold row");
    let exact: f64 = row[1].parse().unwrap();
    let gauss: f64 = row[2].parse().unwrap();
    assert!((exact - 6.7e-4).abs() < 0.05e-4);
    assert!((gauss - 1.5e-2).abs() < 0.05e-2);
    let ps: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ps.windows(2).all(|w| w[0] < w[1]));
    assert!(!stdout(&out).contains('E'));
}

#[test]
fn tails_csv_round_trips_through_the_library() {
    let out = run(&["tails", "--ds", "3", "--de", "5", "--format", "csv", "--precision", "10", "--grid-points", "22"]);
    let dims = typicality::SubsystemDims::new(3, 5).unwrap();
    let (_, rows) = csv_rows(&stdout(&out));
    for r in rows {
        let v: Vec<f64> = r.iter().map(|x| x.parse().unwrap()).collect();
        let p = v[0];
        let recomputed = [
            if p > 1.0 { 0.0 } else { typicality::pclt::pk_density(dims, p).unwrap() },
            typicality::pclt::gaussian_matched_density(dims, p).unwrap(),
        ];
        for (printed, fresh) in v[1..3].iter().zip(recomputed) {
            assert!((printed - fresh).abs() <= 1e-9 * fresh.abs().max(1e-300), "p = {p}");
        }
    }
}

#[test]
fn tails_at_the_boundary_and_bad_arguments() {
    let out = run(&["tails", "--ds", "2", "--de", "6", "--threshold", "1.0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["outputs"]["threshold"]["exact_tail"], 0.0);

    let out = run(&["tails", "--ds", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&run(&["tails", "--ds", "2", "--de", "6", "--precision", "2"])), 2);
    assert_eq!(code(&run(&["tails", "--ds", "2", "--de", "6", "--precision", "18"])), 2);
    assert_eq!(code(&run(&["tails", "--ds", "2", "--de", "6", "--threshold", "1.5"])), 2);
    assert_eq!(code(&run(&["tails", "--ds", "0", "--de", "6"])), 2);
}

#[test]
fn mi_all_in_the_page_regime() {
    let out = run(&["mi", "--da", "2", "--db", "2", "--de", "4", "--method", "all", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["command"], "mi");
    assert_eq!(v["version"], typicality::VERSION);
    assert_eq!(v["inputs"]["da"], 2);
    let o = &v["outputs"];
    assert!((o["exact"].as_f64().unwrap() - 0.278348).abs() < 5e-7);
    assert_eq!(o["leading"].as_f64().unwrap(), 0.28125);
    assert!(o["delta_integral_exact"].as_f64().unwrap().abs() < 1e-10);
    for key in ["diagonal_mi", "eigenvalue_correction", "coherence_term", "cartan_term"] {
        assert!(o[key].is_number(), "{key}");
    }
}

#[test]
fn mi_outside_the_page_regime() {
    let out = run(&["mi", "--da", "3", "--db", "4", "--de", "2", "--method", "exact"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("swapped-regime exact value"));
    assert!(text.contains("1.37797"));
    assert!(text.contains("2.48310"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    assert_eq!(code(&run(&["mi", "--da", "3", "--db", "4", "--de", "2", "--method", "series:4"])), 3);
    assert_eq!(code(&run(&["mi", "--da", "3", "--db", "4", "--de", "2", "--method", "integral"])), 3);
    assert_eq!(code(&run(&["mi", "--da", "3", "--db", "4", "--de", "2", "--method", "all"])), 3);
    assert_eq!(code(&run(&["mi", "--da", "2", "--db", "2", "--de", "4", "--method", "series:x"])), 2);
}

#[test]
fn mi_trivial_subsystem() {
    let out = run(&["mi", "--da", "1", "--db", "5", "--de", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["quantity", "value"]);
    assert_eq!(rows[0], ["exact", "0"]);
}

#[test]
fn series_prints_rational_coefficients() {
    let out = run(&["series", "--da", "2", "--db", "2", "--de", "16", "--k-max", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["k", "coefficient", "term", "partial_sum", "abs_error"]);
    let coefficients: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(coefficients, ["-1/12", "1/120", "-1/252", "1/240", "-1/132"]);
    // partial sums accumulate the printed terms
    for w in rows.windows(2) {
        let prev: f64 = w[0][3].parse().unwrap();
        let term: f64 = w[1][2].parse().unwrap();
        let next: f64 = w[1][3].parse().unwrap();
        assert!((prev + term - next).abs() <= 1e-11 * next.abs());
    }
}

#[test]
fn series_two_terms_and_leading_only() {
    let out = run(&["series", "--da", "2", "--db", "2", "--de", "4", "--k-max", "2", "--format", "json"]);
    let v = json(&out);
    let terms = v["outputs"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 3);
    assert!(terms[2]["abs_error"].as_f64().unwrap() < 2e-6);

    let out = run(&["series", "--da", "2", "--db", "2", "--de", "4", "--k-max", "0", "--format", "csv"]);
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], "0.28125");

    assert_eq!(code(&run(&["series", "--da", "3", "--db", "4", "--de", "2"])), 3);
}

#[test]
fn mc_is_byte_for_byte_reproducible() {
    let args = ["mc", "--mode", "bloch", "--ds", "3", "--de", "4", "--samples", "5000", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let mut four = args.to_vec();
    four.extend(["--workers", "4"]);
    assert_eq!(run(&four).stdout, a.stdout);
    let other = run(&["mc", "--mode", "bloch", "--ds", "3", "--de", "4", "--samples", "5000", "--seed", "6"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn mc_seed_from_environment() {
    let args = ["mc", "--mode", "mi", "--da", "2", "--db", "2", "--de", "4", "--samples", "3000", "--format", "json"];
    let from_env = Command::new(BIN).args(args).env("TYPICALITY_SEED", "42").output().unwrap();
    let mut explicit_args = args.to_vec();
    explicit_args.extend(["--seed", "42"]);
    let explicit = Command::new(BIN).args(&explicit_args).env_remove("TYPICALITY_SEED").output().unwrap();
    assert_eq!(from_env.stdout, explicit.stdout);
    let v = json(&from_env);
    assert_eq!(v["inputs"]["seed"], 42);
    let row = &v["outputs"]["rows"][0];
    assert!((row["target"].as_f64().unwrap() - 0.278348040848).abs() < 1e-11);
}

#[test]
fn mc_subsystem_targets_and_strict_mode() {
    let out = run(&[
        "mc", "--mode", "subsystem", "--ds", "2", "--de", "6", "--samples", "20000", "--strict", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let rows = v["outputs"]["rows"].as_array().unwrap();
    let target = |name: &str| {
        rows.iter().find(|r| r["quantity"] == name).unwrap()["target"].as_f64().unwrap()
    };
    assert!((target("purity") - 8.0 / 13.0).abs() < 1e-11);
    assert!((target("P_1") - 0.5).abs() < 1e-12);
    assert!((target("cross_moment") - 1.0 / 156.0).abs() < 1e-13);
    assert!(v["outputs"]["max_abs_z"].as_f64().unwrap() < 5.0);

    assert_eq!(code(&run(&["mc", "--mode", "mi", "--de", "4"])), 2);
    assert_eq!(code(&run(&["mc", "--mode", "subsystem", "--ds", "2", "--de", "6", "--samples", "0"])), 2);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("typicality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mi.csv");
    let args = ["mi", "--da", "2", "--db", "3", "--de", "12", "--format", "csv"];
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = run(&with_file);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_negative_control_fails_with_status_4() {
    let out = run(&["report", "--inject-fault", "wrong-bernoulli", "--json"]);
    assert_eq!(code(&out), 4);
    let v = json(&out);
    assert_eq!(v["outputs"]["all_passed"], false);
    let results = v["outputs"]["results"].as_array().unwrap();
    assert_eq!(results.len(), 14);
    let failed: Vec<u64> = results
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, [6]);
}
