use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lamopt_cli::schema::{DesignResult, DesignStatus, ProblemFile};
use lamopt_core::clt::buckling_factor;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn lamopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamopt")).args(args).output().expect("lamopt runs")
}

fn lamopt_path(args: &[&str], path: &Path, rest: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamopt"))
        .args(args)
        .arg(path)
        .args(rest)
        .output()
        .expect("lamopt runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn params_uniform_zero_stack() {
    let out = lamopt_path(&["params"], &fixture("stack_uniform_0.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(floats(&v["xi_a"]), vec![1.0, 1.0, 0.0, 0.0]);
    assert_eq!(floats(&v["xi_d"]["exact"]), vec![1.0, 1.0, 0.0, 0.0]);
    // A11 = Q11 * h with h = 8 * 0.125 mm.
    let a11 = v["a_matrix"][0][0].as_f64().unwrap();
    assert!((a11 - 181811.13884441793).abs() < 1e-7);
}

#[test]
fn params_cross_ply_bending() {
    let out = lamopt_path(&["params"], &fixture("stack_0_90.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(floats(&v["xi_d"]["midpoint"]), vec![-0.75, 0.9375, 0.0, 0.0]);
    assert!(v["d_matrix"].is_null());
}

#[test]
fn params_rejects_empty_and_malformed_files() {
    let out = lamopt_path(&["params"], &fixture("stack_empty.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = lamopt_path(&["params"], &fixture("stack_malformed.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
    assert!(stderr(&out).contains("column"));
}

#[test]
fn region_examples() {
    let v = json(&lamopt(&["region", "--counts", "3,0,0,0"]));
    assert_eq!(v["affine_dim"], 0);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);

    let v = json(&lamopt(&["region", "--counts", "1,1", "--angles", "0,90"]));
    assert_eq!(v["affine_dim"], 1);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);

    let v = json(&lamopt(&["region", "--counts", "2,1,1,0", "--mode", "exact"]));
    assert!(v["vertices"].as_array().unwrap().len() <= 6);
    assert_eq!(v["mode"], "exact");

    let out = lamopt(&["region", "--counts", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn region_writes_json_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let (j, c) = (dir.path().join("r.json"), dir.path().join("r.csv"));
    let out = Command::new(env!("CARGO_BIN_EXE_lamopt"))
        .args(["region", "--counts", "2,1,1,1", "--angles", "0,45,-45,90"])
        .arg("--out")
        .arg(&j)
        .arg("--csv")
        .arg(&c)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    let csv = std::fs::read_to_string(&c).unwrap();
    assert_eq!(csv.lines().count(), 1 + v["vertices"].as_array().unwrap().len());
    assert!(csv.starts_with("xi1,xi2,xi3,xi4,sequence"));
    // Each facet holds with equality at some vertex.
    for f in v["facets"].as_array().unwrap() {
        let n = floats(&f["normal"]);
        let b = f["offset"].as_f64().unwrap();
        let tight = v["vertices"].as_array().unwrap().iter().any(|vx| {
            let x = floats(&vx["xi_d"]);
            (n.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() - b).abs() < 1e-9
        });
        assert!(tight);
    }
}

#[test]
fn verify_examples() {
    let out = lamopt(&["verify", "--counts", "2,2,2,2", "--samples", "100", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cloud_size"], 2520);
    assert_eq!(v["points_outside"], 0);
    assert!(v["support_max_gap"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["passed"], true);

    let out = lamopt(&["verify", "--counts", "1,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cloud_size"], 1);
}

#[test]
fn verify_guard_reports_count() {
    let out = lamopt(&["verify", "--counts", "4,4,4,4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("63063000"), "{}", stderr(&out));
}

#[test]
fn optimize_tensile_returns_minimal_laminate() {
    let out = lamopt_path(&["optimize"], &fixture("tensile.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.status, DesignStatus::Optimal);
    assert_eq!(r.total_plies, Some(1));
    assert!(r.margins.as_ref().unwrap().buckling.is_none());
    assert_eq!(r.stacking.as_ref().unwrap().symmetric.len(), 2);
    assert!(r.timings.is_none());
}

#[test]
fn optimize_exit_codes() {
    let out = lamopt_path(&["optimize"], &fixture("impossible_percentages.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("min_pct"));

    let out = lamopt_path(&["optimize"], &fixture("problem_unknown_key.json"), &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = lamopt_path(&["optimize"], &fixture("infeasible_cap.json"), &[]);
    assert_eq!(out.status.code(), Some(3));
    let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.status, DesignStatus::InfeasibleUpToCap);
    assert!(r.counts.is_none());

    let out = lamopt_path(&["optimize"], &fixture("nonexistent.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rule_infeasible_result_is_still_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_lamopt"))
        .arg("optimize")
        .arg(fixture("rule_infeasible.json"))
        .arg("-o")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let r: DesignResult = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.status, DesignStatus::RuleInfeasible);
    let s = r.stacking.unwrap();
    assert!(!s.rules_satisfied);
    assert!(!s.violations.is_empty());
    assert!(!r.design_feasible);
}

#[test]
fn unknown_keys_and_versions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("tensile.json")).unwrap();
    let bad_version = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
    let p = dir.path().join("v2.json");
    std::fs::write(&p, bad_version).unwrap();
    let out = lamopt_path(&["optimize"], &p, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schema_version"));

    let extra = text.replace("\"options\": {}", "\"options\": {\"speed\": 3}");
    let p = dir.path().join("extra.json");
    std::fs::write(&p, extra).unwrap();
    let out = lamopt_path(&["optimize"], &p, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("speed"));
}

#[test]
fn mode_flag_overrides_problem_file() {
    let out = lamopt_path(&["optimize"], &fixture("compression_square.json"), &["--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.mode, lamopt_core::PlyWeighting::Exact);
}

#[test]
fn timings_are_opt_in() {
    let out = lamopt_path(&["optimize"], &fixture("compression_square.json"), &["--timings"]);
    let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.timings.is_some());
}

#[test]
fn thread_count_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_lamopt"))
            .env("LAMOPT_THREADS", threads)
            .arg("optimize")
            .arg(fixture("compression_biaxial.json"))
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn input_digest_matches_file_bytes() {
    use sha2::{Digest, Sha256};
    let path = fixture("tensile.json");
    let out = lamopt_path(&["optimize"], &path, &[]);
    let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
    let expected = hex::encode(Sha256::digest(std::fs::read(&path).unwrap()));
    assert_eq!(r.input_sha256, expected);
}

/// Re-derives the buckling margin of the stated sequence through `lamopt
/// params` and compares it with the result file.
#[test]
fn result_revalidates_through_params() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["compression_square.json", "compression_biaxial.json", "compression_wide_exact.json"] {
        let problem_path = fixture(name);
        let file = ProblemFile::parse(name, &std::fs::read_to_string(&problem_path).unwrap()).unwrap();
        let out = lamopt_path(&["optimize"], &problem_path, &[]);
        let r: DesignResult = serde_json::from_slice(&out.stdout).unwrap();
        let stacking = r.stacking.as_ref().unwrap();

        let stack = serde_json::json!({
            "schema_version": 1,
            "plies": stacking.mid_to_skin,
            "material": file.material,
        });
        let stack_path = dir.path().join(format!("stack_{name}"));
        std::fs::write(&stack_path, stack.to_string()).unwrap();
        let p = json(&lamopt_path(&["params"], &stack_path, &[]));

        let mode = r.mode.name();
        let xi = floats(&p["xi_d"][mode]);
        for (a, b) in xi.iter().zip(&stacking.xi_d) {
            assert!((a - b).abs() <= 1e-9);
        }
        let d: Vec<Vec<f64>> = p["d_matrix"][mode].as_array().unwrap().iter().map(floats).collect();
        let d = [[d[0][0], d[0][1], d[0][2]], [d[1][0], d[1][1], d[1][2]], [d[2][0], d[2][1], d[2][2]]];
        let b = buckling_factor(&d, &file.loads).unwrap();
        let stated = r.margins.as_ref().unwrap();
        assert!((b.factor - 1.0 - stated.buckling.unwrap()).abs() <= 1e-9, "{name}");
        assert_eq!(Some((b.m, b.p)), stated.critical_mode);
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(lamopt(&["--help"]).status.code(), Some(0));
    assert_eq!(lamopt(&["frobnicate"]).status.code(), Some(2));
}
