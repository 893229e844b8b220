use std::fs;
use std::process::{Command, Output};

use moment_hyp::region::max_imag;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moment-hyp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn eigen_re(v: &Value) -> Vec<f64> {
    v["eigenvalues"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect()
}

#[test]
fn mod13_equilibrium() {
    for exact in [false, true] {
        let mut args = vec!["analyze", "mod13"];
        if exact {
            args.push("--exact");
        }
        let v = json(&args);
        assert_eq!(v["system"], "mod13");
        assert_eq!(v["diagonalizable"], true);
        assert_eq!(v["eta2"].as_f64(), Some(0.0));
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 13);
        assert_eq!(v["certificates"]["certified"], exact);
    }
}

#[test]
fn grad_gaussian_offdiagonal_is_not_diagonalizable() {
    for extra in [None, Some("--exact")] {
        let mut args = vec!["analyze", "grad13-3d", "--set", "theta12=0.1"];
        args.extend(extra);
        let v = json(&args);
        assert_eq!(v["diagonalizable"], false, "{args:?}");
        assert!(v.get("eta2").is_none());
        assert!(v["certificates"]["witness"].is_string());
    }
}

#[test]
fn grad_1d_equilibrium_spectrum() {
    let v = json(&["analyze", "grad13-1d"]);
    let mut got = eigen_re(&v);
    got.sort_by(f64::total_cmp);
    let want = [-2.13050, -0.81297, 0.0, 0.81297, 2.13050];
    assert_eq!(got.len(), 5);
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-5, "{got:?}");
    }
    assert_eq!(v["diagonalizable"], true);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        vec!["analyze", "mod13", "--set", "theta11=-1"],
        vec!["analyze", "mod13", "--set", "theta12=2"],
        vec!["analyze", "grad13-1d", "--set", "theta12=0.1"],
        vec!["analyze", "mod13", "--set", "s1=abc"],
        vec!["analyze", "mod13", "--set", "s1"],
        vec!["analyze", "mod13", "--state", "/nonexistent/state.json"],
        vec!["analyze", "nonsense"],
        vec!["delta-max", "--tol", "0.5"],
        vec!["criterion", "--grad-theta", "0.1", "--theta", "0", "--l-mfp", "1"],
        vec!["region", "--n1", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = bin().args(["criterion", "--grad-theta", "0", "--theta", "1", "--l-mfp", "1"])
        .env("MOMENT_HYP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_round_trips_through_state_parser() {
    let dir = tempfile::tempdir().unwrap();
    for (system, sets, exact) in [
        ("mod13", vec!["s1=0.1", "s2=-1/7", "theta23=0.2", "u2=3"], false),
        ("mod13", vec!["s1=1/10", "s3=2/9", "theta13=1/5"], true),
        ("grad13-3d", vec!["q1=0.05", "theta22=1.3"], false),
        ("grad13-1d", vec!["q1=0.1", "theta11=1.2", "theta22=0.9"], true),
    ] {
        let mut args = vec!["analyze", system];
        for s in &sets {
            args.extend(["--set", s]);
        }
        if exact {
            args.push("--exact");
        }
        let first = run(&args);
        assert!(first.status.success());
        let path = dir.path().join(format!("{system}-{exact}.json"));
        fs::write(&path, &first.stdout).unwrap();
        let mut again = vec!["analyze", system, "--state", path.to_str().unwrap()];
        if exact {
            again.push("--exact");
        }
        let second = run(&again);
        assert_eq!(first.stdout, second.stdout, "{system} {sets:?}");
    }
}

#[test]
fn key_value_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.txt");
    fs::write(&path, "# Gaussian with off-diagonal temperature\nrho = 1\ntheta12 = 1/2\n").unwrap();
    let from_file = run(&["analyze", "grad13-3d", "--exact", "--state", path.to_str().unwrap()]);
    let inline = run(&["analyze", "grad13-3d", "--exact", "--set", "theta12=0.5"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, inline.stdout);
    // --set overrides the file
    let over = json(&["analyze", "grad13-3d", "--state", path.to_str().unwrap(), "--set", "theta12=0"]);
    assert_eq!(over["diagonalizable"], true);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = ["analyze", "mod13", "--set", "s1=0.2", "--set", "s2=0.1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn region_csv(extra: &[&str], threads: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let mut args = vec!["region", "--n1", "40", "--n2", "40", "--out", path.to_str().unwrap()];
    args.extend(extra);
    let out = bin().args(&args).env("MOMENT_HYP_THREADS", threads).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    fs::read_to_string(path).unwrap()
}

#[test]
fn region_csv_contents() {
    let csv = region_csv(&[], "0");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("eta1,eta2,max_imag,resultant,hyperbolic"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 40 * 41 / 2);
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert_eq!((num(rows[0][0]), num(rows[0][1])), (0.0, 0.0));
    assert_eq!(rows[0][4], "true");
    for row in &rows {
        assert_eq!(row.len(), 5);
        let (e1, e2) = (num(row[0]), num(row[1]));
        assert!(e1 <= e2 && e2 <= 0.15);
        // 17 significant digits
        let mantissa = row[2].split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17, "{}", row[2]);
    }
    for k in [5, 300, 700] {
        let row = &rows[k];
        let direct = max_imag(num(row[0]), num(row[1])).unwrap();
        assert_eq!(num(row[2]), direct, "row {k}");
    }
    assert!(rows.iter().any(|r| r[4] == "false"));
}

#[test]
fn region_output_is_independent_of_thread_count() {
    let a = region_csv(&["--eta1-max", "0.12"], "1");
    let b = region_csv(&["--eta1-max", "0.12"], "0");
    let c = region_csv(&["--eta1-max", "0.12"], "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn delta_max_and_stability() {
    let v = json(&["delta-max"]);
    let d = v["delta_tilde"].as_f64().unwrap();
    let c = v["c_hyp"].as_f64().unwrap();
    assert!((0.090..=0.100).contains(&d), "δ̃ = {d}");
    assert!((0.064..=0.067).contains(&c), "C_hyp = {c}");
    let half = json(&["delta-max", "--tol", "5e-5"]);
    assert!((half["delta_tilde"].as_f64().unwrap() - d).abs() < 1e-3);
}

#[test]
fn criterion_examples() {
    let v = json(&["criterion", "--grad-theta", "0", "--theta", "1", "--l-mfp", "1"]);
    assert_eq!(v["satisfied"], true);
    let c = v["c_hyp"].as_f64().unwrap();
    assert!((c - 0.0656).abs() < 1e-4);
    let v = json(&["criterion", "--grad-theta", "0.1", "--theta", "1", "--l-mfp", "1"]);
    assert_eq!(v["satisfied"], false);
    let v = json(&["criterion", "--grad-theta", "0.05", "--theta", "1", "--l-mfp", "1", "--delta-max", "0.0958"]);
    assert_eq!(v["satisfied"], true);
}
