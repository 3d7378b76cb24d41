use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nctwobody"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn solve_schrodinger_limit() {
    let v = json(&["solve", "-n", "1", "-l", "0", "--alpha-z", "0.001"]);
    assert!(num(&v, "epsilon").abs() < 1e-9);
    assert!((num(&v, "energy_mu_c2") + 5e-7).abs() < 1e-12);
    assert_eq!(num(&v, "omega"), 0.40765);
    assert_eq!(num(&v, "tol"), 1e-8);
    for key in [
        "n",
        "l",
        "alpha_z",
        "eta",
        "mean_distance_compton",
        "residual",
        "iterations",
    ] {
        assert!(!v[key].is_null(), "{key}");
    }
}

#[test]
fn solve_ground_state_at_unit_coupling() {
    let v = json(&["solve", "-n", "1", "-l", "0", "--alpha-z", "1"]);
    assert!((num(&v, "mean_distance_compton") - 0.9).abs() < 0.03);
}

#[test]
fn solve_past_critical_exits_two() {
    let out = run(&["solve", "-n", "1", "-l", "0", "--alpha-z", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no bound state: g > g_critical"), "{err}");
    let diagnostic: Value = serde_json::from_str(err.trim()).unwrap();
    assert!((num(&diagnostic, "g_critical") - 0.40765).abs() < 5e-4);
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_input_exits_one() {
    for args in [
        vec!["solve", "--alpha-z"],
        vec!["solve", "--alpha-z", "abc"],
        vec!["solve", "-n", "1", "-l", "1", "--alpha-z", "0.5"],
        vec!["solve", "--alpha-z", "-1"],
        vec!["frobnicate"],
        vec!["curve", "energy", "--alpha-z", "1:0:0.1"],
        vec!["spectrum", "--alpha-z", "0.5", "--n-max", "21"],
        vec!["algebra", "coeffs", "--masses", "1,1"],
        vec!["algebra", "coeffs", "--masses", "1,1", "--eps-uniform", "1.5"],
        vec!["algebra", "commutators", "--m1", "0", "--m2", "1", "--eps", "0.1"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn critical_levels() {
    let v = json(&["omega-c"]);
    assert!((num(&v, "g_critical") - 0.40765).abs() < 5e-4);
    assert_eq!(v["omega_c"], v["g_critical"]);
    let s = json(&["critical", "-n", "2", "-l", "0"]);
    assert!((num(&s, "alpha_z_critical") - 3.0).abs() < 0.06);
    let p = json(&["critical", "-n", "2", "-l", "1"]);
    assert!((num(&p, "alpha_z_critical") - 2.5).abs() < 0.05);
}

#[test]
fn energy_curve_is_ordered() {
    let out = run(&["curve", "energy", "--alpha-z", "0.05:1.0:0.05"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["alpha_z", "E_schrodinger", "E_dirac", "E_noncommutative"]);
    assert_eq!(rows.len(), 20);
    for row in &rows {
        let v: Vec<f64> = row.iter().map(|c| c.parse().unwrap()).collect();
        assert!(v[2] <= v[3] && v[3] <= v[1], "{row:?}");
    }
}

#[test]
fn rhs_curve_at_zero_coupling_is_flat() {
    let out = run(&["curve", "rhs", "-n", "1", "-l", "0", "--g", "0"]);
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["eta", "rhs"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[1] == "1"));
}

#[test]
fn epsilon_curve_is_monotone_and_keeps_gaps() {
    let out = run(&["curve", "epsilon", "-n", "1", "-l", "0", "--alpha-z", "0.1:1.0:0.1"]);
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["alpha_z", "epsilon"]);
    let eps: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(eps.len(), 10);
    assert!(eps.windows(2).all(|w| w[1] > w[0]), "{eps:?}");

    let out = run(&["curve", "epsilon", "--levels", "1S,2P", "--alpha-z", "0.9:1.5:0.3"]);
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["alpha_z", "epsilon_1S", "epsilon_2P"]);
    assert_eq!(rows.len(), 3);
    assert!(rows[2][1].is_empty() && !rows[2][2].is_empty(), "{rows:?}");
}

#[test]
fn curve_to_file_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("energy.csv");
    let out = run(&[
        "curve",
        "energy",
        "--alpha-z",
        "0.5:0.6:0.1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let (_, rows) = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 2);

    let bad = dir.path().join("missing").join("x.csv");
    let out = run(&["curve", "energy", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_tables() {
    let text = |args: &[&str]| String::from_utf8(run(args).stdout).unwrap();
    let table = text(&["spectrum", "--alpha-z", "1.5", "--n-max", "2"]);
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1S") && rows[0].contains('—'));
    assert!(!rows[1].contains('—') && !rows[2].contains('—'));

    let table = text(&["spectrum", "--alpha-z", "0.5", "--n-max", "2"]);
    let energies: Vec<f64> = table
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(energies.len(), 3);
    assert_ne!(energies[1], energies[2]);
    assert!(energies[1] < -0.03125 && energies[2] < -0.03125);

    let table = text(&["spectrum", "--alpha-z", "0.001", "--n-max", "3"]);
    for line in table.lines().skip(2) {
        let eps: f64 = line.split_whitespace().nth(5).unwrap().parse().unwrap();
        assert!(eps < 1e-6, "{line}");
    }
}

#[test]
fn algebra_commands() {
    let v = json(&["algebra", "commutators", "--m1", "1", "--m2", "2", "--eps", "0.3"]);
    for (key, want) in [
        ("x1_p1", 0.8),
        ("x2_p2", 0.9),
        ("x1_p2", 0.2),
        ("x2_p1", 0.1),
        ("x1_x2", 0.0),
        ("p1_p2", 0.0),
    ] {
        assert!((num(&v, key) - want).abs() < 1e-13, "{key}");
    }
    assert_eq!(v["matches"], true);

    let v = json(&[
        "algebra",
        "commutators",
        "--m1",
        "1",
        "--m2",
        "2",
        "--eps",
        "0.3",
        "--exact",
    ]);
    assert_eq!(v["x1_p1"], "4/5");
    assert_eq!(v["total_momentum"], serde_json::json!(["1", "1"]));

    let v = json(&["algebra", "coeffs", "--masses", "1,1", "--eps-uniform", "0.4"]);
    assert!((v["A"][0].as_f64().unwrap() - 0.68).abs() < 1e-12);
    assert!((v["B"][0][1].as_f64().unwrap() - 0.64).abs() < 1e-12);

    let v = json(&[
        "algebra",
        "coeffs",
        "--masses",
        "1,1",
        "--eps-uniform",
        "0.4",
        "--exact",
    ]);
    assert_eq!(v["A"], serde_json::json!(["17/25", "17/25"]));
    assert_eq!(v["B"][0][1], "16/25");

    let v = json(&["algebra", "com-check", "--masses", "1,2,3", "--eps-uniform", "0.1"]);
    assert!((num(&v, "com_coefficient") - 1.0 / 6.0).abs() < 1e-12);
    assert_eq!(v["decoupled"], true);

    let v = json(&[
        "algebra",
        "com-check",
        "--masses",
        "1,2,3",
        "--eps-matrix",
        "0,0.1,0.2;0.1,0,0.3;0.2,0.3,0",
        "--exact",
    ]);
    assert_eq!(v["com_coefficient"], "1/6");
    assert_eq!(v["decoupled"], true);
}

#[test]
fn identical_invocations_are_identical() {
    let args = ["curve", "epsilon", "--levels", "1S,2S", "--alpha-z", "0.2:1.2:0.25"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["solve", "-n", "2", "-l", "1", "--alpha-z", "2.2"]);
    let b = run(&["solve", "-n", "2", "-l", "1", "--alpha-z", "2.2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_numbers_round_trip() {
    let out = run(&["curve", "rhs", "-n", "2", "-l", "1", "--g", "40", "--eta", "0.3:1:0.05"]);
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for row in rows {
        for cell in row {
            let x: f64 = cell.parse().unwrap();
            let again = format!("{:.11e}", x).parse::<f64>().unwrap();
            assert_eq!(x, again, "{cell} is not stable at 12 digits");
        }
    }
}
