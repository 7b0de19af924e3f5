use std::process::{Command, Output};

fn quinticate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quinticate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn coeffs_relativistic_is_case_one() {
    let o = quinticate(&["coeffs", "--model", "relativistic", "--a", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("path,c1,c3,c5,discriminant,case\n"));
    let r = rows(&o);
    assert_eq!(r[0][0], "closed_form");
    assert!(num(&r[0][4]) < 0.0);
    assert_eq!(r[0][5], "Case I");
    assert_eq!(r[2][0], "difference");
    assert!(num(&r[2][1]).abs() < 1e-10);
}

#[test]
fn coeffs_duffing_relativistic_small_b_is_case_two() {
    let o = quinticate(&[
        "coeffs",
        "--model",
        "duffing-relativistic",
        "--a",
        "1",
        "--b",
        "0.3",
    ]);
    assert!(o.status.success());
    assert_eq!(rows(&o)[0][5], "Case II");
}

#[test]
fn coeffs_generic_linear_force() {
    let o = quinticate(&["coeffs", "--model", "generic", "--force-spec", "-1"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(
        (num(&r[0][1]), num(&r[0][2]), num(&r[0][3])),
        (1.0, 0.0, 0.0)
    );
}

#[test]
fn solve_explicit_quintic() {
    let o = quinticate(&["solve", "--coefficients", "1,2,3", "--samples", "1000"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("t,u,u_dot,residual\n"));
    let r = rows(&o);
    assert_eq!(r.len(), 1000);
    let t: Vec<f64> = r.iter().map(|x| num(&x[0])).collect();
    let u: Vec<f64> = r.iter().map(|x| num(&x[1])).collect();
    assert_eq!(u[0], 1.0);
    let step = t[999] / 999.0;
    assert!(t.windows(2).all(|w| ((w[1] - w[0]) - step).abs() < 1e-14));
    // Two zero crossings over one period, one in each half.
    let crossings: Vec<usize> = (1..u.len())
        .filter(|&i| u[i - 1].signum() != u[i].signum() && u[i] != 0.0)
        .collect();
    assert_eq!(crossings.len(), 2, "{crossings:?}");
    assert!(crossings[0] < 500 && crossings[1] > 500);
}

#[test]
fn solve_relativistic_residual_column() {
    let o = quinticate(&[
        "solve",
        "--model",
        "relativistic",
        "--a",
        "3",
        "--samples",
        "4001",
    ]);
    assert!(o.status.success());
    let max = rows(&o)
        .iter()
        .map(|x| num(&x[3]).abs())
        .fold(0.0, f64::max);
    assert!((max - 0.0219219).abs() < 1e-5, "{max}");
}

#[test]
fn period_commands() {
    let o = quinticate(&["period", "--model", "relativistic", "--a", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("exact,quintic,ratio,exact_method,exact_quadrature\n"));
    let r = &rows(&o)[0];
    let ratio = num(&r[2]);
    assert!(ratio > 1.0 - 1e-3 && ratio < 1.0006);

    let o = quinticate(&["period", "--model", "relativistic", "--a", "1e-4"]);
    let r = &rows(&o)[0];
    let two_pi = 2.0 * std::f64::consts::PI;
    assert!((num(&r[0]) - two_pi).abs() < 1e-6 && (num(&r[1]) - two_pi).abs() < 1e-6);

    let o = quinticate(&["period", "--model", "cable-mass", "--a", "1", "--b", "1"]);
    let r = &rows(&o)[0];
    assert_eq!(r[3], "closed-form-pi");
    assert!(((num(&r[0]) - num(&r[4])) / num(&r[0])).abs() < 1e-9);
}

#[test]
fn table_exit_codes_follow_the_checks() {
    let o = quinticate(&["table", "1"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 6);
    assert!(r.iter().all(|x| x[6] == "true"));

    let o = quinticate(&["table", "2"]);
    assert_eq!(rows(&o).len(), 3);
    let all_pass = rows(&o).iter().all(|x| x[6] == "true");
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}

#[test]
fn sweep_rows_are_ordered_and_deterministic() {
    let args = [
        "sweep",
        "--model",
        "relativistic",
        "--a-max",
        "30",
        "--a-steps",
        "300",
        "--grid",
        "401",
    ];
    let first = quinticate(&args);
    let second = quinticate(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let r = rows(&first);
    assert_eq!(r.len(), 300);
    assert!(r.windows(2).all(|w| num(&w[0][0]) < num(&w[1][0])));
    assert!(r.iter().all(|x| num(&x[5]) <= 0.0 && x[11] == "ok"));
}

#[test]
fn sweep_duffing_relativistic_flips_case() {
    let o = quinticate(&[
        "sweep",
        "--model",
        "duffing-relativistic",
        "--a-min",
        "1.5",
        "--a-max",
        "1.9",
        "--a-steps",
        "4",
        "--b-min",
        "0.9",
        "--b-max",
        "1",
        "--b-steps",
        "1",
        "--grid",
        "101",
    ]);
    assert!(o.status.success());
    let cases: Vec<String> = rows(&o).iter().map(|x| x[6].clone()).collect();
    // Grid points 1.6, 1.7, 1.8, 1.9; the crossing sits just below 1.7.
    assert_eq!(cases, ["Case I", "Case II", "Case II", "Case II"]);
}

#[test]
fn json_reports_carry_config_and_versions() {
    let o = quinticate(&[
        "period",
        "--model",
        "relativistic",
        "--a",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["command"], "period");
    assert_eq!(v["versions"]["quinticate"], env!("CARGO_PKG_VERSION"));
    assert!(v["results"]["ratio"].as_f64().unwrap() > 1.0);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("quinticate-cli-{}.csv", std::process::id()));
    let o = quinticate(&["coeffs", "--a", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("path,"));
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["coeffs", "--model", "relativistic", "--a", "0"][..],
        &["coeffs", "--model", "cable-mass", "--a", "1", "--b", "0"],
        &["coeffs", "--model", "cable-mass", "--a", "1"],
        &["solve", "--coefficients", "1,2"],
        &["table", "7"],
        &["sweep", "--a-min", "3", "--a-max", "1"],
    ] {
        let o = quinticate(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unsupported_triple_exits_with_one() {
    let o = quinticate(&["solve", "--coefficients", "1,1,-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("c5 must be positive"));
}
