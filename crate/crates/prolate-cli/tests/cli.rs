//! End-to-end checks of the binary: flag validation, output schema,
//! determinism, and cache behavior.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prolate"))
}

fn fresh_cache(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prolate-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], cache: &PathBuf) -> Output {
    bin()
        .args(args)
        .env("PROLATE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

#[test]
fn usage_errors_exit_2() {
    let cache = fresh_cache("usage");
    let out = run(&["spectrum", "--c", "-1", "--n-max", "4"], &cache);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectrum", "--n-max", "4"], &cache);
    assert_eq!(out.status.code(), Some(2));
    // check without a c list
    let out = run(&["check"], &cache);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"], &cache);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_rows_and_monotone_lambda() {
    let cache = fresh_cache("spectrum");
    let out = run(&["spectrum", "--c", "10", "--n-max", "40"], &cache);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema=1"));
    assert_eq!(lines.next().unwrap(), "n,chi,lambda,mu_abs,beta_tail_mass");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 41);
    let mut prev = f64::INFINITY;
    for row in &rows {
        let lambda: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(lambda < prev, "lambda not strictly decreasing: {row}");
        prev = lambda;
    }
}

#[test]
fn spectrum_c50_plunge_row() {
    // oracle-verified fixture: lambda_31(50) sits mid-plunge near 2c/pi
    let cache = fresh_cache("plunge");
    let out = run(&["spectrum", "--c", "50", "--n-max", "60"], &cache);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row31 = text.lines().nth(2 + 31).unwrap();
    let lambda: f64 = row31.split(',').nth(2).unwrap().parse().unwrap();
    assert!(
        (lambda - 0.6105702465945251).abs() < 1e-9,
        "lambda_31 = {lambda}"
    );
}

#[test]
fn example1_pi_multiples_and_zero() {
    let cache = fresh_cache("ex1");
    // lambda = 0: Legendre error 0 for N >= 1
    let out = run(&["example1", "--lambda", "0", "--c", "1", "--N", "3"], &cache);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(2).unwrap();
    let leg: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(leg, 0.0);
    // pi-multiple flags parse
    let out = run(
        &["example1", "--lambda", "2pi", "--c", "2pi", "--N", "8"],
        &cache,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(2).unwrap();
    let lam: f64 = row.split(',').next().unwrap().parse().unwrap();
    // printed with 9 significant digits
    assert!((lam - 2.0 * std::f64::consts::PI).abs() < 1e-7);
}

#[test]
fn table1_shape_and_json() {
    let cache = fresh_cache("table1");
    let out = run(
        &[
            "table1", "--c", "20", "--N-list", "10,20", "--s-list", "1.0,2.0",
        ],
        &cache,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema=1 c="));
    assert_eq!(lines.next().unwrap(), "N,s=1,s=2");
    assert_eq!(lines.count(), 2);
    let out = run(
        &[
            "table1", "--c", "20", "--N-list", "10", "--s-list", "1.0", "--format", "json",
        ],
        &cache,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("{\"schema\":1,\"rows\":[{\"N\":10,\"s=1\":"));
}

#[test]
fn determinism_and_cache_consistency() {
    let cache = fresh_cache("determ");
    let args = ["table1", "--c", "20", "--N-list", "10,14", "--s-list", "1.0,1.5"];
    let cold = run(&args, &cache);
    assert!(cold.status.success());
    // second run hits the cache written by the first
    let warm = run(&args, &cache);
    assert_eq!(cold.stdout, warm.stdout, "cached run differs from cold run");
    let warm2 = run(&args, &cache);
    assert_eq!(warm.stdout, warm2.stdout);
    // spectrum determinism too
    let s1 = run(&["spectrum", "--c", "7", "--n-max", "12"], &cache);
    let s2 = run(&["spectrum", "--c", "7", "--n-max", "12"], &cache);
    assert_eq!(s1.stdout, s2.stdout);
    // a cache file exists
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert!(entries >= 2, "expected cache files, found {entries}");
}

#[test]
fn approx_csv_schema() {
    let cache = fresh_cache("approx");
    let out = run(
        &[
            "approx", "--kind", "weierstrass", "--s", "1.5", "--c", "20", "--N-list", "12,16",
            "--quad-order", "512",
        ],
        &cache,
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# schema=1");
    assert_eq!(
        lines.next().unwrap(),
        "c,N,s,error_grid,error_quad,band_component,tail_component"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn check_passes_on_small_fixture() {
    let cache = fresh_cache("check");
    let out = run(&["check", "--c", "1,5"], &cache);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# total_violations=0"));
}

#[test]
fn oracle_compare_round_trip() {
    let cache = fresh_cache("oracle");
    let out = run(&["oracle-compare", "--c", "5", "--n-count", "12"], &cache);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().starts_with("# worst_rel_dev="));
}
