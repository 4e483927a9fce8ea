//! End-to-end runs of the `yahil` binary.

use std::path::Path;
use std::process::{Command, Output};

fn yahil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yahil"))
        .args(args)
        .env("YAHIL_THREADS", "2")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn first_line(p: &Path) -> String {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn certify_passes_and_reports_every_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certs.json");
    let o = yahil(&[
        "certify",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["listed"], 38);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn tighter_certificate_tolerance_still_passes() {
    let o = yahil(&["certify", "--tol-scale", "0.1", "--no-supplementary"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn a_corrupted_certificate_fails_verification() {
    let o = yahil(&["certify", "--no-supplementary", "--corrupt", "q1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&yahil(&["solve", "--gamma", "1.34"])), 1);
    assert_eq!(code(&yahil(&["solve", "--no-such-flag"])), 1);
    assert_eq!(code(&yahil(&[])), 1);
    assert_eq!(code(&yahil(&["plotdata"])), 1);
    assert_eq!(code(&yahil(&["--help"])), 0);
}

#[test]
fn expansion_outside_the_window_is_a_verification_failure() {
    assert_eq!(
        code(&yahil(&["expand", "--gamma", "1.2", "--y-star", "0.5"])),
        2
    );
}

#[test]
fn expand_writes_coefficients_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("coeffs.csv");
    let o = yahil(&[
        "expand",
        "--gamma",
        "1.2",
        "--y-star",
        "2.3",
        "--n-max",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first_line(&out), "N,rho_N,omega_N,P_N");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 22);
    let s = json(&dir.path().join("coeffs.summary.json"));
    assert!(s["radius"].as_f64().unwrap() > 0.0);
}

#[test]
fn solve_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = yahil(&["solve", "--gamma", "1.2", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(first_line(&a), "y,rho,omega,u,G,h");
    let s = json(&dir.path().join("a.summary.json"));
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["all_pass"], true);
    let y = s["y_star_bar"].as_f64().unwrap();
    assert!((y - 2.33277224013786).abs() < 1e-9, "{y}");

    // The solved profile feeds the physical reconstruction.
    let phys = dir.path().join("phys.csv");
    let o = yahil(&[
        "physical",
        "--gamma",
        "1.2",
        "--profile",
        a.to_str().unwrap(),
        "--out",
        phys.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&phys).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("r,"));
    assert_eq!(lines.count(), 200);
}

#[test]
fn solve_json_embeds_the_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.json");
    let o = yahil(&[
        "solve",
        "--gamma",
        "1.3",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert!(v["profile"].as_array().unwrap().len() > 100);
    assert_eq!(
        v["invariants"]["checks"].as_array().map(|c| c.len()),
        Some(8)
    );
}

#[test]
fn plotdata_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = yahil(&[
        "plotdata",
        "--points",
        "11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        first_line(&dir.path().join("branches.csv")),
        "gamma,omega0,R1,R2"
    );
    assert_eq!(
        first_line(&dir.path().join("levelset.csv")),
        "gamma,omega,f1"
    );
}
