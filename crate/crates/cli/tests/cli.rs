use std::path::Path;
use std::process::{Command, Output};

fn mublp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mublp"))
        .args(args)
        .env_remove("MUBLP_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn karlsson_writes_a_loadable_hadamard() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = mublp(&[
        "karlsson",
        "--theta",
        "0.3",
        "--phi",
        "-1.1",
        "--z1-arg",
        "0.7",
        "--branches",
        "+-+",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = mublp::PhaseMatrix::load(&out).unwrap();
    assert!(m.unitarity_residual() < 1e-9);
    assert!(stdout(&o).starts_with("seed: "));
}

#[test]
fn spectral_claim_passes() {
    let o = mublp(&["verify", "--claim", "spectral"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn impossible_tolerance_exits_one() {
    let o = mublp(&[
        "verify", "--claim", "theorem1", "--grid", "3,3,2", "--tol", "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn plus_variant_witness_fails_for_d3() {
    assert_eq!(
        mublp(&["verify", "--claim", "witness", "--d", "3"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        mublp(&[
            "verify",
            "--claim",
            "witness",
            "--d",
            "3",
            "--variant",
            "plus"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mublp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        mublp(&["karlsson", "--theta", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mublp(&[
            "karlsson",
            "--theta",
            "0",
            "--phi",
            "0",
            "--z1-arg",
            "0",
            "--branches",
            "+x+"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn build_solve_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nested/m.mps");
    let o = mublp(&["build-lp", "--d", "2", "--l", "4", "--out", path(&missing)]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    assert_ne!(o.status.code(), Some(0));
    let mps = dir.path().join("m.mps");
    let sol = dir.path().join("s.json");
    let report = dir.path().join("r.json");
    let o = mublp(&[
        "build-lp",
        "--d",
        "2",
        "--l",
        "4",
        "--family",
        "G",
        "--rho",
        "2,-2",
        "--out",
        path(&mps),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(mps.with_extension("meta.json").exists());

    let o = mublp(&[
        "solve",
        "--model",
        path(&mps),
        "--mode",
        "exact",
        "--out",
        path(&sol),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("objective (exact): 8"));

    let o = mublp(&[
        "solve",
        "--model",
        path(&mps),
        "--check",
        path(&sol),
        "--json",
        path(&report),
    ]);
    assert!(o.status.success());
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["check"]["pass"], true);
    assert_eq!(r["check"]["dual_bound"], 8.0);
}

#[test]
fn capped_solve_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let mps = dir.path().join("m.mps");
    assert!(mublp(&[
        "build-lp",
        "--d",
        "2",
        "--l",
        "4",
        "--family",
        "G",
        "--rho",
        "2,-2",
        "--out",
        path(&mps)
    ])
    .status
    .success());
    let o = mublp(&["solve", "--model", path(&mps), "--iteration-cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("IterationCap"));
}

#[test]
fn out_of_space_objective_is_na() {
    let o = mublp(&["table1", "--l", "10", "--rho", "12,-12,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n/a"));
}

#[test]
fn table1_d3_reports_the_minimum() {
    let o = mublp(&[
        "table1", "--d", "3", "--l", "6", "--rho", "3,-3,0", "--family", "G", "--solve", "embedded",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("27"));
}

#[test]
fn gamma_space_counts() {
    let o = mublp(&["gamma-space", "--d", "2", "--l", "2", "--list"]);
    let s = stdout(&o);
    assert!(s.contains('5') && s.contains("13"), "{s}");
}

#[test]
fn eval_mub_set_at_origin() {
    let o = mublp(&["eval", "--gamma", "0,0", "--mub-set", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn out_dir_places_relative_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = mublp(&[
        "--out-dir",
        path(dir.path()),
        "-v",
        "karlsson",
        "--theta",
        "0.3",
        "--phi",
        "1.1",
        "--z1-arg",
        "0.7",
        "--out",
        "k.json",
        "--json",
        "report.json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("k.json").is_file());
    assert!(dir.path().join("report.json").is_file());
    assert!(String::from_utf8_lossy(&o.stderr).contains("finished in"));

    let missing = dir.path().join("nope");
    let o = mublp(&[
        "--out-dir",
        path(&missing),
        "gamma-space",
        "--d",
        "2",
        "--l",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
