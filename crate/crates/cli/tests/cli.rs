//! End-to-end runs of the `brane` binary.

use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use brane_core::cohomology::make_gamma;
use brane_core::integration::{integrate_cochain, GroupCochainDump, GroupElement};
use brane_core::superalgebra::{build_heisenberg, AlgebraConfig};
use brane_core::{q, qi};
use serde_json::Value;

fn brane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brane")).args(args).output().expect("binary runs")
}

fn brane_env(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brane")).args(args).env("BRANE_WORKERS", workers).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn record<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["records"].as_array().unwrap().iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("no record {id}"))
}

#[test]
fn verify_spinor_k8() {
    let out = brane(&["verify", "spinor", "--k", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(record(&r, "spinor.three_psi.k8.plus")["status"], "pass");
    assert_eq!(record(&r, "spinor.three_psi.k8.minus")["status"], "pass");
    assert_eq!(record(&r, "spinor.four_psi.k8")["status"], "pass");
    assert!(r["records"].as_array().unwrap().iter().all(|x| x.get("wall_ms").is_none()));
}

#[test]
fn verify_integration_reports_the_three_coefficients() {
    let out = brane(&["verify", "--suite", "integration"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let c = record(&r, "integration.p2.coefficients");
    assert_eq!(c["status"], "pass");
    let w = c["witness"].as_str().unwrap();
    assert!(w.contains("/2") && w.contains("/12"), "{w}");
    assert!(!c["anchor"].as_str().unwrap().is_empty());
}

#[test]
fn verify_super_k1() {
    let out = brane(&["verify", "super", "--k", "1", "--grassmann", "2", "--format", "md"]);
    assert_eq!(out.status.code(), Some(0));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("| `super.superstring.k1.n2` | superstring Lie 2-supergroup | pass |"), "{md}");
}

#[test]
fn reports_are_byte_identical_across_runs_and_pool_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |p: &Path| {
        vec![
            "verify".to_string(),
            "all".into(),
            "--k".into(),
            "1,2".into(),
            "--grassmann".into(),
            "2".into(),
            "--samples".into(),
            "4".into(),
            "--seed".into(),
            "77".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    for (p, w) in [(&a, "1"), (&b, "4"), (&c, "2")] {
        let v = args(p);
        let v: Vec<&str> = v.iter().map(String::as_str).collect();
        assert_eq!(brane_env(&v, w).status.code(), Some(0));
    }
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let r: Value = serde_json::from_slice(&a).unwrap();
    let ids: Vec<&str> = r["records"].as_array().unwrap().iter().map(|x| x["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(r["seed"], 77);
}

#[test]
fn integrate_gamma_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gamma.json");
    let out = brane(&["integrate", "--algebra", "heisenberg", "--cochain", "gamma", "--p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dump: GroupCochainDump = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(dump.terms.values().all(|v| v.contains('/')));
    let loaded = dump.load(Arc::new(build_heisenberg())).unwrap();
    let in_process = integrate_cochain(&make_gamma(), 3).unwrap();
    assert_eq!(loaded, in_process);
    let e = |i: usize| {
        let mut v = vec![qi(0); 3];
        v[i] = qi(1);
        GroupElement::from_q(v)
    };
    let args = [e(0), e(1), e(2)];
    assert_eq!(loaded.evaluate(&args).unwrap(), in_process.evaluate(&args).unwrap());
    assert_eq!(loaded.evaluate(&args).unwrap(), q(1, 6));
}

#[test]
fn integrate_level_one_encodes_the_cochain() {
    let out = brane(&["integrate", "--algebra", "heisenberg", "--cochain", "3/2:p; -1:z", "--p", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let dump: GroupCochainDump = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(dump.terms.len(), 2);
    assert_eq!(dump.terms["x0"], "3/2");
    assert_eq!(dump.terms["x2"], "-1/1");
}

#[test]
fn integrate_refuses_so3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.json");
    let out = brane(&["integrate", "--algebra", "so:3", "--cochain", "j", "--p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not 2-step nilpotent"));
    assert!(!path.exists());
    // Refused before the cochain is looked at.
    let out = brane(&["integrate", "--algebra", "so:3", "--cochain", "garbage", "--p", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nilpotent"));
}

#[test]
fn cohomology_dimensions() {
    let r = json(&brane(&["cohomology", "--algebra", "heisenberg", "--level", "3"]));
    assert_eq!(r["dimension"], 1);
    let r = json(&brane(&["cohomology", "--algebra", "abelian:2", "--level", "1"]));
    assert_eq!(r["dimension"], 2);
    let r = json(&brane(&["cohomology", "--algebra", "T2:1", "--level", "3", "--check", "alpha", "--bigrade", "2,0"]));
    assert_eq!(r["check"]["closed"], true);
    assert_eq!(r["check"]["exact"], false);
    let out = brane(&["cohomology", "--algebra", "siso3:8", "--level", "4", "--guard", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn algebra_config_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let cfg = AlgebraConfig::from_algebra(&build_heisenberg());
    std::fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let r = json(&brane(&["cohomology", "--algebra", p, "--level", "2"]));
    assert_eq!(r["dimension"], 2);
    let out = brane(&["integrate", "--algebra", p, "--cochain", "1:p,q", "--p", "2"]);
    let dump: GroupCochainDump = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(dump.terms["x0*x4"], "1/2");

    // Jacobi fails: [a,b]=c, [b,c]=a, [c,a]=a.
    let bad = r#"{"name":"bad","basis":[{"label":"a","parity":"even"},{"label":"b","parity":"even"},{"label":"c","parity":"even"}],
        "brackets":[{"x":"a","y":"b","result":[{"coef":"1","label":"c"}]},{"x":"b","y":"c","result":[{"coef":"1","label":"a"}]},
        {"x":"c","y":"a","result":[{"coef":"1","label":"a"}]}]}"#;
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, bad).unwrap();
    let out = brane(&["cohomology", "--algebra", bad_path.to_str().unwrap(), "--level", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not define a Lie superalgebra"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(brane(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(brane(&["verify", "spinor", "--k", "3"]).status.code(), Some(2));
    assert_eq!(brane(&["verify", "spinor", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(brane_env(&["verify", "division"], "zero").status.code(), Some(2));
    assert_eq!(brane(&["integrate", "--algebra", "heisenberg", "--cochain", "gamma", "--p", "2"]).status.code(), Some(2));
}
