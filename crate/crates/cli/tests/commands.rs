use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pmsim_core::arith::wire::gauss_matrix_to_wire;
use pmsim_core::arith::{gauss_int, Matrix};
use pmsim_core::quantum::{render_state, StateFile};
use pmsim_core::QuantumState;
use tempfile::TempDir;

fn pmsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_state(dir: &TempDir, name: &str, rho: &QuantumState) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, render_state(rho)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Probability column of each `(outcomes) p ...` line.
fn table(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| l.starts_with('('))
        .map(|l| {
            let mut parts = l.split_whitespace();
            (parts.next().unwrap().to_string(), parts.next().unwrap().to_string())
        })
        .collect()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pmsim(&["behaviors", "--depth", "1"]).status.code(), Some(2));
    assert_eq!(pmsim(&["behaviors", "--ray-cap", "0"]).status.code(), Some(2));
    assert_eq!(pmsim(&["behaviors", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(pmsim(&["behaviors", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(pmsim(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn behaviors_to_stdout_matches_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("b.json");
    let to_file = pmsim(&["behaviors", "--out", s(&path)]);
    assert!(to_file.status.success());
    let to_stdout = pmsim(&["behaviors"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    let v: serde_json::Value = serde_json::from_slice(&to_stdout.stdout).unwrap();
    assert_eq!(v["behaviors"].as_array().unwrap().len(), 240);
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 64);
    assert!(m.iter().all(|row| row.as_array().unwrap().len() == 240));
}

#[test]
fn ray_cap_one_is_a_resource_failure() {
    let o = pmsim(&["certify", "--ray-cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("ray cap of 1"), "{}", stderr(&o));
}

#[test]
fn certify_reports_the_verdict() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let o = pmsim(&["certify", "--out", s(&path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["nonzero_witness_count"], 24);
    assert_eq!(v["q_subset_p"], true);
    assert!(stdout(&o).contains("nonzero witnesses 24"));
}

#[test]
fn fault_injection_fails_with_a_violation() {
    let o = pmsim(&["behaviors", "--inject-fault", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("violated in context"), "{}", stderr(&o));
    let o = pmsim(&["selftest", "--inject-fault", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("criterion 1 (family validity) failed"), "{}", stderr(&o));
    assert!(stdout(&o).contains("criterion 1 [FAIL]"));
}

#[test]
fn ensemble_for_singlet_and_mixed_state() {
    let dir = TempDir::new().unwrap();
    for (name, rho) in [("singlet", QuantumState::singlet()), ("mixed", QuantumState::maximally_mixed())] {
        let state = write_state(&dir, &format!("{name}.json"), &rho);
        let out = dir.path().join(format!("{name}-ensemble.json"));
        let o = pmsim(&["ensemble", "--state", s(&state), "--out", s(&out)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("{name}-ensemble.verify.json"))).unwrap())
                .unwrap();
        assert_eq!(report["verdict"], "pass");
        assert_eq!(report["depth"], 3);
        assert_eq!(report["outcome_strings"], 1548);
        let ens: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert!(!ens["weights"].as_array().unwrap().is_empty());
    }
}

#[test]
fn non_psd_state_is_rejected() {
    let dir = TempDir::new().unwrap();
    let d = [1i64, 1, -1, 0];
    let rho = Matrix::from_fn(4, 4, |i, j| gauss_int(if i == j { d[i] } else { 0 }, 0));
    let file = StateFile {
        rho: gauss_matrix_to_wire(&rho),
    };
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let o = pmsim(&["ensemble", "--state", s(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not positive semidefinite"), "{}", stderr(&o));
}

#[test]
fn simulate_examples() {
    let dir = TempDir::new().unwrap();
    let singlet = write_state(&dir, "singlet.json", &QuantumState::singlet());
    let o = pmsim(&["simulate", "--state", s(&singlet), "C,c,γ"]);
    assert!(o.status.success());
    let t = table(&stdout(&o));
    assert_eq!(t.len(), 8);
    for (outs, p) in &t {
        assert_eq!(p, if outs == "(-1,-1,-1)" { "1" } else { "0" }, "{outs}");
    }

    let mixed = write_state(&dir, "mixed.json", &QuantumState::maximally_mixed());
    let t = table(&stdout(&pmsim(&["simulate", "--state", s(&mixed), "A,B"])));
    assert_eq!(t.len(), 4);
    assert!(t.iter().all(|(_, p)| p == "1/4"));

    let basis = write_state(&dir, "basis.json", &QuantumState::basis(2));
    let t = table(&stdout(&pmsim(&["simulate", "--state", s(&basis), "A,A"])));
    for (outs, p) in &t {
        if outs == "(+1,-1)" || outs == "(-1,+1)" {
            assert_eq!(p, "0");
        }
    }

    let o = pmsim(&["simulate", "--state", s(&singlet), "A,b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("A and b share no context"), "{}", stderr(&o));
}

#[test]
fn simulate_against_an_ensemble() {
    let dir = TempDir::new().unwrap();
    let singlet = write_state(&dir, "singlet.json", &QuantumState::singlet());
    let mixed = write_state(&dir, "mixed.json", &QuantumState::maximally_mixed());
    let ens = dir.path().join("singlet-ensemble.json");
    assert!(pmsim(&["ensemble", "--state", s(&singlet), "--out", s(&ens)]).status.success());

    let o = pmsim(&["simulate", "--state", s(&singlet), "--ensemble", s(&ens), "C,A,C"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: equal"));

    let o = pmsim(&["simulate", "--state", s(&mixed), "--ensemble", s(&ens), "C"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: differ"));
}
