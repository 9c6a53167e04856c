use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sqcat(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqcat"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn number(v: &Value) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn derive_reports_two_photon_loss_rate() {
    let dir = tempfile::tempdir().unwrap();
    let out = sqcat(&["derive"], dir.path());
    assert!(out.status.success());
    let body = json(&dir.path().join("derive.json"));
    assert!((number(&body["derived"]["gamma_a"]) - 4.0e-2).abs() < 1e-12);
    let csv = fs::read_to_string(dir.path().join("derive.csv")).unwrap();
    assert!(csv.contains("derived.gamma_a,4.00000000000e-2\n"));
}

#[test]
fn reduced_simulation_reaches_cat() {
    let dir = tempfile::tempdir().unwrap();
    let out = sqcat(&["simulate", "--tier", "reduced", "--set", "kappa_a=0"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = json(&dir.path().join("simulate.json"));
    assert!(number(&body["result"]["final_fidelity"]) >= 0.99);

    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut data = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(data.next(), Some("t,fidelity,n_a,parity"));
    let last: Vec<f64> = data.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 200.0);
    assert!(last[1] >= 0.99);
}

#[test]
fn yurke_stoler_qfi_equals_photon_number() {
    let dir = tempfile::tempdir().unwrap();
    let out = sqcat(&["qfi", "--set", "family=YSCS", "--set", "alpha=1", "--set", "r=0"], dir.path());
    assert!(out.status.success());
    let body = json(&dir.path().join("qfi.json"));
    assert_eq!(number(&body["result"]["f"]), 2.0);
    assert_eq!(number(&body["result"]["n"]), 2.0);
}

#[test]
fn reruns_are_byte_identical() {
    let runs: [&[&str]; 3] = [
        &["derive"],
        &["wigner", "--set", "points=21", "--set", "alpha=1", "--set", "r=0.5"],
        &["fit", "--set", "family=SYSCS", "--set", "n_max=20"],
    ];
    for args in runs {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert!(sqcat(args, a.path()).status.success());
        assert!(sqcat(args, b.path()).status.success());
        let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for name in names {
            let x = fs::read(a.path().join(&name)).unwrap();
            let y = fs::read(b.path().join(&name)).unwrap();
            assert_eq!(x, y, "{name:?} differs for {args:?}");
            assert!(!x.contains(&b'\r'));
        }
    }
}

#[test]
fn every_file_echoes_parameters() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sqcat(&["wigner", "--set", "points=11"], dir.path()).status.success());
    let csv = fs::read_to_string(dir.path().join("wigner.csv")).unwrap();
    assert!(csv.contains("# config.alpha = 2\n"));
    assert!(csv.contains("# config.points = 11\n"));
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(data[0].starts_with("q_values,"));
    assert!(data[1].starts_with("p_values,"));
    assert_eq!(data.len(), 2 + 11);
    assert!(data[2..].iter().all(|row| row.split(',').count() == 11));

    let body = json(&dir.path().join("wigner.json"));
    assert_eq!(body["config"]["scenario"], "wigner");
}

#[test]
fn config_file_with_comments_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# optimal SECS\nscenario = optimize\nfamily = SECS  # squeezed even\n\nn = 10\n").unwrap();
    let out = sqcat(&["optimize", "--config", cfg.to_str().unwrap(), "--set", "n=12"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = json(&dir.path().join("optimize.json"));
    assert!((number(&body["result"]["n"]) - 12.0).abs() < 1e-6);
    assert_eq!(body["config"]["family"], "SECS");
}

#[test]
fn exit_status_distinguishes_failures() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| sqcat(args, dir.path()).status.code();

    assert_eq!(code(&["derive", "--set", "bogus=1"]), Some(2));
    assert_eq!(code(&["qfi", "--set", "alpha=two"]), Some(2));
    let wrong = dir.path().join("wrong.cfg");
    fs::write(&wrong, "scenario = fit\n").unwrap();
    assert_eq!(code(&["qfi", "--config", wrong.to_str().unwrap()]), Some(2));

    assert_eq!(code(&["derive", "--set", "omega_1=60"]), Some(3));
    assert_eq!(code(&["derive", "--strict-rwa", "--set", "coupling=2"]), Some(3));
    assert_eq!(code(&["optimize", "--set", "family=SOCS", "--set", "n=1"]), Some(3));

    assert_eq!(code(&["wigner", "--set", "dim=20"]), Some(4));
    assert_eq!(code(&["simulate", "--set", "dt=1", "--set", "t_final=1"]), Some(5));
}
