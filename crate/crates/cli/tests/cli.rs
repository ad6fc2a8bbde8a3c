use std::fs;
use std::process::{Command, Output};

use qsignal::RunManifest;
use serde_json::Value;

fn qsignal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsignal"))
        .args(args)
        .env_remove(qsignal::OUTPUT_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn manifest(args: &[&str]) -> RunManifest {
    let out = qsignal(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("manifest JSON")
}

#[test]
fn list_shows_the_registry() {
    let out = qsignal(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 10);
    assert!(lines.iter().all(|l| l.contains('#')));

    let out = qsignal(&["list", "--json"]);
    let records: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records.len(), lines.len());
    for (r, l) in records.iter().zip(&lines) {
        let name = r["name"].as_str().unwrap();
        assert!(l.starts_with(name));
        assert!(r["anchor"].as_str().unwrap().starts_with('#'));
        assert!(r["params"].is_array());
    }
}

#[test]
fn wigner_count_example() {
    let m = manifest(&["run", "wigner-count", "--n", "10", "--r", "10"]);
    assert_eq!(m.value("equations"), 1000.0);
    assert_eq!(m.value("unknowns"), 120.0);
    assert_eq!(m.config.seed, None);
}

#[test]
fn nosignal_sweep_example() {
    let m = manifest(&[
        "run",
        "nosignal-sweep",
        "--dims",
        "2x2",
        "--trials",
        "1000",
        "--seed",
        "1",
    ]);
    assert!(m.value("max_marginal_deviation") <= 1e-10);
    assert!(m
        .metrics
        .iter()
        .all(|x| x.trials >= 1 && x.tolerance >= 0.0));
}

#[test]
fn flash_example() {
    let m = manifest(&[
        "run", "flash", "--n", "50", "--cloner", "magic", "--trials", "10000", "--seed", "7",
    ]);
    assert!((m.value("branch_V_mean_V") - 50.0).abs() < 1e-9);
    assert!(m.value("branch_V_mean_H").abs() < 1e-9);
    assert!((m.value("branch_V_mean_L") - 25.0).abs() < 0.5);
    assert!((m.value("branch_V_mean_R") - 25.0).abs() < 0.5);
    assert!(m.value("mutual_information_bits") >= 0.9);
    assert_eq!(m.failures().count(), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(qsignal(&["run", "teleporter"]).status.code(), Some(2));
    assert_eq!(qsignal(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qsignal(&["run", "flash", "--bogus", "1"]).status.code(),
        Some(2)
    );

    let out = qsignal(&["run", "flash", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    let out = qsignal(&[
        "run", "flash", "--n=-3", "--cloner", "wizard", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n:") && err.contains("cloner"), "{err}");

    assert_eq!(
        qsignal(&["run", "popper", "--grid-points", "16"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qsignal(&["run", "grw-rate", "--alpha=-1"]).status.code(),
        Some(3)
    );

    // a single trajectory per N cannot fit a rate to 10%
    let out = qsignal(&[
        "run",
        "grw-collapse",
        "--trials",
        "1",
        "--seed",
        "2",
        "--max-particles",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
    assert!(m.failures().count() > 0);
}

#[test]
fn config_document_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flash.json");
    fs::write(
        &path,
        r#"{"experiment": "flash", "params": {"n": 2, "cloner": "linear"}, "trials": 2000, "seed": 5}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let m = manifest(&["run", "flash", "--config", p, "--n", "1"]);
    assert_eq!(m.config.params["n"], Value::from(1));
    assert_eq!(m.config.params["cloner"], Value::from("linear"));
    assert_eq!((m.config.trials, m.config.seed), (2000, Some(5)));

    fs::write(&path, r#"{"params": {"photons": 2}, "seeds": 1}"#).unwrap();
    let out = qsignal(&["run", "flash", "--config", p, "--seed", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("params.photons") && err.contains("seeds"),
        "{err}"
    );

    fs::write(&path, "{not json").unwrap();
    assert_eq!(
        qsignal(&["run", "flash", "--config", p, "--seed", "1"])
            .status
            .code(),
        Some(3)
    );
    fs::write(&path, r#"{"experiment": "popper"}"#).unwrap();
    assert_eq!(
        qsignal(&["run", "flash", "--config", p, "--seed", "1"])
            .status
            .code(),
        Some(3)
    );
}

// short runs may miss a statistical expectation; the manifest is still written
fn payload(args: &[&str]) -> String {
    let out = qsignal(args);
    assert!(matches!(out.status.code(), Some(0 | 4)));
    serde_json::from_slice::<RunManifest>(&out.stdout)
        .unwrap()
        .payload()
        .unwrap()
}

#[test]
fn same_seed_same_payload() {
    let args = [
        "run",
        "grw-collapse",
        "--trials",
        "50",
        "--seed",
        "9",
        "--max-particles",
        "4",
    ];
    assert_eq!(payload(&args), payload(&args));
    let other = [
        "run",
        "grw-collapse",
        "--trials",
        "50",
        "--seed",
        "10",
        "--max-particles",
        "4",
    ];
    assert_ne!(payload(&args), payload(&other));

    let csv = [
        "run", "flash", "--n", "3", "--trials", "1000", "--seed", "4", "--format", "csv",
    ];
    let a = qsignal(&csv);
    let b = qsignal(&csv);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_layout() {
    let out = qsignal(&["run", "wigner-count", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "experiment",
            "metric",
            "value",
            "tolerance",
            "trials",
            "seed"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[0][0], "wigner-count");
    assert_eq!(&rows[0][1], "equations");
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 1000.0);
    assert_eq!(&rows[0][5], "");
}

#[test]
fn manifest_round_trips() {
    for args in [
        &["run", "popper", "--grid-points", "64"][..],
        &[
            "run",
            "grw-collapse",
            "--trials",
            "20",
            "--seed",
            "3",
            "--max-particles",
            "2",
        ][..],
        &["run", "greenberger", "--seed", "1", "--trials", "1000"][..],
    ] {
        let out = qsignal(args);
        let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
        let again: RunManifest = serde_json::from_str(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, again);
        assert!(!m.series.is_empty() || args[1] == "greenberger");
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qsignal"))
        .args(["run", "shiekh"])
        .env(qsignal::OUTPUT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let m: RunManifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("shiekh.json")).unwrap()).unwrap();
    assert!(m.value("center_difference") >= 0.4);

    let target = dir.path().join("nested/flash.csv");
    let out = qsignal(&[
        "run",
        "flash",
        "--n",
        "1",
        "--trials",
        "1000",
        "--seed",
        "1",
        "--format",
        "csv",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(fs::read_to_string(target)
        .unwrap()
        .starts_with("experiment,metric"));
}

#[test]
fn every_experiment_runs_with_defaults() {
    for e in qsignal::registry::REGISTRY {
        let mut args = vec!["run", e.name];
        if e.sampled {
            args.extend(["--seed", "1", "--trials", "1000"]);
        }
        match e.name {
            "popper" => args.extend(["--grid-points", "64"]),
            "grw-collapse" => args.extend(["--max-particles", "2"]),
            _ => {}
        }
        let out = qsignal(&args);
        // short sampled runs may miss statistical expectations, never crash
        assert!(
            matches!(out.status.code(), Some(0 | 4)),
            "{}: {}",
            e.name,
            String::from_utf8_lossy(&out.stderr)
        );
        let m: RunManifest = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(m.config.experiment, e.name);
        assert!(!m.metrics.is_empty());
    }
}
