use std::path::PathBuf;
use std::process::{Command, Output};

fn thermest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermest"))
        .args(args)
        .output()
        .expect("run thermest")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thermest-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bounds_identity3() {
    let out = thermest(&["bounds", "--n-mean", "1", "--weight", "identity3", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["c_r_general"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!((v["c_r_closed"].as_f64().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn bounds_known_n() {
    let out = thermest(&[
        "bounds",
        "--n-mean",
        "1",
        "--weight",
        "identity2",
        "--known-n",
        "--json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["c_r_general"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((v["gaussian"]["achieved"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn bounds_text_output() {
    let out = thermest(&["bounds", "--n-mean", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("C_R (general formula) = 12.000000000000"),
        "{text}"
    );
}

#[test]
fn missing_weight_file_exits_2() {
    let out = thermest(&["bounds", "--weight", "notafile"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_weight_file_exits_2() {
    let path = scratch("short.txt");
    std::fs::write(&path, "2\n1 0 0\n").unwrap();
    let out = thermest(&["bounds", "--weight", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn indefinite_weight_exits_3() {
    let path = scratch("indefinite.txt");
    std::fs::write(&path, "2\n1 0\n0 -1\n").unwrap();
    let out = thermest(&["bounds", "--weight", path.to_str().unwrap(), "--known-n"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nonpositive_photon_number_exits_3() {
    let out = thermest(&["bounds", "--n-mean", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_protocol_exits_2() {
    let out = thermest(&[
        "simulate",
        "--protocol",
        "adaptive",
        "--n-mean",
        "1",
        "--n-copies",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn too_few_trials_exits_2() {
    let out = thermest(&[
        "simulate",
        "--protocol",
        "separable",
        "--n-mean",
        "1",
        "--n-copies",
        "10",
        "--trials",
        "99",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_summary_csv_and_sidecar() {
    let summary = scratch("summary.json");
    let csv = scratch("trials.csv");
    let out = thermest(&[
        "simulate",
        "--protocol",
        "separable",
        "--n-mean",
        "1",
        "--theta1",
        "1",
        "--theta2",
        "0",
        "--n-copies",
        "10",
        "--trials",
        "200",
        "--seed",
        "3",
        "--out",
        summary.to_str().unwrap(),
        "--trial-csv",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    for key in [
        "n",
        "trials",
        "mse_entries",
        "n_trace_gv",
        "se",
        "c_r",
        "ratio",
        "manifest",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["trials"], 200);
    assert!((v["zeta"][0].as_f64().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,zeta_hat_re,zeta_hat_im,n_hat,err_sq_theta1,err_sq_theta2,err_sq_n"
    );
    assert_eq!(lines.count(), 200);

    let mut sidecar = summary.as_os_str().to_owned();
    sidecar.push(".manifest.json");
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(sidecar).unwrap()).unwrap();
    assert!(m["wall_time_s"].as_f64().is_some());
    assert!(m["command_line"].as_str().unwrap().contains("simulate"));
}

#[test]
fn known_n_csv_leaves_photon_columns_empty() {
    let csv = scratch("known.csv");
    let out = thermest(&[
        "simulate",
        "--protocol",
        "known-n",
        "--n-mean",
        "1",
        "--n-copies",
        "4",
        "--trials",
        "100",
        "--trial-csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 7);
    assert!(fields[3].is_empty() && fields[6].is_empty());
}

#[test]
fn same_seed_gives_identical_summary() {
    let args = [
        "simulate",
        "--protocol",
        "collective",
        "--n-mean",
        "0.5",
        "--zeta-re",
        "0.2",
        "--zeta-im",
        "-0.1",
        "--n-copies",
        "8",
        "--trials",
        "5000",
        "--seed",
        "11",
    ];
    let a = thermest(&args);
    let b = thermest(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = thermest(&[&args[..args.len() - 1], &["12"]].concat());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("config.json");
    std::fs::write(
        &cfg,
        r#"{"protocol": "known-n", "n-mean": 2, "zeta-re": 0.25, "n-copies": 5, "trials": 300, "seed": 9}"#,
    )
    .unwrap();
    let out = thermest(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "400",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["trials"], 400);
    assert_eq!(v["n"], 5);
    assert_eq!(v["zeta"][0], 0.25);
}

#[test]
fn config_file_unknown_key_exits_2() {
    let cfg = scratch("typo.json");
    std::fs::write(&cfg, r#"{"n_copies": 5}"#).unwrap();
    let out = thermest(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_default_passes() {
    let out = thermest(&["oracle-check", "--json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["pass"], true);
    for check in v["checks"].as_array().unwrap() {
        if check["name"].as_str().unwrap().starts_with("rld") {
            assert!(check["max_deviation"].as_f64().unwrap() < 1e-3);
        }
    }
}

#[test]
fn oracle_check_small_cutoff_exits_2() {
    let out = thermest(&["oracle-check", "--cutoff", "5", "--n-mean", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tail"));
}

#[test]
fn oracle_check_deep_adds_three_copy_check() {
    let out = thermest(&[
        "oracle-check",
        "--deep",
        "--n-mean",
        "0.5",
        "--zeta-re",
        "0.3",
        "--json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"concentration_n3"));
}

#[test]
fn ratio_table_covers_grid() {
    let out = thermest(&[
        "simulate",
        "--ratio-table",
        "--trials",
        "100",
        "--seed",
        "2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[8]["n_mean"], 2.0);
    assert_eq!(rows[8]["n_copies"], 1000);
}
