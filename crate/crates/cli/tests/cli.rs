use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_photonparity")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(report: &str, key: &str) -> String {
    let prefix = format!("{key}: ");
    report
        .lines()
        .map(|l| l.trim_start_matches("# "))
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
        .to_string()
}

fn number(report: &str, key: &str) -> f64 {
    value(report, key).split_whitespace().next().unwrap().parse().unwrap()
}

/// Data rows of a CSV with comment lines and a header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn state_reports() {
    let r = stdout(&run(&["state", "--state", "ebs k=1 eta=0.5 M=2"]));
    assert!(number(&r, "mean_parity").abs() < 1e-12);
    assert!(number(&r, "w00").abs() < 1e-12);
    assert_eq!(value(&r, "dimension"), "4");

    let r = stdout(&run(&["state", "--state", "fock l=3"]));
    assert_eq!(number(&r, "mean_parity"), -1.0);

    let r = stdout(&run(&["state", "--state", "ets nbar=1"]));
    assert!((number(&r, "w00") + 2.0 / (9.0 * PI)).abs() < 1e-9);
}

#[test]
fn parity_evolve_examples() {
    let t_max = 1.5f64.ln().to_string();
    let csv = stdout(&run(&["parity-evolve", "--state", "ecs alpha=0.5", "--n", "0.5", "--t-max", &t_max]));
    assert!(csv.starts_with("# photonparity "));
    assert!(csv.contains("# convention: int(W)=1; alpha=q+ip; W(0,0)=(2/pi)*parity"));
    let data = rows(&csv);
    let last = data.last().unwrap();
    assert!(last[1].parse::<f64>().unwrap().abs() < 1e-12);
    assert_eq!(last[2], "analytic");

    let csv = stdout(&run(&["parity-evolve", "--state", "ets nbar=1", "--n", "0.5"]));
    let w = col(&rows(&csv), 1);
    assert!(w.windows(2).all(|p| p[1] > p[0]));

    let csv = stdout(&run(&["parity-evolve", "--state", "ebs k=1 eta=0.9 M=3", "--n", "0.5"]));
    assert_eq!(value(&csv, "regime"), "positive-then-negative");
}

#[test]
fn csv_header_names_columns() {
    let csv = stdout(&run(&["parity-evolve", "--state", "fock l=1", "--points", "3"]));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "gamma_t,w00,backend");
    let csv = stdout(&run(&["parity-evolve", "--state", "fock l=1", "--points", "3", "--cross-check", "lindblad"]));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "gamma_t,w00,backend,w00_check,backend_check");
    assert!(number(&csv, "max_deviation") < 1e-6);
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surface.csv");
    let args = ["surface", "--preset", "fig3", "--eta-points", "9", "--points", "11", "--out", out.to_str().unwrap()];
    let mut runs = Vec::new();
    for _ in 0..2 {
        assert!(run(&args).status.success());
        runs.push(fs::read(&out).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn surface_rows_are_eta_major() {
    let csv = stdout(&run(&["surface", "--preset", "fig4", "--eta-points", "11", "--points", "5"]));
    let data = rows(&csv);
    assert_eq!(data.len(), 55);
    let eta = col(&data, 0);
    let t = col(&data, 1);
    for i in 1..data.len() {
        assert!(eta[i] > eta[i - 1] || (eta[i] == eta[i - 1] && t[i] > t[i - 1]));
    }
    let at = data.iter().find(|r| r[0].parse::<f64>().unwrap() == 0.1 && r[1].parse::<f64>().unwrap() == 0.0);
    assert!(at.unwrap()[2].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn fig2_rows_vanish_at_threshold_numerically() {
    let t = 1.5f64.ln().to_string();
    let csv = stdout(&run(&["surface", "--preset", "fig2", "--eta-points", "11", "--times", &t, "--backend", "lindblad"]));
    assert!(col(&rows(&csv), 2).iter().all(|w| w.abs() < 5e-3));
}

#[test]
fn wigner_slice_presets() {
    let csv = stdout(&run(&["wigner-slice", "--preset", "low", "--times", "0", "--q-points", "121"]));
    let data = rows(&csv);
    let origin = data.iter().find(|r| r[1].parse::<f64>().unwrap() == 0.0).unwrap();
    assert!((origin[2].parse::<f64>().unwrap() + 2.0 / PI).abs() < 1e-12);

    let csv = stdout(&run(&["wigner-slice", "--preset", "high", "--times", "0", "--q-points", "241"]));
    let data = rows(&csv);
    let positive: Vec<f64> = data.iter().filter(|r| r[1].parse::<f64>().unwrap() > 0.0).map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(positive.windows(2).filter(|w| w[0].signum() != w[1].signum()).count(), 3);

    let t = 1.5f64.ln().to_string();
    for backend in ["lindblad", "gaussian"] {
        let csv = stdout(&run(&["wigner-slice", "--preset", "mid", "--times", &t, "--backend", backend]));
        assert!(col(&rows(&csv), 2).iter().all(|w| *w >= -1e-6), "{backend}");
    }
}

#[test]
fn thresholds_examples() {
    let r = stdout(&run(&["thresholds", "--state", "ecs alpha=1.4142135623730951", "--n", "0"]));
    assert!((number(&r, "threshold_tc1") - (4.0f64 / 3.0).ln()).abs() < 1e-12);
    assert!((number(&r, "threshold_tc") - 2f64.ln()).abs() < 1e-15);

    let r = stdout(&run(&["thresholds", "--state", "ebs k=1 eta=0.3 M=4"]));
    let roots = value(&r, "initial_parity_roots_eta");
    let etas: Vec<f64> = roots.split("; ").map(|s| s.split(' ').next().unwrap().parse().unwrap()).collect();
    assert_eq!(etas.len(), 2);
    assert!((etas[0] - 1.0 / 6f64.sqrt()).abs() < 1e-10);
    assert!((etas[1] - 0.5f64.sqrt()).abs() < 1e-10);

    for nbar in ["0.3", "1", "4"] {
        let r = stdout(&run(&["thresholds", "--state", &format!("ets nbar={nbar}"), "--n", "0.5"]));
        let crossings = value(&r, "crossings");
        assert_eq!(crossings.split_whitespace().count(), 1);
        assert!((number(&r, "crossings") - 1.5f64.ln()).abs() < 1e-9);
    }
}

#[test]
fn rabi_examples_and_trace_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let r = stdout(&run(&["rabi", "--state", "vacuum"]));
    assert!(number(&r, "error") <= 0.01);

    let r = stdout(&run(&["rabi", "--state", "ecs alpha=0.5"]));
    let rec = number(&r, "reconstructed_parity");
    let oracle = PI / 2.0 * photonparity::channel::ecs_origin_value(0.5, 0.0, 0.0);
    assert!(rec < 0.0 && (rec - oracle).abs() < 0.02);

    let exported = dir.path().join("trace.csv");
    let again = dir.path().join("again.csv");
    let state_args = ["rabi", "--state", "thermal nbar=0.5", "--out", exported.to_str().unwrap()];
    assert!(run(&state_args).status.success());
    let import_args = ["rabi", "--trace-in", exported.to_str().unwrap(), "--out", again.to_str().unwrap()];
    assert!(run(&import_args).status.success());
    let first = fs::read_to_string(&exported).unwrap();
    let second = fs::read_to_string(&again).unwrap();
    assert_eq!(value(&first, "reconstructed_parity"), value(&second, "reconstructed_parity"));
    assert_eq!(value(&first, "imag_residue"), value(&second, "imag_residue"));
    assert_eq!(rows(&first), rows(&second));
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "state = \"ecs k=1 alpha=1.5\"\nn = 1.0\npoints = 4\n").unwrap();
    let csv = stdout(&run(&["parity-evolve", "--config", cfg.to_str().unwrap(), "--n", "0"]));
    assert!(csv.contains("# n = 0.0\n"));
    assert!(csv.contains("# state = \"ecs k=1 alpha=1.5\"\n"));
    assert_eq!(rows(&csv).len(), 4);

    fs::write(&cfg, "colour = \"red\"\n").unwrap();
    assert_eq!(run(&["state", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["state"]).status.code(), Some(2));
    let parse = run(&["state", "--state", "ebs k=1 eta=0.5"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("missing key 'M'"));
    assert_eq!(run(&["state", "--state", "ecs alpha=1", "--backend", "spectral"]).status.code(), Some(2));
    assert_eq!(run(&["surface", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(run(&["state", "--state", "ecs alpha=5", "--dim-cap", "10"]).status.code(), Some(4));
    assert_eq!(run(&["state", "--state", "ecs alpha=100", "--dim-cap", "50"]).status.code(), Some(4));
}

#[test]
fn failed_cross_check_exits_three_and_keeps_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let args = [
        "parity-evolve", "--state", "fock l=3", "--points", "4", "--cross-check", "fd", "--tolerance", "1e-9",
        "--out", out.to_str().unwrap(),
    ];
    let res = run(&args);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cross-check failed"));
    let csv = fs::read_to_string(Path::new(&out)).unwrap();
    assert!(number(&csv, "max_deviation") > 1e-9);
    assert_eq!(rows(&csv).len(), 4);
}
