//! End-to-end runs of the `hopfkit` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hopfkit_cli::RunConfig;

const EXAMPLE_A: &str = "[2, 0.02, 0.5, 2, 1.5, 0.03, 0.5]";

/// Exact-linearization rates with a supercritical, orbitally stable
/// discrete-delay Hopf point near τ0 ≈ 5.2386.
const SUPERCRITICAL_A: &str = "[2.7163344281829493, 0.1841911996820009, 0.8612318453462915, \
     3.172182858632948, 3.5819112831351543, 0.3125437930422277, 2.492041000431289]";

fn hopfkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopfkit")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn analyze_json(config: &Path, kernel: &str) -> serde_json::Value {
    let out = hopfkit(&["analyze", "--config", s(config), "--kernel", kernel, "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_example_dirac() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"a": {EXAMPLE_A}}}"#));
    let out = hopfkit(&["analyze", "--config", s(&cfg), "--kernel", "dirac"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tau0                0.89750327"), "{text}");
    assert!(text.contains("classification      supercritical, orbitally stable"), "{text}");

    let report = analyze_json(&cfg, "dirac");
    assert!((report["hopf"]["critical"].as_f64().unwrap() - 0.8975032747).abs() < 1e-9);
    assert_eq!(report["linearization"], "published");
}

#[test]
fn analyze_example_weak() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"a": {EXAMPLE_A}}}"#));
    let report = analyze_json(&cfg, "weak");
    assert!((report["hopf"]["omega0"].as_f64().unwrap() - 0.1872904846).abs() < 1e-4);
    let class = report["normal_form"]["classification"].as_str().unwrap();
    assert!(class.starts_with("subcritical, orbitally stable"), "{class}");
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |text: &str, kernel: &str| {
        let cfg = write(dir.path(), "c.json", text);
        hopfkit(&["analyze", "--config", s(&cfg), "--kernel", kernel]).status.code()
    };
    // a7 = a3 a5: no interior equilibrium.
    assert_eq!(code(r#"{"a": [2, 0.02, 0.5, 2, 1.5, 0.03, 0.75]}"#, "dirac"), Some(3));
    assert_eq!(code(r#"{"a": [2, 0.02]}"#, "dirac"), Some(2));
    assert_eq!(code("{", "dirac"), Some(2));
    assert_eq!(code(r#"{"a": [2, -0.02, 0.5, 2, 1.5, 0.03, 0.5]}"#, "dirac"), Some(2));
    assert_eq!(code(&format!(r#"{{"a": {EXAMPLE_A}, "linearization": "jacobian"}}"#), "weak"), Some(4));
    let missing = hopfkit(&["analyze", "--config", s(&dir.path().join("none.json")), "--kernel", "dirac"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn simulate_empty_horizon_and_strong_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {EXAMPLE_A}, "kernel": {{"type": "strong", "q": 2}}, "sim": {{"t_end": 0, "dt": 0.01}}}}"#),
    );
    let csv = dir.path().join("t.csv");
    let out = hopfkit(&["simulate", "--config", s(&cfg), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_table(&csv);
    assert_eq!(header, ["t", "x", "y", "z", "u", "v"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.0);

    let out = hopfkit(&["simulate", "--config", s(&cfg), "--tau", "0.5", "--t-end", "0", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_table(&csv).0, ["t", "x", "y", "z"]);
}

#[test]
fn simulate_is_deterministic_and_sidecar_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {EXAMPLE_A}, "kernel": {{"type": "weak", "q": 0.5}}, "sim": {{"t_end": 20, "dt": 0.01, "stride": 7}}}}"#),
    );
    let run = |name: &str, config: &Path| {
        let csv = dir.path().join(name);
        let out = hopfkit(&["simulate", "--config", s(config), "--tau", "0.9", "--out", s(&csv)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let meta = dir.path().join(format!("{name}.meta.json"));
        (std::fs::read(&csv).unwrap(), meta)
    };
    let (a, meta_a) = run("a.csv", &cfg);
    let (b, meta_b) = run("b.csv", &cfg);
    assert_eq!(a, b);

    let echoed = RunConfig::load(&meta_a).unwrap();
    let mut expected = RunConfig::load(&cfg).unwrap();
    expected.kernel = Some(hopfkit_cli::config::KernelConfig::Dirac { tau: 0.9 });
    expected.initial = Some(expected.initial_state().unwrap());
    assert_eq!(echoed, expected);

    // Rerunning from the sidecar reproduces the trajectory byte for byte.
    let (c, _) = run("c.csv", &meta_a);
    assert_eq!(a, c);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(meta_b).unwrap()).unwrap();
    assert_eq!(meta["run"]["rows"].as_u64(), Some(read_rows(&a) as u64));
}

fn read_rows(csv: &[u8]) -> usize {
    csv.iter().filter(|&&c| c == b'\n').count() - 1
}

#[test]
fn simulate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let code = |text: &str| {
        let cfg = write(dir.path(), "c.json", text);
        hopfkit(&["simulate", "--config", s(&cfg), "--out", s(&csv)]).status.code()
    };
    // dt above tau/10.
    assert_eq!(code(&format!(r#"{{"a": {EXAMPLE_A}, "kernel": {{"type": "dirac", "tau": 0.9}}, "sim": {{"dt": 0.5}}}}"#)), Some(2));
    // No kernel.
    assert_eq!(code(&format!(r#"{{"a": {EXAMPLE_A}}}"#)), Some(2));
    // Explicit RK4 far outside its stability region.
    assert_eq!(
        code(&format!(r#"{{"a": {EXAMPLE_A}, "kernel": {{"type": "weak", "q": 0.5}}, "sim": {{"t_end": 200, "dt": 1.0}}}}"#)),
        Some(5)
    );
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"a": {EXAMPLE_A}}}"#));
    let both = hopfkit(&["simulate", "--config", s(&cfg), "--tau", "1", "--q", "1", "--out", s(&csv)]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn simulate_oscillates_past_the_exact_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {SUPERCRITICAL_A}, "linearization": "jacobian", "sim": {{"t_end": 400000, "dt": 0.05, "stride": 20}}}}"#),
    );
    let report = analyze_json(&cfg, "dirac");
    let tau0 = report["hopf"]["critical"].as_f64().unwrap();
    let nf = &report["normal_form"];
    let (mu2, t2) = (nf["mu2"].as_f64().unwrap(), nf["t2"].as_f64().unwrap());
    let period0 = report["hopf"]["period"].as_f64().unwrap();

    let tau = 1.001 * tau0;
    let csv = dir.path().join("t.csv");
    let out = hopfkit(&["simulate", "--config", s(&cfg), "--tau", &tau.to_string(), "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_table(&csv);
    let times: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let z: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let est = hopfkit_core::simulator::period_of_samples(&times, &z).unwrap();
    let predicted = period0 * (1.0 + t2 * (tau - tau0) / mu2);
    assert!((est.period / predicted - 1.0).abs() < 1e-4, "{} vs {predicted}", est.period);
}

#[test]
fn sweep_minimal_grid_and_bad_grids() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {EXAMPLE_A}, "kernel": {{"type": "weak", "q": 1}}, "sim": {{"t_end": 50, "dt": 0.01}}}}"#),
    );
    let csv = dir.path().join("s.csv");
    let out = hopfkit(&["sweep", "--config", s(&cfg), "--param", "q", "--from", "0.5", "--to", "1", "--steps", "2", "--out", s(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_table(&csv);
    assert_eq!(header, ["param", "amplitude", "period"]);
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0][0], rows[1][0]), (0.5, 1.0));
    assert!(RunConfig::load(&dir.path().join("s.csv.meta.json")).is_ok());

    for (from, to, steps) in [("1", "0.5", "3"), ("0.5", "1", "1"), ("1", "1", "4")] {
        let out = hopfkit(&["sweep", "--config", s(&cfg), "--param", "q", "--from", from, "--to", to, "--steps", steps, "--out", s(&csv)]);
        assert_eq!(out.status.code(), Some(2), "{from} {to} {steps}");
    }
}

/// Sweeps `tau` from the config at `HOPFKIT_THREADS = threads`.
fn tau_sweep(dir: &Path, cfg: &Path, from: f64, to: f64, steps: usize, threads: &str) -> Vec<Vec<f64>> {
    let csv = dir.join(format!("sweep-{from}-{threads}.csv"));
    let out = Command::new(env!("CARGO_BIN_EXE_hopfkit"))
        .env("HOPFKIT_THREADS", threads)
        .args(["sweep", "--config", s(cfg), "--param", "tau"])
        .args(["--from", &from.to_string(), "--to", &to.to_string(), "--steps", &steps.to_string()])
        .args(["--out", s(&csv)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    read_table(&csv).1
}

#[test]
fn sweep_locates_the_crossing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {SUPERCRITICAL_A}, "linearization": "jacobian", "sim": {{"t_end": 20000, "dt": 0.05, "stride": 10}}}}"#),
    );
    let report = analyze_json(&cfg, "dirac");
    let tau0 = report["hopf"]["critical"].as_f64().unwrap();
    let z0 = report["equilibria"]["interior"][2].as_f64().unwrap();
    let rows = tau_sweep(dir.path(), &cfg, 0.7 * tau0, 1.3 * tau0, 25, "3");
    assert_eq!(rows.len(), 25);
    let cell = 0.6 * tau0 / 24.0;
    let first = rows.iter().position(|r| r[1] > 1e-3 * z0).expect("oscillation above tau0");
    assert!((rows[first][0] - tau0).abs() <= cell, "crossing at {} vs {tau0}", rows[first][0]);
    assert!(rows[first..].iter().all(|r| r[1] > 1e-3 * z0 && r[2].is_finite()));
    assert!(rows[..first].iter().all(|r| r[1] < 1e-3 * z0));

    // Parallelism does not change the output.
    let serial = tau_sweep(dir.path(), &cfg, 0.7 * tau0, 1.3 * tau0, 25, "1");
    assert_eq!(format!("{rows:?}"), format!("{serial:?}"));
}

#[test]
fn sweep_amplitude_grows_like_a_square_root() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"a": {SUPERCRITICAL_A}, "linearization": "jacobian", "sim": {{"t_end": 400000, "dt": 0.05, "stride": 20}}}}"#),
    );
    let tau0 = analyze_json(&cfg, "dirac")["hopf"]["critical"].as_f64().unwrap();
    let rows = tau_sweep(dir.path(), &cfg, 1.0005 * tau0, 1.01 * tau0, 4, "4");
    let x: Vec<f64> = rows.iter().map(|r| (r[0] - tau0).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r[1].ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    assert!((slope - 0.5).abs() <= 0.15, "log-log slope {slope}");
}

#[test]
fn verify_lists_every_criterion() {
    let out = hopfkit(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for i in 1..=11 {
        assert!(text.contains(&format!("AC-{i} ")), "AC-{i} missing:\n{text}");
    }
    assert!(text.contains("0.1881852832") && text.contains("0.01881852831"));
    let failed = text.lines().any(|l| l.starts_with("AC-") && l.contains(" FAIL "));
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }));
}
