use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppm-pointing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn record(text: &str, table: &str) -> Vec<toml::Table> {
    let doc: toml::Table = toml::from_str(text).unwrap();
    doc[table]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_table().unwrap().clone())
        .collect()
}

fn num(t: &toml::Table, key: &str) -> f64 {
    match &t[key] {
        toml::Value::Float(f) => *f,
        toml::Value::Integer(i) => *i as f64,
        other => panic!("{key} is {other:?}"),
    }
}

/// Data rows of a CSV output as field vectors.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn params_static_offset() {
    let r = &record(&stdout(&["params", "--wz", "15", "--mu-x", "10", "--sigma-x", "0", "--sigma-y", "0"]), "beam")[0];
    assert_eq!(r["kind"].as_str(), Some("deterministic"));
    let expected = num(r, "a0") * (-200.0 / num(r, "w_zeq").powi(2)).exp();
    assert!((num(r, "t0") / expected - 1.0).abs() < 1e-15);
}

#[test]
fn params_aligned_jitter_and_unit_width() {
    let r = &record(&stdout(&["params", "--wz", "15", "--mu-x", "0", "--sigma-x", "1", "--sigma-y", "1"]), "beam")[0];
    assert_eq!(r["kind"].as_str(), Some("gamma"));
    assert_eq!(num(r, "a"), num(r, "a0"));
    let r = &record(&stdout(&["params", "--wz", "1"]), "beam")[0];
    assert!((num(r, "a0") - 0.853).abs() < 1e-3);
}

#[test]
fn abep_closed_form_and_zero_row() {
    let text = stdout(&["abep", "--q", "2", "--m", "1", "--t0", "1", "--ebn0-db", "3.0103", "--include-zero"]);
    let r = rows(&text);
    assert_eq!(r[0][1], "-inf");
    assert_eq!(r[0][2], "0.5");
    let v: f64 = r[1][2].parse().unwrap();
    assert!((v - 0.18394).abs() < 1e-5);
    assert_eq!(r[1][3], "ok");
}

#[test]
fn jitter_sweep_curves_cross_once() {
    let text = stdout(&[
        "abep", "--q", "16", "--m", "2", "--wz", "15,20", "--mu-x", "10", "--sigma-x", "1", "--sigma-y", "1",
        "--ebn0-db", "0:50:0.5",
    ]);
    let r = rows(&text);
    let value = |w: &str| -> Vec<f64> {
        r.iter().filter(|row| row[0] == w).map(|row| row[2].parse().unwrap()).collect()
    };
    let (a, b) = (value("15"), value("20"));
    assert_eq!(a.len(), 101);
    let signs: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x < y).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(changes, 1);
}

#[test]
fn optimize_static_width_is_constant() {
    let text = stdout(&["optimize", "--mu-x", "10", "--ebn0-db", "10:40:5"]);
    for row in rows(&text) {
        let w: f64 = row[1].parse().unwrap();
        assert!((w - 15.0).abs() <= 1.0, "{row:?}");
        assert_eq!(row[3], "ok");
    }
}

#[test]
fn optimize_flags_bracket_edges_and_exits_2() {
    let out = run(&["optimize", "--mu-x", "0", "--sigma-x", "1", "--sigma-y", "1", "--ebn0-db", "5:15:5"]);
    assert_eq!(out.status.code(), Some(2));
    let r = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(r[0][3], "bracket-edge");
    assert_eq!(r[0][1], "");
    assert_eq!(r[2][3], "ok");
}

#[test]
fn simulate_closed_form_zero_signal_and_determinism() {
    let args = ["simulate", "--q", "2", "--m", "1", "--t0", "1", "--ebn0-db", "3.0103", "--symbols", "10000000", "--seed", "1"];
    let first = stdout(&args);
    let r = &record(&first, "record")[0];
    let est = num(r, "abep_estimate");
    let se = num(r, "std_error");
    assert!((est - 0.183_939_720_585_721_2).abs() <= 4.0 * se, "{est} ± {se}");
    assert_eq!(stdout(&args), first);

    let z = &record(&stdout(&["simulate", "--q", "4", "--m", "2", "--t0", "1", "--zero-signal", "--symbols", "1000000"]), "record")[0];
    assert!((num(z, "abep_estimate") - 0.5).abs() <= 4.0 * num(z, "std_error"));
}

#[test]
fn simulate_reports_zero_estimate() {
    let text = stdout(&["simulate", "--q", "16", "--m", "1", "--t0", "1", "--ebn0-db", "20", "--symbols", "1000"]);
    let r = &record(&text, "record")[0];
    assert_eq!(num(r, "abep_estimate"), 0.0);
    assert_eq!(r["symbol_errors"].as_integer(), Some(0));
}

#[test]
fn echoed_config_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let p = |x: &Path| x.to_str().unwrap().to_string();
    let out = run(&[
        "abep", "--q", "8", "--m", "3", "--wz", "12.5,20", "--mu-x", "7.3", "--mu-y", "-1.1", "--sigma-x", "0.7",
        "--sigma-y", "1.3", "--ebn0-db", "0:40:2.5", "--include-zero", "--out", &p(&first),
    ]);
    assert!(out.status.success());
    let out = run(&["abep", "--config", &p(&first), "--out", &p(&second)]);
    assert!(out.status.success());
    let (a, b) = (std::fs::read_to_string(&first).unwrap(), std::fs::read_to_string(&second).unwrap());
    assert_eq!(a, b);
    for row in rows(&a) {
        if !row[2].is_empty() {
            let v: f64 = row[2].parse().unwrap();
            assert_eq!(v.to_string().parse::<f64>().unwrap(), v);
        }
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "q = 4\nm = 2\nt0 = 1.0\nebn0-db = \"3\"\n").unwrap();
    let text = stdout(&["abep", "--config", cfg.to_str().unwrap(), "--q", "2"]);
    assert!(text.contains("# config: q = 2\n"));
    assert!(text.contains("# config: m = 2\n"));
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(run(&["abep", "--q", "3", "--t0", "1", "--ebn0-db", "1"]).status.code(), Some(2));
    assert_eq!(run(&["abep", "--t0", "1"]).status.code(), Some(2));
    assert_eq!(run(&["params", "--wz", "0"]).status.code(), Some(2));
    assert_eq!(run(&["reproduce", "fig9"]).status.code(), Some(2));
    assert_eq!(run(&["abep", "--t0", "1", "--ebn0-db", "1", "--out", "/nonexistent/dir/x.csv"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "colour = 3\n").unwrap();
    assert_eq!(run(&["abep", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reproduce_writes_reconstructed_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reproduce", "fig3b", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["fig3b_q16_m2.csv", "fig3b_q16_m200.csv", "fig3b_q2_m2.csv", "fig3b_q2_m200.csv"]);
    let path = dir.path().join("fig3b_q2_m2.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# scenario: fig3b") && l.contains("reconstructed")));
    let again = stdout(&["optimize", "--config", path.to_str().unwrap()]);
    assert_eq!(rows(&again), rows(&text));
}
