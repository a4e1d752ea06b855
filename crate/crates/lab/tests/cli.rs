use std::f64::consts::{FRAC_1_PI, LN_2};
use std::process::{Command, Output};

use bosonlab::io::read_csv_table;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bosonlab")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let t = read_csv_table(text).unwrap();
    let i = t.columns.iter().position(|c| c == name).unwrap();
    t.rows.iter().map(|r| r[i]).collect()
}

const THREE_FOLD: &str = r#"{"type":"attenuator","eta":0.5,"environment":{"kind":"pure","amplitudes":[[1,0],[0,0],[0,0],[1,0]]}}"#;

#[test]
fn capacity_interval_rows() {
    let text = stdout(&["capacity-interval", "--fock", "1", "--eta", "0.5", "--nu-grid", "0,2"]);
    assert!(text.starts_with("# tool: bosonlab"));
    let lower = column(&text, "lower");
    let upper = column(&text, "upper");
    let delta = 1.5 * 1.5f64.ln() - 0.5 * 0.5f64.ln() - LN_2;
    assert_eq!(lower[0], 0.0);
    assert!((upper[0] - delta).abs() < 1e-12);
    // g(1.5) − g(0.5)
    let g = |x: f64| (x + 1.0) * (x + 1.0).ln() - x * x.ln();
    assert!((lower[1] - (g(1.5) - g(0.5))).abs() < 1e-12);
    assert!((upper[1] - lower[1] - delta).abs() < 1e-12);
}

#[test]
fn thermal_environment_closes_the_interval() {
    let ch = r#"{"eta":0.5,"environment":{"kind":"thermal","params":{"nbar":1}}}"#;
    let text = stdout(&["capacity-interval", "--channel", ch, "--nu-grid", "0:4:5"]);
    for d in column(&text, "delta") {
        assert!(d.abs() < 1e-6);
    }
}

#[test]
fn delta_sweep_values() {
    let text = stdout(&["delta-sweep", "--fock-list", "0,1", "--eta", "0.5,1"]);
    let d = column(&text, "delta");
    assert_eq!(d.len(), 4);
    assert_eq!(d[0], 0.0);
    assert!((d[2] - 0.261_624_071_882_274).abs() < 1e-9);
    assert!(d[3].abs() < 1e-12);
}

#[test]
fn units_convert_exactly() {
    let nats = stdout(&["delta-sweep", "--fock-list", "2", "--eta", "0.3,0.6"]);
    let bits = stdout(&["--unit", "bits", "delta-sweep", "--fock-list", "2", "--eta", "0.3,0.6"]);
    for (a, b) in column(&nats, "delta").iter().zip(column(&bits, "delta")) {
        assert_eq!(a / LN_2, b);
    }
}

#[test]
fn moe_is_reproducible() {
    let args = [
        "moe", "--fock", "1", "--eta", "0.5", "--moe-n-fock", "6", "--moe-n-it", "30", "--moe-n-loop", "4",
        "--moe-restarts", "2", "--seed", "11",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["provenance"]["seed"], 11);
    let s = v["result"]["best_entropy"].as_f64().unwrap();
    assert!(s >= LN_2 - 1e-9 && s < 1.0);
    assert_eq!(v["result"]["restart_entropies"].as_array().unwrap().len(), 2);
}

#[test]
fn moe_writes_wigner_of_best_state() {
    let dir = std::env::temp_dir().join(format!("bosonlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.csv");
    stdout(&[
        "moe", "--fock", "0", "--moe-n-fock", "4", "--moe-n-it", "10", "--moe-n-loop", "2", "--moe-restarts", "1",
        "--wigner-out", path.to_str().unwrap(), "--wigner-resolution", "41",
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(column(&text, "w").len(), 41 * 41);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn squeezed_scan_table() {
    let text = stdout(&[
        "squeezed-scan", "--channel", THREE_FOLD, "--theta-grid", "0:pi/3:5", "--r-grid", "0:0.6:4", "--cutoff", "30",
    ]);
    let s = column(&text, "s_out");
    assert_eq!(s.len(), 20);
    for x in &s[..5] {
        assert!((x - s[0]).abs() < 1e-12);
    }
    assert!(text.contains("# argmin:"));
    assert!(text.contains("# refined:"));
}

#[test]
fn thermal_scan_prefers_vacuum() {
    let ch = r#"{"eta":0.5,"environment":{"kind":"thermal","params":{"nbar":0.5}}}"#;
    let text = stdout(&[
        "--format", "json", "squeezed-scan", "--channel", ch, "--theta-grid", "0:pi:3", "--r-grid", "0:0.5:6",
        "--no-refine",
    ]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let argmin = v["notes"].as_array().unwrap().iter().find_map(|n| n.as_str()?.strip_prefix("argmin: ")).unwrap();
    let p: Value = serde_json::from_str(argmin).unwrap();
    assert_eq!(p["r"], 0.0);
}

#[test]
fn classical_summary_json() {
    let v: Value = serde_json::from_str(&stdout(&["classical", "--noise", "uniform", "--energy", "2"])).unwrap();
    let r = &v["result"];
    let want = 0.5 * (std::f64::consts::PI * std::f64::consts::E / 6.0).ln();
    assert!((r["delta_cl"].as_f64().unwrap() - want).abs() < 1e-6);
    let c = r["C_G"].as_f64().unwrap();
    let i = r["I_lower"].as_f64().unwrap();
    assert!(c <= i && i <= c + want + 1e-6);
    let mix: Value = serde_json::from_str(&stdout(&[
        "classical", "--noise", "mixture", "--weights", "1,1", "--means", "-1,1", "--variances", "0.5,0.5",
    ]))
    .unwrap();
    assert!(mix["result"]["delta_cl"].as_f64().unwrap() > 0.0);
}

#[test]
fn wigner_of_fock_states() {
    let text = stdout(&["wigner", "--fock-state", "1", "--extent", "3", "--resolution", "7"]);
    let x = column(&text, "x");
    let p = column(&text, "p");
    let w = column(&text, "w");
    let centre = (0..w.len()).find(|&k| x[k] == 0.0 && p[k] == 0.0).unwrap();
    assert!((w[centre] + FRAC_1_PI).abs() < 1e-12);
}

#[test]
fn wigner_of_a_channel_output() {
    let text = stdout(&[
        "wigner", "--state", "[[1,0],[0,0],[0,0],[1,0]]", "--fock", "0", "--eta", "1", "--extent", "3",
        "--resolution", "5",
    ]);
    assert_eq!(column(&text, "w").len(), 25);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("bosonlab-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.csv");
    let args = ["delta-sweep", "--fock-list", "1", "--eta", "0.5"];
    let direct = stdout(&args);
    let mut with_out = vec!["--out", path.to_str().unwrap()];
    with_out.extend(args);
    assert!(stdout(&with_out).is_empty());
    let data = |t: &str| t.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(data(&std::fs::read_to_string(&path).unwrap()), data(&direct));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let bad = run(&["capacity-interval", "--channel", "{not json"]);
    assert_eq!(bad.status.code(), Some(2));
    let domain = run(&["capacity-interval", "--fock", "1", "--eta", "1.5"]);
    assert_eq!(domain.status.code(), Some(2));
    let missing = run(&["moe"]);
    assert_eq!(missing.status.code(), Some(2));
    let truncated = run(&["squeezed-scan", "--fock", "1", "--cutoff", "3", "--r-grid", "0:1:3"]);
    assert_eq!(truncated.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&truncated.stderr).contains("truncation"));
}
