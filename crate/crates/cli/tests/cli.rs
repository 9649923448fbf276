//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn repeater(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repeater"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn rate_reports_all_fields_with_units() {
    let out = repeater(&[
        "rate", "--L", "1000km", "--n", "3", "--m", "3", "--pm", "0.9", "--tauc", "5ms",
        "--variant", "pur", "--measure", "ec",
    ]);
    let json = stdout_json(&out);
    let result = &json["result"];
    let q = result["q_pairs_per_s_per_memory"].as_f64().unwrap();
    let mv = result["measure_value_ebits_per_pair"].as_f64().unwrap();
    let r = result["rate_ebits_per_s_per_memory"].as_f64().unwrap();
    assert!((r - q * mv).abs() < 1e-12 * r);
    assert_eq!(result["effective_decay_time_s"].as_f64().unwrap(), 1.25e-3);
    assert_eq!(json["config"]["length_m"].as_f64().unwrap(), 1.0e6);
}

#[test]
fn rate_single_link_baseline() {
    let out = repeater(&["rate", "--L", "1000km", "--n", "0", "--pm", "0.9", "--tauc", "5ms"]);
    let json = stdout_json(&out);
    // Decay time of the heralded link is exactly L/c.
    assert_eq!(
        json["result"]["effective_decay_time_s"].as_f64().unwrap(),
        5.0e-3
    );
}

#[test]
fn missing_flag_exits_2_with_usage_hint() {
    let out = repeater(&["rate", "--L", "1000km", "--n", "3", "--pm", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--tauc"), "stderr: {stderr}");
    assert!(stderr.contains("usage"), "stderr: {stderr}");
}

#[test]
fn unknown_flag_exits_2() {
    let out = repeater(&["rate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_emits_pinned_header_and_peaked_curve() {
    let out = repeater(&[
        "sweep", "--param", "n", "--from", "1", "--to", "8", "--pm", "0.75", "--tauc", "5ms",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param,n_opt,m_opt,q,decay_time_s,measure_value,rate_per_memory_per_s"
    );
    let rates: Vec<f64> = lines
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rates.len(), 8);
    // Single peak strictly inside the range, rising before and falling after.
    let peak = rates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!(peak > 0 && peak < rates.len() - 1, "peak at edge: {rates:?}");
    assert!((0..peak).all(|i| rates[i] < rates[i + 1]));
    assert!((peak..rates.len() - 1).all(|i| rates[i] > rates[i + 1]));
    // Loss dominates below the peak, BSM failures above: the climb is
    // steeper than the descent on a log scale.
    let climb = (rates[peak] / rates[0]).ln() / peak as f64;
    let descent = (rates[peak] / rates[rates.len() - 1]).ln() / (rates.len() - 1 - peak) as f64;
    assert!(climb > descent, "slope asymmetry missing: {rates:?}");
}

#[test]
fn sweep_over_coherence_time_saturates() {
    let out = repeater(&[
        "sweep", "--param", "tauc", "--from", "0.1ms", "--to", "100s", "--steps", "10",
        "--spacing", "log", "--pm", "0.75",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rates: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rates.len(), 10);
    assert!(rates.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
    // The last decade of coherence time barely moves the rate.
    assert!(rates[9] / rates[8] < 1.001);
}

#[test]
fn sweep_rejects_bad_spacing_and_param() {
    let out = repeater(&[
        "sweep", "--param", "l", "--from", "-3", "--to", "10", "--spacing", "log", "--pm", "0.5",
        "--tauc", "1ms",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = repeater(&[
        "sweep", "--param", "banana", "--from", "1", "--to", "2", "--pm", "0.5", "--tauc", "1ms",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_reports_grid_and_degenerate_asymptotics() {
    let out = repeater(&["optimize", "--pm", "1.0", "--tauc", "1ms", "--n-max", "6"]);
    let json = stdout_json(&out);
    assert_eq!(json["grid"]["n_opt"].as_u64().unwrap(), 6);
    assert!(json["asymptotics"]["error"].is_string());
    assert_eq!(json["grid"]["table"].as_array().unwrap().len(), 21);
}

#[test]
fn asymptotics_matches_closed_form() {
    let out = repeater(&["asymptotics", "--pm", "0.5", "--tauc", "1ms"]);
    let json = stdout_json(&out);
    let l0_km = json["l0_opt_m"].as_f64().unwrap() / 1.0e3;
    assert!((l0_km - 69.3147) < 1e-3);
    assert_eq!(json["m_opt_rounded"].as_i64().unwrap(), 4);
}

#[test]
fn simulate_deterministic_limit_hits_analytic_rate() {
    let out = repeater(&[
        "simulate", "--L", "1000km", "--n", "1", "--m", "1", "--pm", "1.0", "--ps", "1.0",
        "--N", "1", "--tauc", "5ms", "--cycles", "200", "--warmup", "10", "--seed", "1",
    ]);
    let json = stdout_json(&out);
    let ratio = json["comparison"]["pair_rate_ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 1e-12);
    assert_eq!(json["comparison"]["pair_rate_sigma"].as_f64().unwrap(), 0.0);
    assert_eq!(json["stats"]["prng"], "chacha12/splitmix64-seed");
}

#[test]
fn simulate_is_byte_identical_per_seed() {
    let args = [
        "simulate", "--L", "1000km", "--n", "3", "--m", "2", "--pm", "0.7", "--ps", "0.2",
        "--N", "8", "--tauc", "5ms", "--cycles", "3000", "--warmup", "100", "--seed", "99",
    ];
    let a = repeater(&args);
    let b = repeater(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");

    let mut different = args;
    different[different.len() - 1] = "100";
    let c = repeater(&different);
    assert_ne!(a.stdout, c.stdout, "different seed should move the stats");
}

#[test]
fn config_file_supplies_flags_and_flags_override() {
    let dir = std::env::temp_dir().join("repeater-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(
        &path,
        r#"{"L": "500km", "pm": 0.8, "tauc": 2, "n": 2, "m": 2}"#,
    )
    .unwrap();
    let path = path.to_str().unwrap();

    let from_file = stdout_json(&repeater(&["rate", "--config", path]));
    assert_eq!(from_file["config"]["length_m"].as_f64().unwrap(), 5.0e5);
    assert_eq!(from_file["config"]["coherence_time_s"].as_f64().unwrap(), 2.0e-3);

    let overridden = stdout_json(&repeater(&["rate", "--config", path, "--L", "1000km"]));
    assert_eq!(overridden["config"]["length_m"].as_f64().unwrap(), 1.0e6);

    let bad = repeater(&["rate", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scaling_fit_enforces_regime() {
    // tau_c = 100 ms with max L = 2000 km violates max(L)/c >= 20 tau_c.
    let out = repeater(&[
        "scaling-fit", "--pm", "0.5", "--tauc", "100ms", "--l-from", "100", "--l-to", "2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let ok = repeater(&[
        "scaling-fit", "--pm", "0.5", "--tauc", "0.1ms", "--l-from", "2000", "--l-to", "20000",
        "--points", "8",
    ]);
    let json = stdout_json(&ok);
    assert!(json["relative_error"].as_f64().unwrap() < 0.15);
    assert_eq!(json["samples"].as_array().unwrap().len(), 8);
}

#[test]
fn help_exits_cleanly() {
    let out = repeater(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["rate", "sweep", "optimize", "asymptotics", "simulate", "scaling-fit"] {
        assert!(text.contains(sub), "help lacks {sub}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_repeater")).exists());
}
