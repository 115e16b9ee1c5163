use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tracekit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracekit"))
        .args(args)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn report(dir: &Path, command: &str) -> Value {
    let text = fs::read_to_string(dir.join("out").join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn dft_selftest_passes() {
    let tmp = TempDir::new().unwrap();
    let o = tracekit(tmp.path(), &["dft-selftest", "--p", "97"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        report(tmp.path(), "dft-selftest")["passed"],
        Value::Bool(true)
    );
}

#[test]
fn thm1_birch_passes() {
    let tmp = TempDir::new().unwrap();
    let o = tracekit(tmp.path(), &["thm1", "--p", "499"]);
    assert_eq!(code(&o), 0);
    let r = report(tmp.path(), "thm1");
    assert_eq!(r["config"]["function"]["family"], "birch");
    assert!(r["checks"].as_array().unwrap().len() > 400);
    assert!(tmp.path().join("out/thm1.csv").exists());
}

#[test]
fn equidist_ladder_trend() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "moduli = [101, 1009, 9973]\nbins = 12\n");
    let o = tracekit(tmp.path(), &["equidist", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let r = report(tmp.path(), "equidist");
    assert_eq!(r["summary"]["ks_decreasing"], Value::Bool(true));
    assert_eq!(r["passed"], Value::Null);
    let hist = fs::read_to_string(tmp.path().join("out/equidist-hist-p9973.csv")).unwrap();
    let mut lines = hist.lines();
    assert_eq!(lines.next(), Some("bin_left,bin_right,count,satotate_mass"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn flags_override_config_and_are_echoed() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "moduli = [101]\n[interval]\nplacements = 2\nseed = 1\n",
    );
    let o = tracekit(
        tmp.path(),
        &[
            "pv", "--config", &cfg, "--p", "53", "--length", "7", "--seed", "5",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = report(tmp.path(), "pv");
    assert_eq!(r["config"]["moduli"], serde_json::json!([53]));
    assert_eq!(r["config"]["interval"]["seed"], 5);
    assert_eq!(r["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn identical_runs_match_apart_from_timestamp() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "moduli = [1009]\n[interval]\nplacements = 4\nseed = 77\n",
    );
    let mut runs = Vec::new();
    for _ in 0..2 {
        assert_eq!(code(&tracekit(tmp.path(), &["birch", "--config", &cfg])), 0);
        let mut r = report(tmp.path(), "birch");
        r.as_object_mut().unwrap().remove("timestamp");
        let csv = fs::read(tmp.path().join("out/birch-intervals.csv")).unwrap();
        runs.push((serde_json::to_string(&r).unwrap(), csv));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn cache_miss_hit_and_corruption() {
    let tmp = TempDir::new().unwrap();
    let cache = tmp.path().join("cache");
    let cache_arg = cache.to_string_lossy().into_owned();
    let args = ["thm1", "--p", "211", "--cache", cache_arg.as_str()];
    let file = cache.join("birch-m211.bin");

    assert_eq!(code(&tracekit(tmp.path(), &args)), 0);
    let first = fs::read(&file).unwrap();
    assert_eq!(first.len(), 8 + 16 * 211);
    let csv1 = fs::read(tmp.path().join("out/thm1.csv")).unwrap();

    assert_eq!(code(&tracekit(tmp.path(), &args)), 0);
    assert_eq!(fs::read(&file).unwrap(), first);
    assert_eq!(fs::read(tmp.path().join("out/thm1.csv")).unwrap(), csv1);

    fs::write(&file, b"not a table").unwrap();
    let o = tracekit(tmp.path(), &args);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("recomputing"));
    assert_eq!(fs::read(&file).unwrap(), first);
    assert_eq!(fs::read(tmp.path().join("out/thm1.csv")).unwrap(), csv1);

    let cfg = write_config(tmp.path(), "[function]\nfamily = \"kloosterman\"\n");
    let o = tracekit(
        tmp.path(),
        &[
            "thm1", "--config", &cfg, "--p", "211", "--cache", &cache_arg,
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(cache.join("kloosterman-m211.bin").exists());
    assert_eq!(fs::read(&file).unwrap(), first);
}

#[test]
fn config_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        "moduli = [499]\n[interval]\nplacements = 3\n",
        "moduli = [499]\n[calibration.c_transfer]\nvalue = 3.0\nprovenance = \"\"\n",
        "moduli = [499]\n[function]\nfamily = \"unknown\"\n",
        "moduli = 499 this is not toml",
        "moduli = [1]\n",
    ];
    for text in cases {
        let cfg = write_config(tmp.path(), text);
        let o = tracekit(tmp.path(), &["thm1", "--config", &cfg]);
        assert_eq!(code(&o), 2, "{text}");
    }
    assert_eq!(code(&tracekit(tmp.path(), &["birch", "--p", "500"])), 2);
    assert_eq!(
        code(&tracekit(
            tmp.path(),
            &["thm1", "--p", "499", "--length", "5"]
        )),
        2
    );
    assert_eq!(code(&tracekit(tmp.path(), &["thm1"])), 2);
    assert_eq!(code(&tracekit(tmp.path(), &["nonsense"])), 2);
}

#[test]
fn failures_exit_3() {
    let tmp = TempDir::new().unwrap();
    // a C_transfer far below the observed ratios fails the checks
    let cfg = write_config(
        tmp.path(),
        "moduli = [1009]\n[calibration.c_transfer]\nvalue = 0.001\nprovenance = \"deliberately too small\"\n",
    );
    let o = tracekit(tmp.path(), &["transfer", "--config", &cfg]);
    assert_eq!(code(&o), 3);
    assert_eq!(report(tmp.path(), "transfer")["passed"], Value::Bool(false));
    // 12 is not squarefree: the Weyl check refuses it
    assert_eq!(code(&tracekit(tmp.path(), &["weyl", "--p", "12"])), 3);
}

#[test]
fn mellin_verdict_needs_conductor() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&tracekit(tmp.path(), &["mellin", "--p", "499"])), 0);
    assert_eq!(report(tmp.path(), "mellin")["passed"], Value::Null);
    let cfg = write_config(
        tmp.path(),
        "moduli = [499]\n[conductor]\nvalue = 3.0\nprovenance = \"user-supplied bound\"\n",
    );
    assert_eq!(
        code(&tracekit(tmp.path(), &["mellin", "--config", &cfg])),
        0
    );
    assert_eq!(report(tmp.path(), "mellin")["passed"], Value::Bool(true));
    let cfg = write_config(
        tmp.path(),
        "moduli = [499]\n[function]\nfamily = \"ones\"\n[conductor]\nvalue = 1.0\nprovenance = \"x\"\n",
    );
    assert_eq!(
        code(&tracekit(tmp.path(), &["mellin", "--config", &cfg])),
        0
    );
    assert_eq!(report(tmp.path(), "mellin")["passed"], Value::Null);
}
