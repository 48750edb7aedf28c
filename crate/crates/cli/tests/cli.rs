//! End-to-end runs of the `weblin` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE_1: &str = "(x+y)*exp(-x)";
const EXAMPLE_2: &str = "log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)";

fn weblin(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weblin")).args(args).env("WEBLIN_CACHE_DIR", cache).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn help_version_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(weblin(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(weblin(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(weblin(dir.path(), &[]).status.code(), Some(3));
    assert_eq!(weblin(dir.path(), &["analyze", "--bogus"]).status.code(), Some(3));
    assert_eq!(weblin(dir.path(), &["curvature", "--grid-n", "many"]).status.code(), Some(3));
}

#[test]
fn curvature_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = weblin(dir.path(), &["curvature", "--f", EXAMPLE_2, "--point", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], "weblin-report/1");
    assert_eq!(r["command"], "curvature");
    assert_eq!(r["curvature"]["value"], "2");
    assert_eq!(r["curvature"]["exact"], true);
    assert_eq!(r["input"]["point"], serde_json::json!(["1", "0"]));
}

#[test]
fn analyze_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (EXAMPLE_1, "0,0", "linearizable"),
        (EXAMPLE_2, "1,0", "not-linearizable"),
        ("x + y", "0,0", "parallelizable"),
    ];
    for (f, point, verdict) in cases {
        let out = weblin(dir.path(), &["analyze", "--f", f, "--point", point]);
        assert_eq!(out.status.code(), Some(0), "{f}");
        assert_eq!(json(&out)["verdict"], verdict, "{f}");
    }
    let r = json(&weblin(dir.path(), &["analyze", "--f", EXAMPLE_2, "--point", "1,0"]));
    assert_eq!(r["obstruction"]["certificate"]["pair"], serde_json::json!([2, 6]));
    assert_eq!(r["tower"]["cache"], "hit");
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["analyze", "--f", EXAMPLE_1, "--point", "0,0", "--gauge", "gradient"];
    weblin(dir.path(), &args);
    let first = weblin(dir.path(), &args);
    let second = weblin(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn input_errors_exit_with_status_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["curvature", "--f", "x +* y"],
        &["curvature", "--f", EXAMPLE_2, "--point", "0,0"],
        &["analyze", "--f", EXAMPLE_1, "--grid-n", "20"],
        &["analyze", "--f", EXAMPLE_1, "--mode", "interval"],
        &["integrate", "--f", EXAMPLE_1],
    ];
    for args in cases {
        let out = weblin(dir.path(), args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        let r = json(&out);
        assert_eq!(r["error"]["stage"], "input", "{args:?}");
        assert_eq!(r["error"]["exit_code"], 3);
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.toml");
    fs::write(&config, format!("f = \"{EXAMPLE_2}\"\npoint = \"1,0\"\ngauge = \"gradient\"\n")).unwrap();
    let cfg = config.to_str().unwrap();
    let r = json(&weblin(dir.path(), &["curvature", "--config", cfg]));
    assert_eq!(r["curvature"]["value"], "2");
    assert_eq!(r["input"]["gauge"], "gradient");
    let r = json(&weblin(dir.path(), &["curvature", "--config", cfg, "--point", "2,0"]));
    assert_eq!(r["input"]["point"], serde_json::json!(["2", "0"]));
    fs::write(&config, "colour = \"blue\"\n").unwrap();
    assert_eq!(weblin(dir.path(), &["curvature", "--config", cfg]).status.code(), Some(3));
}

#[test]
fn integrate_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("grid.tsv");
    let out = weblin(
        dir.path(),
        &["integrate", "--f", EXAMPLE_1, "--s0", "-1", "--grid-n", "11", "--dump-out", dump.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# grid n=11 h=0.01 center=(0, 0)"));
    assert_eq!(lines.next(), Some(linearize::DUMP_HEADER));
    assert_eq!(lines.count(), 121);

    let out = weblin(dir.path(), &["verify", "--f", EXAMPLE_1, "--s0", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["linearizations"][0]["verification"]["passed"], true);
    assert_eq!(r["linearizations"][0]["base"], "-1");

    let out = weblin(dir.path(), &["verify", "--f", EXAMPLE_1, "--s0", "0"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["error"]["stage"], "integration");
}

#[test]
fn report_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = weblin(dir.path(), &["analyze", "--f", EXAMPLE_1, "--report-out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "verdict: linearizable\n");
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["classes"]["count"], 1);
}

#[test]
fn tower_cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let r = json(&weblin(dir.path(), &["tower", "--cache-dir", c]));
    assert!(r["tower"]["cache"].as_str().unwrap().starts_with("rebuilt"));
    assert_eq!(r["tower"]["degree_table"]["generic"], true);
    assert_eq!(r["tower"]["typo_ledger"].as_array().unwrap().len(), 2);
    assert_eq!(json(&weblin(dir.path(), &["tower", "--cache-dir", c]))["tower"]["cache"], "hit");

    let tower = cache.join("tower.txt");
    let text = fs::read_to_string(&tower).unwrap().replacen("234", "233", 1);
    fs::write(&tower, text).unwrap();
    let out = weblin(dir.path(), &["tower", "--cache-dir", c]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tower"]["cache"], "rebuilt: checksum mismatch");

    let r = json(&weblin(&cache, &["tower"]));
    assert_eq!(r["tower"]["cache"], "hit");
    assert_eq!(r["tower"]["cache_dir"], c);
}
