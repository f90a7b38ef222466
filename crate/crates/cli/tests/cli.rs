use std::process::{Command, Output};

use serde_json::Value;

const GEO: &str = r#"{"variant":"GeometricLadder","x0":"1","rho":"1/2"}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porosity-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn analyze_geometric_ladder() {
    let v = json(&run(&["analyze", "--family", GEO, "--q", "2"]));
    assert_eq!(v["schema"], "porosity-lab/1");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["verdicts"]["SP"]["value"], false);
    assert_eq!(v["porosity"]["certified"], "1/2");
}

#[test]
fn analyze_is_byte_stable() {
    let a = run(&["analyze", "--family", GEO, "--q", "2", "--q", "3/2", "--depth", "12"]);
    let b = run(&["analyze", "--family", GEO, "--q", "2", "--q", "3/2", "--depth", "12"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_is_byte_stable_per_seed() {
    let a = run(&["blowup", "--seed", "7", "--trials", "40"]);
    let b = run(&["blowup", "--seed", "7", "--trials", "40"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    for law in v["laws"].as_array().unwrap() {
        assert_eq!(law["violations"], 0, "{law}");
    }
}

#[test]
fn foundations_line() {
    let out = run(&["verify-foundations", "--n", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("20 down-set bases scanned, 0 counterexamples to I* = Î"), "{text}");
}

#[test]
fn foundations_universe_guard() {
    assert_eq!(run(&["verify-foundations", "--n", "5"]).status.code(), Some(1));
}

#[test]
fn example_separation() {
    let v = json(&run(&["reproduce-example", "--alpha", "1/2", "--q", "3", "--M", "2"]));
    assert_eq!(v["ihat_sp"]["value"], true);
    assert_eq!(v["i_csp"]["value"], false);
    assert_eq!(v["per_q"][0]["beta_sum"], "7");
}

#[test]
fn decompose_windowed_ladder() {
    let fam = r#"{"variant":"WindowedLadder","x0":"1","window":3,"sigma":"1/2","ratio":"2"}"#;
    let v = json(&run(&["decompose", "--family", fam, "--N", "2", "--q", "2"]));
    assert_eq!(v["parts"].as_array().unwrap().len(), 6);
    assert_eq!(v["cover_exact"], true);
}

#[test]
fn decompose_hypothesis_failure_exits_2() {
    let fam = r#"{"variant":"ExampleFamily","alpha":"1/2"}"#;
    let out = run(&["decompose", "--family", fam, "--N", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));
}

#[test]
fn no_zero_accumulation_exits_2() {
    let fam = r#"{"variant":"ExplicitChain","chain":{"blocks":[],"upper":"1","horizon":"0"}}"#;
    assert_eq!(run(&["analyze", "--family", fam]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(run(&["analyze", "--family", "{bad"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--family", GEO, "--q", "1"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--family", GEO, "--q", "x/2"]).status.code(), Some(1));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--family", "/nonexistent/family.json"]).status.code(), Some(1));
}

#[test]
fn family_from_file() {
    let path = std::env::temp_dir().join(format!("porosity-geo-{}.json", std::process::id()));
    std::fs::write(&path, GEO).unwrap();
    let v = json(&run(&["analyze", "--family", path.to_str().unwrap(), "--depth", "10"]));
    std::fs::remove_file(&path).ok();
    assert_eq!(v["family"]["variant"], "GeometricLadder");
}
