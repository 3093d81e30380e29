use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerds")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn convert_both_ways() {
    let o = run(&["convert", "-1,2,2,-4,3,-5,-6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cacaca3ba2ba4ca5b"));
    let o = run(&["--format", "json", "convert", "acc"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["index"], "-2,1");
}

#[test]
fn rejects_words_ending_in_a() {
    let o = run(&["convert", "ba"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["reduce"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "bc"]).status.code(), Some(2));
}

#[test]
fn reduce_checks_reference_tables() {
    let o = run(&["reduce", "--weight", "3", "--check-fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["reduce", "--weight", "4", "--check-fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ζ(1̄,1̄,2) not in reference table"));
    let o = run(&["--format", "json", "reduce", "--weight", "5", "--basis", "zlobin"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &v["result"]["table"]["rows"]["3,1,1"];
    assert!(row.as_array().unwrap().iter().any(|x| x == "-448/39"));
}

#[test]
fn altered_reference_is_reported() {
    let dir = std::env::temp_dir().join(format!("eulerds-ref-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = include_str!("../../core/fixtures/weight2.json");
    let bad = good.replacen("\"-2/1\"", "\"-3/1\"", 1);
    assert_ne!(good, bad);
    std::fs::write(dir.join("weight2.json"), bad).unwrap();
    let o = run(&["reduce", "--weight", "2", "--check-fixtures", "--fixtures", dir.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn json_is_stable_across_thread_counts() {
    let a = run(&["--format", "json", "--jobs", "1", "reduce", "--weight", "4"]);
    let b = run(&["--format", "json", "--jobs", "4", "reduce", "--weight", "4"]);
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"]["jobs"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));
    let c = run(&["--format", "json", "--jobs", "4", "reduce", "--weight", "4"]);
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn verify_small_n() {
    let o = run(&["verify", "--n", "2", "--prec", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.contains("PASS")));
}

#[test]
fn products_and_eval() {
    let o = run(&["--format", "json", "product", "c", "c"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["shuffle"]["terms"][0]["word"], "cc");
    assert_eq!(v["result"]["shuffle"]["terms"][0]["coeff"], "2/1");
    assert_eq!(v["result"]["stuffle"]["terms"].as_array().unwrap().len(), 2);
    let o = run(&["eval", "2", "--prec", "20"]);
    assert!(stdout(&o).contains("1.6449340668482264364"));
}
