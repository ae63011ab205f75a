use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmotion"))
        .args(args)
        .env_remove("PMOTION_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_main_instance_passes() {
    let o = run(&[
        "verify", "--id", "main", "--k", "3", "--j", "1", "--r", "1", "--order", "40", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["subject"], "main");
    assert_eq!(v["order"], 40);
    assert!(v.get("firstMismatch").is_none());
    assert!(v["elapsedMs"].is_u64());
}

#[test]
fn constraint_violation_is_a_usage_error() {
    let o = run(&[
        "verify", "--id", "main", "--k", "3", "--j", "5", "--r", "1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("j + r"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--id", "no-such-id"],
        vec!["verify", "--id", "rr", "--a", "0", "--sides", "sum,set-Z"],
        vec!["verify", "--id", "rr"],
        vec!["series", "--id", "rr", "--side", "sideways", "--a", "0"],
        vec!["enumerate", "--set", "Q", "--k", "1"],
        vec!["frobnicate"],
        vec!["trace"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn mismatch_exits_one() {
    let o = run(&[
        "mutate",
        "--name",
        "ak-modulus",
        "--k-max",
        "1",
        "--order",
        "20",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let first = &v[0]["firstMismatch"];
    assert_eq!(v[0]["status"], "fail");
    assert!(first["at"].as_i64().unwrap() <= 6);
}

#[test]
fn worked_example_trace() {
    let o = run(&["trace", "--example", "figure1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1].trim(), "[4 0] 2 1 3 1 0");
    let arrows: String = lines
        .iter()
        .filter_map(|l| l.chars().next().filter(|c| *c == '⇒' || *c == '→'))
        .collect();
    assert_eq!(arrows, "⇒⇒→⇒→→→⇒⇒");
    assert_eq!(lines[10], "⇒ 2 1 3 1 [1 3] 0");
    assert!(lines[11].ends_with("focus 5"));
}

#[test]
fn worked_example_trace_as_json() {
    let o = run(&[
        "trace",
        "--seq",
        "1:4,0,2,1,3,1",
        "--u",
        "1",
        "--m",
        "5",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["focus"], 5);
    assert_eq!(v["steps"].as_array().unwrap().len(), 9);
    let result: Vec<(i64, u32)> = serde_json::from_value(v["result"]["entries"].clone()).unwrap();
    assert_eq!(result, vec![(1, 2), (2, 1), (3, 3), (4, 1), (5, 1), (6, 3)]);
}

#[test]
fn series_csv_dump() {
    let o = run(&[
        "series", "--id", "rr", "--side", "sum", "--a", "0", "--order", "10", "--format", "csv",
    ]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "exponent,coefficient");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[9], "8,3");
}

#[test]
fn order_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pmotion"))
        .args([
            "series", "--id", "rr", "--side", "product", "--a", "1", "--format", "csv",
        ])
        .env("PMOTION_ORDER", "5")
        .output()
        .unwrap();
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("\n4,2\n"));
}

#[test]
fn enumerate_formats() {
    let text = stdout(&run(&[
        "enumerate",
        "--set",
        "Z",
        "--j",
        "0",
        "--r",
        "0",
        "--k",
        "1",
        "--u",
        "0",
        "--max-weight",
        "6",
    ]));
    let sixes = text.lines().filter(|l| l.starts_with("6: ")).count();
    assert_eq!(sixes, 3);
    assert!(text.starts_with("0: []\n1: [1^1]\n"));
    let v = json(&run(&[
        "enumerate",
        "--set",
        "Zo",
        "--j",
        "0",
        "--r",
        "0",
        "--k",
        "1",
        "--max-weight",
        "6",
        "--format",
        "json",
    ]));
    let weights: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["weight"].as_i64().unwrap())
        .collect();
    assert_eq!(weights, vec![0, 2, 4, 6, 6]);
    assert_eq!(v[1]["entries"], serde_json::json!([[2, 1]]));
}

#[test]
fn list_is_introspectable() {
    let v = json(&run(&["list", "--format", "json"]));
    let ids = v.as_array().unwrap();
    assert_eq!(ids.len(), 20);
    let main = ids.iter().find(|i| i["name"] == "main").unwrap();
    assert_eq!(main["params"], serde_json::json!(["k", "j", "r"]));
    assert!(main["sides"].as_array().unwrap().iter().any(|s| s == "set-Z"));
}

#[test]
fn output_is_reproducible() {
    let args = [
        "sweep",
        "--id",
        "ag",
        "--id",
        "rr",
        "--k-max",
        "2",
        "--order",
        "20",
        "--format",
        "json",
        "--no-timing",
    ];
    let a = run(&args);
    let b = run(&args);
    let mut one_job = args.to_vec();
    one_job.extend(["--jobs", "1"]);
    let c = run(&one_job);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = json(&a);
    assert_eq!(v.as_array().unwrap().len(), 2 + 5);
    assert_eq!(v[0]["subject"], "ag");
}

#[test]
fn suites_pass_from_the_command_line() {
    for args in [
        vec![
            "bijection",
            "--j",
            "1",
            "--r",
            "0",
            "--k",
            "2",
            "--u",
            "-1",
            "--max-weight",
            "10",
        ],
        vec!["parity", "--k", "2", "--u", "1", "--max-weight", "10"],
        vec!["motion-check", "--span", "5", "--max-m", "6"],
        vec!["ring-laws", "--seed", "9", "--trials", "20", "--order", "12"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("PASS"));
    }
}

#[test]
fn lambda_trace_ends_with_the_image() {
    let text = stdout(&run(&["trace", "--bla", "2,1;;3", "--u", "0"]));
    assert!(text.lines().last().unwrap().starts_with("Λ = "));
    let padded = stdout(&run(&["trace", "--bla", "2", "--k", "3", "--u", "0"]));
    assert!(padded.starts_with("bla ((2), (), ())"));
}
