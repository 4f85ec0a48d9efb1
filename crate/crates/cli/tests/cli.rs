use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadfermat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_slice(&run(args).stdout).unwrap()
}

#[test]
fn factor_exit_codes() {
    assert_eq!(code(&["factor", "--n", "4"]), 0);
    assert_eq!(code(&["factor", "--n", "5"]), 1);
    assert_eq!(code(&["factor", "--N", "12"]), 2);
    assert_eq!(code(&["factor", "--n", "0"]), 2);
    assert_eq!(code(&["factor", "--n", "-3"]), 2);
    assert_eq!(code(&["factor", "--n", "4", "--N", "65"]), 2);
    assert_eq!(code(&["factor"]), 2);
}

#[test]
fn factor_reports_pair() {
    let v = json(&["factor", "--n", "4", "--json"]);
    let pair = &v["results"]["pairs"][0];
    assert_eq!(
        (pair["a"].as_u64(), pair["b"].as_u64()),
        (Some(5), Some(13))
    );
    assert_eq!(pair["u"], 1);
    assert!(stdout(&["factor", "--n", "5"]).contains("prime"));

    let v = json(&["factor", "--N", "325", "--all", "--json"]);
    let pairs: Vec<(u64, u64)> = v["results"]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["a"].as_u64().unwrap(), p["u"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(13, 2), (5, 4)]);
    assert_eq!(v["parameters"]["N"], 325);
}

#[test]
fn factor_handles_big_targets() {
    // 4n^2 + 1 with n = 2^70 needs more than 128 bits
    let n = (1u128 << 70).to_string();
    let out = run(&["factor", "--n", &n, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("\"N\": 5575186299632655785383929568162090376495105"),
        "{text}"
    );
}

#[test]
fn factor_generic_examples() {
    let v = json(&["factor-generic", "--N", "9797", "--json"]);
    let s = &v["results"]["split"];
    assert_eq!((s["c"].as_u64(), s["d"].as_u64()), (Some(99), Some(2)));
    assert_eq!(code(&["factor-generic", "--N", "97"]), 1);
    assert_eq!(code(&["factor-generic", "--N", "9993", "--budget", "5"]), 1);
    assert_eq!(code(&["factor-generic", "--N", "9798"]), 2);
    assert!(stdout(&["factor-generic", "--N", "15"]).contains("15 = 3 x 5"));
}

#[test]
fn candidates_examples() {
    assert!(stdout(&["candidates", "--n", "4"]).contains("[1, 1.5) -> {1}"));
    let text = stdout(&["candidates", "--n", "4", "--prime", "7"]);
    assert!(text.contains("parametric {1, 2, 3, 4}"), "{text}");
    assert!(text.contains("qr         {1, 2, 3, 4}"), "{text}");
    assert!(text.contains("equal=true"));
    assert_eq!(code(&["candidates", "--n", "4", "--prime", "5"]), 2);
    assert_eq!(code(&["candidates", "--n", "4", "--prime", "9"]), 2);
    assert_eq!(code(&["candidates", "--n", "1"]), 0);
}

#[test]
fn audit_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o3.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        code(&["audit", "--range", "1:50", "--claims", "O3", "--json", p]),
        0
    );
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "audit");
    let violations = v["results"][0]["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|x| x["N"] == 325 && x["u"] == 2 && x["modulus"] == 3));

    assert_eq!(
        code(&["audit", "--range", "1:200", "--claims", "E1,E2", "--json", p]),
        0
    );
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    for r in v["results"].as_array().unwrap() {
        assert!(
            r["violations"].as_array().unwrap().is_empty(),
            "{}",
            r["claim"]
        );
    }

    assert_eq!(code(&["audit", "--range", "5:1"]), 2);
    assert_eq!(code(&["audit", "--range", "1-5"]), 2);
    assert_eq!(code(&["audit", "--range", "0:5"]), 2);
    assert_eq!(code(&["audit", "--range", "1:5", "--claims", "Z9"]), 2);
}

#[test]
fn audit_is_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for workers in ["1", "3"] {
        let path = dir.path().join(format!("w{workers}.json"));
        let p = path.to_str().unwrap();
        let args = [
            "audit",
            "--range",
            "1:300",
            "--workers",
            workers,
            "--json",
            p,
        ];
        assert_eq!(code(&args), 0);
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn fermat_examples() {
    let text = stdout(&[
        "fermat", "--index", "5", "--mode", "lambda", "--budget", "10000",
    ]);
    assert!(text.contains("lambda = 409  641 x 6700417"), "{text}");
    let text = stdout(&[
        "fermat", "--index", "6", "--mode", "lucas", "--budget", "10000",
    ]);
    assert!(text.contains("s = 1071  divisor 274177"), "{text}");
    assert_eq!(code(&["fermat", "--index", "4", "--mode", "lambda"]), 2);
    assert_eq!(code(&["fermat", "--index", "3", "--mode", "lucas"]), 2);
    assert_eq!(code(&["fermat", "--index", "4", "--mode", "lucas"]), 1);
    assert_eq!(code(&["fermat", "--index", "31", "--mode", "lucas"]), 2);
    // too small a budget to reach 409 from 8
    assert_eq!(
        code(&["fermat", "--index", "5", "--mode", "lambda", "--budget", "100"]),
        1
    );
    assert_eq!(
        code(&[
            "fermat",
            "--index",
            "5",
            "--mode",
            "lambda",
            "--filters",
            "on"
        ]),
        0
    );
}

#[test]
fn bench_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bench.csv");
    let p = path.to_str().unwrap();
    let args = [
        "bench",
        "--targets",
        "4,9",
        "--strategies",
        "all",
        "--repetitions",
        "1",
        "--csv",
        p,
    ];
    assert_eq!(code(&args), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "strategy,n,N,candidates,found,elapsed_ns");
    assert_eq!(lines.len(), 11);
    assert!(!csv.contains('\r'));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));

    assert_eq!(code(&["bench", "--targets", "5"]), 2);
    assert_eq!(
        code(&["bench", "--targets", "4", "--strategies", "bogus"]),
        2
    );
}
