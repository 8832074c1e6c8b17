//! End-to-end tests of the compiled binary.

use std::process::{Command, Output};

use abelicomp::restriction::build_mullen;
use abelicomp::Group;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abelicomp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn count_pinned_values() {
    let out = run(&[
        "count", "--class", "window-sum", "--d", "3", "--moduli", "4", "--m", "21", "--s", "0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "40234356");

    let out = run(&[
        "count", "--class", "mullen", "--d", "2", "--moduli", "5", "--m", "0", "--s", "0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");

    let out = run(&[
        "count", "--class", "carlitz", "--d", "2", "--moduli", "6", "--m", "5", "--s", "3",
    ]);
    assert_eq!(stdout(&out).trim(), "136");
}

#[test]
fn count_all_targets_json() {
    let out = run(&[
        "count", "--class", "mullen", "--d", "2", "--moduli", "5", "--m", "3", "--all-s",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["moduli"], serde_json::json!([5]));
    assert_eq!(value["coeffs"][0], "12");
    assert_eq!(value["coeffs"][1], "6");
}

#[test]
fn count_multi_factor_group() {
    let out = run(&[
        "count", "--class", "carlitz-weak", "--d", "1", "--moduli", "2,3", "--m", "4", "--s",
        "1,2",
    ]);
    assert!(out.status.success());
    let c: u64 = stdout(&out).trim().parse().unwrap();
    assert!(c > 0);
}

#[test]
fn table_presets_match_golden_files() {
    for (preset, golden) in [
        ("table1", include_str!("golden/table1.csv")),
        ("table2", include_str!("golden/table2.csv")),
        ("table3", include_str!("golden/table3.csv")),
        ("table4", include_str!("golden/table4.csv")),
    ] {
        let out = run(&["table", "--preset", preset, "--format", "csv"]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), golden, "{preset}");
    }
    // the (m=10, s=0) cell of table2
    let out = run(&["table", "--preset", "table2", "--format", "csv"]);
    let text = stdout(&out);
    let row0 = text.lines().nth(1).unwrap();
    assert_eq!(row0.split(',').last().unwrap(), "16008");

    let out = run(&["table", "--preset", "table3", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["rows"]["5"][8], "329064");
}

#[test]
fn asymptotic_sources_agree() {
    let out = run(&[
        "asymptotic", "--class", "mullen", "--d", "2", "--moduli", "5", "--source", "closed",
    ]);
    assert!(out.status.success());
    let closed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(closed["A"], "4/15");
    assert_eq!(closed["B"], "3");
    assert_eq!(closed["source"], "theorem3");

    let out = run(&[
        "asymptotic", "--class", "mullen", "--d", "2", "--moduli", "5", "--source", "spectral",
    ]);
    assert!(out.status.success());
    let spectral: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let a = spectral["A"].as_f64().unwrap();
    assert!((a - 4.0 / 15.0).abs() < 1e-9);
    assert!((spectral["perron"]["rho"].as_f64().unwrap() - 3.0).abs() < 1e-9);

    // nonzero window-sum class has no closed form
    let out = run(&[
        "asymptotic", "--class", "window-sum", "--d", "3", "--moduli", "4", "--source", "closed",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error[Unsupported]"));
}

#[test]
fn verify_reports_and_exits_clean() {
    let out = run(&[
        "verify", "--class", "mullen", "--d", "2", "--moduli", "5", "--max-m", "6",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all counts match"));

    let out = bin()
        .args(["verify", "--class", "carlitz-weak", "--d", "2", "--moduli", "6", "--max-m", "5"])
        .args(["--jobs", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn budget_env_is_honored() {
    let out = bin()
        .args(["verify", "--class", "mullen", "--d", "2", "--moduli", "5", "--max-m", "12"])
        .env("ABELICOMP_BUDGET", "1000")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error[BudgetExceeded]"));
}

#[test]
fn bijection_report() {
    let out = run(&["bijection", "--d", "2", "--moduli", "5", "--m", "4"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["prefix_sum_bijection"]["bijective"], true);
    assert_eq!(value["prefix_sum_bijection"]["source_count"], 108);
    assert_eq!(value["target_independence"]["all_hold"], true);
}

#[test]
fn waring_and_diagonal() {
    let out = run(&["waring", "--p", "7", "--k", "2"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["waring"], 2);

    let out = run(&["waring", "--p", "7", "--k", "3", "--max-m", "2"]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["not_reached"], 2);

    let out = run(&["diagonal", "--p", "5", "--coeffs", "1,1", "--exps", "2,2", "--a", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");

    // an extension-field instance with colon-separated coordinates
    let out = run(&["diagonal", "--p", "2", "--n", "2", "--coeffs", "1:0,0:1", "--exps", "1,1", "--a", "1:1"]);
    assert!(out.status.success());
    let c: u64 = stdout(&out).trim().parse().unwrap();
    assert!(c > 0);
}

#[test]
fn check_digraph_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("mullen.json");
    let g = Group::new(&[5]).unwrap();
    let d = build_mullen(&g, 2).unwrap();
    std::fs::write(&good, serde_json::to_string(&d.to_json()).unwrap()).unwrap();

    let out = run(&["check-digraph", good.to_str().unwrap(), "--l-max", "3"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["strongly_connected"], true);
    assert_eq!(value["cycle_gcd"], 1);
    assert!(value["condition2"]["witness"].is_array());

    // counting through the loaded digraph matches the built-in class
    let out = run(&[
        "count", "--class", "custom", "--digraph", good.to_str().unwrap(), "--m", "10", "--s",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "15681");

    let bad = dir.path().join("no_terminal.json");
    std::fs::write(
        &bad,
        r#"{"moduli":[5],"span":1,"recurrent":[[[1]],[[2]]],"start":[0],"arcs":[[0,1],[1,0]],"terminal":{}}"#,
    )
    .unwrap();
    let out = run(&["check-digraph", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error[InvalidDigraph]"));

    let out = run(&["count", "--class", "mullen", "--d", "2", "--moduli", "1", "--m", "2", "--s", "0"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error[InvalidModulus]"));
}
