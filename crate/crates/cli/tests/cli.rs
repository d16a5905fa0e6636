use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_combwalks")).args(args).output().expect("spawn combwalks")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn catalan_suite_verifies() {
    let out = run(&["verify", "catalan", "--m-max", "15"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("15 checks, 0 mismatches\n"));
}

#[test]
fn prop2_json_lists_every_pair() {
    let out = run(&["--format", "json", "verify", "prop2", "--m-max", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 78 + 66);
    assert!(reports.iter().all(|r| r["verdict"] == "equal"));
    assert_eq!(doc["manifest"]["params"]["m_max"], 12);
}

#[test]
fn prop1_reports_constants() {
    let out = run(&["--format", "json", "verify", "prop1", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let constants: Vec<&str> =
        doc["reports"].as_array().unwrap().iter().skip(1).map(|r| r["constant"].as_str().unwrap()).collect();
    assert_eq!(constants, ["-1/4", "1/36"]);
}

#[test]
fn dp_oracle_is_seeded() {
    let a = run(&["--format", "csv", "--seed", "3", "verify", "dp-oracle", "--n-max", "5", "--kappa-n-max", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("\"seed\":3"));
}

#[test]
fn empty_kappa_class_is_zero() {
    let out = run(&["--format", "json", "compute", "bkappa", "--n", "4", "--R", "1", "--S", "2", "--kappa", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["value"], "0");
    assert_eq!(doc["result"]["walk_count"], 0);
    assert_eq!(doc["note"], "empty class");
}

#[test]
fn pinned_kappa_values() {
    let out = run(&["compute", "bkappa", "--n", "3", "--R", "1", "--S", "2", "--kappa", "3"]);
    assert!(stdout(&out).starts_with("1/2949120\n"));
    let out = run(&["compute", "bkappa", "--n", "3", "--R", "1", "--S", "2", "--kappa", "1", "--abs"]);
    assert!(stdout(&out).starts_with("1/32\n"));
}

#[test]
fn sum_methods_agree() {
    let base = ["compute", "sum", "--n", "5", "--m", "6", "--value", "2=1/2", "--value", "4=-3", "--value", "6=2/7"];
    let dp = stdout(&run(&[&base[..], &["--method", "dp"]].concat()));
    let brute = stdout(&run(&[&base[..], &["--method", "brute"]].concat()));
    assert_eq!(dp.lines().next(), brute.lines().next());
}

#[test]
fn sum_accepts_class_json() {
    let class = r#"{"n":3,"direction":"ascending","steps":[-2,4],"sign_filter":"all","kappa":1}"#;
    let out = run(&["compute", "sum", "--class", class, "--value", "-2=1", "--value", "4=1", "--abs"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("1/32\n"));
}

#[test]
fn complex_values_give_float_output() {
    let out =
        run(&["--format", "json", "compute", "sum", "--n", "3", "--m", "4", "--value", "2=1+1i", "--value", "4=0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["exact"], false);
}

#[test]
fn poly_prints_polynomial() {
    let out = run(&["compute", "poly", "--n", "2", "--m", "4"]);
    assert_eq!(stdout(&out), "1/4*V(2)^2 + V(4)\n");
}

#[test]
fn beta_reports_truncation() {
    let args = [
        "--format",
        "json",
        "compute",
        "beta",
        "--n",
        "3",
        "--m",
        "4",
        "--value",
        "2=1",
        "--value",
        "-2=1",
        "--max-steps",
        "5",
    ];
    let doc = json(&run(&args));
    assert_eq!(doc["result"]["truncated"], true);
    assert!(doc["result"]["last_increment"].is_string());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("combwalks-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q1.csv");
    let out = run(&["--format", "csv", "--out", path.to_str().unwrap(), "explore", "q1", "--m", "4", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# manifest: "));
    assert_eq!(text.lines().last().unwrap(), "4,4,3,true,1,144,144;40;1,");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "sum", "--n", "3", "--m", "4", "--value", "0=1"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "sum", "--n", "3", "--m", "4", "--value", "3=1"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "yaml", "verify", "prop1"]).status.code(), Some(2));
}

// diagnostic envelope for |V| <= 1 on F_4 with L = n_max + 8, W = 2
const PROP3_BOUND: &str = "0.025";

#[test]
fn prop3_small_potentials_stay_within_bound() {
    let potentials: [[&str; 4]; 4] = [
        ["2=1", "4=1", "-2=1", "-4=1"],
        ["2=1", "4=-1", "-2=-1", "-4=1"],
        ["2=-1", "4=1/2", "-2=1", "-4=-1/2"],
        ["2=1/2", "4=1/3", "-2=1/4", "-4=1/5"],
    ];
    for v in potentials {
        let mut args = vec!["--format", "csv", "explore", "prop3", "--m", "4", "--n-min", "4", "--n-max", "24"];
        for x in v {
            args.extend(["--value", x]);
        }
        args.extend(["--bound", PROP3_BOUND]);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{v:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn prop3_bound_violation_exits_1() {
    let args = [
        "explore", "prop3", "--m", "4", "--n-min", "4", "--n-max", "6", "--value", "2=1", "--value", "4=1", "--value",
        "-2=1", "--value", "-4=1", "--bound", "0.01",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn prop3_vanishing_backward_weights() {
    let args = [
        "--format", "csv", "explore", "prop3", "--m", "4", "--n-min", "4", "--n-max", "8", "--value", "2=1/3",
        "--value", "4=2",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in text.lines().skip(2) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[3], "false");
        assert_eq!(cells[4], "1");
        assert_eq!(cells[13], "minus:degenerate");
    }
}

#[test]
fn q2_fixed_value_runs() {
    let out =
        run(&["--format", "csv", "explore", "q2", "--m", "4", "--n-max", "6", "--value", "2=1", "--value", "4=1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().skip(2).all(|l| l.contains(",1.0000000000000000e0,")));
}
