use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bernbound"))
        .args(args)
        .env_remove("BERNBOUND_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("UTF-8 output")
}

/// The CSV table without the `#` echo lines.
fn table(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let idx = rows[0].iter().position(|c| c == name).expect("column present");
    rows[1..].iter().map(|r| r[idx].clone()).collect()
}

#[test]
fn bound_values_and_regime() {
    let out = run(&["bound", "--family", "general-discrete", "--n", "33", "--eps", "2/33"]);
    assert!(out.status.success());
    let rows = table(&out);
    assert_eq!(column(&rows, "value"), ["0.785420"]);
    assert_eq!(column(&rows, "certified"), ["true"]);

    let out = run(&["bound", "--family", "hoeffding", "--n", "33", "--eps", "0"]);
    assert_eq!(column(&table(&out), "value"), ["2.000000"]);

    let out = run(&["bound", "--family", "continuous", "--n", "100", "--p", "0.5", "--eps", "0.005"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eps <= min(p, 1-p)"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bound", "--family", "hoeffding", "--n", "-3", "--eps", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["tail", "--n", "3", "--p", "half", "--eps", "1/3"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--family", "nope", "--n", "3", "--eps", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tail_both_boundaries() {
    let strict = run(&["tail", "--n", "33", "--p", "15/33", "--eps", "2/33"]);
    assert_eq!(column(&table(&strict), "decimal"), ["0.382439"]);
    let weak = run(&["tail", "--n", "33", "--p", "15/33", "--eps", "2/33", "--boundary", "weak"]);
    let rows = table(&weak);
    assert_eq!(column(&rows, "decimal"), ["0.600713"]);
    assert_eq!(column(&rows, "backend"), ["exact"]);
    assert!(column(&rows, "probability")[0].contains('/'));
}

#[test]
fn decimal_and_fraction_inputs_agree() {
    let a = run(&["tail", "--n", "40", "--p", "0.25", "--eps", "0.1"]);
    let b = run(&["tail", "--n", "40", "--p", "1/4", "--eps", "4/40"]);
    assert_eq!(table(&a), table(&b));
}

#[test]
fn log_backend_above_threshold() {
    let out = run(&["tail", "--n", "2000", "--p", "1/2", "--eps", "1/20"]);
    let rows = table(&out);
    assert_eq!(column(&rows, "backend"), ["log"]);
    assert_eq!(column(&rows, "probability"), [""]);
}

#[test]
fn decompose_smallest_grid() {
    let rows = table(&run(&["decompose", "--k", "1", "--r", "1", "--s", "1"]));
    assert_eq!(column(&rows, "group"), ["p0", "S1", "Z1"]);
    assert_eq!(column(&rows, "probability"), ["1/2", "1/4", "1/4"]);
    let out = run(&["decompose", "--k", "1", "--r", "1", "--n", "4", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_rows() {
    let rows = table(&run(&["table1"]));
    assert_eq!(rows[0], ["eps", "probability", "general_discrete", "hoeffding"]);
    assert_eq!(rows.len(), 15);
    assert_eq!(rows[5], ["0.1818", "0.052796", "0.120996", "0.225672"]);
    assert_eq!(rows[7], ["0.2424", "0.007724", "0.025643", "0.041352"]);
}

#[test]
fn table2_grid() {
    let rows = table(&run(&["table2"]));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][..2], ["100", "1.0412"]);
    assert_eq!(rows[2][5], "1.7566");
    assert_eq!(rows[3][6], "2.0348");
}

#[test]
fn figure_panels() {
    let rows = table(&run(&["figure-data", "--panel", "a", "--points", "11"]));
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[1][1], "1.0");
    assert_eq!(rows[11][1], "1.0");

    let out = run(&["figure-data", "--panel", "b", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mu = v["details"]["crossover"].as_f64().unwrap();
    let flip = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["general_discrete_smaller"] == false)
        .unwrap();
    let eps = flip["eps"].as_f64().unwrap();
    assert!(eps >= mu && eps - mu < 0.5 / 101.0 + 1e-12);

    let rows = table(&run(&["figure-data", "--panel", "c", "--points", "7"]));
    let last: f64 = rows.last().unwrap()[2].parse().unwrap();
    assert!((last - 0.767273).abs() < 2e-4);
}

#[test]
fn samplesize_queries() {
    let out = run(&["samplesize", "--family", "hoeffding", "--eps", "0.1", "--target", "0.05"]);
    assert_eq!(column(&table(&out), "n"), ["185"]);
    let out = run(&["samplesize", "--rank", "--n", "33", "--target", "0.05"]);
    assert!(table(&out).len() >= 5);
    assert_eq!(run(&["samplesize", "--family", "hoeffding", "--target", "0.05"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "--suite", "theorem1", "--kmax", "6", "--rsmax", "12"][..],
        &["verify", "--suite", "corollaries", "--table1"],
        &["verify", "--suite", "lemma1"],
        &["verify", "--suite", "theorem3,theorem4,median", "--nmax", "16", "--kmax", "3", "--rsmax", "6"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        for row in v["rows"].as_array().unwrap() {
            assert_eq!(row["fail"], 0);
        }
    }
}

#[test]
fn strict_inconclusive_exits_three() {
    let base = ["verify", "--suite", "lemma1", "--lemma-nmax", "5", "--delta-max", "1/100000", "--delta-steps", "20"];
    let low = [&base[..], &["--precision-bits", "1"]].concat();
    assert_eq!(run(&low).status.code(), Some(0));
    assert_eq!(run(&[&low[..], &["--strict"]].concat()).status.code(), Some(3));
    assert_eq!(run(&[&base[..], &["--strict"]].concat()).status.code(), Some(0));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bernbound"))
        .args(["verify", "--suite", "theorem1", "--kmax", "1", "--rsmax", "2"])
        .env("BERNBOUND_PRECISION_BITS", "64")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["precision_bits"], 64);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["params"]["kmax"], 1);
}

#[test]
fn output_is_reproducible_and_written_to_path() {
    let dir = std::env::temp_dir().join(format!("bernbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table1.json");
    let args = ["table1", "--exact", "--format", "json", "--out", path.to_str().unwrap()];
    assert!(run(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["metadata"]["boundary"], "weak");
    assert_eq!(v["rows"][0]["eps_exact"], "2/33");
    std::fs::remove_dir_all(&dir).unwrap();
}
