use std::process::Command;

use serde_json::Value;

fn ssx(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ssx"))
        .args(args)
        .env("SSX_THREADS", "2")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = ssx(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn json_report_has_schema_and_claims() {
    let v = json(&["omega-check", "--samples", "30"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["subcommand"], "omega-check");
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["seed"], 7);
    let ids: Vec<&str> = v["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["omega-prime-inside-omega", "boost-thresholds"]);
}

#[test]
fn table_csv_has_fixed_columns() {
    let (code, out, _) = ssx(&["--format", "csv", "levi-table", "--translates", "1"]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let headers: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(headers, ["p", "q", "stratum", "parameter", "F", "n_pos", "n_neg", "n_zero"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|row| !row[5].is_empty()));
}

#[test]
fn claims_only_csv_lists_claims() {
    let (code, out, _) = ssx(&["--format", "csv", "collision-witness"]);
    assert_eq!(code, 0);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["id", "passed", "statement", "detail"]);
    assert_eq!(r.records().count(), 4);
}

#[test]
fn failing_claim_exits_one() {
    // A margin this wide turns the boost thresholds into boundary verdicts.
    let (code, out, _) = ssx(&["--tol-margin", "0.5", "--format", "text", "omega-check", "--samples", "5"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] boost-thresholds"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["no-such-command"][..],
        &["omega-check", "--tau", "1,1,2"],
        &["omega-check", "--p", "2", "--q", "2", "--tau", "1,1"],
        &["injectivity", "--p", "2", "--q", "2", "--tau", "-1,1,-1,1", "--domain", "omega", "--samples", "4"],
        &["f-table", "--p", "2", "--q", "3"],
        &["lattice-verify", "--type", "b", "--n", "3", "--involution", "flip"],
        &["--tol-margin", "-1", "omega-check"],
    ] {
        let (code, _, err) = ssx(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn missing_witness_is_a_runtime_failure() {
    let (code, _, err) = ssx(&["collision-witness", "--p", "2", "--q", "2", "--tau", "-1,1,-1,1"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = ssx(&["--output", path.to_str().unwrap(), "rank1-catalog"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["data"]["catalog"].as_array().unwrap().len(), 7);
}

#[test]
fn classifies_points_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    // i·e₁ and i·e₁ + e₄ + e₅ in C^{4,3}.
    let pts = serde_json::json!([
        [[0.0, 1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        [[0.0, 1.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
    ]);
    std::fs::write(&path, pts.to_string()).unwrap();
    let (code, out, err) = ssx(&["--format", "csv", "orbit-classify", "--points", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let strata: Vec<String> = r.records().map(|row| row.unwrap()[2].to_string()).collect();
    assert_eq!(strata.len(), 2);
    assert_ne!(strata[0], strata[1]);

    std::fs::write(&path, "[[[1.0, 0.0]]]").unwrap();
    assert_eq!(ssx(&["orbit-classify", "--points", path.to_str().unwrap()]).0, 2);
}

#[test]
fn same_seed_same_bytes_across_thread_counts() {
    let args = ["regularity", "--samples", "60", "--nilpotent-samples", "10", "--jordan-samples", "10"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ssx"))
            .args(args)
            .env("SSX_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
    let other = json(&["--seed", "8", "regularity", "--samples", "60", "--nilpotent-samples", "10", "--jordan-samples", "10"]);
    assert_ne!(serde_json::to_vec(&other).unwrap(), run("1"));
}
