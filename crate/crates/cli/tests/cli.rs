use std::fs;
use std::process::Command;

use clustagree_cli::report::parse_exact;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_clustagree"))
        .args(args)
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn identical_labels_give_perfect_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let labels = write(&dir, "l.csv", "a,a\na,a\nb,b\nb,b\nc,c\n");
    let (code, r) = run(&["table", "--labels", &labels]);
    assert_eq!(code, 0);
    let r = &r["results"];
    assert_eq!(r["indices"]["rand"]["decimal"], "1");
    assert_eq!(r["indices"]["adjusted_rand"]["decimal"], "1");
    assert_eq!(r["semimetrics"]["adjusted_rand"]["decimal"], "0");

    // three clusters: the closed-form maximum needs 2x2, enumeration does not
    let (code, _) = run(&["adjusted", "--labels", &labels]);
    assert_eq!(code, 3);
    let (code, r) = run(&["adjusted", "--labels", &labels, "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["max_adjusted"]["decimal"], "1");

    let two = write(&dir, "two.csv", "a,x\na,x\nb,y\nb,y\nb,y\n");
    let (code, r) = run(&["adjusted", "--labels", &two, "--kind", "adjusted-rand"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["conventional_adjusted"]["decimal"], "1");
    assert_eq!(r["results"]["max_adjusted"]["decimal"], "1");
}

#[test]
fn labels_build_the_expected_table() {
    let dir = tempfile::tempdir().unwrap();
    let labels = write(&dir, "l.csv", "# c1,c2\nA,P\nA,P\nA,P\nA,Q\nB,Q\nB,Q\n");
    let (code, r) = run(&["table", "--labels", &labels]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["table"]["counts"], json!([[3, 1], [0, 2]]));
    assert_eq!(r["results"]["q"], json!(14));
    assert_eq!(
        r["results"]["indices"]["fowlkes_mallows"]["radicand"],
        json!({"numerator": 8, "denominator": 21})
    );

    let mismatch = write(&dir, "m.csv", "A,P\nA\n");
    let out = Command::new(env!("CARGO_BIN_EXE_clustagree"))
        .args(["table", "--labels", &mismatch])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn max_adjusted_is_further_from_zero_on_the_minimum_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(&dir, "t.csv", "4,2\n3,1\n");
    let (code, r) = run(&["adjusted", "--table", &table, "--kind", "rand"]);
    assert_eq!(code, 0);
    let r = &r["results"];
    let conventional = parse_exact(&r["conventional_adjusted"]).unwrap();
    let max_adjusted = parse_exact(&r["max_adjusted"]).unwrap();
    assert_eq!(r["max_q"], json!(46));
    // both negative; the smaller denominator pushes the max-given-marginals value lower
    assert!(max_adjusted < conventional);
    assert_eq!(r["max_adjusted"]["numerator"], json!(-3));
    assert_eq!(r["max_adjusted"]["denominator"], json!(17));
}

#[test]
fn oracle_and_closed_form_agree_on_2x2() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(&dir, "t.csv", "4,2\n3,1\n");
    let (_, closed) = run(&["adjusted", "--table", &table]);
    let (_, oracle) = run(&["adjusted", "--table", &table, "--oracle"]);
    assert_eq!(closed["results"]["max_q_source"], "closed_form");
    assert_eq!(oracle["results"]["max_q_source"], "enumeration");
    assert_eq!(
        closed["results"]["max_adjusted"],
        oracle["results"]["max_adjusted"]
    );
}

#[test]
fn degenerate_normalisation_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    // (1,1)/(1,1): both feasible tables have Q = 2
    let table = write(&dir, "t.csv", "1,0\n0,1\n");
    let (code, r) = run(&["adjusted", "--table", &table, "--kind", "rand"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["degenerate_normalization"], json!(true));
    assert_eq!(r["results"]["max_adjusted"], json!("degenerate"));
}

#[test]
fn enumerated_tables_round_trip_through_table_input() {
    let dir = tempfile::tempdir().unwrap();
    for (rows, cols, objective) in [
        ("6,4", "7,3", "max"),
        ("6,4", "6,4", "min"),
        ("3,2,2", "4,2,1", "max"),
    ] {
        let (code, r) = run(&[
            "enumerate",
            "--rows",
            rows,
            "--cols",
            cols,
            "--objective",
            objective,
        ]);
        assert_eq!(code, 0);
        let q = r["results"]["extremal_q"].clone();
        for (i, t) in r["results"]["tables"]
            .as_array()
            .unwrap()
            .iter()
            .enumerate()
        {
            let text: String = t["counts"]
                .as_array()
                .unwrap()
                .iter()
                .map(|row| {
                    let cells: Vec<String> = row
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(Value::to_string)
                        .collect();
                    cells.join(",") + "\n"
                })
                .collect();
            let path = write(&dir, &format!("t{i}.csv"), &text);
            let (code, back) = run(&["table", "--table", &path]);
            assert_eq!(code, 0);
            assert_eq!(back["results"]["q"], q);
            assert_eq!(&back["results"]["table"], t);
            let (_, again) = run(&["table", "--table", &path]);
            assert_eq!(back["results"]["indices"], again["results"]["indices"]);
        }
    }
}

#[test]
fn budget_exhaustion_writes_a_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial.json").display().to_string();
    let (code, _) = run(&[
        "--out",
        &out,
        "enumerate",
        "--rows",
        "6,4",
        "--cols",
        "7,3",
        "--budget",
        "1",
    ]);
    assert_eq!(code, 4);
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["results"]["partial"], json!(true));
}

#[test]
fn scan_reports_counts() {
    let (code, r) = run(&["scan-conjecture", "--n-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["cases_scanned"], json!(1));
    assert_eq!(r["results"]["counterexample_count"], json!(0));
    let (_, timed) = run(&["scan-conjecture", "--n-max", "3", "--timing"]);
    assert!(timed["results"]["elapsed_ms"].is_u64());
}
