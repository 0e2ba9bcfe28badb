use std::process::{Command, Output};

use hypercat::closed_form::hypergraph_catalan_closed;
use hypercat::verify::{Level, Routes};
use hypercat_cli::report_suite;
use num_bigint::BigUint;

fn hypercat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn compute_examples() {
    for (args, expected) in [
        (
            &["compute", "-k", "2", "-n", "3", "--method", "walks"][..],
            "57\n",
        ),
        (&["compute", "-k", "1", "-n", "6"][..], "132\n"),
        (&["compute", "-k", "3", "-n", "2"][..], "20\n"),
        (
            &["compute", "-k", "2", "-n", "4", "--method", "trees"][..],
            "678\n",
        ),
        (
            &["compute", "-k", "2", "-n", "5", "--method", "lagrange"][..],
            "9270\n",
        ),
        (
            &["compute", "-k", "2", "-n", "5", "--method", "closed"][..],
            "9270\n",
        ),
    ] {
        let out = hypercat(args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
}

#[test]
fn walk_bound_is_enforced_and_overridable() {
    let out = hypercat(&["compute", "-k", "2", "-n", "5", "--method", "walks"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--max-walk-steps"));

    let out = hypercat(&[
        "compute",
        "-k",
        "2",
        "-n",
        "5",
        "--method",
        "walks",
        "--max-walk-steps",
        "20",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "9270\n");
    assert!(stderr(&out).starts_with("warning:"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["table", "-n", "3"][..],
        &["compute", "-k", "0", "-n", "3"][..],
        &["compute", "-k", "1"][..],
        &["compute", "-k", "1", "-n", "3", "--method", "guess"][..],
        &["star", "-k", "2", "-n", "4", "-m", "2"][..],
        &["ratio", "-k", "2", "--ns", "0"][..],
        &["nonsense"][..],
    ] {
        assert_eq!(hypercat(args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_hypercat"))
        .args(["compute", "-k", "1", "-n", "3"])
        .env("HYPERCAT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypercat"))
        .args(["compute", "-k", "2", "-n", "12", "--method", "closed"])
        .env("HYPERCAT_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), hypergraph_catalan_closed(12, 2).to_string());
}

#[test]
fn csv_table() {
    let out = hypercat(&["table", "-k", "2", "-n", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "k,n,c\n2,0,1\n2,1,1\n2,2,6\n2,3,57\n");

    let out = hypercat(&["table", "-k", "1", "-n", "4"]);
    let c: Vec<String> = csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .map(|r| r.unwrap()[2].to_string())
        .collect();
    assert_eq!(c, ["1", "1", "2", "5", "14"]);
}

#[test]
fn tables_round_trip_through_compute() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t.csv");
    let json_path = dir.path().join("t.json");
    for (format, path) in [("csv", &csv_path), ("json", &json_path)] {
        let out = hypercat(&[
            "table",
            "-k",
            "1,3,4",
            "-n",
            "25",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(out.stdout.is_empty());
    }

    let mut from_csv = Vec::new();
    for record in csv::Reader::from_path(&csv_path).unwrap().records() {
        let r = record.unwrap();
        from_csv.push((r[0].to_string(), r[1].to_string(), r[2].to_string()));
    }
    let json: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let from_json: Vec<(String, String, String)> = json
        .iter()
        .map(|row| {
            let field = |key: &str| row[key].as_str().expect("values are strings").to_string();
            (field("k"), field("n"), field("c"))
        })
        .collect();
    assert_eq!(from_csv, from_json);
    assert_eq!(from_csv.len(), 3 * 26);

    for (k, n, c) in from_csv.iter().step_by(7) {
        let out = hypercat(&["compute", "-k", k, "-n", n, "--method", "closed"]);
        assert_eq!(stdout(&out).trim_end(), c, "k = {k}, n = {n}");
        let parsed: BigUint = c.parse().unwrap();
        assert_eq!(parsed.to_string(), *c);
    }
}

#[test]
fn ratio_reports() {
    let out = hypercat(&["ratio", "-k", "2", "--ns", "200,50,100"]);
    assert!(out.status.success());
    let rows: Vec<(u32, f64)> = csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .map(|r| {
            let r = r.unwrap();
            assert_eq!(&r[0], "2");
            (r[1].parse().unwrap(), r[3].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), [50, 100, 200]);
    assert!(rows.windows(2).all(|w| w[1].1 < w[0].1));

    let out = hypercat(&["ratio", "-k", "1", "--ns", "10", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 1);
    let ratio: f64 = json[0]["ratio"].as_str().unwrap().parse().unwrap();
    assert!(ratio < 1.0 && ratio > 0.85, "{ratio}");

    let out = hypercat(&["ratio", "-k", "3", "--ns", "400"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "k,n,ratio,abs_delta\n3,400,1.00502676530,0.00502676529514\n"
    );
}

#[test]
fn star_commands() {
    let out = hypercat(&["star", "-k", "2", "-n", "3,4"]);
    assert_eq!(stdout(&out), "k,n,m,s\n2,3,0,30\n2,4,0,210\n2,4,1,360\n");
    let out = hypercat(&["star", "--sum", "-n", "20,50,100", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ratios: Vec<f64> = json
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["ratio"].as_str().unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]) && ratios[2] < 1.0);
}

#[test]
fn verify_quick_passes() {
    let out = hypercat(&["verify", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    assert!(text.ends_with("4/4 checks passed\n"));
}

fn closed_off_by_one(n: u32, k: u32) -> BigUint {
    hypergraph_catalan_closed(n, k) + u32::from(n == 3 && k == 2)
}

#[test]
fn verify_names_the_broken_route() {
    let routes = Routes {
        closed: closed_off_by_one,
        ..Routes::default()
    };
    let mut out = Vec::new();
    let ok = report_suite(Level::Quick, &routes, &mut out).unwrap();
    assert!(!ok);
    let text = String::from_utf8(out).unwrap();
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{text}");
    assert!(failing[0].contains("triple agreement"));
    assert!(
        failing[0].contains("n=3 k=2: walks=57 trees=57 closed=58 series=57"),
        "{}",
        failing[0]
    );
    assert!(text.ends_with("3/4 checks passed\n"));
}
