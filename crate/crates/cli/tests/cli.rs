use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_narayana"))
        .args(args)
        .env_remove("NARAYANA_SERIES_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out).trim_end().to_string()
}

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn seq_examples() {
    assert_eq!(
        ok(&["seq", "-k", "3", "-n", "10"]),
        "0 1 1 1 2 3 4 6 9 13 19"
    );
    assert_eq!(ok(&["seq", "-k", "2", "-n", "5"]), "0 1 1 2 3 5");
    assert_eq!(ok(&["seq", "-k", "3", "--at", "10", "--fast"]), "19");
    assert_eq!(ok(&["seq", "-k", "3", "--at", "10"]), "19");
}

#[test]
fn seq_modular_paths_agree() {
    let fast = ok(&[
        "seq",
        "-k",
        "4",
        "--at",
        "5000",
        "--fast",
        "--mod",
        "1_000_000_007",
    ]);
    let slow = ok(&["seq", "-k", "4", "--at", "5000", "--mod", "1000000007"]);
    assert_eq!(fast, slow);
    let table = ok(&["seq", "-k", "3", "-n", "40", "--mod", "97"]);
    let last: u64 = table.split(' ').next_back().unwrap().parse().unwrap();
    assert_eq!(
        last,
        ok(&["seq", "-k", "3", "--at", "40", "--mod", "97", "--fast"])
            .parse::<u64>()
            .unwrap()
    );
}

#[test]
fn conv_examples() {
    assert!(ok(&["conv", "-k", "3", "-n", "8"]).ends_with(" 30"));
    assert!(ok(&["conv", "-k", "2", "-n", "4", "--closed-form"]).ends_with(" 5"));
    assert_eq!(ok(&["conv", "-k", "4", "-n", "0"]), "0");
    assert_eq!(
        ok(&["conv", "-k", "5", "-n", "60", "--closed-form"]),
        ok(&["conv", "-k", "5", "-n", "60"])
    );
}

#[test]
fn series_examples() {
    assert_eq!(
        ok(&[
            "series",
            "-k",
            "2",
            "--object",
            "gf",
            "--order",
            "5",
            "--no-remainder"
        ]),
        "x + x^2 + 2x^3 + 3x^4 + 5x^5"
    );
    assert_eq!(
        ok(&["series", "-k", "3", "--object", "diff", "--order", "50"]),
        "0 + O(x^51)"
    );
    // conv(6) = 7 for k = 4
    let a = ok(&["series", "-k", "4", "--object", "A", "--order", "6"]);
    assert!(a.contains(" 1981x^6 "), "{a}");
}

#[test]
fn series_order_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_narayana"))
        .args(["series", "-k", "3", "--object", "diff"])
        .env("NARAYANA_SERIES_ORDER", "12")
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "0 + O(x^13)");
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "--k-min", "2", "--k-max", "8", "--n-max", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("overall status=pass"));

    assert_eq!(
        run(&["verify", "--forms", "lemma2", "--k-max", "64"])
            .status
            .code(),
        Some(0)
    );

    let out = run(&["verify", "--k-max", "4", "--mutate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status=fail"));
    assert!(stdout(&out).contains("at.n="));

    for bad in [
        &["verify", "--k-min", "5", "--k-max", "3"][..],
        &["verify", "--forms", "nope"],
        &["verify", "--n-max", "1e3"],
        &["seq", "-k", "1", "-n", "3"],
        &["seq", "-k", "3"],
        &["series", "-k", "3", "--object", "E"],
    ] {
        assert_eq!(run(bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn json_tree_round_trips() {
    let table = ok(&[
        "verify",
        "--k-max",
        "4",
        "--n-max",
        "30",
        "--series-order",
        "20",
        "--lemma-m-max",
        "6",
    ]);
    let json = ok(&[
        "verify",
        "--k-max",
        "4",
        "--n-max",
        "30",
        "--series-order",
        "20",
        "--lemma-m-max",
        "6",
        "--format",
        "json-tree",
    ]);
    let tree: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(tree["status"], "pass");
    let records = tree["records"].as_array().unwrap();
    let table_lines: Vec<&str> = table
        .lines()
        .filter(|l| !l.starts_with("overall"))
        .collect();
    assert_eq!(records.len(), table_lines.len());
    for (r, line) in records.iter().zip(&table_lines) {
        let id = r["check_id"].as_str().unwrap();
        assert!(line.starts_with(id));
        assert!(line.contains(&format!("cells={}", r["cells_checked"])));
        for (k, v) in r["params"].as_object().unwrap() {
            assert!(
                line.contains(&format!("{k}={}", v.as_str().unwrap())),
                "{line}"
            );
        }
        assert!(r["elapsed_seconds"].is_number());
    }
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&tree).unwrap()).unwrap();
    assert_eq!(tree, reparsed);
}

#[test]
fn json_tree_counterexample() {
    let out = run(&[
        "verify",
        "--k-max",
        "3",
        "--mutate",
        "--format",
        "json-tree",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let tree: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(tree["status"], "fail");
    let cx = &tree["records"][0]["first_counterexample"];
    assert!(cx["inputs"]["n"].is_string());
    assert_ne!(cx["lhs"], cx["rhs"]);
}

#[test]
fn csv_output() {
    let out = ok(&["seq", "-k", "3", "-n", "4", "--format", "csv"]);
    assert_eq!(out, "n,value\n0,0\n1,1\n2,1\n3,1\n4,2");
    let report = ok(&["verify", "--forms", "lemma1", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(report.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "check_id");
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert!(!rows.is_empty());
    // params contain spaces, so the whole field must survive quoting intact
    assert!(rows
        .iter()
        .all(|r| &r[0] == "lemma1" && &r[2] == "pass" && r[1].contains(' ')));
}

#[test]
fn bench_agreement_and_cutoff() {
    let out = ok(&[
        "bench",
        "-k",
        "3",
        "--at",
        "100000",
        "--strategy",
        "iter,polyexp",
    ]);
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "iter");
    assert_eq!(rows[1][0], "polyexp");
    assert_eq!(rows[0][5], rows[1][5]);
    assert!(rows.iter().all(|r| r[6] == "ok"));

    let out = ok(&["bench", "-k", "3", "--at", "10", "--repeat", "3"]);
    assert_eq!(out.lines().count(), 3);

    let out = run(&["bench", "-k", "5", "--at", "10^12", "--mod", "1000000007"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("iter,5,1000000000000,1,,,skipped"));
    assert!(text.contains("polyexp,5,1000000000000,1,"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped"));
}

#[test]
fn oeis_fixtures() {
    let a1629 = fixture("A001629.txt");
    let a930 = fixture("A000930.txt");
    assert!(
        ok(&["oeis", "--fixture", &a1629, "--target", "conv", "-k", "2"]).contains("status=pass")
    );
    assert!(ok(&[
        "oeis",
        "--fixture",
        &a930,
        "--target",
        "seq",
        "-k",
        "3",
        "--offset",
        "1"
    ])
    .contains("status=pass"));

    let out = run(&["oeis", "--fixture", &a930, "--target", "seq", "-k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("first differing index"));

    let out = run(&[
        "oeis",
        "--fixture",
        &a930,
        "--target",
        "seq",
        "-k",
        "3",
        "--offset",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "oeis",
        "--fixture",
        "/nonexistent/A1.txt",
        "--target",
        "seq",
        "-k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
