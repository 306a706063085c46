use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bptool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bptool")).args(args).output().expect("spawn bptool")
}

fn ok(args: &[&str]) -> String {
    let out = bptool(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fixture_queries_through_an_index_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t1.txt");
    let index = dir.path().join("t1.idx");
    fs::write(&input, "(()(()())\n())\n").unwrap();
    ok(&["build", "--input", p(&input), "--index", p(&index), "--beta", "12", "--block", "4", "--chunk", "8"]);
    let cases: &[(&[&str], &str)] = &[
        (&["close", "1"], "12"),
        (&["open", "9"], "4"),
        (&["enclose", "5"], "4"),
        (&["enclose", "1"], "none"),
        (&["fwdsearch", "1", "-1"], "12"),
        (&["bwdsearch", "4", "-2"], "0"),
        (&["preorderselect", "5"], "7"),
        (&["child", "1", "2"], "4"),
        (&["lca", "5", "10"], "1"),
        (&["rank", "10", "7"], "3"),
        (&["select", "10", "4"], "10"),
        (&["minselect", "2", "11", "2"], "9"),
        (&["levelrightmost", "2"], "10"),
    ];
    for (args, expect) in cases {
        let mut full = vec!["query", "--index", p(&index)];
        full.extend_from_slice(args);
        assert_eq!(ok(&full).trim(), *expect, "{args:?}");
    }
    assert!(!bptool(&["query", "--index", p(&index), "close", "2", "3"]).status.success());
    assert!(!bptool(&["query", "--index", p(&index), "frobnicate", "1"]).status.success());
    assert!(!bptool(&["query", "--index", p(&index), "close", "3"]).status.success());
}

#[test]
fn generate_build_stats_bench() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("u.txt");
    let packed = dir.path().join("u.bin");
    ok(&["generate", "--kind", "uniform", "--n", "20000", "--seed", "4", "--output", p(&text)]);
    ok(&["generate", "--kind", "uniform", "--n", "20000", "--seed", "4", "--output", p(&packed), "--packed"]);
    assert_eq!(fs::read_to_string(&text).unwrap().trim().len(), 40000);

    let (a, b) = (dir.path().join("a.idx"), dir.path().join("b.idx"));
    ok(&["build", "--input", p(&text), "--index", p(&a), "--beta", "1024", "--block", "64"]);
    ok(&["build", "--input", p(&packed), "--index", p(&b), "--beta", "1024", "--block", "64"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let stats = ok(&["stats", "--index", p(&a)]);
    let raw = stats.lines().find(|l| l.starts_with("raw B")).unwrap();
    assert!(raw.trim_end().ends_with("2.0000"), "{raw}");
    assert!(stats.contains("total without counts"));

    let csv = dir.path().join("rmq.csv");
    ok(&["bench", "--index", p(&a), "--mode", "rmq", "--pairs", "5000", "--csv", p(&csv)]);
    let body = fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().next().unwrap(), "# bp-bench csv v1");
    assert_eq!(body.lines().nth(1).unwrap(), "name,param,mean_us,n,extra");
    assert_eq!(body.lines().count(), 2 + 100);

    let out = ok(&["bench", "--index", p(&a), "--p", "0,1", "--sample-min", "3000"]);
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().any(|r| r.starts_with("close,p=1,") && r.split(',').nth(3) == Some("20000")));
}

#[test]
fn no_counts_index_refuses_count_queries() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.txt");
    let index = dir.path().join("s.idx");
    ok(&["generate", "--kind", "star", "--n", "50", "--output", p(&input)]);
    ok(&["build", "--input", p(&input), "--index", p(&index), "--beta", "16", "--block", "8", "--no-counts"]);
    assert_eq!(ok(&["query", "--index", p(&index), "close", "1"]).trim(), "100");
    let out = bptool(&["query", "--index", p(&index), "degree", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("min-count"));
}

#[test]
fn rejects_garbage_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "(()").unwrap();
    let index = dir.path().join("bad.idx");
    assert!(!bptool(&["build", "--input", p(&input), "--index", p(&index)]).status.success());
    fs::write(&index, b"not an index").unwrap();
    assert!(!bptool(&["stats", "--index", p(&index)]).status.success());
}
