use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn degdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degdet")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// The `k / weight / X_k` table of a solve report.
fn table(out: &Output) -> Vec<String> {
    stdout(out).lines().skip_while(|l| !l.trim_start().starts_with("k ")).map(str::to_owned).collect()
}

#[test]
fn every_algorithm_reports_the_same_optima() {
    let path = fixture("worked.wmi");
    let reference = degdet(&["solve", &path, "--algo", "oracle"]);
    assert!(reference.status.success());
    assert!(stdout(&reference).contains("degdet   7"));
    for algo in ["degdet-naive", "degdet-heap", "frank", "frank-modified"] {
        let out = degdet(&["solve", &path, "--algo", algo]);
        assert!(out.status.success(), "{algo}");
        assert_eq!(table(&out), table(&reference), "{algo}");
        assert!(stdout(&out).contains("X*       {1, 2, 4, 5} weight 7"), "{algo}");
    }
}

#[test]
fn certify_passes_on_the_fixtures() {
    for name in ["worked.wmi", "identity3.wmi"] {
        let out = degdet(&["solve", &fixture(name), "--certify"]);
        assert!(out.status.success(), "{name}");
        let text = stdout(&out);
        assert!(text.contains("certify  cardinality: pass"), "{text}");
        assert!(!text.contains("fail"), "{text}");
    }
}

#[test]
fn trace_file_is_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let out = degdet(&["solve", &fixture("worked.wmi"), "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    let events = degdet::trace::read_jsonl(text.as_bytes()).unwrap();
    assert!(events.iter().any(|e| matches!(e, degdet::trace::TraceEvent::KappaIncrease { .. })));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let args = ["gen", "--seed", "11", "--n", "3", "--m", "5", "--entry-range", "-3:3", "--weight-range", "-9:9"];
    let a = degdet(&args);
    let b = degdet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, degdet(&["gen", "--seed", "12", "--n", "3", "--m", "5"]).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.wmi");
    std::fs::write(&path, &a.stdout).unwrap();
    let heap = degdet(&["solve", path.to_str().unwrap()]);
    let oracle = degdet(&["solve", path.to_str().unwrap(), "--algo", "oracle"]);
    assert!(heap.status.success());
    assert_eq!(table(&heap), table(&oracle));
}

#[test]
fn full_density_has_no_zero_entries() {
    let out = degdet(&["gen", "--seed", "2", "--n", "3", "--m", "4", "--density", "1.0"]);
    let text = stdout(&out);
    let entries: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("WMI"))
        .take(6)
        .flat_map(str::split_whitespace)
        .collect();
    assert_eq!(entries.len(), 24);
    assert!(entries.iter().all(|&v| v != "0"));
}

#[test]
fn compare_is_consistent() {
    for name in ["worked.wmi", "identity3.wmi"] {
        let out = degdet(&["compare", &fixture(name)]);
        assert!(out.status.success(), "{name}");
        assert!(stdout(&out).contains("result: consistent"));
    }
}

#[test]
fn bench_on_a_fixture() {
    let out = degdet(&["bench", "--instance", &fixture("worked.wmi"), "--repeats", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for solver in ["degdet-naive", "degdet-heap", "frank", "frank-modified"] {
        assert!(text.lines().any(|l| l.split_whitespace().nth(1) == Some(solver)), "{text}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(degdet(&["solve", "/definitely/not/here.wmi"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.wmi");
    std::fs::write(&garbled, "WMI 2 2\n# A\n1 x\n").unwrap();
    assert_eq!(degdet(&["solve", garbled.to_str().unwrap()]).status.code(), Some(1));

    let zero_column = dir.path().join("zero.wmi");
    std::fs::write(&zero_column, "WMI 2 2\n# A\n1 0\n0 0\n# B\n1 0\n0 1\n# c\n1 1\n").unwrap();
    assert_eq!(degdet(&["solve", zero_column.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(degdet(&["gen", "--n", "0", "--m", "2"]).status.code(), Some(2));
    assert_eq!(degdet(&["gen", "--n", "2", "--m", "2", "--entry-range", "0:0"]).status.code(), Some(2));
}

#[test]
fn oracle_respects_the_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_degdet"))
        .args(["solve", &fixture("worked.wmi"), "--algo", "oracle"])
        .env("WMI_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
