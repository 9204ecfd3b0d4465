mod common;

use std::io::Write;
use std::process::{Command, Output};

use common::fixture;
use gcpnet::io::{parse_gcp, parse_strips};
use gcpnet::strips::is_acyclic;
use gcpnet::Limits;

fn gcpnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcpnet")).args(args).output().unwrap()
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = gcpnet(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn consistency_reports_the_cycle() {
    let out = ok(&["consistency", &fx("example1.gcp")]);
    assert!(out.contains("verdict: inconsistent\n"));
    assert!(out.contains("witness: !x,!y x,!y x,y !x,y !x,!y\n"), "{out}");
}

#[test]
fn dominance_false_for_the_top_outcome() {
    let out = ok(&["dominance", &fx("example2.gcp"), "a,b", "!a,!b"]);
    assert!(out.starts_with("verdict: false\n"));
    let out = ok(&["dominance", &fx("example2.gcp"), "!a,!b", "a,b"]);
    assert!(out.starts_with("verdict: true\nwitness: !a,!b "), "{out}");
}

#[test]
fn optima_of_five_classes() {
    let out = ok(&["optima", &fx("example6.gcp")]);
    assert!(out.contains("non_dominated: !a,!b,!c\n"), "{out}");
    assert!(out.contains("\ndominating: []\n"), "{out}");
    assert!(out.contains("classes: 5\n"));
}

#[test]
fn json_mode() {
    let out = ok(&["--json", "optima", &fx("example2.gcp")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["strongly_dominating"], serde_json::json!(["a,b"]));
}

#[test]
fn other_queries() {
    assert!(ok(&["check", &fx("example1.gcp")]).contains("cpnet: true\n"));
    assert_eq!(ok(&["relation", &fx("example3.gcp"), "a,b", "!a,!b"]), "verdict: incomparable\n");
    assert!(ok(&["self-dominance", &fx("example1.gcp"), "x,y"]).starts_with("verdict: true\n"));
    assert!(ok(&["classify", &fx("example2.gcp"), "a,b"]).contains("strongly_dominating: true"));
    assert!(ok(&["classes", &fx("example5.gcp")]).contains("edges: []\n"));
    assert_eq!(
        ok(&["plan", &fx("chain.strips")]),
        "verdict: true\nwitness: a b\nexpanded: 2\n"
    );
    assert!(ok(&["acyclic", &fx("chain.strips")]).starts_with("verdict: false\n"));
}

#[test]
fn deterministic_output() {
    let a = ok(&["classes", &fx("example6.gcp")]);
    let b = ok(&["classes", &fx("example6.gcp")]);
    assert_eq!(a, b);
}

#[test]
fn reductions_write_parseable_files() {
    let lim = Limits::default();
    let counter = ok(&["reduce", "counter", &fx("chain.strips")]);
    let inst = parse_strips(&counter).unwrap();
    assert!(is_acyclic(inst.action_set(), &lim).unwrap());
    parse_strips(&ok(&["reduce", "se", &fx("chain.strips")])).unwrap();
    let lifted = parse_gcp(&ok(&["reduce", "lift", &fx("example3.gcp")])).unwrap();
    assert!(lifted.is_cpnet(&lim).unwrap());
    for args in [
        vec!["reduce", "theta1", "NET", "a,b"],
        vec!["reduce", "theta2", "NET", "a,b"],
        vec!["reduce", "theta3", "NET", "a,b", "!a,!b"],
        vec!["reduce", "theta3", "--literal", "NET", "a,b", "!a,!b"],
        vec!["reduce", "cp-consistency", "NET"],
    ] {
        let net = fx("example2.gcp");
        let args: Vec<&str> = args.iter().map(|&a| if a == "NET" { net.as_str() } else { a }).collect();
        parse_gcp(&ok(&args)).unwrap();
    }
    let se = temp("vars: x\ninit: !x\ngoal: x\naction a: pre = !x ; post = x\n");
    let text = ok(&["reduce", "to-gcp", se.path().to_str().unwrap()]);
    assert!(text.starts_with("# init: !x\n# goal: x\n"), "{text}");
}

#[test]
fn plan_mapping_round_trip() {
    let plan = temp("a\nb\n");
    let p = plan.path().to_str().unwrap();
    for red in ["counter", "se"] {
        let fwd = ok(&["map-plan", red, &fx("chain.strips"), p]);
        let fwd_file = temp(&fwd);
        let back = ok(&["map-plan", red, &fx("chain.strips"), fwd_file.path().to_str().unwrap(), "--backward"]);
        assert_eq!(back, "a\nb\n", "{red}");
        let json = ok(&["--json", "map-plan", red, &fx("chain.strips"), p]);
        assert!(json.contains("\"reaches_goal\": true"), "{json}");
    }
}

#[test]
fn sequence_mapping_round_trip() {
    let seq = temp("!a,!b\n!a,b\na,b\n");
    let lifted = ok(&["map-sequence", &fx("example2.gcp"), seq.path().to_str().unwrap()]);
    let lf = temp(&lifted);
    let back = ok(&["map-sequence", &fx("example2.gcp"), lf.path().to_str().unwrap(), "--backward"]);
    assert_eq!(back, "!a,!b\n!a,b\na,b\n");
}

#[test]
fn dot_export() {
    let flips = ok(&["export-dot", "flips", &fx("example1.gcp")]);
    assert!(flips.starts_with("digraph"));
    assert_eq!(flips.matches("->").count(), 4);
    let classes = ok(&["export-dot", "classes", &fx("example2.gcp")]);
    assert_eq!(classes.matches("->").count(), 4);
    ok(&["export-dot", "deps", &fx("example4.gcp")]);
}

#[test]
fn exit_codes() {
    assert_eq!(gcpnet(&["dominance", &fx("example2.gcp"), "a", "!a,!b"]).status.code(), Some(2));
    assert_eq!(gcpnet(&["dominance", &fx("example2.gcp"), "a,q", "!a,!b"]).status.code(), Some(2));
    assert_eq!(gcpnet(&["optima", "/nonexistent.gcp"]).status.code(), Some(2));
    let bad = temp("vars: a b\nrule: a : b > b\n");
    let o = gcpnet(&["check", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 15"));
    let o = gcpnet(&["--limit-n", "2", "optima", &fx("example4.gcp")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(gcpnet(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = ok(&["selftest", "--seed", "5", "--cases", "5"]);
    assert!(out.starts_with("verdict: pass\n"), "{out}");
}
