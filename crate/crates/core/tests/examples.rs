mod common;

use std::collections::BTreeSet;

use common::{fixture_text, same_cycle, Oracle};
use gcpnet::flip::{dominance_classes, find_cycle, find_optima, Optima};
use gcpnet::gcp::GcpNet;
use gcpnet::io::{parse_gcp, parse_outcome};
use gcpnet::logic::Outcome;
use gcpnet::Limits;

fn net(i: usize) -> GcpNet {
    parse_gcp(&fixture_text(&format!("example{i}.gcp"))).unwrap()
}

fn set(net: &GcpNet, outcomes: &[&str]) -> BTreeSet<Outcome> {
    outcomes.iter().map(|s| parse_outcome(s, net.vars()).unwrap()).collect()
}

fn optima(net: &GcpNet) -> Optima {
    find_optima(net, &Limits::default()).unwrap()
}

fn as_set(v: &[Outcome]) -> BTreeSet<Outcome> {
    v.iter().copied().collect()
}

/// Engine optima agree with the oracle's flag-by-flag reading.
fn assert_optima_match_oracle(net: &GcpNet) {
    let o = Oracle::of_net(net);
    let e = optima(net);
    let pick = |f: &dyn Fn(&Outcome) -> bool| o.outcomes().filter(|a| f(a)).collect::<BTreeSet<_>>();
    assert_eq!(as_set(&e.weakly_non_dominated), pick(&|a| o.weakly_non_dominated(a)));
    assert_eq!(as_set(&e.non_dominated), pick(&|a| o.non_dominated(a)));
    assert_eq!(as_set(&e.dominating), pick(&|a| o.dominating(a)));
    assert_eq!(as_set(&e.strongly_dominating), pick(&|a| o.strongly_dominating(a)));
    let classes = dominance_classes(net, &Limits::default()).unwrap();
    assert_eq!(classes.num_classes(), o.classes().len());
}

fn class_sizes(net: &GcpNet) -> Vec<usize> {
    let c = dominance_classes(net, &Limits::default()).unwrap();
    let mut sizes: Vec<usize> = (0..c.num_classes()).map(|i| c.class_size(i)).collect();
    sizes.sort();
    sizes
}

#[test]
fn example1_cycle() {
    let n = net(1);
    assert!(n.is_cpnet(&Limits::default()).unwrap());
    let cycle = find_cycle(&n, &Limits::default()).unwrap().witness.unwrap();
    assert_eq!(cycle.first(), cycle.last());
    let expected: Vec<Outcome> = ["x,y", "!x,y", "!x,!y", "x,!y"]
        .iter()
        .map(|s| parse_outcome(s, n.vars()).unwrap())
        .collect();
    assert!(same_cycle(&cycle[..4], &expected));
    assert!(!Oracle::of_net(&n).is_consistent());
}

#[test]
fn example2_linear_order() {
    let n = net(2);
    assert_eq!(class_sizes(&n), vec![1, 1, 1, 1]);
    let o = optima(&n);
    assert_eq!(as_set(&o.strongly_dominating), set(&n, &["a,b"]));
    assert_eq!(as_set(&o.non_dominated), set(&n, &["a,b"]));
    assert_optima_match_oracle(&n);
}

#[test]
fn example3_two_non_dominated() {
    let n = net(3);
    assert_eq!(class_sizes(&n), vec![1, 1, 1, 1]);
    let o = optima(&n);
    assert_eq!(as_set(&o.non_dominated), set(&n, &["a,b", "!a,!b"]));
    assert!(o.dominating.is_empty());
    assert_optima_match_oracle(&n);
}

#[test]
fn example4_c_class_on_top() {
    let n = net(4);
    let s_c = set(&n, &["a,b,c", "!a,b,c", "a,!b,c", "!a,!b,c"]);
    let s_nc = set(&n, &["a,b,!c", "!a,b,!c", "a,!b,!c", "!a,!b,!c"]);
    let o = Oracle::of_net(&n);
    let classes = o.classes();
    let idx = |s: &BTreeSet<Outcome>| s.iter().map(|a| a.index()).collect::<BTreeSet<_>>();
    assert_eq!(classes, [idx(&s_c), idx(&s_nc)].into_iter().collect());
    assert_eq!(class_sizes(&n), vec![4, 4]);
    let e = optima(&n);
    assert_eq!(as_set(&e.dominating), s_c);
    assert_eq!(as_set(&e.weakly_non_dominated), s_c);
    assert!(e.non_dominated.is_empty() && e.strongly_dominating.is_empty());
    assert_optima_match_oracle(&n);
}

#[test]
fn example5_incomparable_classes() {
    let n = net(5);
    assert_eq!(class_sizes(&n), vec![4, 4]);
    let c = dominance_classes(&n, &Limits::default()).unwrap();
    assert_eq!(c.edges().count(), 0);
    let e = optima(&n);
    assert_eq!(e.weakly_non_dominated.len(), 8);
    assert!(e.dominating.is_empty() && e.non_dominated.is_empty());
    assert_optima_match_oracle(&n);
}

#[test]
fn example6_five_classes() {
    let n = net(6);
    assert_eq!(class_sizes(&n), vec![1, 1, 1, 1, 4]);
    let e = optima(&n);
    assert_eq!(as_set(&e.non_dominated), set(&n, &["!a,!b,!c"]));
    assert!(e.dominating.is_empty());
    let o = Oracle::of_net(&n);
    let p = |s: &str| parse_outcome(s, n.vars()).unwrap();
    // !a!b!c > !a b !c > a b !c > a !b !c
    assert!(o.dom(&p("!a,b,!c"), &p("!a,!b,!c")));
    assert!(o.dom(&p("a,b,!c"), &p("!a,b,!c")));
    assert!(o.dom(&p("a,!b,!c"), &p("a,b,!c")));
    for c_outcome in set(&n, &["a,b,c", "!a,b,c", "a,!b,c", "!a,!b,c"]) {
        assert!(o.dom(&p("a,b,!c"), &c_outcome));
    }
    assert_optima_match_oracle(&n);
}
