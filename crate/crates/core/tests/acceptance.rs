//! One line per acceptance criterion: verdict, elapsed time against its
//! bound, and a short detail. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{fixture_text, oracle_reach, same_cycle, satisfiable, Oracle};
use gcpnet::flip::{dominance_classes, find_cycle, find_optima, is_consistent, Optima};
use gcpnet::gcp::{cpnet_from_formula, GcpNet};
use gcpnet::io::{parse_gcp, parse_outcome};
use gcpnet::logic::Outcome;
use gcpnet::reductions::{counter_reduction, strips_to_gcp};
use gcpnet::strips::{is_acyclic, plan_exists, Plan};
use gcpnet::{gen, verify, Limits};
use rand::Rng;

type Verdict = Result<String, String>;

type Criterion = (&'static str, &'static str, Duration, fn() -> Verdict);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example(i: usize) -> GcpNet {
    parse_gcp(&fixture_text(&format!("example{i}.gcp"))).unwrap()
}

fn outcome_set(net: &GcpNet, s: &[&str]) -> BTreeSet<Outcome> {
    s.iter().map(|x| parse_outcome(x, net.vars()).unwrap()).collect()
}

fn set(v: &[Outcome]) -> BTreeSet<Outcome> {
    v.iter().copied().collect()
}

fn c1_example1() -> Verdict {
    let lim = Limits::default();
    let net = parse_gcp(&fixture_text("example1.gcp")).map_err(|e| e.to_string())?;
    check(net.is_cpnet(&lim).unwrap(), || "not a CP-net".into())?;
    let cycle = find_cycle(&net, &lim).unwrap().witness.ok_or("no cycle found")?;
    let expected: Vec<Outcome> = ["x,y", "!x,y", "!x,!y", "x,!y"]
        .iter()
        .map(|s| parse_outcome(s, net.vars()).unwrap())
        .collect();
    check(cycle.len() == 5 && cycle[0] == cycle[4], || "witness is not a closed 4-cycle".into())?;
    check(same_cycle(&cycle[..4], &expected), || "wrong cycle".into())?;
    Ok(format!("cycle {}", cycle.iter().map(|o| net.outcome_string(o)).collect::<Vec<_>>().join(" -> ")))
}

fn sizes(net: &GcpNet) -> Vec<usize> {
    let c = dominance_classes(net, &Limits::default()).unwrap();
    let mut s: Vec<usize> = (0..c.num_classes()).map(|i| c.class_size(i)).collect();
    s.sort();
    s
}

fn c2_examples() -> Verdict {
    let lim = Limits::default();
    let opt = |n: &GcpNet| -> Optima { find_optima(n, &lim).unwrap() };

    let e2 = example(2);
    let o = opt(&e2);
    check(sizes(&e2) == [1, 1, 1, 1], || "two-variable order: expected 4 singletons".into())?;
    check(set(&o.strongly_dominating) == outcome_set(&e2, &["a,b"]), || "ab not strongly dominating".into())?;

    let e3 = example(3);
    let o = opt(&e3);
    check(sizes(&e3) == [1, 1, 1, 1], || "expected 4 singletons".into())?;
    check(set(&o.non_dominated) == outcome_set(&e3, &["a,b", "!a,!b"]), || "non-dominated set".into())?;
    check(o.dominating.is_empty(), || "unexpected dominating outcome".into())?;

    let e4 = example(4);
    let o = opt(&e4);
    let s_c = outcome_set(&e4, &["a,b,c", "!a,b,c", "a,!b,c", "!a,!b,c"]);
    let oracle = Oracle::of_net(&e4);
    let c_class: BTreeSet<u64> = s_c.iter().map(|a| a.index()).collect();
    check(oracle.classes().contains(&c_class), || "oracle: c outcomes are not one class".into())?;
    check(sizes(&e4) == [4, 4], || "expected 2 classes of size 4".into())?;
    check(set(&o.dominating) == s_c && set(&o.weakly_non_dominated) == s_c, || "dominating set".into())?;
    check(o.non_dominated.is_empty() && o.strongly_dominating.is_empty(), || "unexpected non-dominated".into())?;

    let e5 = example(5);
    let o = opt(&e5);
    check(sizes(&e5) == [4, 4], || "expected 2 classes of size 4".into())?;
    check(dominance_classes(&e5, &lim).unwrap().edges().count() == 0, || "classes comparable".into())?;
    check(o.weakly_non_dominated.len() == 8 && o.dominating.is_empty() && o.non_dominated.is_empty(), || {
        "optima of incomparable classes".into()
    })?;

    let e6 = example(6);
    let o = opt(&e6);
    check(sizes(&e6) == [1, 1, 1, 1, 4], || format!("expected 5 classes, sizes {:?}", sizes(&e6)))?;
    check(set(&o.non_dominated) == outcome_set(&e6, &["!a,!b,!c"]), || "non-dominated set".into())?;
    check(o.dominating.is_empty(), || "unexpected dominating outcome".into())?;
    let maximal = dominance_classes(&e6, &lim).unwrap().maximal_classes().len();
    check(maximal == 2, || format!("{maximal} maximal classes"))?;

    for (i, n) in [(2, &e2), (3, &e3), (4, &e4), (5, &e5), (6, &e6)] {
        let or = Oracle::of_net(n);
        let o = opt(n);
        let pick = |f: &dyn Fn(&Outcome) -> bool| or.outcomes().filter(|a| f(a)).collect::<BTreeSet<_>>();
        check(
            set(&o.non_dominated) == pick(&|a| or.non_dominated(a))
                && set(&o.dominating) == pick(&|a| or.dominating(a))
                && set(&o.weakly_non_dominated) == pick(&|a| or.weakly_non_dominated(a))
                && set(&o.strongly_dominating) == pick(&|a| or.strongly_dominating(a)),
            || format!("example {i}: optima disagree with oracle"),
        )?;
    }
    Ok("class counts 4, 4, 2, 2, 5; optima exact".into())
}

fn c3_formula_gadget() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(3);
    let mut unsat = 0;
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let allowed: Vec<usize> = (0..n).collect();
        let phi = gen::random_formula(&mut r, &allowed, 3);
        let vars = gen::var_names(n);
        let net = cpnet_from_formula(&phi, &vars).map_err(|e| e.to_string())?;
        let cp = net.is_cpnet(&lim).unwrap();
        let sat = satisfiable(&phi, n);
        unsat += usize::from(!sat);
        check(cp == !sat, || format!("case {i}: cpnet {cp}, satisfiable {sat}"))?;
    }
    Ok(format!("200/200 agree ({unsat} unsatisfiable)"))
}

fn c4_consistency_local() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(4);
    let mut consistent = 0;
    for i in 0..500 {
        let n = r.gen_range(1..=4);
        let net = gen::random_gcp_net(&mut r, n, 8);
        let engine = is_consistent(&net, &lim).unwrap();
        check(engine == Oracle::of_net(&net).is_consistent(), || format!("case {i}: engine disagrees with oracle"))?;
        consistent += usize::from(engine);
        check(!engine || net.is_locally_consistent(&lim).unwrap(), || {
            format!("case {i}: consistent but not locally consistent")
        })?;
    }
    Ok(format!("0 violations ({consistent} consistent)"))
}

fn c5_single_effect() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(5);
    let mut planned = 0;
    for i in 0..200 {
        let n = r.gen_range(1..=3);
        let pe = gen::random_strips(&mut r, n, 3, false);
        let k = pe.actions().len();
        let extra = Plan(if k == 0 { vec![] } else { (0..r.gen_range(0..5)).map(|_| r.gen_range(0..k)).collect() });
        verify::single_effect_witnesses(&pe, &extra, &lim).map_err(|e| format!("case {i}: {e}"))?;
        let red = gcpnet::reductions::to_single_effect(&pe).unwrap();
        check(
            Oracle::of_actions(pe.action_set()).is_consistent()
                == Oracle::of_actions(red.instance.action_set()).is_consistent(),
            || format!("case {i}: oracle acyclicity differs"),
        )?;
        planned += usize::from(plan_exists(&pe, &lim).unwrap().witness.is_some());
    }
    Ok(format!("0 violations ({planned} with plans)"))
}

fn c6_actions_as_rules() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(6);
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let pe = gen::random_strips(&mut r, n, 4, true);
        let plans = Oracle::of_actions(pe.action_set());
        let (net, init, goal) = strips_to_gcp(&pe).unwrap();
        let dom = Oracle::of_net(&net);
        for a in plans.outcomes() {
            for b in plans.outcomes() {
                check(plans.dom(&a, &b) == dom.dom(&a, &b), || format!("case {i}: reachability differs"))?;
            }
        }
        check(plans.is_consistent() == dom.is_consistent(), || format!("case {i}: acyclic vs consistent"))?;
        check(is_acyclic(pe.action_set(), &lim).unwrap() == is_consistent(&net, &lim).unwrap(), || {
            format!("case {i}: engine acyclicity vs consistency")
        })?;
        if init != goal && plans.is_consistent() {
            let p = plan_exists(&pe, &lim).unwrap().witness.is_some();
            let d = gcpnet::flip::dominates(&net, &init, &goal, &lim).unwrap();
            check(p == d, || format!("case {i}: plan {p}, dominance {d}"))?;
        }
        verify::actions_as_rules(&pe, &oracle_reach, &lim).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("0 violations".into())
}

fn c7_lift() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(7);
    for i in 0..100 {
        let n = r.gen_range(1..=3);
        let c = gen::random_locally_consistent_net(&mut r, n, 6);
        verify::lift_properties(&c, &oracle_reach, &lim).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("0 violations".into())
}

fn c8_gadgets() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(8);
    let mut probes = verify::GadgetProbes::default();
    for i in 0..100 {
        let n = r.gen_range(1..=3);
        let h = gen::random_consistent_cpnet(&mut r, n, 2);
        let p = verify::gadget_properties(&h, &oracle_reach, &lim).map_err(|e| format!("case {i}: {e}"))?;
        probes.merge(p);
    }
    let u = &probes.unnormalized_theta3;
    let c = &probes.theta3_consistent;
    let mut detail = format!(
        "0 violations; without normalization {}/{} pairs disagree; Θ3 inconsistent for {}/{} consistent inputs",
        u.disagreements, u.cases, c.disagreements, c.cases
    );
    if let Some(first) = &u.first {
        detail.push_str(&format!("; first disagreement {first}"));
    }
    Ok(detail)
}

fn c9_local_non_dominance() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(9);
    for i in 0..500 {
        let n = r.gen_range(1..=4);
        let net = gen::random_gcp_net(&mut r, n, 8);
        verify::local_non_dominance(&net, &oracle_reach, &lim).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok("0 violations".into())
}

fn c10_closing_action() -> Verdict {
    let lim = Limits::default();
    let mut r = gen::rng(10);
    let mut planned = 0;
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let pe = gen::random_acyclic_strips(&mut r, n, 3);
        verify::closing_action(&pe, &lim).map_err(|e| format!("case {i}: {e}"))?;
        let closed = gcpnet::strips::with_closing_action(&pe).unwrap();
        let p = Oracle::of_actions(pe.action_set()).dom(&pe.initial(), &pe.goal());
        check(p != Oracle::of_actions(&closed).is_consistent(), || format!("case {i}: oracle disagrees"))?;
        planned += usize::from(p);
    }
    // the counter construction is the source of acyclic instances in practice
    let pe = gen::random_strips(&mut r, 2, 3, false);
    check(is_acyclic(counter_reduction(&pe).unwrap().instance.action_set(), &lim).unwrap(), || {
        "counter instance is cyclic".into()
    })?;
    Ok(format!("0 violations ({planned} with plans)"))
}

/// Peak resident set size of this process, from /proc.
fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn c11_scale() -> Verdict {
    let lim = Limits::default();
    // first seeded net with at least three rules per variable
    let net = (11..)
        .map(|seed| gen::random_conjunctive_net(&mut gen::rng(seed), 18, 108))
        .find(|n| n.rules().len() >= 54)
        .unwrap();
    check(net.is_conjunctive(), || "net is not conjunctive".into())?;
    let classes = dominance_classes(&net, &lim).map_err(|e| e.to_string())?;
    let consistent = classes.is_consistent();
    let search = is_consistent(&net, &lim).unwrap();
    check(consistent == search, || "materialized and implicit answers differ".into())?;
    let rss = peak_rss_bytes();
    if let Some(b) = rss {
        check(b < 4 << 30, || format!("peak RSS {} MiB", b >> 20))?;
    }
    Ok(format!(
        "n = 18, {} rules, consistent = {consistent}, {} classes, peak RSS {}",
        net.rules().len(),
        classes.num_classes(),
        rss.map(|b| format!("{} MiB", b >> 20)).unwrap_or_else(|| "unknown".into())
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "cyclic CP-net golden", Duration::from_millis(1), c1_example1),
        ("2", "optimality examples golden", Duration::from_millis(10), c2_examples),
        ("3", "formula gadget is a CP-net iff unsatisfiable", Duration::from_secs(1), c3_formula_gadget),
        ("4", "consistency implies local consistency", Duration::from_secs(10), c4_consistency_local),
        ("5", "single-effect rewrite", Duration::from_secs(30), c5_single_effect),
        ("6", "single-effect actions as rules", Duration::from_secs(30), c6_actions_as_rules),
        ("7", "lift to CP-nets", Duration::from_secs(60), c7_lift),
        ("8", "Θ gadgets", Duration::from_secs(120), c8_gadgets),
        ("9", "local non-dominance", Duration::from_secs(10), c9_local_non_dominance),
        ("10", "closing action", Duration::from_secs(20), c10_closing_action),
        ("11", "n = 18 consistency by materialization", Duration::from_secs(60), c11_scale),
    ];
    let mut failed = 0;
    for (id, name, bound, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (verdict, detail) = match result {
            Ok(d) if took <= bound => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time bound; {d}")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("[{verdict}] {id:>2} {name} ({took:.3?} / {bound:?}): {detail}");
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
