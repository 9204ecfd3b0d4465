//! Graphviz DOT export. Node and edge order follow index order, so output
//! is deterministic.

use std::fmt::Write;

use crate::flip::{Condensation, FlipDigraph};
use crate::gcp::{DependencyGraph, Vars};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per outcome, labelled with its literals; one edge per
/// improving flip.
pub fn flips_to_dot(g: &FlipDigraph, vars: &Vars) -> String {
    let mut out = String::from("digraph flips {\n");
    for v in 0..g.num_nodes() {
        let label = vars.outcome_string(&g.outcome(v));
        writeln!(out, "  n{v} [label={}];", quote(&label)).unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// One node per dominance class; edges of the quotient DAG. Classes with
/// at most `max_listed` members list them in the label.
pub fn classes_to_dot(c: &Condensation, vars: &Vars, max_listed: usize) -> String {
    let mut out = String::from("digraph classes {\n");
    for k in 0..c.num_classes() {
        let size = c.class_size(k);
        let label = if size <= max_listed {
            let members: Vec<String> = c.members(k).map(|o| vars.outcome_string(&o)).collect();
            format!("C{k}: {}", members.join(" | "))
        } else {
            format!("C{k} ({size} outcomes)")
        };
        writeln!(out, "  c{k} [label={}];", quote(&label)).unwrap();
    }
    for (a, b) in c.edges() {
        writeln!(out, "  c{a} -> c{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edge `y -> x` when `y` occurs in a flip condition of `x`.
pub fn dependencies_to_dot(g: &DependencyGraph, vars: &Vars) -> String {
    let mut out = String::from("digraph dependencies {\n");
    for v in 0..g.num_vars {
        writeln!(out, "  v{v} [label={}];", quote(vars.name(v))).unwrap();
    }
    for &(y, x) in &g.edges {
        writeln!(out, "  v{y} -> v{x};").unwrap();
    }
    out.push_str("}\n");
    out
}
