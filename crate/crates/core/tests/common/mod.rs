//! Brute-force oracles shared by the integration tests. They evaluate rule
//! conditions and action semantics directly on outcomes and never call the
//! search or condensation code under test.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use gcpnet::gcp::GcpNet;
use gcpnet::logic::{Formula, Literal, Outcome};
use gcpnet::strips::ActionSet;
use gcpnet::verify::Reach;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Transitive closure of a successor relation over `2^n` outcomes.
pub struct Oracle {
    pub n: usize,
    reach: Vec<Vec<bool>>,
}

fn value(o: &Outcome, l: Literal) -> bool {
    o.get(l.var) == l.positive
}

/// Outcomes one improving flip away from `o`, found by evaluating every
/// rule condition on `o`.
pub fn flips(net: &GcpNet, o: &Outcome) -> Vec<Outcome> {
    let mut out = Vec::new();
    for r in net.rules() {
        let cond = r.condition.eval_with(&|v| o.get(v));
        if cond && !value(o, r.target) {
            let next = o.with(r.target.var, r.target.positive);
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    out
}

/// States one state-changing action away from `s`.
pub fn moves(set: &ActionSet, s: &Outcome) -> Vec<Outcome> {
    let mut out = Vec::new();
    for a in set.actions() {
        if a.pre.iter().all(|&l| value(s, l)) {
            let mut t = *s;
            for &l in &a.post {
                t = t.with(l.var, l.positive);
            }
            if t != *s && !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

impl Oracle {
    pub fn new(n: usize, succ: impl Fn(&Outcome) -> Vec<Outcome>) -> Oracle {
        let size = 1usize << n;
        let adj: Vec<Vec<usize>> = (0..size)
            .map(|i| {
                succ(&Outcome::from_index(n, i as u64))
                    .iter()
                    .map(|o| o.index() as usize)
                    .collect()
            })
            .collect();
        let reach = (0..size)
            .map(|s| {
                let mut seen = vec![false; size];
                let mut queue: VecDeque<usize> = adj[s].iter().copied().collect();
                while let Some(v) = queue.pop_front() {
                    if !seen[v] {
                        seen[v] = true;
                        queue.extend(adj[v].iter().copied());
                    }
                }
                seen
            })
            .collect();
        Oracle { n, reach }
    }

    pub fn of_net(net: &GcpNet) -> Oracle {
        Oracle::new(net.num_vars(), |o| flips(net, o))
    }

    pub fn of_actions(set: &ActionSet) -> Oracle {
        Oracle::new(set.num_vars(), |s| moves(set, s))
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        let n = self.n;
        (0..1u64 << n).map(move |i| Outcome::from_index(n, i))
    }

    /// A path of length at least one from `a` to `b`.
    pub fn dom(&self, a: &Outcome, b: &Outcome) -> bool {
        self.reach[a.index() as usize][b.index() as usize]
    }

    pub fn is_consistent(&self) -> bool {
        self.outcomes().all(|a| !self.dom(&a, &a))
    }

    pub fn class_of(&self, a: &Outcome) -> BTreeSet<u64> {
        let mut c: BTreeSet<u64> = self
            .outcomes()
            .filter(|b| self.dom(a, b) && self.dom(b, a))
            .map(|b| b.index())
            .collect();
        c.insert(a.index());
        c
    }

    pub fn classes(&self) -> BTreeSet<BTreeSet<u64>> {
        self.outcomes().map(|a| self.class_of(&a)).collect()
    }

    pub fn weakly_non_dominated(&self, a: &Outcome) -> bool {
        self.outcomes().all(|b| !self.dom(a, &b) || self.dom(&b, a))
    }

    pub fn non_dominated(&self, a: &Outcome) -> bool {
        self.weakly_non_dominated(a) && self.class_of(a).len() == 1
    }

    pub fn dominating(&self, a: &Outcome) -> bool {
        let own = self.class_of(a);
        self.outcomes()
            .filter(|b| !own.contains(&b.index()))
            .all(|b| self.dom(&b, a))
    }

    pub fn strongly_dominating(&self, a: &Outcome) -> bool {
        self.dominating(a) && self.non_dominated(a)
    }

    /// Hands the closure to the library's property checks.
    pub fn to_reach(&self) -> Reach {
        Reach::from_successors(self.n, |v| {
            let a = Outcome::from_index(self.n, v);
            self.outcomes().filter(|b| self.dom(&a, b)).map(|b| b.index()).collect()
        })
    }
}

pub fn oracle_reach(net: &GcpNet) -> Result<Reach, String> {
    Ok(Oracle::of_net(net).to_reach())
}

pub fn satisfiable(f: &Formula, n: usize) -> bool {
    (0..1u64 << n).any(|i| {
        let o = Outcome::from_index(n, i);
        f.eval_with(&|v| o.get(v))
    })
}

/// Every rotation of a cycle given without its repeated endpoint.
pub fn same_cycle(a: &[Outcome], b: &[Outcome]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}
