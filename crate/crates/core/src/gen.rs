//! Seeded random instances for property checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::flip::is_consistent;
use crate::gcp::{GcpNet, PreferenceRule, Vars};
use crate::limits::Limits;
use crate::logic::{Formula, Literal, Outcome};
use crate::strips::{find_action_cycle, Action, StripsInstance};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x1 … xn`
pub fn var_names(n: usize) -> Vars {
    Vars::new((1..=n).map(|i| format!("x{i}"))).expect("distinct names")
}

pub fn random_outcome(rng: &mut impl Rng, n: usize) -> Outcome {
    let idx = if n == 0 { 0 } else { rng.gen_range(0..1u64 << n) };
    Outcome::from_index(n, idx)
}

/// A consistent cube of up to `max_len` literals over `allowed`.
pub fn random_cube(rng: &mut impl Rng, allowed: &[usize], max_len: usize) -> Vec<Literal> {
    let len = rng.gen_range(0..=max_len.min(allowed.len()));
    let mut vs = allowed.to_vec();
    vs.shuffle(rng);
    let mut lits: Vec<Literal> = vs[..len].iter().map(|&v| Literal::new(v, rng.gen())).collect();
    lits.sort();
    lits
}

/// A formula tree over `allowed` (which must be non-empty unless `depth`
/// only produces constants).
pub fn random_formula(rng: &mut impl Rng, allowed: &[usize], depth: usize) -> Formula {
    if allowed.is_empty() {
        return if rng.gen() { Formula::True } else { Formula::False };
    }
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Var(*allowed.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Formula::Not(Box::new(random_formula(rng, allowed, depth - 1))),
        1 => Formula::And(
            (0..rng.gen_range(2..=3))
                .map(|_| random_formula(rng, allowed, depth - 1))
                .collect(),
        ),
        _ => Formula::Or(
            (0..rng.gen_range(2..=3))
                .map(|_| random_formula(rng, allowed, depth - 1))
                .collect(),
        ),
    }
}

fn others(n: usize, x: usize) -> Vec<usize> {
    (0..n).filter(|&v| v != x).collect()
}

/// Up to `max_rules` rules with cube conditions.
pub fn random_conjunctive_net(rng: &mut impl Rng, n: usize, max_rules: usize) -> GcpNet {
    let rules = (0..rng.gen_range(0..=max_rules))
        .map(|_| {
            let x = rng.gen_range(0..n);
            let cond = random_cube(rng, &others(n, x), n);
            PreferenceRule::new(Formula::cube(cond), Literal::new(x, rng.gen()))
        })
        .collect();
    GcpNet::new(var_names(n), rules).expect("valid rules")
}

/// Up to `max_rules` rules, about half with general formula conditions.
pub fn random_gcp_net(rng: &mut impl Rng, n: usize, max_rules: usize) -> GcpNet {
    let rules = (0..rng.gen_range(0..=max_rules))
        .map(|_| {
            let x = rng.gen_range(0..n);
            let allowed = others(n, x);
            let cond = if rng.gen() {
                Formula::cube(random_cube(rng, &allowed, n))
            } else {
                random_formula(rng, &allowed, 2)
            };
            PreferenceRule::new(cond, Literal::new(x, rng.gen()))
        })
        .collect();
    GcpNet::new(var_names(n), rules).expect("valid rules")
}

/// A CP-net: every variable gets up to `max_parents` parents and a full
/// preference table over them. With `acyclic`, parents precede their child.
pub fn random_cpnet(rng: &mut impl Rng, n: usize, max_parents: usize, acyclic: bool) -> GcpNet {
    let mut rules = Vec::new();
    for x in 0..n {
        let pool = if acyclic { (0..x).collect() } else { others(n, x) };
        let k = rng.gen_range(0..=max_parents.min(pool.len()));
        let mut parents: Vec<usize> = pool.choose_multiple(rng, k).copied().collect();
        parents.sort();
        for row in 0..1u64 << k {
            let cond = parents
                .iter()
                .enumerate()
                .map(|(j, &p)| Literal::new(p, row >> j & 1 == 1));
            rules.push(PreferenceRule::new(Formula::cube(cond), Literal::new(x, rng.gen())));
        }
    }
    GcpNet::new(var_names(n), rules).expect("valid rules")
}

/// A consistent CP-net, drawn from all CP-nets by rejection and falling back
/// to an acyclic dependency graph (always consistent) after 50 misses.
pub fn random_consistent_cpnet(rng: &mut impl Rng, n: usize, max_parents: usize) -> GcpNet {
    let lim = Limits::default();
    for _ in 0..50 {
        let net = random_cpnet(rng, n, max_parents, false);
        if is_consistent(&net, &lim).unwrap_or(false) {
            return net;
        }
    }
    random_cpnet(rng, n, max_parents, true)
}

/// A locally consistent net, by rejection from [`random_gcp_net`]; falls back
/// to a CP-net after 100 misses.
pub fn random_locally_consistent_net(rng: &mut impl Rng, n: usize, max_rules: usize) -> GcpNet {
    let lim = Limits::default();
    for _ in 0..100 {
        let net = random_gcp_net(rng, n, max_rules);
        if net.is_locally_consistent(&lim).unwrap_or(false) {
            return net;
        }
    }
    random_cpnet(rng, n, 2, false)
}

fn random_action(rng: &mut impl Rng, name: String, n: usize, single_effect: bool) -> Action {
    let all: Vec<usize> = (0..n).collect();
    let pre = random_cube(rng, &all, n.min(3));
    let post = if single_effect {
        vec![Literal::new(rng.gen_range(0..n), rng.gen())]
    } else {
        let mut p = random_cube(rng, &all, n.min(3));
        if p.is_empty() {
            p.push(Literal::new(rng.gen_range(0..n), rng.gen()));
        }
        p
    };
    Action::new(name, pre, post)
}

/// `n ≥ 1` variables and up to `max_actions` actions with random endpoints.
/// Actions whose effect is already required by their precondition vanish
/// under normalization, so the instance may hold fewer.
pub fn random_strips(rng: &mut impl Rng, n: usize, max_actions: usize, single_effect: bool) -> StripsInstance {
    let actions = (0..rng.gen_range(1..=max_actions.max(1)))
        .map(|i| random_action(rng, format!("a{}", i + 1), n, single_effect))
        .collect();
    let init = random_outcome(rng, n);
    let goal = random_outcome(rng, n);
    StripsInstance::new(var_names(n), init, goal, actions).expect("valid instance")
}

fn distinct_pair(rng: &mut impl Rng, n: usize) -> (Outcome, Outcome) {
    loop {
        let a = random_outcome(rng, n);
        let b = random_outcome(rng, n);
        if a != b {
            return (a, b);
        }
    }
}

/// An instance with an acyclic action set and distinct endpoints, by
/// rejection; falls back to actions that only set variables true.
pub fn random_acyclic_strips(rng: &mut impl Rng, n: usize, max_actions: usize) -> StripsInstance {
    assert!(n >= 1);
    let lim = Limits::default();
    for _ in 0..100 {
        let inst = random_strips(rng, n, max_actions, false);
        if find_action_cycle(inst.action_set(), &lim).is_ok_and(|s| s.witness.is_none()) {
            let (a, b) = distinct_pair(rng, n);
            return inst.with_endpoints(a, b).expect("same variables");
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let actions = (0..rng.gen_range(1..=max_actions.max(1)))
        .map(|i| {
            let pre = random_cube(rng, &all, n.min(2));
            let mut post: Vec<Literal> = random_cube(rng, &all, 2).into_iter().map(|l| Literal::pos(l.var)).collect();
            if post.is_empty() {
                post.push(Literal::pos(rng.gen_range(0..n)));
            }
            Action::new(format!("a{}", i + 1), pre, post)
        })
        .collect();
    let (a, b) = distinct_pair(rng, n);
    StripsInstance::new(var_names(n), a, b, actions).expect("valid instance")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strips::is_acyclic;

    #[test]
    fn deterministic_for_a_seed() {
        let a = random_gcp_net(&mut rng(7), 4, 8);
        let b = random_gcp_net(&mut rng(7), 4, 8);
        assert_eq!(a, b);
    }

    #[test]
    fn generators_meet_their_contracts() {
        let lim = Limits::default();
        let mut r = rng(1);
        for _ in 0..30 {
            assert!(random_cpnet(&mut r, 3, 2, false).is_cpnet(&lim).unwrap());
            assert!(is_consistent(&random_consistent_cpnet(&mut r, 3, 2), &lim).unwrap());
            assert!(random_locally_consistent_net(&mut r, 3, 6)
                .is_locally_consistent(&lim)
                .unwrap());
            assert!(random_conjunctive_net(&mut r, 4, 8).is_conjunctive());
            assert!(random_strips(&mut r, 4, 3, true).is_single_effect());
            let inst = random_acyclic_strips(&mut r, 4, 3);
            assert!(is_acyclic(inst.action_set(), &lim).unwrap());
            assert_ne!(inst.initial(), inst.goal());
        }
    }
}
