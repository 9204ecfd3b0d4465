//! Executable statements of the correctness properties of the engines and
//! reductions. Each check returns `Err(description)` on the first violation.
//!
//! Checks that talk about dominance take a [`Reach`] builder, so the same
//! statement can be evaluated against the search engine or against an
//! independent brute-force closure.

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::flip::{flip_digraph, improving_flips, is_non_dominated_local, OptimalityFlags};
use crate::gcp::{cpnet_from_formula, GcpNet, Vars};
use crate::limits::Limits;
use crate::logic::{is_satisfiable_by_enumeration, Formula, Outcome};
use crate::reductions::{
    lift_to_cpnet, strips_to_gcp, theta1, theta2, theta3, theta3_literal,
    to_single_effect,
};
use crate::strips::{
    execute_plan, is_acyclic, plan_exists, with_closing_action, ActionSet, Plan, StripsInstance,
};

pub type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn engine<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("engine error: {e}"))
}

/// Strict reachability (paths of length ≥ 1) over all `2^n` outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reach {
    n: usize,
    rows: Vec<FixedBitSet>,
}

impl Reach {
    /// Closure of a successor function by one breadth-first search per node.
    pub fn from_successors(n: usize, succ: impl Fn(u64) -> Vec<u64>) -> Reach {
        let size = 1usize << n;
        let adj: Vec<Vec<u64>> = (0..size as u64).map(&succ).collect();
        let rows = (0..size)
            .map(|s| {
                let mut seen = FixedBitSet::with_capacity(size);
                let mut stack: Vec<u64> = adj[s].clone();
                while let Some(v) = stack.pop() {
                    if !seen.put(v as usize) {
                        stack.extend_from_slice(&adj[v as usize]);
                    }
                }
                seen
            })
            .collect();
        Reach { n, rows }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// `a ≺ b`
    pub fn dom(&self, a: &Outcome, b: &Outcome) -> bool {
        self.rows[a.index() as usize].contains(b.index() as usize)
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        Outcome::all(self.n)
    }

    pub fn is_consistent(&self) -> bool {
        self.outcomes().all(|a| !self.dom(&a, &a))
    }

    pub fn flags(&self, a: &Outcome) -> OptimalityFlags {
        let weakly = self.outcomes().all(|b| !self.dom(a, &b) || self.dom(&b, a));
        let singleton = !self.dom(a, a);
        let dominating = self.outcomes().all(|b| b == *a || self.dom(&b, a));
        OptimalityFlags {
            weakly_non_dominated: weakly,
            non_dominated: weakly && singleton,
            dominating,
            strongly_dominating: dominating && weakly && singleton,
        }
    }

    pub fn has_dominating(&self) -> bool {
        self.outcomes().any(|a| self.flags(&a).dominating)
    }

    pub fn has_strongly_dominating(&self) -> bool {
        self.outcomes().any(|a| self.flags(&a).strongly_dominating)
    }
}

/// Builds the dominance closure of a net.
pub type ReachFn<'a> = &'a dyn Fn(&GcpNet) -> std::result::Result<Reach, String>;

/// The closure computed from the engine's flip digraph.
pub fn engine_reach(net: &GcpNet, limits: &Limits) -> std::result::Result<Reach, String> {
    let g = engine(flip_digraph(net, limits))?;
    Ok(Reach::from_successors(net.num_vars(), |v| {
        g.successors(v as usize).iter().map(|&w| w as u64).collect()
    }))
}

/// State-changing transitions of an action set.
pub fn action_reach(set: &ActionSet) -> Reach {
    let n = set.num_vars();
    Reach::from_successors(n, |s| {
        let st = Outcome::from_index(n, s);
        let mut out: Vec<u64> = (0..set.actions().len())
            .map(|i| set.effect(i, &st).index())
            .filter(|&t| t != s)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    })
}

/// The gadget net is a CP-net exactly when the formula is unsatisfiable.
pub fn formula_gadget(phi: &Formula, vars: &Vars, limits: &Limits) -> Check {
    let net = engine(cpnet_from_formula(phi, vars))?;
    let cp = engine(net.is_cpnet(limits))?;
    let sat = engine(is_satisfiable_by_enumeration(phi, limits))?;
    ensure!(
        cp == !sat,
        "formula `{}`: is_cpnet = {cp}, satisfiable = {sat}",
        phi.display(vars.names())
    );
    Ok(())
}

/// Consistency implies local consistency.
pub fn consistency_implies_local(net: &GcpNet, reach: ReachFn, limits: &Limits) -> Check {
    if reach(net)?.is_consistent() {
        ensure!(
            engine(net.is_locally_consistent(limits))?,
            "consistent net is not locally consistent:\n{net}"
        );
    }
    Ok(())
}

/// The local no-flip test agrees with the class-based non-dominated flag,
/// and all four flags agree with the engine's condensation.
pub fn local_non_dominance(net: &GcpNet, reach: ReachFn, limits: &Limits) -> Check {
    let r = reach(net)?;
    let classes = engine(crate::flip::dominance_classes(net, limits))?;
    for a in r.outcomes() {
        let local = engine(is_non_dominated_local(net, &a))?;
        let flags = r.flags(&a);
        ensure!(
            local == flags.non_dominated,
            "outcome {}: local check {local}, closure says {}",
            net.outcome_string(&a),
            flags.non_dominated
        );
        ensure!(
            classes.classify(&a) == flags,
            "outcome {}: condensation flags {:?}, closure flags {flags:?}",
            net.outcome_string(&a),
            classes.classify(&a)
        );
    }
    Ok(())
}

fn plan_names(inst: &StripsInstance, plan: &Plan) -> String {
    inst.plan_names(plan).join(" ")
}

/// Plans map forward through `S`, irreducible plans map back through `S′`,
/// acyclicity is preserved, and `S′(S(π)) = π`.
pub fn single_effect_witnesses(pe: &StripsInstance, extra: &Plan, limits: &Limits) -> Check {
    let red = engine(to_single_effect(pe))?;
    let pe2 = &red.instance;
    ensure!(pe2.is_single_effect(), "S(ACT) is not single-effect");

    let found = engine(plan_exists(pe, limits))?.witness;
    if let Some(plan) = &found {
        let fwd = red.forward_plan(plan);
        ensure!(
            engine(execute_plan(pe2, &fwd))?.reaches_goal,
            "S of plan [{}] does not reach the goal",
            plan_names(pe, plan)
        );
    }
    let found2 = engine(plan_exists(pe2, limits))?.witness;
    ensure!(
        found.is_some() == found2.is_some(),
        "plan exists: original {}, single-effect {}",
        found.is_some(),
        found2.is_some()
    );
    if let Some(tau) = &found2 {
        let t = engine(execute_plan(pe2, tau))?;
        ensure!(t.irreducible, "search returned a reducible plan");
        let back = red.backward_plan(tau);
        let tb = engine(execute_plan(pe, &back))?;
        ensure!(
            tb.reaches_goal && tb.irreducible,
            "S′ of [{}] is [{}], which is not an irreducible plan",
            plan_names(pe2, tau),
            plan_names(pe, &back)
        );
    }
    for pi in found.iter().chain(std::iter::once(extra)) {
        ensure!(
            red.backward_plan(&red.forward_plan(pi)) == *pi,
            "S′(S(π)) ≠ π for π = [{}]",
            plan_names(pe, pi)
        );
    }
    let a1 = engine(is_acyclic(pe.action_set(), limits))?;
    let a2 = engine(is_acyclic(pe2.action_set(), limits))?;
    ensure!(a1 == a2, "acyclic: ACT {a1}, S(ACT) {a2}");
    Ok(())
}

/// For single-effect actions, state reachability equals dominance in
/// `M(ACT)`, and acyclicity equals consistency.
pub fn actions_as_rules(pe: &StripsInstance, reach: ReachFn, limits: &Limits) -> Check {
    let (net, init, goal) = engine(strips_to_gcp(pe))?;
    ensure!(net.is_conjunctive(), "M(ACT) is not conjunctive");
    let plans = action_reach(pe.action_set());
    let dom = reach(&net)?;
    for a in dom.outcomes() {
        for b in dom.outcomes() {
            ensure!(
                plans.dom(&a, &b) == dom.dom(&a, &b),
                "{} to {}: irreducible plan {}, dominance {}",
                net.outcome_string(&a),
                net.outcome_string(&b),
                plans.dom(&a, &b),
                dom.dom(&a, &b)
            );
        }
    }
    if init != goal {
        let planned = engine(plan_exists(pe, limits))?.witness.is_some();
        ensure!(
            planned == dom.dom(&init, &goal),
            "plan exists {planned}, but α0 ≺ γ is {}",
            dom.dom(&init, &goal)
        );
    }
    let acyclic = engine(is_acyclic(pe.action_set(), limits))?;
    ensure!(
        acyclic == dom.is_consistent(),
        "acyclic {acyclic}, M(ACT) consistent {}",
        dom.is_consistent()
    );
    let composed = engine(crate::reductions::acyclicity_to_consistency(pe.action_set()))?;
    ensure!(
        acyclic == reach(&composed)?.is_consistent(),
        "acyclic {acyclic}, but M(S(ACT)) consistency disagrees"
    );
    Ok(())
}

fn is_improving_sequence(net: &GcpNet, seq: &[Outcome]) -> std::result::Result<bool, String> {
    for w in seq.windows(2) {
        let flips = engine(improving_flips(net, &w[0]))?;
        if !flips.iter().any(|f| f.to == w[1]) {
            return Ok(false);
        }
    }
    Ok(seq.len() >= 2)
}

/// The lift is a CP-net, transfers dominance between `αᾱ` and `ββ̄` in both
/// directions (with `L` and `L′` carrying the witnesses), and preserves
/// consistency.
pub fn lift_properties(c: &GcpNet, reach: ReachFn, limits: &Limits) -> Check {
    let lift = engine(lift_to_cpnet(c, limits))?;
    ensure!(engine(lift.net.is_cpnet(limits))?, "lifted net is not a CP-net");
    let rc = reach(c)?;
    let rl = reach(&lift.net)?;
    for a in rc.outcomes() {
        for b in rc.outcomes() {
            let (la, lb) = (lift.lift_outcome(&a), lift.lift_outcome(&b));
            let here = rc.dom(&a, &b);
            let there = rl.dom(&la, &lb);
            ensure!(
                here == there,
                "{} ≺ {} is {here} in C but {there} in C′",
                c.outcome_string(&a),
                c.outcome_string(&b)
            );
            if here {
                let s = engine(crate::flip::dominance_search(c, &a, &b, limits))?
                    .witness
                    .ok_or("engine found no witness for a reachable pair")?;
                ensure!(
                    is_improving_sequence(&lift.net, &lift.lift_sequence(&s))?,
                    "L(s) is not improving in C′"
                );
                let t = engine(crate::flip::dominance_search(&lift.net, &la, &lb, limits))?
                    .witness
                    .ok_or("engine found no witness in C′")?;
                let back = lift.unlift_sequence(&t);
                ensure!(
                    back.first() == Some(&a) && back.last() == Some(&b),
                    "L′(t) has the wrong endpoints"
                );
                // a cycle may collapse to a single outcome when a = b
                if a != b {
                    ensure!(is_improving_sequence(c, &back)?, "L′(t) is not improving in C");
                }
            }
        }
    }
    ensure!(
        rc.is_consistent() == rl.is_consistent(),
        "consistency: C {}, C′ {}",
        rc.is_consistent(),
        rl.is_consistent()
    );
    Ok(())
}

/// How often a statement that is recorded rather than asserted failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbeStats {
    pub cases: usize,
    pub disagreements: usize,
    pub first: Option<String>,
}

impl ProbeStats {
    fn record(&mut self, holds: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !holds {
            self.disagreements += 1;
            self.first.get_or_insert_with(describe);
        }
    }

    pub fn merge(&mut self, other: ProbeStats) {
        self.cases += other.cases;
        self.disagreements += other.disagreements;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

/// Recorded, not asserted, by [`gadget_properties`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GadgetProbes {
    /// The dominating-outcome equivalence for `Θ3` built without first
    /// renaming `β` to all-positive.
    pub unnormalized_theta3: ProbeStats,
    /// Whether `Θ3` of a consistent net is consistent.
    pub theta3_consistent: ProbeStats,
}

impl GadgetProbes {
    pub fn merge(&mut self, other: GadgetProbes) {
        self.unnormalized_theta3.merge(other.unnormalized_theta3);
        self.theta3_consistent.merge(other.theta3_consistent);
    }
}

/// All gadget properties for one consistent CP-net `h`, over every choice of
/// `α` and `β`.
pub fn gadget_properties(
    h: &GcpNet,
    reach: ReachFn,
    limits: &Limits,
) -> std::result::Result<GadgetProbes, String> {
    let rh = reach(h)?;
    let s = |o: &Outcome| h.outcome_string(o);
    let mut probes = GadgetProbes::default();

    for beta in rh.outcomes() {
        let g = engine(theta1(h, &beta))?;
        if engine(h.is_cpnet(limits))? {
            ensure!(engine(g.net.is_cpnet(limits))?, "Θ1 lost CP-net-hood for β = {}", s(&beta));
        }
        let rg = reach(&g.net)?;
        let bp = g.plus(&beta);
        for gamma in rh.outcomes() {
            ensure!(rg.dom(&g.minus(&gamma), &bp), "Θ1: γ⁻ ⊀ β⁺ for γ = {}, β = {}", s(&gamma), s(&beta));
            if gamma != beta {
                ensure!(rg.dom(&g.plus(&gamma), &bp), "Θ1: γ⁺ ⊀ β⁺ for γ = {}, β = {}", s(&gamma), s(&beta));
            }
        }
        for alpha in rh.outcomes().filter(|a| *a != beta) {
            let ap = g.plus(&alpha);
            let truth = rh.dom(&beta, &alpha);
            let ctx = format!("α = {}, β = {}", s(&alpha), s(&beta));
            ensure!(rg.dom(&bp, &ap) == truth, "Θ1: β⁺ ≺ α⁺ disagrees with β ≺ α ({ctx})");
            let equiv = rg.dom(&bp, &ap) && rg.dom(&ap, &bp);
            ensure!(equiv == truth, "Θ1: β⁺ ≈ α⁺ disagrees with β ≺ α ({ctx})");
            ensure!(rg.dom(&ap, &ap) == truth, "Θ1: α⁺ ≺ α⁺ disagrees with β ≺ α ({ctx})");
            let flags = rg.flags(&ap);
            ensure!(flags.weakly_non_dominated == truth, "Θ1: α⁺ weakly non-dominated disagrees ({ctx})");
            ensure!(flags.dominating == truth, "Θ1: α⁺ dominating disagrees ({ctx})");
        }
    }

    for alpha in rh.outcomes() {
        let f = engine(theta2(h, &alpha))?;
        let rf = reach(&f.net)?;
        ensure!(rf.is_consistent(), "Θ2 of a consistent net is inconsistent (α = {})", s(&alpha));
        for gamma in rh.outcomes() {
            for flip in engine(improving_flips(&f.net, &f.minus(&gamma)))? {
                ensure!(flip.to.get(f.y), "Θ2: flip between ¬y outcomes from {}", s(&gamma));
            }
        }
        let am = f.minus(&alpha);
        for beta in rh.outcomes().filter(|b| *b != alpha) {
            let bm = f.minus(&beta);
            let truth = rh.dom(&beta, &alpha);
            let strict = rf.dom(&bm, &am) && !rf.dom(&am, &bm);
            let comparable = rf.dom(&bm, &am) || rf.dom(&am, &bm);
            let ctx = format!("α = {}, β = {}", s(&alpha), s(&beta));
            ensure!(strict == truth, "Θ2: α⁻ strictly dominates β⁻ disagrees ({ctx})");
            ensure!(comparable == truth, "Θ2: comparability disagrees ({ctx})");
        }
        ensure!(
            rf.flags(&am).strongly_dominating == rh.flags(&alpha).dominating,
            "Θ2: α⁻ strongly dominating disagrees with α dominating (α = {})",
            s(&alpha)
        );
    }

    for alpha in rh.outcomes() {
        for beta in rh.outcomes().filter(|b| *b != alpha) {
            let truth = rh.dom(&beta, &alpha);
            let ctx = format!("α = {}, β = {}", s(&alpha), s(&beta));
            let e = engine(theta3(h, &alpha, &beta))?;
            let re = reach(&e.net)?;
            let am = e.minus(&alpha);
            ensure!(
                engine(improving_flips(&e.net, &am))?.is_empty(),
                "Θ3: α⁻ has an improving flip ({ctx})"
            );
            for o in re.outcomes() {
                for flip in engine(improving_flips(&e.net, &o))? {
                    if flip.to == am {
                        ensure!(o == e.plus(&alpha), "Θ3: flip into α⁻ from {} ({ctx})", e.net.outcome_string(&o));
                    }
                }
            }
            ensure!(
                engine(e.net.is_locally_consistent(limits))?,
                "Θ3 is not locally consistent ({ctx})"
            );
            probes
                .theta3_consistent
                .record(re.is_consistent(), || format!("{ctx}: Θ3 has an improving cycle"));
            ensure!(re.has_dominating() == truth, "Θ3: existence of a dominating outcome disagrees ({ctx})");
            ensure!(
                re.has_strongly_dominating() == truth,
                "Θ3: existence of a strongly dominating outcome disagrees ({ctx})"
            );

            let lit = engine(theta3_literal(h, &alpha, &beta))?;
            let rl = reach(&lit.net)?;
            let holds = rl.has_dominating() == truth && rl.has_strongly_dominating() == truth;
            probes.unnormalized_theta3.record(holds, || {
                format!(
                    "{ctx}: β ≺ α is {truth}, un-normalized gadget has a dominating outcome: {}",
                    rl.has_dominating()
                )
            });
        }
    }
    Ok(probes)
}

/// With an acyclic action set and `α0 ≠ γ`, adding the closing action makes
/// the set cyclic exactly when a plan exists.
pub fn closing_action(pe: &StripsInstance, limits: &Limits) -> Check {
    ensure!(engine(is_acyclic(pe.action_set(), limits))?, "instance is not acyclic");
    ensure!(pe.initial() != pe.goal(), "instance has α0 = γ");
    let closed = engine(with_closing_action(pe))?;
    let cyclic = !engine(is_acyclic(&closed, limits))?;
    let planned = action_reach(pe.action_set()).dom(&pe.initial(), &pe.goal());
    ensure!(cyclic == planned, "closed set cyclic {cyclic}, plan exists {planned}");
    Ok(())
}
