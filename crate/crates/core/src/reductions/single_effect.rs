//! Splits every action into a locked sequence of single-effect actions.
//!
//! For an action `a` with effects `l_1 … l_q` a fresh lock variable `x_a`
//! is introduced. The derived actions are
//!
//! * `a^i` (i ≤ q): `pre(a) ∧ X ∧ ¬l_i` sets `x_a`,
//! * `a^{q+i}`: under `X_a` sets `l_i`,
//! * `a^{2q+1}`: under `X_a ∧ l_1 ∧ … ∧ l_q` clears `x_a`,
//!
//! where `X` says no lock is held and `X_a` says only `x_a` is held.

use std::collections::HashSet;

use crate::error::Result;
use crate::gcp::fresh_name;
use crate::logic::Literal;
use crate::strips::{Action, Plan, StripsInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedAction {
    pub action: usize,
    /// 1-based position in the locked sequence.
    pub step: usize,
    /// Number of effects of the original action.
    pub effects: usize,
}

impl DerivedAction {
    pub fn is_unlock(&self) -> bool {
        self.step == 2 * self.effects + 1
    }
}

#[derive(Debug, Clone)]
pub struct SingleEffectReduction {
    pub instance: StripsInstance,
    /// Lock variable of each original action.
    pub locks: Vec<usize>,
    pub origin: Vec<DerivedAction>,
    first: Vec<usize>,
}

pub fn to_single_effect(pe: &StripsInstance) -> Result<SingleEffectReduction> {
    let n = pe.num_vars();
    let mut vars = pe.vars().clone();
    let locks: Vec<usize> = pe
        .actions()
        .iter()
        .map(|a| vars.push_fresh(&format!("x_{}", a.name)))
        .collect();
    let no_lock: Vec<Literal> = locks.iter().map(|&x| Literal::neg(x)).collect();
    let only_lock = |a: usize| -> Vec<Literal> {
        locks
            .iter()
            .enumerate()
            .map(|(b, &x)| Literal::new(x, a == b))
            .collect()
    };

    let mut taken: HashSet<String> = pe.actions().iter().map(|a| a.name.clone()).collect();
    let mut fresh = |base: String| {
        let name = fresh_name(&base, |c| taken.contains(c));
        taken.insert(name.clone());
        name
    };

    let mut actions = Vec::new();
    let mut origin = Vec::new();
    let mut first = Vec::new();
    for (ai, a) in pe.actions().iter().enumerate() {
        first.push(actions.len());
        let q = a.post.len();
        let x_a = locks[ai];
        let mut derive = |step: usize, pre: Vec<Literal>, post: Vec<Literal>| {
            actions.push(Action::new(fresh(format!("{}.{step}", a.name)), pre, post));
            origin.push(DerivedAction {
                action: ai,
                step,
                effects: q,
            });
        };
        for (i, &l) in a.post.iter().enumerate() {
            let mut pre = a.pre.clone();
            pre.extend_from_slice(&no_lock);
            pre.push(l.dual());
            derive(i + 1, pre, vec![Literal::pos(x_a)]);
        }
        for (i, &l) in a.post.iter().enumerate() {
            derive(q + i + 1, only_lock(ai), vec![l]);
        }
        let mut pre = only_lock(ai);
        pre.extend_from_slice(&a.post);
        derive(2 * q + 1, pre, vec![Literal::neg(x_a)]);
    }

    let unlocked = crate::logic::Outcome::all_false(locks.len());
    let instance = StripsInstance::new(
        vars,
        pe.initial().concat(&unlocked),
        pe.goal().concat(&unlocked),
        actions,
    )?;
    debug_assert_eq!(instance.num_vars(), n + locks.len());
    debug_assert_eq!(instance.actions().len(), origin.len());
    Ok(SingleEffectReduction {
        instance,
        locks,
        origin,
        first,
    })
}

impl SingleEffectReduction {
    /// `S`: replaces each action by its whole locked sequence.
    pub fn forward_plan(&self, plan: &Plan) -> Plan {
        let mut out = Vec::new();
        for &a in &plan.0 {
            let start = self.first[a];
            let len = 2 * self.origin[start].effects + 1;
            out.extend(start..start + len);
        }
        Plan(out)
    }

    /// `S′`: keeps only the unlocking steps and maps them to their action.
    pub fn backward_plan(&self, plan: &Plan) -> Plan {
        Plan(
            plan.0
                .iter()
                .map(|&i| self.origin[i])
                .filter(DerivedAction::is_unlock)
                .map(|d| d.action)
                .collect(),
        )
    }
}
