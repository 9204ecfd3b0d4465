//! Single-effect actions as conditional preference rules.
//!
//! Action `a` with `post(a) = {l_a}` becomes `pre′(a) : l_a > ¬l_a`, where
//! `pre′(a)` is `pre(a)` without `¬l_a`. An action changes a state exactly
//! when the rule licenses an improving flip there, so plans and improving
//! sequences coincide.

use crate::error::{Error, Result};
use crate::gcp::{GcpNet, PreferenceRule};
use crate::logic::Formula;
use crate::strips::{ActionSet, State, StripsInstance};

/// The net whose rule `i` is the image of action `i`.
pub fn actions_to_gcp(actions: &ActionSet) -> Result<GcpNet> {
    let mut rules = Vec::with_capacity(actions.actions().len());
    for a in actions.actions() {
        if !a.is_single_effect() {
            return Err(Error::precondition(format!(
                "action `{}` has {} effects; only single-effect actions translate to rules",
                a.name,
                a.post.len()
            )));
        }
        let l = a.post[0];
        let cond = a.pre.iter().copied().filter(|&p| p != l.dual());
        rules.push(PreferenceRule::new(Formula::cube(cond), l));
    }
    GcpNet::new(actions.vars().clone(), rules)
}

/// The planning instance `⟨ACT, α0, γ⟩` becomes the dominance query
/// `α0 ≺ γ` over the returned net.
pub fn strips_to_gcp(pe: &StripsInstance) -> Result<(GcpNet, State, State)> {
    Ok((actions_to_gcp(pe.action_set())?, pe.initial(), pe.goal()))
}

/// Composes the single-effect transformation with the rule translation:
/// the result is consistent exactly when the actions are acyclic.
pub fn acyclicity_to_consistency(actions: &ActionSet) -> Result<GcpNet> {
    let zero = crate::logic::Outcome::all_false(actions.num_vars());
    let pe = StripsInstance::from_action_set(actions.clone(), zero, zero)?;
    let se = super::single_effect::to_single_effect(&pe)?;
    actions_to_gcp(se.instance.action_set())
}
