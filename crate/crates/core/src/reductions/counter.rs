//! Makes any action set acyclic by threading an `n`-bit counter through it.
//!
//! Every derived action either does nothing or increments the counter, so
//! no state can be revisited. Plans survive as long as they need at most
//! `2^n - 1` executable steps, which shortest plans always do.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gcp::{fresh_name, Vars};
use crate::logic::{Literal, Outcome};
use crate::strips::{Action, Plan, State, StripsInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterAction {
    /// `a^digit`: the original action `action` guarded by counter digit `digit` (1-based).
    Step { action: usize, digit: usize },
    /// `b^digit`: a pure counter increment.
    Tick { digit: usize },
}

#[derive(Debug, Clone)]
pub struct CounterReduction {
    pub instance: StripsInstance,
    /// Number of original variables, which is also the counter width.
    pub width: usize,
    /// What each action of `instance` was derived from.
    pub origin: Vec<CounterAction>,
}

/// Counter digit `i` (1-based, `z_1` most significant) guards the increment
/// from `k` when `d_i = 0` and `d_{i+1} … d_n = 1`.
fn digit_guard(n: usize, z: &[usize], i: usize) -> (Vec<Literal>, Vec<Literal>) {
    let mut pre = vec![Literal::neg(z[i - 1])];
    let mut post = vec![Literal::pos(z[i - 1])];
    for &zj in &z[i..n] {
        pre.push(Literal::pos(zj));
        post.push(Literal::neg(zj));
    }
    (pre, post)
}

/// The digit whose increment action applies at counter value `k`.
fn digit_for(n: usize, k: u64) -> usize {
    // lowest zero bit of k, counted from the least significant digit d_n
    n - (!k).trailing_zeros() as usize
}

pub fn counter_reduction(pe: &StripsInstance) -> Result<CounterReduction> {
    let n = pe.num_vars();
    let mut vars: Vars = pe.vars().clone();
    let z: Vec<usize> = (1..=n).map(|i| vars.push_fresh(&format!("z{i}"))).collect();

    let mut taken: HashSet<String> = pe.actions().iter().map(|a| a.name.clone()).collect();
    let mut fresh = |base: String| {
        let name = fresh_name(&base, |c| taken.contains(c));
        taken.insert(name.clone());
        name
    };

    let mut actions = Vec::new();
    let mut origin = Vec::new();
    for (ai, a) in pe.actions().iter().enumerate() {
        for i in 1..=n {
            let (mut pre, mut post) = digit_guard(n, &z, i);
            pre.extend_from_slice(&a.pre);
            post.extend_from_slice(&a.post);
            actions.push(Action::new(fresh(format!("{}.{i}", a.name)), pre, post));
            origin.push(CounterAction::Step { action: ai, digit: i });
        }
    }
    for i in 1..=n {
        let (pre, post) = digit_guard(n, &z, i);
        actions.push(Action::new(fresh(format!("tick.{i}")), pre, post));
        origin.push(CounterAction::Tick { digit: i });
    }

    let zeros = Outcome::all_false(n);
    let ones = Outcome::from_index(n, if n == 64 { u64::MAX } else { (1u64 << n) - 1 });
    let instance = StripsInstance::new(
        vars,
        pe.initial().concat(&zeros),
        pe.goal().concat(&ones),
        actions,
    )?;
    debug_assert_eq!(instance.actions().len(), origin.len());
    Ok(CounterReduction {
        instance,
        width: n,
        origin,
    })
}

impl CounterReduction {
    /// Splits a reduced state into `(α, k)`.
    pub fn decode(&self, s: &State) -> (State, u64) {
        (s.prefix(self.width), s.suffix(self.width).index())
    }

    pub fn encode(&self, alpha: &State, k: u64) -> State {
        alpha.concat(&Outcome::from_index(self.width, k))
    }

    fn step_index(&self, action: usize, digit: usize) -> usize {
        action * self.width + digit - 1
    }

    fn tick_index(&self, digit: usize, num_original: usize) -> usize {
        num_original * self.width + digit - 1
    }

    /// Replaces step `k` of `plan` by the copy guarded by the digit that is
    /// incremented at counter value `k`, then ticks the counter to its
    /// maximum. Fails when the plan has more than `2^n - 1` executable steps.
    pub fn forward_plan(&self, pe: &StripsInstance, plan: &Plan) -> Result<Plan> {
        let n = self.width;
        let max = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let num_original = pe.actions().len();
        let mut out = Vec::new();
        let mut state = pe.initial();
        let mut k = 0u64;
        for &a in &plan.0 {
            let action = &pe.actions()[a];
            if k == max {
                if action.is_executable(&state) {
                    return Err(Error::precondition(format!(
                        "plan has more than {max} executable steps"
                    )));
                }
                // not executable: any copy is a no-op
                out.push(self.step_index(a, n));
                continue;
            }
            out.push(self.step_index(a, digit_for(n, k)));
            if action.is_executable(&state) {
                state = action.effect(&state);
                k += 1;
            }
        }
        while k < max {
            out.push(self.tick_index(digit_for(n, k), num_original));
            k += 1;
        }
        Ok(Plan(out))
    }

    /// Drops the counter ticks and maps every guarded copy back to its action.
    pub fn backward_plan(&self, plan: &Plan) -> Plan {
        Plan(
            plan.0
                .iter()
                .filter_map(|&i| match self.origin[i] {
                    CounterAction::Step { action, .. } => Some(action),
                    CounterAction::Tick { .. } => None,
                })
                .collect(),
        )
    }
}
