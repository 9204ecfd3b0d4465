//! Lifts a locally consistent GCP-net `C` over `V` to a CP-net over `V ∪ V′`.
//!
//! Each `x_i` gets a shadow `y_i`. `x_i` simply follows its shadow, while
//! `y_i` may only move away from `x_i` when every other pair agrees and the
//! rule of `C` for `x_i` fires. One improving flip of `C` becomes two flips
//! of the lifted net: the shadow moves first, then `x_i` follows it.

use crate::error::{Error, Result};
use crate::gcp::GcpNet;
use crate::limits::Limits;
use crate::logic::{Formula, Outcome, MAX_OUTCOME_VARS};

#[derive(Debug, Clone)]
pub struct Lift {
    pub net: GcpNet,
    /// Number of variables of the source net.
    pub n: usize,
}

pub fn lift_to_cpnet(c: &GcpNet, limits: &Limits) -> Result<Lift> {
    if !c.is_locally_consistent(limits)? {
        return Err(Error::precondition(
            "lifting requires a locally consistent net",
        ));
    }
    lift_unchecked(c)
}

fn lift_unchecked(c: &GcpNet) -> Result<Lift> {
    let n = c.num_vars();
    if 2 * n > MAX_OUTCOME_VARS {
        return Err(Error::Capacity {
            what: "lifted net",
            n: 2 * n,
            limit: MAX_OUTCOME_VARS,
        });
    }
    let mut vars = c.vars().clone();
    let ys: Vec<usize> = (0..n)
        .map(|i| vars.push_fresh(&format!("{}'", c.vars().name(i))))
        .collect();

    let mut conditions = Vec::with_capacity(2 * n);
    for &y in &ys {
        conditions.push((Formula::var(y), Formula::not(Formula::var(y))));
    }
    for i in 0..n {
        let agree = Formula::and(
            (0..n)
                .filter(|&j| j != i)
                .map(|j| Formula::iff(Formula::var(j), Formula::var(ys[j]))),
        );
        let (p_plus, p_minus) = c.aggregate_conditions(i);
        let f_plus = Formula::and2(agree.clone(), p_plus.clone());
        let f_minus = Formula::and2(agree, p_minus.clone());
        let x = Formula::var(i);
        let q_plus = Formula::or2(
            f_plus.clone(),
            Formula::and2(Formula::not(f_minus.clone()), x.clone()),
        );
        let q_minus = Formula::or2(f_minus.clone(), Formula::and2(Formula::not(f_plus), Formula::not(x)));
        conditions.push((q_plus, q_minus));
    }
    let net = GcpNet::from_aggregates(vars, conditions)?;
    Ok(Lift { net, n })
}

impl Lift {
    /// `αᾱ`: the outcome with every shadow equal to its variable.
    pub fn lift_outcome(&self, alpha: &Outcome) -> Outcome {
        alpha.concat(alpha)
    }

    /// `L`: `α0ᾱ0, α0ᾱ1, α1ᾱ1, …, αmᾱm`.
    pub fn lift_sequence(&self, seq: &[Outcome]) -> Vec<Outcome> {
        let mut out = Vec::with_capacity(2 * seq.len());
        for (k, a) in seq.iter().enumerate() {
            if k > 0 {
                out.push(seq[k - 1].concat(a));
            }
            out.push(a.concat(a));
        }
        out
    }

    /// `L′`: projects onto the source variables and collapses repeats.
    pub fn unlift_sequence(&self, seq: &[Outcome]) -> Vec<Outcome> {
        let mut out: Vec<Outcome> = Vec::new();
        for o in seq {
            let p = o.prefix(self.n);
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        out
    }
}

/// The instance for the CP-net consistency question equivalent to the
/// consistency of `c`: a fixed inconsistent CP-net when `c` is not locally
/// consistent, the lift of `c` otherwise.
pub fn cp_consistency_reduction(c: &GcpNet, limits: &Limits) -> Result<GcpNet> {
    if c.is_locally_consistent(limits)? {
        Ok(lift_unchecked(c)?.net)
    } else {
        Ok(super::inconsistent_cpnet())
    }
}
