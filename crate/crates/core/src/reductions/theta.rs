//! Gadgets that extend a net `H` over `V` by one fresh variable `y`.
//!
//! All three keep a copy of `H` in the `y`-half of the outcome space and
//! wire the `¬y`-half so that a single question about the new net (dominance
//! of one outcome, existence of a non-dominated or dominating outcome)
//! answers a dominance question about `H`. For an outcome `γ` of `H`, `γ⁺`
//! and `γ⁻` denote `γ` extended by `y` and `¬y`.

use crate::error::{Error, Result};
use crate::gcp::GcpNet;
use crate::logic::{Formula, Outcome};

#[derive(Debug, Clone)]
pub struct Extended {
    pub net: GcpNet,
    /// Index of `y`; always the last variable.
    pub y: usize,
}

impl Extended {
    /// `γ⁺`
    pub fn plus(&self, gamma: &Outcome) -> Outcome {
        gamma.concat(&Outcome::from_bools(&[true]))
    }

    /// `γ⁻`
    pub fn minus(&self, gamma: &Outcome) -> Outcome {
        gamma.concat(&Outcome::from_bools(&[false]))
    }
}

fn check(h: &GcpNet, o: &Outcome, what: &str) -> Result<()> {
    if o.len() != h.num_vars() {
        return Err(Error::model(format!(
            "{what} has {} values but the net has {} variables",
            o.len(),
            h.num_vars()
        )));
    }
    Ok(())
}

fn extend(h: &GcpNet, conditions: Vec<(Formula, Formula)>) -> Result<Extended> {
    let mut vars = h.vars().clone();
    let y = vars.push_fresh("y");
    Ok(Extended {
        net: GcpNet::from_aggregates(vars, conditions)?,
        y,
    })
}

fn aggregates(h: &GcpNet) -> impl Iterator<Item = (usize, Formula, Formula)> + '_ {
    (0..h.num_vars()).map(|i| {
        let (p, m) = h.aggregate_conditions(i);
        (i, p.clone(), m.clone())
    })
}

/// `β⁺` dominates every other outcome of `G`, and the `y`-half copies `H`,
/// so for `α ≠ β`: `β ≺_H α` iff `β⁺ ≺_G α⁺` iff `α⁺` is dominating in `G`.
///
/// Conditions, with `y` the fresh variable:
/// for `x_i ∈ β`, `p⁺ = p_H⁺ ∨ ¬y` and `p⁻ = p_H⁻ ∧ y`;
/// for `¬x_i ∈ β`, `p⁺ = p_H⁺ ∧ y` and `p⁻ = p_H⁻ ∨ ¬y`;
/// `p⁺(y) = β` and `p⁻(y) = ¬β`.
pub fn theta1(h: &GcpNet, beta: &Outcome) -> Result<Extended> {
    check(h, beta, "beta")?;
    let y = h.num_vars();
    let yes = Formula::var(y);
    let no = Formula::not(yes.clone());
    let mut conditions: Vec<(Formula, Formula)> = aggregates(h)
        .map(|(i, p, m)| {
            if beta.get(i) {
                (Formula::or2(p, no.clone()), Formula::and2(m, yes.clone()))
            } else {
                (Formula::and2(p, yes.clone()), Formula::or2(m, no.clone()))
            }
        })
        .collect();
    conditions.push((beta.to_formula(), Formula::not(beta.to_formula())));
    extend(h, conditions)
}

/// `p±(x_i) = p_H±(x_i) ∧ y`, `p⁺(y) = ¬α`, `p⁻(y) = α`.
pub fn theta2(h: &GcpNet, alpha: &Outcome) -> Result<Extended> {
    check(h, alpha, "alpha")?;
    let y = h.num_vars();
    let yes = Formula::var(y);
    let mut conditions: Vec<(Formula, Formula)> = aggregates(h)
        .map(|(_, p, m)| (Formula::and2(p, yes.clone()), Formula::and2(m, yes.clone())))
        .collect();
    conditions.push((Formula::not(alpha.to_formula()), alpha.to_formula()));
    extend(h, conditions)
}

/// The gadget exactly as written, without first renaming polarities so that
/// `β` is all-positive:
/// `p⁺(x_i) = (p_H⁺ ∧ y) ∨ (¬y ∧ ¬α ∧ ¬α_i)`, `p⁻(x_i) = p_H⁻ ∧ y`,
/// `p⁺(y) = β`, `p⁻(y) = ¬β`, where `α_i` is `α` with `x_i` flipped.
/// Since `α` and `α_i` differ only on `x_i`, `¬α ∧ ¬α_i` is built as the
/// negated cube of the other literals of `α`, which keeps `x_i` out of its
/// own condition.
pub fn theta3_literal(h: &GcpNet, alpha: &Outcome, beta: &Outcome) -> Result<Extended> {
    check(h, alpha, "alpha")?;
    check(h, beta, "beta")?;
    if alpha == beta {
        return Err(Error::precondition("alpha and beta must differ"));
    }
    let y = h.num_vars();
    let yes = Formula::var(y);
    let no = Formula::not(yes.clone());
    let mut conditions: Vec<(Formula, Formula)> = aggregates(h)
        .map(|(i, p, m)| {
            let rest = alpha.literals().into_iter().filter(|l| l.var != i);
            let escape = Formula::and2(no.clone(), Formula::not(Formula::cube(rest)));
            (
                Formula::or2(Formula::and2(p, yes.clone()), escape),
                Formula::and2(m, yes.clone()),
            )
        })
        .collect();
    conditions.push((beta.to_formula(), Formula::not(beta.to_formula())));
    extend(h, conditions)
}

/// [`theta3_literal`] applied after renaming the polarity of every variable
/// false in `β`, so that `β` reads all-positive; the result is renamed back.
/// For `α ≠ β`: `β ≺_H α` iff the result has a (strongly) dominating
/// outcome, and then `α⁻` is one.
pub fn theta3(h: &GcpNet, alpha: &Outcome, beta: &Outcome) -> Result<Extended> {
    check(h, alpha, "alpha")?;
    check(h, beta, "beta")?;
    let n = h.num_vars();
    let flip: Vec<bool> = (0..n).map(|i| !beta.get(i)).collect();
    let mask = Outcome::from_bools(&flip);
    let renamed = h.rename_polarity(&flip);
    let xor = |o: &Outcome| Outcome::from_index(n, o.index() ^ mask.index());
    let ext = theta3_literal(&renamed, &xor(alpha), &xor(beta))?;
    let mut back = flip;
    back.push(false);
    Ok(Extended {
        net: ext.net.rename_polarity(&back),
        y: ext.y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcp::{PreferenceRule, Vars};
    use crate::limits::Limits;
    use crate::logic::Literal;

    fn small_cpnet() -> GcpNet {
        // a > ¬a ; a : b > ¬b ; ¬a : ¬b > b
        GcpNet::new(
            Vars::new(["a", "b"]).unwrap(),
            vec![
                PreferenceRule::new(Formula::True, Literal::pos(0)),
                PreferenceRule::new(Formula::var(0), Literal::pos(1)),
                PreferenceRule::new(Formula::lit(Literal::neg(0)), Literal::neg(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn y_is_appended_last() {
        let h = small_cpnet();
        let beta = Outcome::from_bools(&[true, false]);
        let lim = Limits::default();
        assert!(theta1(&h, &beta).unwrap().net.is_cpnet(&lim).unwrap());
        for ext in [
            theta1(&h, &beta).unwrap(),
            theta2(&h, &beta).unwrap(),
            theta3(&h, &Outcome::all_false(2), &beta).unwrap(),
        ] {
            assert_eq!(ext.y, 2);
            assert_eq!(ext.net.vars().name(2), "y");
            assert!(ext.net.is_locally_consistent(&lim).unwrap());
        }
    }

    #[test]
    fn theta3_rejects_equal_endpoints() {
        let h = small_cpnet();
        let a = Outcome::all_false(2);
        assert!(matches!(theta3(&h, &a, &a), Err(Error::Precondition(_))));
    }

    #[test]
    fn theta3_normalized_matches_literal_when_beta_positive() {
        let h = small_cpnet();
        let a = Outcome::all_false(2);
        let b = Outcome::from_bools(&[true, true]);
        assert_eq!(theta3(&h, &a, &b).unwrap().net, theta3_literal(&h, &a, &b).unwrap().net);
    }

    #[test]
    fn plus_minus() {
        let ext = theta2(&small_cpnet(), &Outcome::all_false(2)).unwrap();
        let g = Outcome::from_bools(&[true, false]);
        assert_eq!(ext.plus(&g), Outcome::from_bools(&[true, false, true]));
        assert_eq!(ext.minus(&g), Outcome::from_bools(&[true, false, false]));
    }
}
