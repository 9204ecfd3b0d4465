//! Constructions that translate between planning, dominance, consistency
//! and optimality questions, each with witness maps where one exists.

pub mod counter;
pub mod lift;
pub mod single_effect;
pub mod theta;
pub mod to_gcp;

pub use counter::{counter_reduction, CounterAction, CounterReduction};
pub use lift::{cp_consistency_reduction, lift_to_cpnet, Lift};
pub use single_effect::{to_single_effect, DerivedAction, SingleEffectReduction};
pub use theta::{theta1, theta2, theta3, theta3_literal, Extended};
pub use to_gcp::{acyclicity_to_consistency, actions_to_gcp, strips_to_gcp};

use crate::gcp::{GcpNet, PreferenceRule, Vars};
use crate::logic::{Formula, Literal};

/// A two-variable CP-net whose four outcomes form one improving cycle:
/// `x : y > ¬y`, `¬x : ¬y > y`, `y : ¬x > x`, `¬y : x > ¬x`.
pub fn inconsistent_cpnet() -> GcpNet {
    let vars = Vars::new(["x", "y"]).expect("distinct names");
    GcpNet::new(
        vars,
        vec![
            PreferenceRule::new(Formula::var(0), Literal::pos(1)),
            PreferenceRule::new(Formula::lit(Literal::neg(0)), Literal::neg(1)),
            PreferenceRule::new(Formula::var(1), Literal::neg(0)),
            PreferenceRule::new(Formula::lit(Literal::neg(1)), Literal::pos(0)),
        ],
    )
    .expect("well-formed rules")
}
