//! Text formats, DOT export and result records.

mod dot;
mod gcp_text;
mod record;
mod strips_text;
mod syntax;

pub use dot::{classes_to_dot, dependencies_to_dot, flips_to_dot};
pub use gcp_text::{parse_gcp, parse_gcp_document, serialize_gcp, serialize_gcp_document, NetDocument};
pub use record::Record;
pub use strips_text::{parse_strips, serialize_actions, serialize_strips};
pub use syntax::{
    parse_formula, parse_formula_at, parse_literal_at, parse_literal_list_at, parse_outcome,
    parse_outcome_at, Names, Span,
};

use crate::error::{Error, Result};
use crate::gcp::Vars;
use crate::logic::Outcome;
use crate::strips::{Plan, StripsInstance};

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = gcp_text::split_comment(raw).0.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// One action name per line.
pub fn parse_plan(text: &str, inst: &StripsInstance) -> Result<Plan> {
    content_lines(text)
        .map(|(line, name)| {
            inst.action_set().action_index(name).ok_or_else(|| Error::Syntax {
                line,
                column: 1,
                message: format!("unknown action `{name}`"),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Plan)
}

pub fn serialize_plan(plan: &Plan, inst: &StripsInstance) -> String {
    inst.plan_names(plan).into_iter().map(|n| n + "\n").collect()
}

/// One outcome per line.
pub fn parse_sequence(text: &str, vars: &Vars) -> Result<Vec<Outcome>> {
    content_lines(text)
        .map(|(line, src)| parse_outcome_at(src, vars, Span { line, column: 1 }))
        .collect()
}

pub fn serialize_sequence(seq: &[Outcome], vars: &Vars) -> String {
    seq.iter().map(|o| vars.outcome_string(o) + "\n").collect()
}
