//! The `.strips` text format.
//!
//! ```text
//! vars: x y
//! init: !x, !y
//! goal: x, y
//! action a: pre = !x ; post = x
//! action b: pre = x & !y ; post = y
//! action c: pre = true ; post = !x
//! ```
//!
//! `init` and `goal` must be complete states. Literal lists are separated by
//! `,` or `&`; an empty list or `true` means no literals.

use crate::error::{Error, Result};
use crate::gcp::{is_identifier, Vars};
use crate::logic::Literal;
use crate::strips::{Action, ActionSet, State, StripsInstance};

use super::gcp_text::{column_of, directive, parse_var_list, split_comment};
use super::syntax::{outcome_from_literals, parse_literal_list_at, Names, Span};

struct Pending {
    line: usize,
    column: usize,
    lits: Vec<Literal>,
}

pub fn parse_strips(text: &str) -> Result<StripsInstance> {
    let mut vars: Option<Vars> = None;
    let mut init: Option<Pending> = None;
    let mut goal: Option<Pending> = None;
    let mut actions = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (content, _) = split_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        let syntax = |column: usize, message: String| Error::Syntax {
            line,
            column,
            message,
        };
        let Some((keyword, rest, col)) = directive(content) else {
            return Err(syntax(1, "expected `vars:`, `init:`, `goal:` or `action NAME:`".into()));
        };
        if keyword == "vars" {
            if vars.is_some() {
                return Err(syntax(1, "second `vars:` line".into()));
            }
            vars = Some(parse_var_list(rest, line, col)?);
            continue;
        }
        let Some(v) = vars.as_ref() else {
            return Err(syntax(1, "`vars:` must come first".into()));
        };
        let span = Span { line, column: col };
        match keyword {
            "init" | "goal" => {
                let slot = if keyword == "init" { &mut init } else { &mut goal };
                if slot.is_some() {
                    return Err(syntax(1, format!("second `{keyword}:` line")));
                }
                let lits = parse_literal_list_at(rest, &mut Names::Fixed(v), span)?;
                *slot = Some(Pending {
                    line,
                    column: col,
                    lits,
                });
            }
            _ => {
                let Some(name) = keyword.strip_prefix("action") else {
                    return Err(syntax(1, format!("unknown directive `{keyword}:`")));
                };
                let name = name.trim();
                let spaced = name.len() < keyword.len() - "action".len();
                if !spaced || !is_identifier(name) {
                    return Err(syntax(1, format!("expected `action NAME:`, found `{keyword}:`")));
                }
                actions.push(parse_action_body(name, rest, v, span)?);
            }
        }
    }

    let vars = vars.ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `vars:` line".into(),
    })?;
    let state = |p: Option<Pending>, what: &str| -> Result<State> {
        let p = p.ok_or_else(|| Error::model(format!("missing `{what}:` line")))?;
        outcome_from_literals(&p.lits, &vars).map_err(|m| {
            Error::model(format!(
                "line {}, column {}: {what} must be a complete state ({m})",
                p.line, p.column
            ))
        })
    };
    let initial = state(init, "init")?;
    let goal = state(goal, "goal")?;
    StripsInstance::new(vars, initial, goal, actions)
}

fn parse_action_body(name: &str, body: &str, vars: &Vars, span: Span) -> Result<Action> {
    let mut pre: Option<Vec<Literal>> = None;
    let mut post: Option<Vec<Literal>> = None;
    let mut offset = 0;
    for part in body.split(';') {
        let part_col = span.column + column_of(body, offset) - 1;
        offset += part.len() + 1;
        let err = |column: usize, message: String| Error::Syntax {
            line: span.line,
            column,
            message,
        };
        let Some((key, value)) = part.split_once('=') else {
            return Err(err(part_col, "expected `pre = …` or `post = …`".into()));
        };
        let value_col = part_col + column_of(part, key.len() + 1) - 1;
        let lits = parse_literal_list_at(
            value,
            &mut Names::Fixed(vars),
            Span {
                line: span.line,
                column: value_col,
            },
        )?;
        let slot = match key.trim() {
            "pre" => &mut pre,
            "post" => &mut post,
            other => return Err(err(part_col, format!("unknown action field `{other}`"))),
        };
        if slot.replace(lits).is_some() {
            return Err(err(part_col, format!("`{}` given twice", key.trim())));
        }
    }
    let post = post.ok_or_else(|| Error::Syntax {
        line: span.line,
        column: span.column,
        message: format!("action `{name}` has no `post`"),
    })?;
    Ok(Action::new(name, pre.unwrap_or_default(), post))
}

fn literal_list(vars: &Vars, lits: &[Literal], sep: &str) -> String {
    if lits.is_empty() {
        return "true".into();
    }
    lits.iter()
        .map(|&l| vars.literal_string(l))
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn serialize_actions(set: &ActionSet) -> String {
    let v = set.vars();
    set.actions()
        .iter()
        .map(|a| {
            format!(
                "action {}: pre = {} ; post = {}\n",
                a.name,
                literal_list(v, &a.pre, " & "),
                literal_list(v, &a.post, " & ")
            )
        })
        .collect()
}

pub fn serialize_strips(inst: &StripsInstance) -> String {
    let v = inst.vars();
    format!(
        "vars: {}\ninit: {}\ngoal: {}\n{}",
        v.names().join(" "),
        literal_list(v, &inst.initial().literals(), ", "),
        literal_list(v, &inst.goal().literals(), ", "),
        serialize_actions(inst.action_set())
    )
}
