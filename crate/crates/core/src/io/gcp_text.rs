//! The `.gcp` text format.
//!
//! ```text
//! # leading comments are kept as metadata
//! vars: x y
//! rule: x : y > !y        # trailing comments are dropped
//! rule: : x > !x          # empty condition is `true`
//! ```
//!
//! Without a `vars:` line, variables are declared in order of first use.

use crate::error::{Error, Result};
use crate::gcp::{is_identifier, GcpNet, PreferenceRule, Vars};

use super::syntax::{parse_formula_at, parse_literal_at, Names, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDocument {
    pub comments: Vec<String>,
    pub net: GcpNet,
}

/// Splits off a `#` comment: `(content, comment text)`.
pub(crate) fn split_comment(line: &str) -> (&str, Option<&str>) {
    match line.find('#') {
        Some(i) => (&line[..i], Some(line[i + 1..].strip_prefix(' ').unwrap_or(&line[i + 1..]))),
        None => (line, None),
    }
}

pub(crate) fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// `keyword: rest`, with the column where `rest` starts.
pub(crate) fn directive(content: &str) -> Option<(&str, &str, usize)> {
    let (head, rest) = content.split_once(':')?;
    let start = head.len() + 1;
    Some((head.trim(), rest, column_of(content, start)))
}

pub(crate) fn parse_var_list(rest: &str, line: usize, column: usize) -> Result<Vars> {
    let mut vars = Vars::default();
    let mut offset = 0;
    for word in rest.split_whitespace() {
        let at = rest[offset..].find(word).unwrap() + offset;
        offset = at + word.len();
        let col = column + rest[..at].chars().count();
        let err = |message: String| Error::Syntax {
            line,
            column: col,
            message,
        };
        if !is_identifier(word) {
            return Err(err(format!("`{word}` is not a valid variable name")));
        }
        if vars.contains(word) {
            return Err(err(format!("duplicate variable `{word}`")));
        }
        vars.push(word.to_string())?;
    }
    Ok(vars)
}

pub fn parse_gcp_document(text: &str) -> Result<NetDocument> {
    let mut comments = Vec::new();
    let mut header = true;
    let mut vars: Option<Vars> = None;
    let mut implicit = Vars::default();
    let mut rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (content, comment) = split_comment(raw);
        if content.trim().is_empty() {
            if let (true, Some(c)) = (header, comment) {
                comments.push(c.trim_end().to_string());
            }
            continue;
        }
        header = false;
        let syntax = |column: usize, message: &str| Error::Syntax {
            line,
            column,
            message: message.to_string(),
        };
        let Some((keyword, rest, col)) = directive(content) else {
            return Err(syntax(1, "expected `vars:` or `rule:`"));
        };
        match keyword {
            "vars" => {
                if vars.is_some() {
                    return Err(syntax(1, "second `vars:` line"));
                }
                if !rules.is_empty() {
                    return Err(syntax(1, "`vars:` must come before the rules"));
                }
                vars = Some(parse_var_list(rest, line, col)?);
            }
            "rule" => {
                let mut names = match vars.as_ref() {
                    Some(v) => Names::Fixed(v),
                    None => Names::Growing(&mut implicit),
                };
                let Some(sep) = rest.find(':') else {
                    return Err(syntax(col + rest.chars().count(), "expected `COND : LIT > LIT`"));
                };
                let (cond_src, lits_src) = (&rest[..sep], &rest[sep + 1..]);
                let lits_col = col + column_of(rest, sep + 1) - 1;
                let condition =
                    parse_formula_at(cond_src, &mut names, Span { line, column: col })?;
                let Some(gt) = lits_src.find('>') else {
                    return Err(syntax(lits_col + lits_src.chars().count(), "expected `>`"));
                };
                let target = parse_literal_at(&lits_src[..gt], &mut names, Span { line, column: lits_col })?;
                let dual_src = &lits_src[gt + 1..];
                let dual_col = lits_col + column_of(lits_src, gt + 1) - 1;
                let dual = parse_literal_at(dual_src, &mut names, Span { line, column: dual_col })?;
                if dual != target.dual() {
                    let lead = dual_src.chars().take_while(|c| c.is_whitespace()).count();
                    return Err(syntax(
                        dual_col + lead,
                        "right-hand literal must be the dual of the left-hand one",
                    ));
                }
                rules.push(PreferenceRule::new(condition, target));
            }
            other => {
                return Err(syntax(1, &format!("unknown directive `{other}:`")));
            }
        }
    }
    let net = GcpNet::new(vars.unwrap_or(implicit), rules)?;
    Ok(NetDocument { comments, net })
}

pub fn parse_gcp(text: &str) -> Result<GcpNet> {
    Ok(parse_gcp_document(text)?.net)
}

pub fn serialize_gcp(net: &GcpNet) -> String {
    let mut out = format!("vars: {}\n", net.vars().names().join(" "));
    for r in net.rules() {
        let cond = match r.condition {
            crate::logic::Formula::True => String::new(),
            ref c => format!("{} ", c.display(net.vars().names())),
        };
        out.push_str(&format!(
            "rule: {cond}: {} > {}\n",
            net.vars().literal_string(r.target),
            net.vars().literal_string(r.target.dual())
        ));
    }
    out
}

pub fn serialize_gcp_document(doc: &NetDocument) -> String {
    let mut out = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str(&format!("# {c}\n"));
        }
    }
    out.push_str(&serialize_gcp(&doc.net));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Formula, Literal};

    const EXAMPLE1: &str = "vars: x y\nrule: x : y > !y\nrule: !x : !y > y\nrule: y : !x > x\nrule: !y : x > !x\n";

    #[test]
    fn example1_round_trip() {
        let net = parse_gcp(EXAMPLE1).unwrap();
        assert_eq!(net.rules().len(), 4);
        assert_eq!(net.rules()[1].condition, Formula::Not(Box::new(Formula::Var(0))));
        assert_eq!(net.rules()[1].target, Literal::neg(1));
        assert_eq!(serialize_gcp(&net), EXAMPLE1);
    }

    #[test]
    fn empty_condition_is_true() {
        let net = parse_gcp("vars: a b\nrule: : a > !a\nrule: : b > !b").unwrap();
        assert_eq!(net.rules()[0].condition, Formula::True);
        assert_eq!(serialize_gcp(&net), "vars: a b\nrule: : a > !a\nrule: : b > !b\n");
    }

    #[test]
    fn self_reference_is_semantic_error() {
        assert!(matches!(parse_gcp("rule: x : x > !x"), Err(Error::Model(_))));
    }

    #[test]
    fn implicit_declaration_order() {
        let net = parse_gcp("rule: b & c : a > !a").unwrap();
        assert_eq!(net.vars().names(), &["b", "c", "a"]);
    }

    #[test]
    fn comments_kept_in_header_only() {
        let doc = parse_gcp_document("# Example\n#\n# more\nvars: a # trailing\n# inner\nrule: : a > !a\n").unwrap();
        assert_eq!(doc.comments, vec!["Example", "", "more"]);
        assert_eq!(
            serialize_gcp_document(&doc),
            "# Example\n#\n# more\nvars: a\nrule: : a > !a\n"
        );
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_gcp("vars: a b\nrule: a : b > b") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 15)),
            other => panic!("{other:?}"),
        }
        match parse_gcp("vars: a b\nrule: a & : b > !b") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 11)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_gcp("vars: a\nfoo"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_gcp("vars: a a"), Err(Error::Syntax { line: 1, column: 9, .. })));
    }
}
