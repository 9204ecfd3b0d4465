//! Shared lexical layer: formulas, literals and literal lists.
//!
//! Formulas use `!`, `&`, `|`, parentheses, `true` and `false`, with the
//! usual precedence `!` > `&` > `|`. Parsing never folds or flattens, so a
//! displayed formula parses back to the identical tree.

use crate::error::{Error, Result};
use crate::gcp::Vars;
use crate::logic::{Formula, Literal, Outcome};

/// Where a piece of text sits in its file, for error positions.
#[derive(Debug, Clone, Copy)]
pub struct Span {
    pub line: usize,
    /// 1-based column of the first character.
    pub column: usize,
}

impl Span {
    pub const START: Span = Span { line: 1, column: 1 };

    pub fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column + offset,
            message: message.into(),
        }
    }
}

/// How identifiers that are not declared variables are handled.
pub enum Names<'a> {
    Fixed(&'a Vars),
    /// Undeclared names are appended on first use.
    Growing(&'a mut Vars),
}

impl Names<'_> {
    fn resolve(&mut self, name: &str, span: Span, at: usize) -> Result<usize> {
        match self {
            Names::Fixed(vars) => vars
                .get(name)
                .ok_or_else(|| span.error(at, format!("unknown variable `{name}`"))),
            Names::Growing(vars) => match vars.get(name) {
                Some(i) => Ok(i),
                None => vars.push(name.to_string()),
            },
        }
    }
}

struct Cursor {
    text: Vec<char>,
    pos: usize,
    span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

impl Cursor {
    fn new(src: &str, span: Span) -> Self {
        Cursor {
            text: src.chars().collect(),
            pos: 0,
            span,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.span.error(self.pos, message)
    }

    fn unexpected(&mut self, wanted: &str) -> Error {
        match self.peek() {
            Some(c) => self.error(format!("expected {wanted}, found `{c}`")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        let c = self.peek()?;
        if !ident_start(c) {
            return None;
        }
        let start = self.pos;
        while self.pos < self.text.len() && ident_char(self.text[self.pos]) {
            self.pos += 1;
        }
        Some((self.text[start..self.pos].iter().collect(), start))
    }

    fn or(&mut self, names: &mut Names) -> Result<Formula> {
        let mut parts = vec![self.and(names)?];
        while self.eat('|') {
            parts.push(self.and(names)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn and(&mut self, names: &mut Names) -> Result<Formula> {
        let mut parts = vec![self.unary(names)?];
        while self.eat('&') {
            parts.push(self.unary(names)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self, names: &mut Names) -> Result<Formula> {
        if self.eat('!') {
            return Ok(Formula::Not(Box::new(self.unary(names)?)));
        }
        if self.eat('(') {
            let f = self.or(names)?;
            if !self.eat(')') {
                return Err(self.unexpected("`)`"));
            }
            return Ok(f);
        }
        match self.ident() {
            Some((name, _)) if name == "true" => Ok(Formula::True),
            Some((name, _)) if name == "false" => Ok(Formula::False),
            Some((name, at)) => Ok(Formula::Var(names.resolve(&name, self.span, at)?)),
            None => Err(self.unexpected("a variable, `!`, `(`, `true` or `false`")),
        }
    }

    fn literal(&mut self, names: &mut Names) -> Result<Literal> {
        let positive = !self.eat('!');
        match self.ident() {
            Some((name, at)) if name == "true" || name == "false" => {
                Err(self.span.error(at, format!("`{name}` is not a literal")))
            }
            Some((name, at)) => Ok(Literal::new(names.resolve(&name, self.span, at)?, positive)),
            None => Err(self.unexpected("a literal")),
        }
    }
}

/// Parses a whole formula; empty text is `true`.
pub fn parse_formula_at(src: &str, names: &mut Names, span: Span) -> Result<Formula> {
    let mut cur = Cursor::new(src, span);
    if cur.at_end() {
        return Ok(Formula::True);
    }
    let f = cur.or(names)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    Ok(f)
}

pub fn parse_formula(src: &str, vars: &Vars) -> Result<Formula> {
    parse_formula_at(src, &mut Names::Fixed(vars), Span::START)
}

pub fn parse_literal_at(src: &str, names: &mut Names, span: Span) -> Result<Literal> {
    let mut cur = Cursor::new(src, span);
    let l = cur.literal(names)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of literal"));
    }
    Ok(l)
}

/// Literals separated by `,` or `&`; empty text or `true` is the empty list.
pub fn parse_literal_list_at(src: &str, names: &mut Names, span: Span) -> Result<Vec<Literal>> {
    let mut cur = Cursor::new(src, span);
    if cur.at_end() {
        return Ok(Vec::new());
    }
    let save = cur.pos;
    if let Some((w, _)) = cur.ident() {
        if w == "true" && cur.at_end() {
            return Ok(Vec::new());
        }
    }
    cur.pos = save;
    let mut lits = vec![cur.literal(names)?];
    while cur.eat(',') || cur.eat('&') {
        lits.push(cur.literal(names)?);
    }
    if !cur.at_end() {
        return Err(cur.unexpected("`,`, `&` or end of list"));
    }
    Ok(lits)
}

/// A complete assignment: every variable exactly once, in any order.
pub fn parse_outcome_at(src: &str, vars: &Vars, span: Span) -> Result<Outcome> {
    let lits = parse_literal_list_at(src, &mut Names::Fixed(vars), span)?;
    outcome_from_literals(&lits, vars).map_err(|m| span.error(0, m))
}

pub fn parse_outcome(src: &str, vars: &Vars) -> Result<Outcome> {
    parse_outcome_at(src, vars, Span::START)
}

pub(crate) fn outcome_from_literals(lits: &[Literal], vars: &Vars) -> std::result::Result<Outcome, String> {
    let n = vars.len();
    let mut values: Vec<Option<bool>> = vec![None; n];
    for l in lits {
        if values[l.var].replace(l.positive).is_some() {
            return Err(format!("variable `{}` assigned twice", vars.name(l.var)));
        }
    }
    if lits.len() != n {
        let missing: Vec<&str> = (0..n)
            .filter(|&i| values[i].is_none())
            .map(|i| vars.name(i))
            .collect();
        return Err(format!(
            "expected {n} values, got {}; missing {}",
            lits.len(),
            missing.join(", ")
        ));
    }
    Ok(Outcome::from_bools(
        &values.into_iter().map(Option::unwrap).collect::<Vec<_>>(),
    ))
}
