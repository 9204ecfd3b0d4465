//! Propositional formulas over indexed variables, complete outcomes, and
//! satisfiability / validity by enumeration.
//!
//! Variables are referred to by their position in the owning net's ordering;
//! names live with the net (see [`crate::gcp::Vars`]). Satisfiability only
//! enumerates the variables that actually occur in a formula, and formulas
//! that are a conjunction of literals take a linear fast path.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Maximum number of variables an [`Outcome`] can hold.
pub const MAX_OUTCOME_VARS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn dual(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn holds_in(self, o: &Outcome) -> bool {
        o.get(self.var) == self.positive
    }

    pub fn to_formula(self) -> Formula {
        if self.positive {
            Formula::Var(self.var)
        } else {
            Formula::Not(Box::new(Formula::Var(self.var)))
        }
    }
}

/// A complete truth assignment, packed with variable 0 in the most
/// significant position so that [`Outcome::index`] reads as a binary number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome {
    len: u32,
    bits: u64,
}

impl Outcome {
    /// # Panics
    /// If `len` exceeds [`MAX_OUTCOME_VARS`] or `bits` has bits above `len`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= MAX_OUTCOME_VARS, "outcome over {len} variables");
        assert!(
            len == 64 || index >> len == 0,
            "index {index} out of range for {len} variables"
        );
        Outcome {
            len: len as u32,
            bits: index,
        }
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut o = Outcome::from_index(values.len(), 0);
        for (i, &v) in values.iter().enumerate() {
            o = o.with(i, v);
        }
        o
    }

    /// Every variable false.
    pub fn all_false(len: usize) -> Self {
        Outcome::from_index(len, 0)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> u64 {
        self.bits
    }

    /// Bit mask of variable `var` in an outcome over `len` variables.
    #[inline]
    pub fn mask(len: usize, var: usize) -> u64 {
        debug_assert!(var < len);
        1u64 << (len - 1 - var)
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        self.bits & Outcome::mask(self.len(), var) != 0
    }

    pub fn with(self, var: usize, value: bool) -> Self {
        let m = Outcome::mask(self.len(), var);
        let bits = if value { self.bits | m } else { self.bits & !m };
        Outcome { bits, ..self }
    }

    pub fn flipped(self, var: usize) -> Self {
        Outcome {
            bits: self.bits ^ Outcome::mask(self.len(), var),
            ..self
        }
    }

    pub fn values(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn literals(&self) -> Vec<Literal> {
        (0..self.len())
            .map(|i| Literal::new(i, self.get(i)))
            .collect()
    }

    /// Concatenation: `self` over the first variables, `tail` after them.
    pub fn concat(&self, tail: &Outcome) -> Outcome {
        let len = self.len() + tail.len();
        assert!(len <= MAX_OUTCOME_VARS);
        let bits = if tail.len() == 64 {
            tail.bits
        } else {
            (self.bits << tail.len()) | tail.bits
        };
        Outcome {
            len: len as u32,
            bits,
        }
    }

    /// The first `len` variables.
    pub fn prefix(&self, len: usize) -> Outcome {
        assert!(len <= self.len());
        let shift = self.len() - len;
        Outcome {
            len: len as u32,
            bits: if shift == 64 { 0 } else { self.bits >> shift },
        }
    }

    /// Variables `start..self.len()`.
    pub fn suffix(&self, start: usize) -> Outcome {
        assert!(start <= self.len());
        let len = self.len() - start;
        let bits = if len == 64 {
            self.bits
        } else {
            self.bits & ((1u64 << len) - 1)
        };
        Outcome {
            len: len as u32,
            bits,
        }
    }

    /// The outcome as a conjunction of its literals.
    pub fn to_formula(&self) -> Formula {
        Formula::and(self.literals().into_iter().map(Literal::to_formula))
    }

    /// Iterates all outcomes over `len` variables in ascending index order.
    pub fn all(len: usize) -> impl Iterator<Item = Outcome> {
        assert!(len < 64, "cannot enumerate 2^{len} outcomes");
        (0..1u64 << len).map(move |i| Outcome::from_index(len, i))
    }
}

/// Propositional formula. Conjunction and disjunction are n-ary; the empty
/// conjunction is true and the empty disjunction is false.
///
/// The variants are public for pattern matching. Build formulas through the
/// constructor functions ([`Formula::and`], [`Formula::or`], [`Formula::not`]),
/// which flatten nested connectives of the same kind and fold constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Var(usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn var(v: usize) -> Formula {
        Formula::Var(v)
    }

    pub fn lit(l: Literal) -> Formula {
        l.to_formula()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::and([a, b])
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::or([a, b])
    }

    /// `a ↔ b` as `(a ∧ b) ∨ (¬a ∧ ¬b)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::or2(
            Formula::and2(a.clone(), b.clone()),
            Formula::and2(Formula::not(a), Formula::not(b)),
        )
    }

    pub fn cube(lits: impl IntoIterator<Item = Literal>) -> Formula {
        Formula::and(lits.into_iter().map(Literal::to_formula))
    }

    /// Standard truth-functional evaluation under `value`.
    pub fn eval_with(&self, value: &impl Fn(usize) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => value(*v),
            Formula::Not(f) => !f.eval_with(value),
            Formula::And(fs) => fs.iter().all(|f| f.eval_with(value)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_with(value)),
        }
    }

    /// Evaluates in `o`; caller guarantees every variable is in range.
    #[inline]
    pub(crate) fn holds(&self, o: &Outcome) -> bool {
        self.eval_with(&|v| o.get(v))
    }

    pub fn eval(&self, o: &Outcome) -> Result<bool> {
        if let Some(v) = self.max_var() {
            if v >= o.len() {
                return Err(Error::model(format!(
                    "formula refers to variable #{v} but the outcome has {} variables",
                    o.len()
                )));
            }
        }
        Ok(self.holds(o))
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Var(v) => Some(*v),
            Formula::Not(f) => f.max_var(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().filter_map(Formula::max_var).max(),
        }
    }

    pub fn vars_of(&self) -> BTreeSet<usize> {
        let mut acc = BTreeSet::new();
        self.collect_vars(&mut acc);
        acc
    }

    fn collect_vars(&self, acc: &mut BTreeSet<usize>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Var(v) => {
                acc.insert(*v);
            }
            Formula::Not(f) => f.collect_vars(acc),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(acc)),
        }
    }

    pub fn mentions(&self, var: usize) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Var(v) => *v == var,
            Formula::Not(f) => f.mentions(var),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.mentions(var)),
        }
    }

    /// Returns the literals if this formula is a (possibly empty) conjunction
    /// of literals.
    pub fn as_cube(&self) -> Option<Vec<Literal>> {
        fn literal(f: &Formula) -> Option<Literal> {
            match f {
                Formula::Var(v) => Some(Literal::pos(*v)),
                Formula::Not(inner) => match inner.as_ref() {
                    Formula::Var(v) => Some(Literal::neg(*v)),
                    _ => None,
                },
                _ => None,
            }
        }
        match self {
            Formula::True => Some(Vec::new()),
            Formula::And(fs) => {
                let mut lits = Vec::with_capacity(fs.len());
                for f in fs {
                    match f {
                        Formula::True => {}
                        other => lits.push(literal(other)?),
                    }
                }
                Some(lits)
            }
            other => literal(other).map(|l| vec![l]),
        }
    }

    pub fn is_conjunctive(&self) -> bool {
        self.as_cube().is_some()
    }

    /// Rewrites variable references through `map`.
    pub fn map_vars(&self, map: &impl Fn(usize) -> usize) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(v) => Formula::Var(map(*v)),
            Formula::Not(f) => Formula::Not(Box::new(f.map_vars(map))),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.map_vars(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.map_vars(map)).collect()),
        }
    }

    /// Replaces each variable `v` with `¬v` where `negate(v)` holds.
    pub fn negate_vars(&self, negate: &impl Fn(usize) -> bool) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Var(v) if negate(*v) => Formula::Not(Box::new(Formula::Var(*v))),
            Formula::Var(v) => Formula::Var(*v),
            Formula::Not(f) => match f.as_ref() {
                Formula::Var(v) if negate(*v) => Formula::Var(*v),
                _ => Formula::Not(Box::new(f.negate_vars(negate))),
            },
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.negate_vars(negate)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.negate_vars(negate)).collect()),
        }
    }

    /// Node count, used as a size measure.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Renders with the given variable names; falls back to `#i` for indices
    /// without a name.
    pub fn display<'a>(&'a self, names: &'a [String]) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            names,
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    names: &'a [String],
}

impl FormulaDisplay<'_> {
    fn name(&self, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.names.get(v) {
            Some(n) => f.write_str(n),
            None => write!(f, "#{v}"),
        }
    }

    // Precedence: | = 1, & = 2, ! and atoms = 3. A child is parenthesized
    // when its precedence is not above the parent's, which also keeps nested
    // connectives of the same kind distinct on re-parse.
    fn write(&self, g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match g {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Var(v) => self.name(*v, f),
            Formula::Not(inner) => {
                f.write_str("!")?;
                self.write_child(inner, 2, f)
            }
            Formula::And(fs) if fs.is_empty() => f.write_str("true"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("false"),
            Formula::And(fs) => self.write_joined(fs, " & ", 2, f),
            Formula::Or(fs) => self.write_joined(fs, " | ", 1, f),
        }
    }

    fn write_joined(
        &self,
        fs: &[Formula],
        sep: &str,
        prec: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        for (i, g) in fs.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            self.write_child(g, prec, f)?;
        }
        Ok(())
    }

    fn write_child(&self, g: &Formula, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = match g {
            Formula::Or(fs) if fs.len() > 1 => 1,
            Formula::And(fs) if fs.len() > 1 => 2,
            _ => 3,
        };
        if prec <= parent {
            f.write_str("(")?;
            self.write(g, f)?;
            f.write_str(")")
        } else {
            self.write(g, f)
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.formula, f)
    }
}

/// True iff the literal set contains no complementary pair.
pub fn cube_is_consistent(lits: &[Literal]) -> bool {
    let mut seen: Vec<Literal> = lits.to_vec();
    seen.sort();
    seen.dedup();
    seen.windows(2).all(|w| w[0].var != w[1].var)
}

/// Decides satisfiability by enumerating the assignments of the occurring
/// variables. Conjunctions of literals are decided by a linear scan.
pub fn is_satisfiable(f: &Formula, limits: &Limits) -> Result<bool> {
    if let Some(lits) = f.as_cube() {
        return Ok(cube_is_consistent(&lits));
    }
    is_satisfiable_by_enumeration(f, limits)
}

/// Enumeration only, with no fast path; kept separate so the two can be
/// checked against each other.
pub fn is_satisfiable_by_enumeration(f: &Formula, limits: &Limits) -> Result<bool> {
    let vars: Vec<usize> = f.vars_of().into_iter().collect();
    limits.check_sat(vars.len())?;
    let k = vars.len();
    // position of each occurring variable within the enumeration counter
    let max = vars.last().copied().unwrap_or(0);
    let mut pos = vec![usize::MAX; max + 1];
    for (i, &v) in vars.iter().enumerate() {
        pos[v] = i;
    }
    for assignment in 0..(1u64 << k) {
        if f.eval_with(&|v| assignment >> pos[v] & 1 == 1) {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn is_tautology(f: &Formula, limits: &Limits) -> Result<bool> {
    Ok(!is_satisfiable(&Formula::not(f.clone()), limits)?)
}
