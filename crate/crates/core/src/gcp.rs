//! Generalized CP-nets: rule storage, aggregated flip conditions, the
//! dependency graph, and the local consistency / completeness checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{
    cube_is_consistent, is_satisfiable, is_tautology, Formula, Literal, Outcome,
    MAX_OUTCOME_VARS,
};

/// Ordered, uniquely named variable list. A variable's index is its
/// position here.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vars {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut vars = Vars::default();
        for n in names {
            vars.push(n.into())?;
        }
        Ok(vars)
    }

    pub fn push(&mut self, name: String) -> Result<usize> {
        if !is_identifier(&name) {
            return Err(Error::model(format!("`{name}` is not a valid variable name")));
        }
        if self.index.contains_key(&name) {
            return Err(Error::model(format!("duplicate variable `{name}`")));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    /// Appends a variable named `base`, or `base_1`, `base_2`, ... if taken.
    pub fn push_fresh(&mut self, base: &str) -> usize {
        let name = self.fresh(base);
        self.push(name).expect("fresh name is unique")
    }

    pub fn fresh(&self, base: &str) -> String {
        fresh_name(base, |n| self.contains(n))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn literal_string(&self, l: Literal) -> String {
        if l.positive {
            self.names[l.var].clone()
        } else {
            format!("!{}", self.names[l.var])
        }
    }

    /// Comma-separated literal list, e.g. `x,!y`.
    pub fn outcome_string(&self, o: &Outcome) -> String {
        o.literals()
            .into_iter()
            .map(|l| self.literal_string(l))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `[A-Za-z_][A-Za-z0-9_.']*`, excluding the keywords `true` and `false`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
        && s != "true"
        && s != "false"
}

pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken(n))
        .unwrap()
}

/// `condition : target > ¬target`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceRule {
    pub condition: Formula,
    pub target: Literal,
}

impl PreferenceRule {
    pub fn new(condition: Formula, target: Literal) -> Self {
        PreferenceRule { condition, target }
    }
}

/// How a rule's condition is tested during flip generation.
#[derive(Debug, Clone)]
pub(crate) enum Condition {
    Cube { mask: u64, value: u64 },
    Never,
    General(Formula),
}

impl Condition {
    #[inline]
    pub(crate) fn holds(&self, n: usize, bits: u64) -> bool {
        match self {
            Condition::Cube { mask, value } => bits & mask == *value,
            Condition::Never => false,
            Condition::General(f) => f.holds(&Outcome::from_index(n, bits)),
        }
    }
}

/// A rule compiled against the net's bit layout.
#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub rule: usize,
    pub var: usize,
    pub mask: u64,
    /// The flip sets the variable to this value.
    pub to_true: bool,
    pub condition: Condition,
}

#[derive(Debug, Clone)]
struct Aggregate {
    plus: Formula,
    minus: Formula,
}

/// A set of conditional preference rules over an ordered variable list.
#[derive(Debug, Clone)]
pub struct GcpNet {
    vars: Vars,
    rules: Vec<PreferenceRule>,
    conjunctive: bool,
    aggregates: OnceLock<Vec<Aggregate>>,
    compiled: OnceLock<Vec<CompiledRule>>,
}

impl PartialEq for GcpNet {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.rules == other.rules
    }
}

impl Eq for GcpNet {}

impl GcpNet {
    /// Validates and builds a net.
    pub fn new(vars: Vars, rules: Vec<PreferenceRule>) -> Result<Self> {
        let n = vars.len();
        if n > MAX_OUTCOME_VARS {
            return Err(Error::model(format!(
                "{n} variables; at most {MAX_OUTCOME_VARS} are supported"
            )));
        }
        for (i, r) in rules.iter().enumerate() {
            if r.target.var >= n {
                return Err(Error::model(format!(
                    "rule {}: target variable #{} is not declared",
                    i + 1,
                    r.target.var
                )));
            }
            if let Some(v) = r.condition.max_var() {
                if v >= n {
                    return Err(Error::model(format!(
                        "rule {}: condition refers to undeclared variable #{v}",
                        i + 1
                    )));
                }
            }
            if r.condition.mentions(r.target.var) {
                return Err(Error::model(format!(
                    "rule {}: condition mentions its own variable `{}`",
                    i + 1,
                    vars.name(r.target.var)
                )));
            }
        }
        let conjunctive = rules.iter().all(|r| r.condition.is_conjunctive());
        Ok(GcpNet {
            vars,
            rules,
            conjunctive,
            aggregates: OnceLock::new(),
            compiled: OnceLock::new(),
        })
    }

    /// Builds a net from per-variable aggregated conditions `(p⁺, p⁻)`,
    /// realizing each aggregate that is not syntactically false as one rule.
    pub fn from_aggregates(vars: Vars, conditions: Vec<(Formula, Formula)>) -> Result<Self> {
        assert_eq!(vars.len(), conditions.len());
        let mut rules = Vec::new();
        for (x, (plus, minus)) in conditions.into_iter().enumerate() {
            if plus != Formula::False {
                rules.push(PreferenceRule::new(plus, Literal::pos(x)));
            }
            if minus != Formula::False {
                rules.push(PreferenceRule::new(minus, Literal::neg(x)));
            }
        }
        GcpNet::new(vars, rules)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn rules(&self) -> &[PreferenceRule] {
        &self.rules
    }

    /// Every rule condition is a conjunction of literals.
    pub fn is_conjunctive(&self) -> bool {
        self.conjunctive
    }

    fn aggregates(&self) -> &[Aggregate] {
        self.aggregates.get_or_init(|| {
            (0..self.num_vars())
                .map(|x| {
                    let collect = |positive: bool| {
                        let mut conds: Vec<Formula> = self
                            .rules
                            .iter()
                            .filter(|r| r.target == Literal::new(x, positive))
                            .map(|r| r.condition.clone())
                            .collect();
                        match conds.len() {
                            0 => Formula::False,
                            1 => conds.pop().unwrap(),
                            _ => Formula::Or(conds),
                        }
                    };
                    Aggregate {
                        plus: collect(true),
                        minus: collect(false),
                    }
                })
                .collect()
        })
    }

    /// `(p⁺(x), p⁻(x))`: the disjunctions of the conditions of the rules
    /// preferring `x` and `¬x` respectively; `false` when there are none.
    pub fn aggregate_conditions(&self, x: usize) -> (&Formula, &Formula) {
        let a = &self.aggregates()[x];
        (&a.plus, &a.minus)
    }

    pub(crate) fn compiled(&self) -> &[CompiledRule] {
        self.compiled.get_or_init(|| {
            let n = self.num_vars();
            let mut out: Vec<CompiledRule> = self
                .rules
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let condition = match r.condition.as_cube() {
                        Some(lits) if !cube_is_consistent(&lits) => Condition::Never,
                        Some(lits) => {
                            let (mut mask, mut value) = (0u64, 0u64);
                            for l in lits {
                                let m = Outcome::mask(n, l.var);
                                mask |= m;
                                if l.positive {
                                    value |= m;
                                }
                            }
                            Condition::Cube { mask, value }
                        }
                        None if r.condition == Formula::False => Condition::Never,
                        None => Condition::General(r.condition.clone()),
                    };
                    CompiledRule {
                        rule: i,
                        var: r.target.var,
                        mask: Outcome::mask(n, r.target.var),
                        to_true: r.target.positive,
                        condition,
                    }
                })
                .collect();
            out.sort_by_key(|c| (c.var, c.rule));
            out
        })
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        let mut edges = BTreeSet::new();
        for x in 0..self.num_vars() {
            let (plus, minus) = self.aggregate_conditions(x);
            for y in plus.vars_of().into_iter().chain(minus.vars_of()) {
                edges.insert((y, x));
            }
        }
        DependencyGraph {
            num_vars: self.num_vars(),
            edges: edges.into_iter().collect(),
        }
    }

    /// For every variable, `p⁺(x) ∧ p⁻(x)` is unsatisfiable.
    pub fn is_locally_consistent(&self, limits: &Limits) -> Result<bool> {
        for x in 0..self.num_vars() {
            if !self.variable_locally_consistent(x, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn variable_locally_consistent(&self, x: usize, limits: &Limits) -> Result<bool> {
        let (plus, minus) = self.aggregate_conditions(x);
        if *plus == Formula::False || *minus == Formula::False {
            return Ok(true);
        }
        if self.conjunctive {
            // p⁺ ∧ p⁻ is a disjunction of pairwise conjunctions of cubes
            let cubes = |target: Literal| -> Vec<Vec<Literal>> {
                self.rules
                    .iter()
                    .filter(|r| r.target == target)
                    .map(|r| r.condition.as_cube().expect("conjunctive net"))
                    .collect()
            };
            let (pc, mc) = (cubes(Literal::pos(x)), cubes(Literal::neg(x)));
            for a in &pc {
                for b in &mc {
                    let mut both = a.clone();
                    both.extend_from_slice(b);
                    if cube_is_consistent(&both) {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        let both = Formula::And(vec![plus.clone(), minus.clone()]);
        Ok(!is_satisfiable(&both, limits)?)
    }

    /// For every variable, `p⁺(x) ∨ p⁻(x)` is valid.
    pub fn is_locally_complete(&self, limits: &Limits) -> Result<bool> {
        for x in 0..self.num_vars() {
            let (plus, minus) = self.aggregate_conditions(x);
            let either = Formula::Or(vec![plus.clone(), minus.clone()]);
            if !is_tautology(&either, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Locally consistent and locally complete.
    pub fn is_cpnet(&self, limits: &Limits) -> Result<bool> {
        Ok(self.is_locally_consistent(limits)? && self.is_locally_complete(limits)?)
    }

    /// The net obtained by swapping the polarity of every variable `i` with
    /// `flip[i]` set, in conditions and in rule targets. Outcome `o` of the
    /// result corresponds to `o` with the same variables flipped.
    pub fn rename_polarity(&self, flip: &[bool]) -> GcpNet {
        assert_eq!(flip.len(), self.num_vars());
        let rules = self
            .rules
            .iter()
            .map(|r| PreferenceRule {
                condition: r.condition.negate_vars(&|v| flip[v]),
                target: if flip[r.target.var] {
                    r.target.dual()
                } else {
                    r.target
                },
            })
            .collect();
        GcpNet::new(self.vars.clone(), rules).expect("renaming preserves validity")
    }

    pub fn outcome_string(&self, o: &Outcome) -> String {
        self.vars.outcome_string(o)
    }

    pub fn rule_string(&self, r: &PreferenceRule) -> String {
        format!(
            "{} : {} > {}",
            r.condition.display(self.vars.names()),
            self.vars.literal_string(r.target),
            self.vars.literal_string(r.target.dual())
        )
    }
}

impl fmt::Display for GcpNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.names().join(" "))?;
        for r in &self.rules {
            writeln!(f, "rule: {}", self.rule_string(r))?;
        }
        Ok(())
    }
}

/// Edges `(y, x)`: `y` occurs in `p⁺(x)` or `p⁻(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    pub num_vars: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The coNP-hardness gadget: a net over `Var(φ) ∪ {z}` that is a CP-net
/// exactly when `φ` is unsatisfiable.
///
/// Variables of `φ` keep their relative order from `names`; `z` is appended
/// with a name not used by any of them. Every `x ≠ z` gets `true : x > ¬x`
/// and `z` gets `¬φ : z > ¬z`.
pub fn cpnet_from_formula(phi: &Formula, names: &Vars) -> Result<GcpNet> {
    let occurring: Vec<usize> = phi.vars_of().into_iter().collect();
    if let Some(&v) = occurring.last() {
        if v >= names.len() {
            return Err(Error::model(format!(
                "formula refers to undeclared variable #{v}"
            )));
        }
    }
    let mut vars = Vars::default();
    let mut remap = vec![usize::MAX; names.len()];
    for &v in &occurring {
        remap[v] = vars.push(names.name(v).to_string())?;
    }
    let z = vars.push_fresh("z");
    let phi = phi.map_vars(&|v| remap[v]);
    let mut conditions: Vec<(Formula, Formula)> = (0..occurring.len())
        .map(|_| (Formula::True, Formula::False))
        .collect();
    conditions.push((Formula::not(phi), Formula::False));
    debug_assert_eq!(conditions.len(), z + 1);
    GcpNet::from_aggregates(vars, conditions)
}
