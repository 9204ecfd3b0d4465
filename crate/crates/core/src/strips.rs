//! Propositional STRIPS with complete goals.
//!
//! Actions apply to every state: when the precondition fails the state is
//! left unchanged. Plan search only follows transitions that change the
//! state, so every plan it returns is irreducible.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::flip::Search;
use crate::gcp::{fresh_name, is_identifier, Vars};
use crate::limits::Limits;
use crate::logic::{cube_is_consistent, Literal, Outcome, MAX_OUTCOME_VARS};

pub type State = Outcome;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Action {
    pub name: String,
    /// Consistent conjunction of literals.
    pub pre: Vec<Literal>,
    /// Consistent conjunction of literals.
    pub post: Vec<Literal>,
}

impl Action {
    pub fn new(name: impl Into<String>, pre: Vec<Literal>, post: Vec<Literal>) -> Self {
        Action {
            name: name.into(),
            pre,
            post,
        }
    }

    pub fn is_executable(&self, s: &State) -> bool {
        self.pre.iter().all(|l| l.holds_in(s))
    }

    /// `eff(a, s)`: `s` with the postcondition imposed when the
    /// precondition holds, otherwise `s` itself.
    pub fn effect(&self, s: &State) -> State {
        if !self.is_executable(s) {
            return *s;
        }
        self.post.iter().fold(*s, |acc, l| acc.with(l.var, l.positive))
    }

    pub fn is_single_effect(&self) -> bool {
        self.post.len() == 1
    }
}

fn sorted_unique(lits: &[Literal]) -> Vec<Literal> {
    let mut v = lits.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Checks consistency of every pre/postcondition, removes postcondition
/// literals already required by the precondition, and drops actions whose
/// postcondition becomes empty. Literal lists come back sorted.
pub fn normalize_actions(actions: Vec<Action>) -> Result<Vec<Action>> {
    let mut out = Vec::with_capacity(actions.len());
    for a in actions {
        if !cube_is_consistent(&a.pre) {
            return Err(Error::model(format!(
                "action `{}`: inconsistent precondition",
                a.name
            )));
        }
        if !cube_is_consistent(&a.post) {
            return Err(Error::model(format!(
                "action `{}`: inconsistent postcondition",
                a.name
            )));
        }
        let pre = sorted_unique(&a.pre);
        let post: Vec<Literal> = sorted_unique(&a.post)
            .into_iter()
            .filter(|l| !pre.contains(l))
            .collect();
        if post.is_empty() {
            continue;
        }
        out.push(Action {
            name: a.name,
            pre,
            post,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct CompiledAction {
    pre_mask: u64,
    pre_value: u64,
    post_mask: u64,
    post_value: u64,
}

impl CompiledAction {
    fn new(n: usize, a: &Action) -> Self {
        let pack = |lits: &[Literal]| {
            lits.iter().fold((0u64, 0u64), |(m, v), l| {
                let b = Outcome::mask(n, l.var);
                (m | b, if l.positive { v | b } else { v })
            })
        };
        let (pre_mask, pre_value) = pack(&a.pre);
        let (post_mask, post_value) = pack(&a.post);
        CompiledAction {
            pre_mask,
            pre_value,
            post_mask,
            post_value,
        }
    }

    #[inline]
    fn apply(&self, bits: u64) -> u64 {
        if bits & self.pre_mask == self.pre_value {
            (bits & !self.post_mask) | self.post_value
        } else {
            bits
        }
    }
}

/// A normalized set of actions over a variable list.
#[derive(Debug, Clone)]
pub struct ActionSet {
    vars: Vars,
    actions: Vec<Action>,
    compiled: Vec<CompiledAction>,
}

impl PartialEq for ActionSet {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.actions == other.actions
    }
}

impl Eq for ActionSet {}

impl ActionSet {
    pub fn new(vars: Vars, actions: Vec<Action>) -> Result<Self> {
        let n = vars.len();
        if n > MAX_OUTCOME_VARS {
            return Err(Error::model(format!(
                "{n} variables; at most {MAX_OUTCOME_VARS} are supported"
            )));
        }
        let mut names = HashSet::new();
        for a in &actions {
            if !is_identifier(&a.name) {
                return Err(Error::model(format!("`{}` is not a valid action name", a.name)));
            }
            if !names.insert(a.name.as_str()) {
                return Err(Error::model(format!("duplicate action `{}`", a.name)));
            }
            if let Some(l) = a.pre.iter().chain(&a.post).find(|l| l.var >= n) {
                return Err(Error::model(format!(
                    "action `{}` refers to undeclared variable #{}",
                    a.name, l.var
                )));
            }
        }
        let actions = normalize_actions(actions)?;
        let compiled = actions.iter().map(|a| CompiledAction::new(n, a)).collect();
        Ok(ActionSet {
            vars,
            actions,
            compiled,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    pub fn effect(&self, action: usize, s: &State) -> State {
        Outcome::from_index(s.len(), self.compiled[action].apply(s.index()))
    }

    pub fn fresh_action_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.action_index(n).is_some())
    }
}

/// `⟨V, α0, γ, ACT⟩` with a complete goal state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsInstance {
    actions: ActionSet,
    initial: State,
    goal: State,
}

impl StripsInstance {
    pub fn new(vars: Vars, initial: State, goal: State, actions: Vec<Action>) -> Result<Self> {
        for (what, s) in [("initial state", &initial), ("goal", &goal)] {
            if s.len() != vars.len() {
                return Err(Error::model(format!(
                    "{what} has {} variables, instance has {}",
                    s.len(),
                    vars.len()
                )));
            }
        }
        Ok(StripsInstance {
            actions: ActionSet::new(vars, actions)?,
            initial,
            goal,
        })
    }

    pub fn from_action_set(actions: ActionSet, initial: State, goal: State) -> Result<Self> {
        let n = actions.num_vars();
        if initial.len() != n || goal.len() != n {
            return Err(Error::model("initial/goal arity does not match the variables"));
        }
        Ok(StripsInstance {
            actions,
            initial,
            goal,
        })
    }

    pub fn vars(&self) -> &Vars {
        self.actions.vars()
    }

    pub fn num_vars(&self) -> usize {
        self.actions.num_vars()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn goal(&self) -> State {
        self.goal
    }

    pub fn action_set(&self) -> &ActionSet {
        &self.actions
    }

    pub fn actions(&self) -> &[Action] {
        self.actions.actions()
    }

    pub fn is_single_effect(&self) -> bool {
        self.actions().iter().all(Action::is_single_effect)
    }

    /// Resolves action names into a plan.
    pub fn plan_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Plan> {
        names
            .iter()
            .map(|n| {
                self.actions.action_index(n.as_ref()).ok_or_else(|| {
                    Error::model(format!("unknown action `{}`", n.as_ref()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Plan)
    }

    pub fn plan_names(&self, plan: &Plan) -> Vec<String> {
        plan.0
            .iter()
            .map(|&i| self.actions()[i].name.clone())
            .collect()
    }

    /// Same actions, initial state `alpha`, goal `alpha`: the instances whose
    /// non-empty irreducible plans witness a cycle.
    pub fn with_endpoints(&self, initial: State, goal: State) -> Result<Self> {
        StripsInstance::from_action_set(self.actions.clone(), initial, goal)
    }
}

/// A sequence of action indices into the owning instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Plan(pub Vec<usize>);

impl Plan {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanTrace {
    /// Initial state followed by the state after each step.
    pub states: Vec<State>,
    pub reaches_goal: bool,
    /// Every step changed the state.
    pub irreducible: bool,
}

pub fn execute_plan(inst: &StripsInstance, plan: &Plan) -> Result<PlanTrace> {
    let mut states = Vec::with_capacity(plan.len() + 1);
    let mut s = inst.initial();
    states.push(s);
    let mut irreducible = true;
    for &a in &plan.0 {
        if a >= inst.actions().len() {
            return Err(Error::model(format!("plan refers to unknown action #{a}")));
        }
        let next = inst.action_set().effect(a, &s);
        irreducible &= next != s;
        s = next;
        states.push(s);
    }
    Ok(PlanTrace {
        reaches_goal: s == inst.goal(),
        states,
        irreducible,
    })
}

/// Breadth-first search for a shortest plan. Only state-changing transitions
/// are expanded, so a returned plan is irreducible.
pub fn plan_exists(inst: &StripsInstance, limits: &Limits) -> Result<Search<Plan>> {
    let n = inst.num_vars();
    limits.check_search("plan search", n)?;
    let (start, goal) = (inst.initial().index(), inst.goal().index());
    if start == goal {
        return Ok(Search {
            witness: Some(Plan::default()),
            expanded: 0,
        });
    }
    let compiled = &inst.action_set().compiled;
    let mut visited = FixedBitSet::with_capacity(1usize << n);
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    visited.insert(start as usize);
    queue.push_back(start);
    let mut expanded = 0u64;

    while let Some(cur) = queue.pop_front() {
        expanded += 1;
        for (i, a) in compiled.iter().enumerate() {
            let next = a.apply(cur);
            if next == cur || visited.put(next as usize) {
                continue;
            }
            parent.insert(next, (cur, i));
            if next == goal {
                let mut steps = Vec::new();
                let mut s = goal;
                while s != start {
                    let (p, a) = parent[&s];
                    steps.push(a);
                    s = p;
                }
                steps.reverse();
                return Ok(Search {
                    witness: Some(Plan(steps)),
                    expanded,
                });
            }
            queue.push_back(next);
        }
    }
    Ok(Search {
        witness: None,
        expanded,
    })
}

/// A non-empty irreducible plan from `states[0]` back to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCycle {
    pub states: Vec<State>,
    pub plan: Plan,
}

/// Depth-first search for a directed cycle in the state graph induced by the
/// actions (edge `s → eff(a, s)` whenever the two differ), started from every
/// state.
pub fn find_action_cycle(actions: &ActionSet, limits: &Limits) -> Result<Search<ActionCycle>> {
    let n = actions.num_vars();
    limits.check_search("acyclicity search", n)?;
    let size = 1usize << n;
    let compiled = &actions.compiled;
    let mut on_stack = FixedBitSet::with_capacity(size);
    let mut done = FixedBitSet::with_capacity(size);
    // (state, next action to try, action that led here)
    let mut stack: Vec<(u64, usize, usize)> = Vec::new();
    let mut expanded = 0u64;

    for root in 0..size as u64 {
        if done.contains(root as usize) {
            continue;
        }
        stack.push((root, 0, usize::MAX));
        on_stack.insert(root as usize);
        expanded += 1;
        while let Some(&mut (s, ref mut pos, _)) = stack.last_mut() {
            let step = (*pos..compiled.len()).find_map(|i| {
                let t = compiled[i].apply(s);
                (t != s).then_some((i, t))
            });
            match step {
                Some((i, t)) => {
                    *pos = i + 1;
                    if on_stack.contains(t as usize) {
                        let at = stack.iter().rposition(|e| e.0 == t).unwrap();
                        let mut states: Vec<State> = stack[at..]
                            .iter()
                            .map(|e| Outcome::from_index(n, e.0))
                            .collect();
                        states.push(Outcome::from_index(n, t));
                        let mut plan: Vec<usize> = stack[at + 1..].iter().map(|e| e.2).collect();
                        plan.push(i);
                        return Ok(Search {
                            witness: Some(ActionCycle {
                                states,
                                plan: Plan(plan),
                            }),
                            expanded,
                        });
                    }
                    if !done.contains(t as usize) {
                        on_stack.insert(t as usize);
                        stack.push((t, 0, i));
                        expanded += 1;
                    }
                }
                None => {
                    on_stack.set(s as usize, false);
                    done.insert(s as usize);
                    stack.pop();
                }
            }
        }
    }
    Ok(Search {
        witness: None,
        expanded,
    })
}

/// No state has a non-empty irreducible plan back to itself.
pub fn is_acyclic(actions: &ActionSet, limits: &Limits) -> Result<bool> {
    Ok(find_action_cycle(actions, limits)?.witness.is_none())
}

/// `ACT ∪ {a}` with `pre(a) = γ`, `post(a) = α0`. For an acyclic `ACT` and
/// `α0 ≠ γ` the result has a cycle exactly when the instance has a plan.
pub fn with_closing_action(inst: &StripsInstance) -> Result<ActionSet> {
    let name = inst.action_set().fresh_action_name("close");
    let mut actions = inst.actions().to_vec();
    actions.push(Action::new(
        name,
        inst.goal().literals(),
        inst.initial().literals(),
    ));
    ActionSet::new(inst.vars().clone(), actions)
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
