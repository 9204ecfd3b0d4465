//! Improving flips and everything derived from them: dominance, consistency,
//! the explicit flip digraph, its condensation into dominance classes, and
//! the optimality notions defined over those classes.
//!
//! Outcomes are `u64` bit patterns internally (see [`Outcome`]). The implicit
//! searches ([`dominance_search`], [`find_cycle`]) keep one visited bit per
//! outcome and never build the graph; [`flip_digraph`] and
//! [`dominance_classes`] materialize it in compressed sparse row form.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::gcp::GcpNet;
use crate::limits::Limits;
use crate::logic::Outcome;

/// An improving flip sanctioned by rule `rule` of the net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flip {
    pub rule: usize,
    pub from: Outcome,
    pub to: Outcome,
}

fn check_outcome(net: &GcpNet, o: &Outcome) -> Result<()> {
    if o.len() != net.num_vars() {
        return Err(Error::model(format!(
            "outcome has {} variables, net has {}",
            o.len(),
            net.num_vars()
        )));
    }
    Ok(())
}

/// Calls `f(successor, rule)` for every rule that sanctions a flip out of
/// `bits`, in (variable, rule) order.
#[inline]
fn for_each_flip(net: &GcpNet, bits: u64, mut f: impl FnMut(u64, usize)) {
    let n = net.num_vars();
    for c in net.compiled() {
        let currently_true = bits & c.mask != 0;
        if currently_true != c.to_true && c.condition.holds(n, bits) {
            f(bits ^ c.mask, c.rule);
        }
    }
}

/// Finds the first applicable compiled rule at position `from` or later.
#[inline]
fn next_flip(net: &GcpNet, bits: u64, from: usize) -> Option<(usize, u64)> {
    let n = net.num_vars();
    let rules = net.compiled();
    (from..rules.len()).find_map(|i| {
        let c = &rules[i];
        let currently_true = bits & c.mask != 0;
        (currently_true != c.to_true && c.condition.holds(n, bits)).then_some((i, bits ^ c.mask))
    })
}

/// All improving flips out of `o`, one per sanctioning rule, ordered by
/// (variable index, rule index).
pub fn improving_flips(net: &GcpNet, o: &Outcome) -> Result<Vec<Flip>> {
    check_outcome(net, o)?;
    let mut out = Vec::new();
    let n = net.num_vars();
    for_each_flip(net, o.index(), |to, rule| {
        out.push(Flip {
            rule,
            from: *o,
            to: Outcome::from_index(n, to),
        })
    });
    Ok(out)
}

/// No improving flip applies to `o`. This is a polynomial check and equals
/// non-dominance of `o`.
pub fn is_non_dominated_local(net: &GcpNet, o: &Outcome) -> Result<bool> {
    check_outcome(net, o)?;
    Ok(next_flip(net, o.index(), 0).is_none())
}

/// Result of an exhaustive search together with the number of outcomes it
/// expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search<T> {
    pub witness: Option<T>,
    pub expanded: u64,
}

/// Breadth-first search for a shortest improving sequence of length at least
/// one from `alpha` to `beta`. The witness lists the outcomes of the sequence,
/// both endpoints included.
pub fn dominance_search(
    net: &GcpNet,
    alpha: &Outcome,
    beta: &Outcome,
    limits: &Limits,
) -> Result<Search<Vec<Outcome>>> {
    check_outcome(net, alpha)?;
    check_outcome(net, beta)?;
    let n = net.num_vars();
    limits.check_search("dominance search", n)?;

    let (start, goal) = (alpha.index(), beta.index());
    let mut visited = FixedBitSet::with_capacity(1usize << n);
    let mut parent: HashMap<u64, u64> = HashMap::new();
    let mut queue = VecDeque::new();
    visited.insert(start as usize);
    queue.push_back(start);
    let mut expanded = 0u64;
    let mut found: Option<u64> = None;

    'search: while let Some(cur) = queue.pop_front() {
        expanded += 1;
        let mut pos = 0;
        while let Some((i, next)) = next_flip(net, cur, pos) {
            pos = i + 1;
            if next == goal {
                found = Some(cur);
                break 'search;
            }
            if !visited.put(next as usize) {
                parent.insert(next, cur);
                queue.push_back(next);
            }
        }
    }

    let witness = found.map(|pred| {
        let mut path = vec![goal];
        let mut cur = pred;
        while cur != start {
            path.push(cur);
            cur = parent[&cur];
        }
        path.push(start);
        path.reverse();
        path.into_iter()
            .map(|b| Outcome::from_index(n, b))
            .collect()
    });
    Ok(Search { witness, expanded })
}

/// `alpha ≺ beta`: some improving sequence of length ≥ 1 leads from `alpha`
/// to `beta`, i.e. `beta` dominates `alpha`.
pub fn dominates(net: &GcpNet, alpha: &Outcome, beta: &Outcome, limits: &Limits) -> Result<bool> {
    Ok(dominance_search(net, alpha, beta, limits)?.witness.is_some())
}

/// `alpha ≺ alpha`.
pub fn self_dominates(net: &GcpNet, alpha: &Outcome, limits: &Limits) -> Result<bool> {
    dominates(net, alpha, alpha, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `beta ≺ alpha` and `alpha ⊀ beta`.
    AlphaStrictlyDominates,
    /// `alpha ≺ beta` and `beta ⊀ alpha`.
    BetaStrictlyDominates,
    /// `alpha = beta`, or each dominates the other.
    Equivalent,
    Incomparable,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::AlphaStrictlyDominates => "alpha-strictly-dominates",
            Relation::BetaStrictlyDominates => "beta-strictly-dominates",
            Relation::Equivalent => "equivalent",
            Relation::Incomparable => "incomparable",
        }
    }
}

pub fn relation(net: &GcpNet, alpha: &Outcome, beta: &Outcome, limits: &Limits) -> Result<Relation> {
    check_outcome(net, alpha)?;
    check_outcome(net, beta)?;
    if alpha == beta {
        return Ok(Relation::Equivalent);
    }
    let up = dominates(net, alpha, beta, limits)?;
    let down = dominates(net, beta, alpha, limits)?;
    Ok(match (up, down) {
        (true, true) => Relation::Equivalent,
        (true, false) => Relation::BetaStrictlyDominates,
        (false, true) => Relation::AlphaStrictlyDominates,
        (false, false) => Relation::Incomparable,
    })
}

/// Depth-first search for a directed cycle of improving flips, started from
/// every outcome in index order. The witness is `α0, …, αm` with `αm = α0`.
pub fn find_cycle(net: &GcpNet, limits: &Limits) -> Result<Search<Vec<Outcome>>> {
    let n = net.num_vars();
    limits.check_search("consistency search", n)?;
    let size = 1usize << n;
    let mut on_stack = FixedBitSet::with_capacity(size);
    let mut done = FixedBitSet::with_capacity(size);
    // (outcome, next compiled rule to try)
    let mut stack: Vec<(u64, usize)> = Vec::new();
    let mut expanded = 0u64;

    for root in 0..size as u64 {
        if done.contains(root as usize) {
            continue;
        }
        stack.push((root, 0));
        on_stack.insert(root as usize);
        expanded += 1;
        while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
            match next_flip(net, node, *pos) {
                Some((i, next)) => {
                    *pos = i + 1;
                    if on_stack.contains(next as usize) {
                        let at = stack.iter().rposition(|&(s, _)| s == next).unwrap();
                        let mut cycle: Vec<Outcome> = stack[at..]
                            .iter()
                            .map(|&(s, _)| Outcome::from_index(n, s))
                            .collect();
                        cycle.push(Outcome::from_index(n, next));
                        return Ok(Search {
                            witness: Some(cycle),
                            expanded,
                        });
                    }
                    if !done.contains(next as usize) {
                        on_stack.insert(next as usize);
                        stack.push((next, 0));
                        expanded += 1;
                    }
                }
                None => {
                    on_stack.set(node as usize, false);
                    done.insert(node as usize);
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

/// No outcome dominates itself.
pub fn is_consistent(net: &GcpNet, limits: &Limits) -> Result<bool> {
    Ok(find_cycle(net, limits)?.witness.is_none())
}

/// The improving-flip relation over all `2^n` outcomes, in compressed sparse
/// row form. Parallel flips (several rules sanctioning the same change) give
/// one edge.
#[derive(Debug, Clone)]
pub struct FlipDigraph {
    num_vars: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl FlipDigraph {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    /// Successor indices of node `v`, ascending.
    pub fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_nodes())
            .flat_map(move |v| self.successors(v).iter().map(move |&w| (v, w as usize)))
    }

    pub fn outcome(&self, v: usize) -> Outcome {
        Outcome::from_index(self.num_vars, v as u64)
    }
}

pub fn flip_digraph(net: &GcpNet, limits: &Limits) -> Result<FlipDigraph> {
    let n = net.num_vars();
    limits.check_materialize("flip digraph", n)?;
    let size = 1usize << n;
    let mut offsets = Vec::with_capacity(size + 1);
    let mut targets = Vec::new();
    let mut succ: Vec<u32> = Vec::with_capacity(n);
    offsets.push(0);
    for v in 0..size as u64 {
        succ.clear();
        for_each_flip(net, v, |to, _| succ.push(to as u32));
        succ.sort_unstable();
        succ.dedup();
        targets.extend_from_slice(&succ);
        offsets.push(targets.len());
    }
    Ok(FlipDigraph {
        num_vars: n,
        offsets,
        targets,
    })
}

/// Strongly connected components of a flip digraph: the dominance classes,
/// with the quotient DAG between them.
///
/// Classes are numbered in ascending order of their smallest member; members
/// of each class are listed in ascending index order.
#[derive(Debug, Clone)]
pub struct Condensation {
    num_vars: usize,
    class_of: Vec<u32>,
    members: Vec<Vec<u32>>,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
}

impl Condensation {
    pub fn from_digraph(g: &FlipDigraph) -> Self {
        let raw = tarjan(g);
        let k = raw.count;

        // renumber by smallest member
        let mut min_member = vec![u32::MAX; k];
        for (v, &c) in raw.comp.iter().enumerate() {
            let c = c as usize;
            if min_member[c] == u32::MAX {
                min_member[c] = v as u32;
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_unstable_by_key(|&c| min_member[c]);
        let mut rank = vec![0u32; k];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u32;
        }

        let class_of: Vec<u32> = raw.comp.iter().map(|&c| rank[c as usize]).collect();
        let mut members = vec![Vec::new(); k];
        for (v, &c) in class_of.iter().enumerate() {
            members[c as usize].push(v as u32);
        }
        let mut succ = vec![Vec::new(); k];
        for (v, w) in g.edges() {
            let (a, b) = (class_of[v], class_of[w]);
            if a != b {
                succ[a as usize].push(b);
            }
        }
        let mut pred = vec![Vec::new(); k];
        for (a, s) in succ.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            for &b in s.iter() {
                pred[b as usize].push(a as u32);
            }
        }
        Condensation {
            num_vars: g.num_vars(),
            class_of,
            members,
            succ,
            pred,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_classes(&self) -> usize {
        self.members.len()
    }

    pub fn class_of(&self, o: &Outcome) -> usize {
        self.class_of[o.index() as usize] as usize
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = Outcome> + '_ {
        let n = self.num_vars;
        self.members[class]
            .iter()
            .map(move |&v| Outcome::from_index(n, v as u64))
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.members[class].len()
    }

    /// Classes directly above `class` in the quotient DAG.
    pub fn successors(&self, class: usize) -> &[u32] {
        &self.succ[class]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b as usize)))
    }

    /// Every class is a singleton. Since flips change a variable there are no
    /// self-loops, so this is exactly consistency.
    pub fn is_consistent(&self) -> bool {
        self.members.len() == self.class_of.len()
    }

    /// All classes strictly above `class` (reachable through the quotient DAG).
    pub fn above(&self, class: usize) -> FixedBitSet {
        reach(&self.succ, class)
    }

    /// All classes strictly below `class`.
    pub fn below(&self, class: usize) -> FixedBitSet {
        reach(&self.pred, class)
    }

    /// `[a] ≺dc [b]`.
    pub fn class_precedes(&self, a: usize, b: usize) -> bool {
        a != b && self.above(a).contains(b)
    }

    /// `alpha ≺ beta`, answered from the class structure.
    pub fn dominates(&self, alpha: &Outcome, beta: &Outcome) -> bool {
        let (a, b) = (self.class_of(alpha), self.class_of(beta));
        if a == b {
            self.class_size(a) > 1
        } else {
            self.class_precedes(a, b)
        }
    }

    /// Maximal in the class order: nothing above.
    pub fn is_maximal(&self, class: usize) -> bool {
        self.succ[class].is_empty()
    }

    pub fn maximal_classes(&self) -> Vec<usize> {
        (0..self.num_classes())
            .filter(|&c| self.is_maximal(c))
            .collect()
    }

    /// The class every other class lies below, if there is one.
    pub fn dominating_class(&self) -> Option<usize> {
        // a dominating class has nothing above it; with two maximal classes
        // neither lies below the other
        let maximal = self.maximal_classes();
        match maximal.as_slice() {
            [c] => (self.below(*c).count_ones(..) + 1 == self.num_classes()).then_some(*c),
            _ => None,
        }
    }

    pub fn classify(&self, o: &Outcome) -> OptimalityFlags {
        let c = self.class_of(o);
        let weakly_non_dominated = self.is_maximal(c);
        let non_dominated = weakly_non_dominated && self.class_size(c) == 1;
        let dominating = self.dominating_class() == Some(c);
        OptimalityFlags {
            weakly_non_dominated,
            non_dominated,
            dominating,
            strongly_dominating: dominating && non_dominated,
        }
    }
}

fn reach(adj: &[Vec<u32>], from: usize) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(adj.len());
    let mut stack: Vec<u32> = adj[from].clone();
    while let Some(c) = stack.pop() {
        if !seen.put(c as usize) {
            stack.extend_from_slice(&adj[c as usize]);
        }
    }
    seen
}

struct RawComponents {
    comp: Vec<u32>,
    count: usize,
}

/// Iterative Tarjan: one pass, explicit call stack.
fn tarjan(g: &FlipDigraph) -> RawComponents {
    const UNSEEN: u32 = u32::MAX;
    let size = g.num_nodes();
    let mut index = vec![UNSEEN; size];
    let mut low = vec![0u32; size];
    let mut comp = vec![UNSEEN; size];
    let mut on_stack = FixedBitSet::with_capacity(size);
    let mut scc_stack: Vec<u32> = Vec::new();
    // (node, position in its successor list)
    let mut call: Vec<(u32, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut count = 0u32;

    for root in 0..size {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        scc_stack.push(root as u32);
        on_stack.insert(root);
        call.push((root as u32, 0));

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let vi = v as usize;
            let succ = g.successors(vi);
            if *pos < succ.len() {
                let w = succ[*pos] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    scc_stack.push(w as u32);
                    on_stack.insert(w);
                    call.push((w as u32, 0));
                } else if on_stack.contains(w) {
                    low[vi] = low[vi].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                let p = parent as usize;
                low[p] = low[p].min(low[vi]);
            }
            if low[vi] == index[vi] {
                loop {
                    let w = scc_stack.pop().unwrap() as usize;
                    on_stack.set(w, false);
                    comp[w] = count;
                    if w == vi {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    RawComponents {
        comp,
        count: count as usize,
    }
}

/// Materializes the flip digraph and condenses it into dominance classes.
pub fn dominance_classes(net: &GcpNet, limits: &Limits) -> Result<Condensation> {
    Ok(Condensation::from_digraph(&flip_digraph(net, limits)?))
}

/// The four optimality notions for one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct OptimalityFlags {
    /// Its class is maximal.
    pub weakly_non_dominated: bool,
    /// Its class is maximal and contains only it.
    pub non_dominated: bool,
    /// Every other class lies below its class.
    pub dominating: bool,
    pub strongly_dominating: bool,
}

pub fn classify_outcome(net: &GcpNet, o: &Outcome, limits: &Limits) -> Result<OptimalityFlags> {
    check_outcome(net, o)?;
    Ok(dominance_classes(net, limits)?.classify(o))
}

/// Optimal outcomes of a net, each set in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optima {
    pub weakly_non_dominated: Vec<Outcome>,
    pub non_dominated: Vec<Outcome>,
    pub dominating: Vec<Outcome>,
    pub strongly_dominating: Vec<Outcome>,
    pub num_classes: usize,
    pub consistent: bool,
}

impl Optima {
    pub fn has_non_dominated(&self) -> bool {
        !self.non_dominated.is_empty()
    }

    pub fn has_dominating(&self) -> bool {
        !self.dominating.is_empty()
    }

    pub fn has_strongly_dominating(&self) -> bool {
        !self.strongly_dominating.is_empty()
    }
}

pub fn find_optima(net: &GcpNet, limits: &Limits) -> Result<Optima> {
    let cond = dominance_classes(net, limits)?;
    Ok(optima_from(&cond))
}

pub fn optima_from(cond: &Condensation) -> Optima {
    let mut weakly = Vec::new();
    let mut non_dom = Vec::new();
    for c in cond.maximal_classes() {
        weakly.extend(cond.members(c));
        if cond.class_size(c) == 1 {
            non_dom.extend(cond.members(c));
        }
    }
    weakly.sort();
    non_dom.sort();
    let dominating: Vec<Outcome> = cond
        .dominating_class()
        .map(|c| cond.members(c).collect())
        .unwrap_or_default();
    let strongly: Vec<Outcome> = if dominating.len() == 1 {
        dominating.clone()
    } else {
        Vec::new()
    };
    let consistent = cond.is_consistent();
    if consistent {
        // singleton classes collapse the four notions into two
        debug_assert_eq!(weakly, non_dom);
        debug_assert_eq!(dominating, strongly);
    }
    Optima {
        weakly_non_dominated: weakly,
        non_dominated: non_dom,
        dominating,
        strongly_dominating: strongly,
        num_classes: cond.num_classes(),
        consistent,
    }
}

/// Outcomes with no applicable improving flip, by enumeration with the local
/// check only. Available up to the search cap rather than the
/// materialization cap.
pub fn non_dominated_outcomes(net: &GcpNet, limits: &Limits) -> Result<Vec<Outcome>> {
    let n = net.num_vars();
    limits.check_search("non-dominated enumeration", n)?;
    Ok((0..1u64 << n)
        .filter(|&b| next_flip(net, b, 0).is_none())
        .map(|b| Outcome::from_index(n, b))
        .collect())
}

/// For a net already known to be consistent: a dominating outcome exists iff
/// exactly one outcome is non-dominated. Uses only the local check; the
/// answer is meaningless for inconsistent nets.
pub fn dominating_exists_given_consistent(net: &GcpNet, limits: &Limits) -> Result<bool> {
    Ok(non_dominated_outcomes(net, limits)?.len() == 1)
}

/// For a net already known to be consistent: `alpha` is dominating iff no
/// other outcome is non-dominated.
pub fn is_dominating_given_consistent(
    net: &GcpNet,
    alpha: &Outcome,
    limits: &Limits,
) -> Result<bool> {
    check_outcome(net, alpha)?;
    Ok(non_dominated_outcomes(net, limits)?
        .iter()
        .all(|o| o == alpha))
}
