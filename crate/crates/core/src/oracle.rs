//! Explicit state-space exploration.
//!
//! From a root state the reachable set is closed under single firings and
//! condensed into strongly connected components. A state is recurrent iff
//! its component is terminal, which is the finite-state reading of "every
//! state it reaches can reach it back".

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domination;
use crate::graph::{self, ReactionGraph};
use crate::model::{Complex, ModelError, ReactionNetwork, State};
use crate::scc;

pub const DEFAULT_BUDGET: u64 = 6;
pub const DEFAULT_STATE_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("state count exceeded {cap} exploring from {root}")]
    CapExceeded { cap: usize, root: State },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("complex index {0} out of range")]
    BadComplex(usize),
}

/// Reachable states from a root with their firing edges.
#[derive(Debug, Clone)]
pub struct StateGraph {
    states: Vec<State>,
    index: HashMap<State, usize>,
    succ: Vec<Vec<(usize, usize)>>,
    parent: Vec<Option<(usize, usize)>>,
    comp: Vec<usize>,
    terminal: Vec<bool>,
}

/// Breadth-first closure of `root` under firing. Fails once more than
/// `hard_cap` states are stored.
pub fn explore(net: &ReactionNetwork, root: &State, hard_cap: usize) -> Result<StateGraph, OracleError> {
    if root.counts().len() != net.species_count() {
        return Err(ModelError::LengthMismatch {
            expected: net.species_count(),
            found: root.counts().len(),
        }
        .into());
    }
    let mut states = vec![root.clone()];
    let mut index = HashMap::new();
    index.insert(root.clone(), 0usize);
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut parent = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for r in net.reactions() {
            let Some(next) = net.fire_unchecked(&states[i], r) else {
                continue;
            };
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if states.len() >= hard_cap {
                        return Err(OracleError::CapExceeded {
                            cap: hard_cap,
                            root: root.clone(),
                        });
                    }
                    let j = states.len();
                    index.insert(next.clone(), j);
                    states.push(next);
                    succ.push(Vec::new());
                    parent.push(Some((i, r.index)));
                    queue.push_back(j);
                    j
                }
            };
            succ[i].push((r.index, j));
        }
    }
    let adj: Vec<Vec<usize>> = succ.iter().map(|s| s.iter().map(|&(_, j)| j).collect()).collect();
    let (comp, ncomp) = scc::tarjan(&adj);
    let terminal = scc::terminal_components(&adj, &comp, ncomp);
    Ok(StateGraph {
        states,
        index,
        succ,
        parent,
        comp,
        terminal,
    })
}

impl StateGraph {
    pub fn root(&self) -> &State {
        &self.states[0]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, x: &State) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// `(reaction, target state)` pairs leaving state `i`.
    pub fn successors(&self, i: usize) -> &[(usize, usize)] {
        &self.succ[i]
    }

    /// `(from, reaction, to)` triples.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&(k, j)| (i, k, j)))
    }

    pub fn component(&self, i: usize) -> usize {
        self.comp[i]
    }

    pub fn is_recurrent(&self, i: usize) -> bool {
        self.terminal[self.comp[i]]
    }

    /// Firing sequence from the root to state `i` along the BFS tree.
    pub fn trace_to(&self, i: usize) -> Trace {
        let mut reactions = Vec::new();
        let mut at = i;
        while let Some((p, k)) = self.parent[at] {
            reactions.push(k);
            at = p;
        }
        reactions.reverse();
        Trace {
            start: self.root().clone(),
            reactions,
        }
    }
}

/// Recurrence label per state.
pub fn recurrent_states(g: &StateGraph) -> Vec<bool> {
    (0..g.len()).map(|i| g.is_recurrent(i)).collect()
}

/// A firing sequence from a start state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub start: State,
    pub reactions: Vec<usize>,
}

impl Trace {
    /// Per-reaction firing counts `N`.
    pub fn counts(&self, reaction_count: usize) -> Vec<u64> {
        let mut n = vec![0u64; reaction_count];
        for &k in &self.reactions {
            n[k] += 1;
        }
        n
    }

    /// Fires the sequence step by step; `Ok(None)` if some step is not charged.
    pub fn replay(&self, net: &ReactionNetwork) -> Result<Option<State>, ModelError> {
        let mut x = self.start.clone();
        for &k in &self.reactions {
            match net.fire(&x, k)? {
                Some(next) => x = next,
                None => return Ok(None),
            }
        }
        Ok(Some(x))
    }

    /// `start + Γ N`, computed without firing.
    pub fn end_by_counts(&self, net: &ReactionNetwork) -> Vec<i128> {
        let n: Vec<i128> = self
            .counts(net.reaction_count())
            .into_iter()
            .map(i128::from)
            .collect();
        let delta = net.stoich_matrix().apply(&n);
        self.start
            .counts()
            .iter()
            .zip(delta)
            .map(|(&x, d)| x as i128 + d)
            .collect()
    }
}

fn charges(y: &Complex, x: &State) -> bool {
    y.coeffs().iter().zip(x.counts()).all(|(a, b)| a <= b)
}

/// Some terminal component contains no state charging `y`.
fn missing_component(g: &StateGraph, y: &Complex) -> Option<usize> {
    let ncomp = g.terminal.len();
    let mut hit = vec![false; ncomp];
    for (i, x) in g.states.iter().enumerate() {
        if g.is_recurrent(i) && charges(y, x) {
            hit[g.comp[i]] = true;
        }
    }
    (0..ncomp).find(|&c| g.terminal[c] && !hit[c])
}

/// `y` is recurrent from the root: every reachable state can reach a state
/// charging `y`. Equivalently every terminal component holds such a state.
pub fn complex_recurrent(g: &StateGraph, y: &Complex) -> bool {
    missing_component(g, y).is_none()
}

/// Recurrence label per complex of `net`.
pub fn recurrent_complexes(net: &ReactionNetwork, g: &StateGraph) -> Vec<bool> {
    net.complexes().iter().map(|y| complex_recurrent(g, y)).collect()
}

/// A recurrent state charging `y`, if `y` is charged anywhere recurrent.
pub fn recurrent_witness(g: &StateGraph, y: &Complex) -> Option<usize> {
    (0..g.len()).find(|&i| g.is_recurrent(i) && charges(y, &g.states[i]))
}

/// Every complex in `yc` is transient from the root.
pub fn extinction_on(net: &ReactionNetwork, g: &StateGraph, yc: &[usize]) -> Result<bool, OracleError> {
    for &c in yc {
        if c >= net.complex_count() {
            return Err(OracleError::BadComplex(c));
        }
        if complex_recurrent(g, net.complex(c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All states over `m` species with total at most `budget`, ordered by
/// total, then lexicographically descending in the first coordinates.
pub fn states_with_total_at_most(m: usize, budget: u64) -> Vec<State> {
    fn rec(m: usize, left: u64, prefix: &mut Vec<u64>, out: &mut Vec<State>) {
        if prefix.len() + 1 == m {
            prefix.push(left);
            out.push(State::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for v in (0..=left).rev() {
            prefix.push(v);
            rec(m, left - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        out.push(State::new(vec![]));
        return out;
    }
    for total in 0..=budget {
        rec(m, total, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub root: State,
    pub complex: usize,
    /// A recurrent state reachable from `root` that charges `complex`.
    pub witness: State,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtinctionSweep {
    pub holds: bool,
    pub roots_checked: usize,
    pub max_states: usize,
    pub counterexample: Option<Counterexample>,
}

/// Checks [`extinction_on`] from each root; the reported counterexample is
/// the first failing root in the given order.
pub fn extinction_over_roots(
    net: &ReactionNetwork,
    yc: &[usize],
    roots: &[State],
    hard_cap: usize,
) -> Result<ExtinctionSweep, OracleError> {
    if let Some(&c) = yc.iter().find(|&&c| c >= net.complex_count()) {
        return Err(OracleError::BadComplex(c));
    }
    let results: Vec<Result<(usize, Option<Counterexample>), OracleError>> = roots
        .par_iter()
        .map(|root| {
            let g = explore(net, root, hard_cap)?;
            for &c in yc {
                let y = net.complex(c);
                if complex_recurrent(&g, y) {
                    let w = recurrent_witness(&g, y).expect("recurrent complex is charged somewhere recurrent");
                    return Ok((
                        g.len(),
                        Some(Counterexample {
                            root: root.clone(),
                            complex: c,
                            witness: g.states[w].clone(),
                            trace: g.trace_to(w),
                        }),
                    ));
                }
            }
            Ok((g.len(), None))
        })
        .collect();
    let mut sweep = ExtinctionSweep {
        holds: true,
        roots_checked: 0,
        max_states: 0,
        counterexample: None,
    };
    for r in results {
        let (n, cex) = r?;
        sweep.roots_checked += 1;
        sweep.max_states = sweep.max_states.max(n);
        if sweep.counterexample.is_none() {
            if let Some(c) = cex {
                sweep.holds = false;
                sweep.counterexample = Some(c);
            }
        }
    }
    Ok(sweep)
}

/// Extinction on `yc` from every state with total at most `budget`. This is
/// a bounded check, not the statement for all initial states.
pub fn guaranteed_extinction_on(
    net: &ReactionNetwork,
    yc: &[usize],
    budget: u64,
    hard_cap: usize,
) -> Result<ExtinctionSweep, OracleError> {
    let roots = states_with_total_at_most(net.species_count(), budget);
    extinction_over_roots(net, yc, &roots, hard_cap)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecurrenceViolation {
    #[error("strong linkage class containing complex {0} mixes recurrent and transient complexes")]
    MixedClass(usize),
    #[error("complex {from} is recurrent but {to}, reachable from it with domination, is transient")]
    RecurrenceNotPropagated { from: usize, to: usize },
    #[error("complex {to} is transient but {from}, which reaches it with domination, is recurrent")]
    TransienceNotPropagated { from: usize, to: usize },
    #[error("an edge from recurrent complex {from} leads to transient complex {to}")]
    NotClosed { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlcReport {
    pub complex_recurrent: Vec<bool>,
    pub classes: Vec<Vec<usize>>,
    pub class_recurrent: Vec<bool>,
    pub recurrent_set: BTreeSet<usize>,
}

/// Labels strong linkage classes and checks how labels spread: uniform
/// within a class, downhill along paths of the network with every domination
/// pair added, and closed under those edges.
pub fn slc_recurrence_report(net: &ReactionNetwork, g: &StateGraph) -> Result<SlcReport, RecurrenceViolation> {
    let labels = recurrent_complexes(net, g);
    let base = ReactionGraph::of_network(net);
    let slcs = graph::strong_linkage_classes(&base);
    let classes = slcs.blocks().to_vec();
    let mut class_recurrent = Vec::with_capacity(classes.len());
    for block in &classes {
        let first = labels[block[0]];
        if block.iter().any(|&c| labels[c] != first) {
            return Err(RecurrenceViolation::MixedClass(block[0]));
        }
        class_recurrent.push(first);
    }

    let full = ReactionGraph::with_domination(net, &domination::domination_set(net));
    let n = net.complex_count();
    let reach: Vec<Vec<bool>> = (0..n).map(|y| full.reachable_from(y)).collect();
    for y in 0..n {
        for z in (0..n).filter(|&z| reach[y][z]) {
            if labels[y] && !labels[z] {
                return Err(RecurrenceViolation::RecurrenceNotPropagated { from: y, to: z });
            }
        }
    }
    for z in (0..n).filter(|&z| !labels[z]) {
        if let Some(y) = (0..n).find(|&y| reach[y][z] && labels[y]) {
            return Err(RecurrenceViolation::TransienceNotPropagated { from: y, to: z });
        }
    }
    let recurrent_set: BTreeSet<usize> = (0..n).filter(|&c| labels[c]).collect();
    if let Some(e) = full
        .edges()
        .iter()
        .find(|e| recurrent_set.contains(&e.source) && !recurrent_set.contains(&e.target))
    {
        return Err(RecurrenceViolation::NotClosed {
            from: e.source,
            to: e.target,
        });
    }
    Ok(SlcReport {
        complex_recurrent: labels,
        classes,
        class_recurrent,
        recurrent_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dimer() -> ReactionNetwork {
        ReactionNetwork::new(
            &["X1", "X2"],
            &[
                (vec![2, 0], vec![1, 1]),
                (vec![1, 1], vec![2, 0]),
                (vec![1, 1], vec![0, 2]),
            ],
        )
        .unwrap()
    }

    fn leaky_pair() -> ReactionNetwork {
        ReactionNetwork::new(
            &["X1", "X2"],
            &[
                (vec![1, 1], vec![1, 0]),
                (vec![1, 0], vec![0, 1]),
                (vec![0, 1], vec![1, 0]),
            ],
        )
        .unwrap()
    }

    fn set(g: &StateGraph) -> BTreeSet<Vec<u64>> {
        g.states().iter().map(|s| s.counts().to_vec()).collect()
    }

    #[test]
    fn dimer_from_two_x1() {
        let g = explore(&dimer(), &State::new(vec![2, 0]), 100).unwrap();
        assert_eq!(set(&g), BTreeSet::from([vec![2, 0], vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn dimer_labels_from_one_one() {
        let g = explore(&dimer(), &State::new(vec![1, 1]), 100).unwrap();
        for (i, s) in g.states().iter().enumerate() {
            assert_eq!(g.is_recurrent(i), s.counts() == [0, 2], "{s}");
        }
        // 2X1 and X1+X2 transient
        assert!(extinction_on(&dimer(), &g, &[0, 1]).unwrap());
    }

    #[test]
    fn zero_state_is_isolated() {
        let g = explore(&dimer(), &State::zero(2), 100).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.is_recurrent(0));
        assert!(complex_recurrent(&g, &Complex::zero(2)));
    }

    #[test]
    fn cap_is_enforced() {
        // X1 -> 2 X1 grows without bound
        let net = ReactionNetwork::new(&["X1"], &[(vec![1], vec![2])]).unwrap();
        assert!(matches!(
            explore(&net, &State::new(vec![1]), 50),
            Err(OracleError::CapExceeded { cap: 50, .. })
        ));
    }

    #[test]
    fn leaky_pair_complex_labels() {
        let net = leaky_pair();
        let g = explore(&net, &State::new(vec![1, 1]), 100).unwrap();
        let labels = recurrent_complexes(&net, &g);
        // complexes: X1+X2, X1, X2
        assert_eq!(labels, vec![false, true, true]);
        let report = slc_recurrence_report(&net, &g).unwrap();
        assert_eq!(report.classes, vec![vec![0], vec![1, 2]]);
        assert_eq!(report.class_recurrent, vec![false, true]);
        for (i, s) in g.states().iter().enumerate() {
            if g.is_recurrent(i) {
                assert!(s.counts()[0] == 0 || s.counts()[1] == 0);
                assert_eq!(s.total(), 1);
            }
        }
    }

    #[test]
    fn traces_replay() {
        let net = dimer();
        let g = explore(&net, &State::new(vec![3, 1]), 100).unwrap();
        for i in 0..g.len() {
            let t = g.trace_to(i);
            let end = t.replay(&net).unwrap().unwrap();
            assert_eq!(&end, &g.states()[i]);
            let by_counts: Vec<i128> = end.counts().iter().map(|&x| x as i128).collect();
            assert_eq!(t.end_by_counts(&net), by_counts);
        }
    }

    #[test]
    fn root_enumeration_counts() {
        // C(b + m, m)
        assert_eq!(states_with_total_at_most(2, 3).len(), 10);
        assert_eq!(states_with_total_at_most(3, 2).len(), 10);
        assert_eq!(states_with_total_at_most(0, 5).len(), 1);
        let roots = states_with_total_at_most(3, 4);
        let uniq: BTreeSet<_> = roots.iter().collect();
        assert_eq!(uniq.len(), roots.len());
    }

    #[test]
    fn sweep_reports_first_counterexample() {
        let net = leaky_pair();
        // X1 is recurrent as soon as any molecule is present
        let sweep = guaranteed_extinction_on(&net, &[1], 3, 1000).unwrap();
        assert!(!sweep.holds);
        let cex = sweep.counterexample.unwrap();
        assert_eq!(cex.root.total(), 1);
        assert!(guaranteed_extinction_on(&net, &[0], 3, 1000).unwrap().holds);
    }
}
