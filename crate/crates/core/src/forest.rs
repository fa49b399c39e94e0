//! Exterior forests of a dom-CRN and their balancing systems.
//!
//! A forest picks one outgoing edge (reaction or domination edge, never a
//! self-loop) for every complex outside `Y` so that following the picks from
//! any exterior complex reaches `Y`. Every reaction with its source in `Y`
//! belongs to every forest.
//!
//! Variables of a balancing system are `α = (α_R, α_D)`: reaction `k` is
//! variable `k`, domination edge `j` is variable `r + j`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domination::{DomCrn, DominationEdge};
use crate::model::ReactionNetwork;
use crate::graph::EdgeLabel;
use crate::lp::{self, q, CertificateError, FarkasCertificate, Feasibility, LinearSystem, LpError, PointViolation, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForestError {
    #[error("forest cap must be at least 1")]
    ZeroCap,
    #[error("exterior complex {0} has no chosen edge")]
    MissingChoice(usize),
    #[error("complex {0} has more than one chosen edge or lies in the absorbing set")]
    BadChoice(usize),
    #[error("edge {0:?} does not exist or does not leave its complex")]
    BadEdge(EdgeLabel),
    #[error("following the chosen edges from complex {0} never reaches the absorbing set")]
    NoPath(usize),
    #[error("interior reactions do not match the absorbing set")]
    Interior,
}

/// One outgoing edge per exterior complex plus all interior reactions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExteriorForest {
    choice: Vec<(usize, EdgeLabel)>,
    interior: Vec<usize>,
}

/// Source and target complex of an edge of the expanded graph.
pub fn endpoints(dcrn: &DomCrn<'_>, label: EdgeLabel) -> Option<(usize, usize)> {
    endpoints_in(dcrn.net(), dcrn.dom_edges(), label)
}

pub fn endpoints_in(net: &ReactionNetwork, dom: &[DominationEdge], label: EdgeLabel) -> Option<(usize, usize)> {
    match label {
        EdgeLabel::Reaction(k) => net.reactions().get(k).map(|r| (r.source, r.target)),
        EdgeLabel::Domination(j) => dom.get(j).map(|e| (e.from, e.to)),
    }
}

fn interior_reactions(dcrn: &DomCrn<'_>) -> Vec<usize> {
    dcrn.net()
        .reactions()
        .iter()
        .filter(|r| dcrn.is_interior(r.source))
        .map(|r| r.index)
        .collect()
}

impl ExteriorForest {
    /// Builds and validates a forest from `(complex, edge)` picks.
    pub fn new(dcrn: &DomCrn<'_>, mut choice: Vec<(usize, EdgeLabel)>) -> Result<Self, ForestError> {
        choice.sort();
        let forest = ExteriorForest {
            choice,
            interior: interior_reactions(dcrn),
        };
        forest.validate(dcrn)?;
        Ok(forest)
    }

    /// `(exterior complex, chosen edge)`, ascending by complex.
    pub fn choice(&self) -> &[(usize, EdgeLabel)] {
        &self.choice
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// All edges: chosen reactions and interior reactions by index, then
    /// chosen domination edges by index.
    pub fn edges(&self) -> Vec<EdgeLabel> {
        let mut out: Vec<EdgeLabel> = self
            .choice
            .iter()
            .map(|&(_, l)| l)
            .chain(self.interior.iter().map(|&k| EdgeLabel::Reaction(k)))
            .collect();
        out.sort();
        out
    }

    pub fn contains(&self, label: EdgeLabel) -> bool {
        self.choice.iter().any(|&(_, l)| l == label)
            || matches!(label, EdgeLabel::Reaction(k) if self.interior.contains(&k))
    }

    pub fn chosen(&self, complex: usize) -> Option<EdgeLabel> {
        self.choice
            .binary_search_by_key(&complex, |&(c, _)| c)
            .ok()
            .map(|i| self.choice[i].1)
    }

    /// Checks the per-complex picks and walks from every exterior complex to
    /// the absorbing set.
    pub fn validate(&self, dcrn: &DomCrn<'_>) -> Result<(), ForestError> {
        let exterior = dcrn.exterior();
        let picked: Vec<usize> = self.choice.iter().map(|&(c, _)| c).collect();
        for w in picked.windows(2) {
            if w[0] == w[1] {
                return Err(ForestError::BadChoice(w[0]));
            }
        }
        if let Some(&c) = picked.iter().find(|c| dcrn.is_interior(**c)) {
            return Err(ForestError::BadChoice(c));
        }
        if let Some(&c) = exterior.iter().find(|c| !picked.contains(c)) {
            return Err(ForestError::MissingChoice(c));
        }
        for &(c, l) in &self.choice {
            match endpoints(dcrn, l) {
                Some((s, t)) if s == c && t != c => {}
                _ => return Err(ForestError::BadEdge(l)),
            }
        }
        if self.interior != interior_reactions(dcrn) {
            return Err(ForestError::Interior);
        }
        for &start in &exterior {
            let mut at = start;
            let mut steps = 0;
            while !dcrn.is_interior(at) {
                let l = self.chosen(at).ok_or(ForestError::MissingChoice(at))?;
                at = endpoints(dcrn, l).expect("validated above").1;
                steps += 1;
                if steps > exterior.len() {
                    return Err(ForestError::NoPath(start));
                }
            }
        }
        Ok(())
    }
}

/// Candidate picks per exterior complex: domination edges by index, then
/// reactions by index. Self-loops are never candidates.
pub fn outgoing_choices(dcrn: &DomCrn<'_>) -> Vec<(usize, Vec<EdgeLabel>)> {
    let mut out: Vec<(usize, Vec<EdgeLabel>)> =
        dcrn.exterior().into_iter().map(|c| (c, Vec::new())).collect();
    let slot = |c: usize| out.binary_search_by_key(&c, |(x, _)| *x).ok();
    let mut picks: Vec<(usize, EdgeLabel)> = Vec::new();
    for (j, e) in dcrn.dom_edges().iter().enumerate() {
        picks.push((e.from, EdgeLabel::Domination(j)));
    }
    for r in dcrn.net().reactions() {
        if !r.is_self_loop() {
            picks.push((r.source, EdgeLabel::Reaction(r.index)));
        }
    }
    let targets: Vec<Option<usize>> = picks.iter().map(|&(c, _)| slot(c)).collect();
    for ((_, l), t) in picks.into_iter().zip(targets) {
        if let Some(i) = t {
            out[i].1.push(l);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ForestWalk {
    pub visited: usize,
    pub truncated: bool,
    pub stopped: bool,
}

/// Calls `f` on each forest in canonical order until `cap` forests have been
/// produced or `f` breaks.
pub fn for_each_forest<F>(dcrn: &DomCrn<'_>, cap: usize, mut f: F) -> Result<ForestWalk, ForestError>
where
    F: FnMut(&ExteriorForest) -> ControlFlow<()>,
{
    if cap == 0 {
        return Err(ForestError::ZeroCap);
    }
    let choices = outgoing_choices(dcrn);
    let n = dcrn.net().complex_count();
    let mut target_of = vec![None::<usize>; n];
    let interior = interior_reactions(dcrn);
    let mut walk = ForestWalk::default();
    let mut picks = vec![0usize; choices.len()];
    let mut depth = 0usize;

    // picks[depth] is the next option to try at that depth
    loop {
        if depth == choices.len() {
            let choice = choices
                .iter()
                .zip(&picks)
                .map(|((c, opts), &p)| (*c, opts[p - 1]))
                .collect();
            if walk.visited == cap {
                walk.truncated = true;
                return Ok(walk);
            }
            let forest = ExteriorForest {
                choice,
                interior: interior.clone(),
            };
            walk.visited += 1;
            if f(&forest).is_break() {
                walk.stopped = true;
                return Ok(walk);
            }
            if depth == 0 {
                return Ok(walk);
            }
            depth -= 1;
            target_of[choices[depth].0] = None;
            continue;
        }
        let (c, opts) = &choices[depth];
        let mut advanced = false;
        while picks[depth] < opts.len() {
            let l = opts[picks[depth]];
            picks[depth] += 1;
            let t = endpoints(dcrn, l).expect("listed edge").1;
            if closes_cycle(*c, t, &target_of, dcrn) {
                continue;
            }
            target_of[*c] = Some(t);
            advanced = true;
            break;
        }
        if advanced {
            depth += 1;
            if depth < choices.len() {
                picks[depth] = 0;
            }
            continue;
        }
        if depth == 0 {
            return Ok(walk);
        }
        depth -= 1;
        target_of[choices[depth].0] = None;
    }
}

fn closes_cycle(c: usize, mut t: usize, target_of: &[Option<usize>], dcrn: &DomCrn<'_>) -> bool {
    loop {
        if t == c {
            return true;
        }
        if dcrn.is_interior(t) {
            return false;
        }
        match target_of[t] {
            Some(next) => t = next,
            None => return false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestList {
    pub forests: Vec<ExteriorForest>,
    pub truncated: bool,
}

pub fn enumerate_forests(dcrn: &DomCrn<'_>, cap: usize) -> Result<ForestList, ForestError> {
    let mut forests = Vec::new();
    let walk = for_each_forest(dcrn, cap, |f| {
        forests.push(f.clone());
        ControlFlow::Continue(())
    })?;
    Ok(ForestList {
        forests,
        truncated: walk.truncated,
    })
}

/// Which forest edges may carry the required positive entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nontriviality {
    /// Exterior true reactions only.
    #[default]
    TrueReactions,
    /// Exterior reactions and domination edges.
    Any,
}

/// Meaning of a row of a balancing system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "row", rename_all = "snake_case")]
pub enum BalanceRow {
    /// `α_e = 0` for an edge outside the forest.
    Support { edge: EdgeLabel },
    /// Species row of `Γ α_R = 0`.
    Kernel { species: usize },
    /// `α_e - Σ_{Θ(y)} α_l >= 0` for a forest edge leaving exterior complex `y`.
    Flow { edge: EdgeLabel },
    /// `α_e >= 0`.
    Nonnegative { edge: EdgeLabel },
    /// `α_e >= 1` for the candidate being tested.
    Positive { edge: EdgeLabel },
}

#[derive(Debug, Clone)]
pub struct BalancingSystem {
    reactions: usize,
    dom: usize,
    system: LinearSystem,
    eq_rows: Vec<BalanceRow>,
    ineq_rows: Vec<BalanceRow>,
    candidates: Vec<EdgeLabel>,
}

fn var(reactions: usize, l: EdgeLabel) -> usize {
    match l {
        EdgeLabel::Reaction(k) => k,
        EdgeLabel::Domination(j) => reactions + j,
    }
}

fn label(reactions: usize, v: usize) -> EdgeLabel {
    if v < reactions {
        EdgeLabel::Reaction(v)
    } else {
        EdgeLabel::Domination(v - reactions)
    }
}

impl BalancingSystem {
    pub fn build(dcrn: &DomCrn<'_>, forest: &ExteriorForest, reading: Nontriviality) -> Self {
        let net = dcrn.net();
        let r = net.reaction_count();
        let d = dcrn.dom_edges().len();
        let nv = r + d;
        let in_forest: BTreeSet<usize> = forest.edges().into_iter().map(|l| var(r, l)).collect();
        let mut system = LinearSystem::new(nv);
        let mut eq_rows = Vec::new();
        let mut ineq_rows = Vec::new();
        let unit = |v: usize| {
            let mut row = vec![Q::zero(); nv];
            row[v] = Q::one();
            row
        };

        for v in (0..nv).filter(|v| !in_forest.contains(v)) {
            system.add_equality(unit(v), q(0)).expect("width");
            eq_rows.push(BalanceRow::Support { edge: label(r, v) });
        }
        let gamma = net.stoich_matrix();
        for i in 0..gamma.rows() {
            let mut row = vec![Q::zero(); nv];
            for (k, &g) in gamma.row(i).iter().enumerate() {
                row[k] = q(g);
            }
            system.add_equality(row, q(0)).expect("width");
            eq_rows.push(BalanceRow::Kernel { species: i });
        }
        // Θ(y): forest edges whose target is y
        let edges = forest.edges();
        for &(y, e) in forest.choice() {
            let mut row = unit(var(r, e));
            for &l in &edges {
                let (_, t) = endpoints(dcrn, l).expect("forest edge");
                if t == y {
                    row[var(r, l)] -= Q::one();
                }
            }
            system.add_inequality(row, q(0)).expect("width");
            ineq_rows.push(BalanceRow::Flow { edge: e });
        }
        for v in 0..nv {
            system.add_inequality(unit(v), q(0)).expect("width");
            ineq_rows.push(BalanceRow::Nonnegative { edge: label(r, v) });
        }
        let candidates = forest
            .choice()
            .iter()
            .map(|&(_, l)| l)
            .filter(|l| reading == Nontriviality::Any || matches!(l, EdgeLabel::Reaction(_)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        BalancingSystem {
            reactions: r,
            dom: d,
            system,
            eq_rows,
            ineq_rows,
            candidates,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.reactions + self.dom
    }

    pub fn reaction_count(&self) -> usize {
        self.reactions
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn equality_rows(&self) -> &[BalanceRow] {
        &self.eq_rows
    }

    pub fn inequality_rows(&self) -> &[BalanceRow] {
        &self.ineq_rows
    }

    pub fn candidate_edges(&self) -> &[EdgeLabel] {
        &self.candidates
    }

    pub fn with_candidates(mut self, candidates: Vec<EdgeLabel>) -> Self {
        self.candidates = candidates;
        self
    }

    pub fn variable(&self, l: EdgeLabel) -> usize {
        var(self.reactions, l)
    }

    /// The base system plus `α_candidate >= 1`, appended as the last
    /// inequality row.
    pub fn candidate_system(&self, candidate: EdgeLabel) -> LinearSystem {
        let mut sys = self.system.clone();
        sys.add_lower_bound(var(self.reactions, candidate), q(1));
        sys
    }

    /// The system without its flow rows; used to show that flow is what
    /// rules a vector out.
    pub fn without_flow(&self) -> BalancingSystem {
        let mut system = LinearSystem::new(self.num_vars());
        for c in self.system.equalities() {
            system.add_equality(c.coeffs.clone(), c.rhs.clone()).expect("width");
        }
        let mut ineq_rows = Vec::new();
        for (c, row) in self.system.inequalities().iter().zip(&self.ineq_rows) {
            if matches!(row, BalanceRow::Flow { .. }) {
                continue;
            }
            system.add_inequality(c.coeffs.clone(), c.rhs.clone()).expect("width");
            ineq_rows.push(*row);
        }
        BalancingSystem {
            system,
            ineq_rows,
            ..self.clone()
        }
    }

    fn describe(&self, v: PointViolation, candidate: EdgeLabel) -> BalanceCheckError {
        match v {
            PointViolation::Dimension { expected, found } => BalanceCheckError::Length { expected, found },
            PointViolation::Equality(i) => BalanceCheckError::Violated(self.eq_rows[i]),
            PointViolation::Inequality(i) => BalanceCheckError::Violated(
                self.ineq_rows
                    .get(i)
                    .copied()
                    .unwrap_or(BalanceRow::Positive { edge: candidate }),
            ),
        }
    }

    /// Checks an integer vector against the system with positivity at
    /// `positive_edge`.
    pub fn check_alpha(&self, alpha: &[BigInt], positive_edge: EdgeLabel) -> Result<(), BalanceCheckError> {
        if !self.candidates.contains(&positive_edge) {
            return Err(BalanceCheckError::NotCandidate(positive_edge));
        }
        let x = lp::to_rationals(alpha);
        self.candidate_system(positive_edge)
            .check_point(&x)
            .map_err(|v| self.describe(v, positive_edge))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceOutcome {
    Balanced {
        alpha: Vec<BigInt>,
        positive_edge: EdgeLabel,
    },
    Unbalanced {
        witnesses: Vec<(EdgeLabel, FarkasCertificate)>,
    },
}

impl BalanceOutcome {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceOutcome::Balanced { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BalanceCheckError {
    #[error("vector has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("constraint {0:?} violated")]
    Violated(BalanceRow),
    #[error("edge {0:?} is not a nontriviality candidate of this forest")]
    NotCandidate(EdgeLabel),
    #[error("expected {expected} Farkas witnesses, found {found}")]
    WitnessCount { expected: usize, found: usize },
    #[error("witness {index} is for {found:?}, expected {expected:?}")]
    WitnessCandidate {
        index: usize,
        expected: EdgeLabel,
        found: EdgeLabel,
    },
    #[error("Farkas witness for {candidate:?} rejected: {error}")]
    Farkas {
        candidate: EdgeLabel,
        error: CertificateError,
    },
    #[error("forest invalid: {0}")]
    Forest(#[from] ForestError),
}

/// Tries each candidate in order; the first feasible one yields a primitive
/// integer balancing vector. Otherwise every candidate's Farkas witness is
/// kept.
pub fn decide_balance(sys: &BalancingSystem) -> Result<BalanceOutcome, LpError> {
    let mut witnesses = Vec::new();
    for &cand in sys.candidate_edges() {
        match sys.candidate_system(cand).solve()? {
            Feasibility::Feasible(x) => {
                let alpha = lp::to_primitive_integers(&x);
                debug_assert!(alpha.iter().all(|a| !a.is_negative()));
                return Ok(BalanceOutcome::Balanced {
                    alpha,
                    positive_edge: cand,
                });
            }
            Feasibility::Infeasible(cert) => witnesses.push((cand, cert)),
        }
    }
    Ok(BalanceOutcome::Unbalanced { witnesses })
}

/// Rebuilds the balancing system from scratch and audits `outcome` against it.
pub fn verify_balance_outcome(
    dcrn: &DomCrn<'_>,
    forest: &ExteriorForest,
    reading: Nontriviality,
    outcome: &BalanceOutcome,
) -> Result<(), BalanceCheckError> {
    forest.validate(dcrn)?;
    let sys = BalancingSystem::build(dcrn, forest, reading);
    match outcome {
        BalanceOutcome::Balanced { alpha, positive_edge } => sys.check_alpha(alpha, *positive_edge),
        BalanceOutcome::Unbalanced { witnesses } => {
            let cands = sys.candidate_edges();
            if witnesses.len() != cands.len() {
                return Err(BalanceCheckError::WitnessCount {
                    expected: cands.len(),
                    found: witnesses.len(),
                });
            }
            for (index, ((cand, cert), &expected)) in witnesses.iter().zip(cands).enumerate() {
                if *cand != expected {
                    return Err(BalanceCheckError::WitnessCandidate {
                        index,
                        expected,
                        found: *cand,
                    });
                }
                cert.verify(&sys.candidate_system(*cand))
                    .map_err(|error| BalanceCheckError::Farkas {
                        candidate: *cand,
                        error,
                    })?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domination::{build_dom_crn, maximal_admissible};

    fn conserved_pair() -> ReactionNetwork {
        ReactionNetwork::new(
            &["X1", "X2"],
            &[
                (vec![1, 1], vec![0, 2]),
                (vec![0, 2], vec![1, 1]),
                (vec![0, 1], vec![1, 0]),
            ],
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    const R: fn(usize) -> EdgeLabel = EdgeLabel::Reaction;
    const D: fn(usize) -> EdgeLabel = EdgeLabel::Domination;

    #[test]
    fn two_edge_forests() {
        let net = conserved_pair();
        let d = maximal_admissible(&net);
        let list = enumerate_forests(&d, 100).unwrap();
        assert!(!list.truncated);
        let picks: Vec<Vec<EdgeLabel>> = list
            .forests
            .iter()
            .map(|f| f.choice().iter().map(|&(_, l)| l).collect())
            .collect();
        assert_eq!(
            picks,
            vec![vec![D(0), D(1), R(2)], vec![D(0), R(1), R(2)], vec![R(0), D(1), R(2)]]
        );
        for f in &list.forests {
            f.validate(&d).unwrap();
        }
    }

    #[test]
    fn two_edge_left_balanced_right_unbalanced() {
        let net = conserved_pair();
        let d = maximal_admissible(&net);
        let left = ExteriorForest::new(&d, vec![(0, R(0)), (1, D(1)), (2, R(2))]).unwrap();
        let right = ExteriorForest::new(&d, vec![(0, D(0)), (1, R(1)), (2, R(2))]).unwrap();
        let reading = Nontriviality::TrueReactions;

        let sys = BalancingSystem::build(&d, &left, reading);
        sys.check_alpha(&ints(&[1, 0, 1, 0, 1]), R(0)).unwrap();
        assert_eq!(
            sys.check_alpha(&ints(&[1, 0, 0, 0, 1]), R(0)),
            Err(BalanceCheckError::Violated(BalanceRow::Kernel { species: 0 }))
        );
        let out = decide_balance(&sys).unwrap();
        assert!(out.is_balanced());
        verify_balance_outcome(&d, &left, reading, &out).unwrap();

        let sys = BalancingSystem::build(&d, &right, reading);
        assert_eq!(sys.candidate_edges(), &[R(1), R(2)]);
        let out = decide_balance(&sys).unwrap();
        assert!(!out.is_balanced());
        verify_balance_outcome(&d, &right, reading, &out).unwrap();
    }

    #[test]
    fn all_absorbing_gives_single_empty_forest() {
        let net = conserved_pair();
        let y: BTreeSet<usize> = (0..4).collect();
        let d = build_dom_crn(&net, vec![], y).unwrap();
        let list = enumerate_forests(&d, 5).unwrap();
        assert_eq!(list.forests.len(), 1);
        assert!(list.forests[0].choice().is_empty());
        assert_eq!(list.forests[0].interior(), &[0, 1, 2]);
        let sys = BalancingSystem::build(&d, &list.forests[0], Nontriviality::TrueReactions);
        assert!(sys.candidate_edges().is_empty());
        assert!(sys.inequality_rows().iter().all(|r| !matches!(r, BalanceRow::Flow { .. })));
    }

    #[test]
    fn cap_truncates() {
        let net = conserved_pair();
        let d = maximal_admissible(&net);
        let list = enumerate_forests(&d, 2).unwrap();
        assert_eq!(list.forests.len(), 2);
        assert!(list.truncated);
        let list = enumerate_forests(&d, 3).unwrap();
        assert!(!list.truncated);
        assert_eq!(enumerate_forests(&d, 0), Err(ForestError::ZeroCap));
    }

    #[test]
    fn cyclic_or_incomplete_choices_rejected() {
        let net = conserved_pair();
        let d = maximal_admissible(&net);
        // X1+X2 -> 2X2 -> X1+X2 never reaches Y
        assert_eq!(
            ExteriorForest::new(&d, vec![(0, R(0)), (1, R(1)), (2, R(2))]),
            Err(ForestError::NoPath(0))
        );
        assert_eq!(
            ExteriorForest::new(&d, vec![(0, R(0)), (2, R(2))]),
            Err(ForestError::MissingChoice(1))
        );
        assert_eq!(
            ExteriorForest::new(&d, vec![(0, R(1)), (1, D(1)), (2, R(2))]),
            Err(ForestError::BadEdge(R(1)))
        );
    }

    #[test]
    fn relaxation_and_reading_switch() {
        let net = conserved_pair();
        let d = maximal_admissible(&net);
        let right = ExteriorForest::new(&d, vec![(0, D(0)), (1, R(1)), (2, R(2))]).unwrap();
        let sys = BalancingSystem::build(&d, &right, Nontriviality::Any);
        assert_eq!(sys.candidate_edges(), &[R(1), R(2), D(0)]);
        assert!(!decide_balance(&sys).unwrap().is_balanced());
        assert!(decide_balance(&sys.without_flow()).unwrap().is_balanced());
    }
}
