//! Domination edges and domination-expanded networks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, ReactionGraph};
use crate::model::ReactionNetwork;

/// `from` dominates `to`: `to <= from` componentwise and they differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DominationEdge {
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for DominationEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.from, self.to)
    }
}

/// Every dominating pair of complexes, ordered by `(from, to)`.
pub fn domination_set(net: &ReactionNetwork) -> Vec<DominationEdge> {
    let cs = net.complexes();
    let mut out = Vec::new();
    for (from, y) in cs.iter().enumerate() {
        for (to, z) in cs.iter().enumerate() {
            if y.dominates(z) {
                out.push(DominationEdge { from, to });
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdmissibilityError {
    #[error("complex index {0} out of range")]
    ComplexOutOfRange(usize),
    #[error("pair {0} is not a domination relation")]
    NotDominating(DominationEdge),
    #[error("domination edge {0} listed twice")]
    Repeated(DominationEdge),
    #[error("domination edge {edge} duplicates reaction {reaction}")]
    DuplicatesReaction { edge: DominationEdge, reaction: usize },
    #[error("domination edge {0} targets the absorbing set")]
    TargetsAbsorbing(DominationEdge),
    #[error("edge from complex {from} to {to} leaves the absorbing set")]
    LeavesAbsorbing { from: usize, to: usize },
    #[error("terminal complex {0} missing from the absorbing set")]
    MissingTerminal(usize),
}

/// A network with admissible domination edges `D` and absorbing set `Y`.
#[derive(Debug, Clone)]
pub struct DomCrn<'a> {
    net: &'a ReactionNetwork,
    dom: Vec<DominationEdge>,
    y: BTreeSet<usize>,
}

impl<'a> DomCrn<'a> {
    pub fn net(&self) -> &'a ReactionNetwork {
        self.net
    }

    pub fn dom_edges(&self) -> &[DominationEdge] {
        &self.dom
    }

    pub fn absorbing(&self) -> &BTreeSet<usize> {
        &self.y
    }

    pub fn graph(&self) -> ReactionGraph {
        ReactionGraph::with_domination(self.net, &self.dom)
    }

    pub fn is_interior(&self, complex: usize) -> bool {
        self.y.contains(&complex)
    }

    /// Complexes outside `Y`, ascending.
    pub fn exterior(&self) -> Vec<usize> {
        (0..self.net.complex_count())
            .filter(|c| !self.y.contains(c))
            .collect()
    }
}

fn reaction_duplicate(net: &ReactionNetwork, e: &DominationEdge) -> Option<usize> {
    net.reactions()
        .iter()
        .position(|r| r.source == e.from && r.target == e.to)
}

/// Validates `(D, Y)` against the admissibility conditions. `D` keeps the
/// given order; its positions are the domination indices used everywhere
/// else.
pub fn build_dom_crn<'a>(
    net: &'a ReactionNetwork,
    dom: Vec<DominationEdge>,
    y: BTreeSet<usize>,
) -> Result<DomCrn<'a>, AdmissibilityError> {
    let n = net.complex_count();
    if let Some(&c) = y.iter().find(|&&c| c >= n) {
        return Err(AdmissibilityError::ComplexOutOfRange(c));
    }
    let mut seen = BTreeSet::new();
    for e in &dom {
        for c in [e.from, e.to] {
            if c >= n {
                return Err(AdmissibilityError::ComplexOutOfRange(c));
            }
        }
        if !net.complex(e.from).dominates(net.complex(e.to)) {
            return Err(AdmissibilityError::NotDominating(*e));
        }
        if !seen.insert(*e) {
            return Err(AdmissibilityError::Repeated(*e));
        }
        if let Some(reaction) = reaction_duplicate(net, e) {
            return Err(AdmissibilityError::DuplicatesReaction { edge: *e, reaction });
        }
        if y.contains(&e.to) {
            return Err(AdmissibilityError::TargetsAbsorbing(*e));
        }
    }
    let g = ReactionGraph::with_domination(net, &dom);
    if let Some(e) = g
        .edges()
        .iter()
        .find(|e| y.contains(&e.source) && !y.contains(&e.target))
    {
        return Err(AdmissibilityError::LeavesAbsorbing {
            from: e.source,
            to: e.target,
        });
    }
    if let Some(&t) = graph::terminal_complexes(&g).iter().find(|t| !y.contains(t)) {
        return Err(AdmissibilityError::MissingTerminal(t));
    }
    Ok(DomCrn { net, dom, y })
}

/// `D*` without pairs that coincide with a reaction; each removal is logged.
pub fn admissible_domination_set(net: &ReactionNetwork) -> Vec<DominationEdge> {
    domination_set(net)
        .into_iter()
        .filter(|e| match reaction_duplicate(net, e) {
            Some(k) => {
                log::warn!(
                    "domination pair {} -> {} coincides with reaction R{}; dropped",
                    net.complex_name(e.from),
                    net.complex_name(e.to),
                    k + 1
                );
                false
            }
            None => true,
        })
        .collect()
}

/// Start from `D*`, take `Y` = terminal complexes of the expanded graph,
/// delete every edge into `Y`, repeat until nothing changes.
pub fn maximal_admissible(net: &ReactionNetwork) -> DomCrn<'_> {
    let mut dom = admissible_domination_set(net);
    loop {
        let g = ReactionGraph::with_domination(net, &dom);
        let y = graph::terminal_complexes(&g);
        let before = dom.len();
        dom.retain(|e| !y.contains(&e.to));
        if dom.len() == before {
            return build_dom_crn(net, dom, y)
                .expect("fixpoint of the terminal sweep is admissible");
        }
    }
}

/// Largest `D` admissible for a given `Y`: every non-duplicate domination
/// pair whose endpoints both lie outside `Y`.
pub fn maximal_for_absorbing(
    net: &ReactionNetwork,
    y: BTreeSet<usize>,
) -> Result<DomCrn<'_>, AdmissibilityError> {
    let dom = admissible_domination_set(net)
        .into_iter()
        .filter(|e| !y.contains(&e.from) && !y.contains(&e.to))
        .collect();
    build_dom_crn(net, dom, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlcCheck {
    Holds,
    NotApplicable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlcViolation {
    #[error("strong linkage class containing complex {0} differs between the network and its expansion")]
    SlcMismatch(usize),
    #[error("terminal class containing complex {0} of the expansion is not terminal in the network")]
    TerminalNotInherited(usize),
}

/// Compares strong linkage classes of the network and of the dom-CRN.
/// `subconservative` gates the check: the comparison only holds for
/// subconservative networks.
pub fn check_slc_preservation(
    subconservative: bool,
    dcrn: &DomCrn<'_>,
) -> Result<SlcCheck, SlcViolation> {
    if !subconservative {
        return Ok(SlcCheck::NotApplicable);
    }
    let base = ReactionGraph::of_network(dcrn.net);
    let full = dcrn.graph();
    let a = graph::strong_linkage_classes(&base);
    let b = graph::strong_linkage_classes(&full);
    if a.blocks() != b.blocks() {
        let bad = a
            .blocks()
            .iter()
            .zip(b.blocks())
            .find(|(x, y)| x != y)
            .map(|(x, _)| x[0])
            .unwrap_or(0);
        return Err(SlcViolation::SlcMismatch(bad));
    }
    let base_terminal = graph::terminal_slcs(&base);
    for block in graph::terminal_slcs(&full) {
        if !base_terminal.contains(&block) {
            return Err(SlcViolation::TerminalNotInherited(block[0]));
        }
    }
    Ok(SlcCheck::Holds)
}
