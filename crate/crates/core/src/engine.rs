//! Search over admissible dom-CRNs and their exterior forests.
//!
//! For a subconservative network, one unbalanced exterior forest of one
//! admissible dom-CRN with absorbing set `Y` proves that every complex outside
//! `Y` is transient from every initial state. The search stops at the first
//! such forest in canonical order.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domination::{
    self, build_dom_crn, check_slc_preservation, AdmissibilityError, DomCrn, DominationEdge, SlcViolation,
};
use crate::forest::{
    self, BalanceCheckError, BalanceOutcome, BalancingSystem, ExteriorForest, ForestError, Nontriviality,
};
use crate::graph::{self, EdgeLabel, ReactionGraph};
use crate::invariants::{conservation_system, ConservationKind};
use crate::lp::{CertificateError, FarkasCertificate, Feasibility, LpError, PointViolation, Q};
use crate::model::ReactionNetwork;

pub const DEFAULT_FOREST_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "strategy", content = "cap", rename_all = "kebab-case")]
pub enum DomStrategy {
    /// Only the fixpoint dom-CRN (or the largest admissible `D` for a given `Y`).
    #[default]
    Maximal,
    /// Subsets of the domination set, largest first, at most `N` per absorbing set.
    AllSubsets(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "strategy", content = "value", rename_all = "kebab-case")]
pub enum AbsorbingStrategy {
    /// `Y` = terminal complexes of the dom-CRN.
    #[default]
    Terminal,
    /// Terminal first, then up to `N` absorbing sets of the reaction graph.
    Enumerate(usize),
    Explicit(BTreeSet<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dom: DomStrategy,
    pub absorbing: AbsorbingStrategy,
    pub forest_cap: usize,
    pub nontriviality: Nontriviality,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            dom: DomStrategy::Maximal,
            absorbing: AbsorbingStrategy::Terminal,
            forest_cap: DEFAULT_FOREST_CAP,
            nontriviality: Nontriviality::TrueReactions,
        }
    }
}

impl SearchConfig {
    pub fn with_absorbing(mut self, y: AbsorbingStrategy) -> Self {
        self.absorbing = y;
        self
    }

    pub fn with_dom(mut self, d: DomStrategy) -> Self {
        self.dom = d;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub candidates_examined: usize,
    pub candidates_rejected: usize,
    pub candidates_skipped: usize,
    pub forests_examined: usize,
    pub forests_balanced: usize,
    pub dom_truncated: bool,
    pub absorbing_truncated: bool,
    pub forest_truncated: bool,
}

impl SearchStats {
    pub fn truncated(&self) -> bool {
        self.dom_truncated || self.absorbing_truncated || self.forest_truncated
    }
}

/// Everything needed to re-check an extinction verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `c >= 1` with `c^T Γ <= 0`.
    pub conservation: Vec<Q>,
    pub dom_edges: Vec<DominationEdge>,
    pub absorbing: BTreeSet<usize>,
    pub forest: Vec<(usize, EdgeLabel)>,
    pub nontriviality: Nontriviality,
    pub witnesses: Vec<(EdgeLabel, FarkasCertificate)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    GuaranteedExtinction {
        transient: Vec<usize>,
        certificate: Certificate,
        stats: SearchStats,
    },
    Inconclusive {
        stats: SearchStats,
    },
    /// No `c >= 1` with `c^T Γ <= 0`; the witness refutes it.
    NotApplicable {
        reason: String,
        farkas: FarkasCertificate,
    },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::GuaranteedExtinction { .. } => "guaranteed_extinction",
            Verdict::Inconclusive { .. } => "inconclusive",
            Verdict::NotApplicable { .. } => "not_applicable",
        }
    }

    pub fn is_extinction(&self) -> bool {
        matches!(self, Verdict::GuaranteedExtinction { .. })
    }

    pub fn transient(&self) -> Option<&[usize]> {
        match self {
            Verdict::GuaranteedExtinction { transient, .. } => Some(transient),
            _ => None,
        }
    }

    pub fn stats(&self) -> Option<&SearchStats> {
        match self {
            Verdict::GuaranteedExtinction { stats, .. } | Verdict::Inconclusive { stats } => Some(stats),
            Verdict::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("strong linkage classes changed under domination: {0}")]
    Slc(#[from] SlcViolation),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error("produced certificate failed its own audit: {0}")]
    SelfAudit(#[from] BalanceCheckError),
    #[error("search caps must be at least 1")]
    ZeroCap,
}

/// A `(D, Y)` pair to try. `Y = None` means the terminal complexes of the
/// expanded graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub dom: Vec<DominationEdge>,
    pub absorbing: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CandidateList {
    pub candidates: Vec<Candidate>,
    pub dom_truncated: bool,
    pub absorbing_truncated: bool,
}

enum YSpec {
    DomTerminal,
    Fixed(BTreeSet<usize>),
}

/// `(D, Y)` pairs in search order. Pairs are not validated here; `D` keeps
/// the order of the domination set.
pub fn candidates(net: &ReactionNetwork, cfg: &SearchConfig) -> Result<CandidateList, EngineError> {
    let mut out = CandidateList::default();
    let ys = match &cfg.absorbing {
        AbsorbingStrategy::Terminal => vec![YSpec::DomTerminal],
        AbsorbingStrategy::Enumerate(n) => {
            if *n == 0 {
                return Err(EngineError::ZeroCap);
            }
            let sets = graph::enumerate_absorbing_sets(&ReactionGraph::of_network(net), *n);
            out.absorbing_truncated = sets.truncated;
            std::iter::once(YSpec::DomTerminal)
                .chain(sets.sets.into_iter().map(YSpec::Fixed))
                .collect()
        }
        AbsorbingStrategy::Explicit(y) => vec![YSpec::Fixed(y.clone())],
    };
    let pool = domination::admissible_domination_set(net);
    let mut seen = HashSet::new();
    let mut push = |c: Candidate, out: &mut CandidateList| {
        if seen.insert(c.clone()) {
            out.candidates.push(c);
        }
    };
    for spec in ys {
        match (&cfg.dom, spec) {
            (DomStrategy::Maximal, YSpec::DomTerminal) => {
                let d = domination::maximal_admissible(net);
                push(
                    Candidate {
                        dom: d.dom_edges().to_vec(),
                        absorbing: d.absorbing().clone(),
                    },
                    &mut out,
                );
            }
            (DomStrategy::Maximal, YSpec::Fixed(y)) => {
                let dom = pool
                    .iter()
                    .filter(|e| !y.contains(&e.from) && !y.contains(&e.to))
                    .copied()
                    .collect();
                push(Candidate { dom, absorbing: y }, &mut out);
            }
            (DomStrategy::AllSubsets(n), spec) => {
                if *n == 0 {
                    return Err(EngineError::ZeroCap);
                }
                let base: Vec<DominationEdge> = match &spec {
                    YSpec::DomTerminal => pool.clone(),
                    YSpec::Fixed(y) => pool
                        .iter()
                        .filter(|e| !y.contains(&e.from) && !y.contains(&e.to))
                        .copied()
                        .collect(),
                };
                let mut subsets = (0..=base.len())
                    .rev()
                    .flat_map(|k| base.iter().copied().combinations(k));
                for dom in subsets.by_ref().take(*n) {
                    let absorbing = match &spec {
                        YSpec::DomTerminal => {
                            graph::terminal_complexes(&ReactionGraph::with_domination(net, &dom))
                        }
                        YSpec::Fixed(y) => y.clone(),
                    };
                    push(Candidate { dom, absorbing }, &mut out);
                }
                if subsets.next().is_some() {
                    out.dom_truncated = true;
                }
            }
        }
    }
    Ok(out)
}

/// What the search saw for one forest.
pub struct ForestEvent<'e, 'a> {
    pub dcrn: &'e DomCrn<'a>,
    pub forest: &'e ExteriorForest,
    pub outcome: &'e BalanceOutcome,
}

pub fn analyze(net: &ReactionNetwork, cfg: &SearchConfig) -> Result<Verdict, EngineError> {
    analyze_observed(net, cfg, |_| {})
}

/// As [`analyze`], calling `observe` on every forest decided along the way.
pub fn analyze_observed<F>(net: &ReactionNetwork, cfg: &SearchConfig, mut observe: F) -> Result<Verdict, EngineError>
where
    F: FnMut(&ForestEvent<'_, '_>),
{
    if cfg.forest_cap == 0 {
        return Err(EngineError::ZeroCap);
    }
    let gamma = net.stoich_matrix();
    let conservation = match conservation_system(&gamma, ConservationKind::Subconservative).solve()? {
        Feasibility::Feasible(c) => c,
        Feasibility::Infeasible(farkas) => {
            return Ok(Verdict::NotApplicable {
                reason: "network is not subconservative".into(),
                farkas,
            })
        }
    };

    let list = candidates(net, cfg)?;
    let mut stats = SearchStats {
        dom_truncated: list.dom_truncated,
        absorbing_truncated: list.absorbing_truncated,
        ..SearchStats::default()
    };
    for cand in list.candidates {
        if cand.absorbing.len() == net.complex_count() {
            stats.candidates_skipped += 1;
            continue;
        }
        stats.candidates_examined += 1;
        let dcrn = match build_dom_crn(net, cand.dom, cand.absorbing) {
            Ok(d) => d,
            Err(e) => {
                log::debug!("candidate rejected: {e}");
                stats.candidates_rejected += 1;
                continue;
            }
        };
        check_slc_preservation(true, &dcrn)?;

        let mut found: Option<(ExteriorForest, Vec<(EdgeLabel, FarkasCertificate)>)> = None;
        let mut failure: Option<EngineError> = None;
        let walk = forest::for_each_forest(&dcrn, cfg.forest_cap, |f| {
            stats.forests_examined += 1;
            let sys = BalancingSystem::build(&dcrn, f, cfg.nontriviality);
            let outcome = match forest::decide_balance(&sys) {
                Ok(o) => o,
                Err(e) => {
                    failure = Some(e.into());
                    return ControlFlow::Break(());
                }
            };
            observe(&ForestEvent {
                dcrn: &dcrn,
                forest: f,
                outcome: &outcome,
            });
            match outcome {
                BalanceOutcome::Balanced { .. } => {
                    stats.forests_balanced += 1;
                    ControlFlow::Continue(())
                }
                BalanceOutcome::Unbalanced { witnesses } => {
                    found = Some((f.clone(), witnesses));
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        stats.forest_truncated |= walk.truncated;
        if let Some((forest, witnesses)) = found {
            let outcome = BalanceOutcome::Unbalanced { witnesses };
            forest::verify_balance_outcome(&dcrn, &forest, cfg.nontriviality, &outcome)?;
            let BalanceOutcome::Unbalanced { witnesses } = outcome else {
                unreachable!()
            };
            return Ok(Verdict::GuaranteedExtinction {
                transient: dcrn.exterior(),
                certificate: Certificate {
                    conservation,
                    dom_edges: dcrn.dom_edges().to_vec(),
                    absorbing: dcrn.absorbing().clone(),
                    forest: forest.choice().to_vec(),
                    nontriviality: cfg.nontriviality,
                    witnesses,
                },
                stats,
            });
        }
    }
    Ok(Verdict::Inconclusive { stats })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("verdict carries no certificate")]
    NoCertificate,
    #[error("conservation vector rejected: {0}")]
    Conservation(PointViolation),
    #[error("non-applicability witness rejected: {0}")]
    NotApplicable(CertificateError),
    #[error("dom-CRN not admissible: {0}")]
    Admissibility(#[from] AdmissibilityError),
    #[error("forest rejected: {0}")]
    Forest(#[from] ForestError),
    #[error("transient set does not match the complement of the absorbing set")]
    TransientSet,
    #[error("empty transient set")]
    Empty,
    #[error(transparent)]
    Balance(#[from] BalanceCheckError),
    #[error(transparent)]
    Slc(#[from] SlcViolation),
}

/// Audits every link of a verdict's certificate chain against `net` alone.
pub fn verify_verdict(net: &ReactionNetwork, verdict: &Verdict) -> Result<(), VerifyError> {
    let gamma = net.stoich_matrix();
    match verdict {
        Verdict::Inconclusive { .. } => Err(VerifyError::NoCertificate),
        Verdict::NotApplicable { farkas, .. } => farkas
            .verify(&conservation_system(&gamma, ConservationKind::Subconservative))
            .map_err(VerifyError::NotApplicable),
        Verdict::GuaranteedExtinction {
            transient,
            certificate,
            ..
        } => {
            conservation_system(&gamma, ConservationKind::Subconservative)
                .check_point(&certificate.conservation)
                .map_err(VerifyError::Conservation)?;
            let dcrn = build_dom_crn(net, certificate.dom_edges.clone(), certificate.absorbing.clone())?;
            check_slc_preservation(true, &dcrn)?;
            if transient.is_empty() {
                return Err(VerifyError::Empty);
            }
            if *transient != dcrn.exterior() {
                return Err(VerifyError::TransientSet);
            }
            let forest = ExteriorForest::new(&dcrn, certificate.forest.clone())?;
            let outcome = BalanceOutcome::Unbalanced {
                witnesses: certificate.witnesses.clone(),
            };
            forest::verify_balance_outcome(&dcrn, &forest, certificate.nontriviality, &outcome)?;
            Ok(())
        }
    }
}
