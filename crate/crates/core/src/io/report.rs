//! Analysis reports. The JSON form holds every certificate with exact
//! rationals as `{"num": "...", "den": "..."}`, so a verdict can be rebuilt
//! from the report and re-audited against the network.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domination::DominationEdge;
use crate::engine::{Certificate, SearchStats, Verdict};
use crate::forest::{endpoints_in, Nontriviality};
use crate::graph::EdgeLabel;
use crate::lp::{FarkasCertificate, Q};
use crate::model::ReactionNetwork;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&Q> for Rational {
    fn from(q: &Q) -> Self {
        Rational {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl Rational {
    pub fn to_q(&self) -> Result<Q, ReportError> {
        let num: BigInt = self.num.parse().map_err(|_| ReportError::Number(self.num.clone()))?;
        let den: BigInt = self.den.parse().map_err(|_| ReportError::Number(self.den.clone()))?;
        if den.is_zero() {
            return Err(ReportError::Number(self.den.clone()));
        }
        Ok(Q::new(num, den))
    }
}

fn rationals(v: &[Q]) -> Vec<Rational> {
    v.iter().map(Rational::from).collect()
}

fn parse_rationals(v: &[Rational]) -> Result<Vec<Q>, ReportError> {
    v.iter().map(Rational::to_q).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeReport {
    #[serde(flatten)]
    pub edge: EdgeLabel,
    /// `R<k>` / `D<j>`, numbered from 1.
    pub label: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomEdgeReport {
    pub from: usize,
    pub to: usize,
    pub from_name: String,
    pub to_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestPick {
    pub complex: usize,
    pub complex_name: String,
    pub edge: EdgeReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasReport {
    pub equality: Vec<Rational>,
    pub inequality: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub candidate: EdgeReport,
    pub farkas: FarkasReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub verdict: String,
    pub species: Vec<String>,
    pub complexes: Vec<String>,
    pub transient: Vec<String>,
    pub transient_indices: Vec<usize>,
    pub absorbing: Vec<usize>,
    pub dom_edges: Vec<DomEdgeReport>,
    pub forest: Vec<ForestPick>,
    pub interior_reactions: Vec<EdgeReport>,
    /// True reactions of the unbalanced forest, as `source -> target`.
    pub extinction_pathway: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nontriviality: Option<Nontriviality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conservation: Option<Vec<Rational>>,
    pub witnesses: Vec<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<NotApplicableReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SearchStats>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotApplicableReport {
    pub reason: String,
    pub farkas: FarkasReport,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("bad number `{0}` in report")]
    Number(String),
    #[error("unknown verdict kind `{0}`")]
    Kind(String),
    #[error("report is missing `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

fn edge_label(l: EdgeLabel) -> String {
    match l {
        EdgeLabel::Reaction(k) => format!("R{}", k + 1),
        EdgeLabel::Domination(j) => format!("D{}", j + 1),
    }
}

fn edge_report(net: &ReactionNetwork, dom: &[DominationEdge], l: EdgeLabel) -> EdgeReport {
    let (s, t) = endpoints_in(net, dom, l).unwrap_or((usize::MAX, usize::MAX));
    let name = |c: usize| {
        if c < net.complex_count() {
            net.complex_name(c)
        } else {
            "?".into()
        }
    };
    EdgeReport {
        edge: l,
        label: edge_label(l),
        source: name(s),
        target: name(t),
    }
}

fn farkas_report(f: &FarkasCertificate) -> FarkasReport {
    FarkasReport {
        equality: rationals(&f.equality),
        inequality: rationals(&f.inequality),
    }
}

fn farkas_back(f: &FarkasReport) -> Result<FarkasCertificate, ReportError> {
    Ok(FarkasCertificate {
        equality: parse_rationals(&f.equality)?,
        inequality: parse_rationals(&f.inequality)?,
    })
}

impl AnalysisReport {
    pub fn new(net: &ReactionNetwork, verdict: &Verdict) -> Self {
        let mut r = AnalysisReport {
            verdict: verdict.kind().to_string(),
            species: net.species_names(),
            complexes: (0..net.complex_count()).map(|i| net.complex_name(i)).collect(),
            transient: Vec::new(),
            transient_indices: Vec::new(),
            absorbing: Vec::new(),
            dom_edges: Vec::new(),
            forest: Vec::new(),
            interior_reactions: Vec::new(),
            extinction_pathway: Vec::new(),
            nontriviality: None,
            conservation: None,
            witnesses: Vec::new(),
            not_applicable: None,
            stats: verdict.stats().copied(),
            truncated: verdict.stats().is_some_and(|s| s.truncated()),
        };
        match verdict {
            Verdict::Inconclusive { .. } => {}
            Verdict::NotApplicable { reason, farkas } => {
                r.not_applicable = Some(NotApplicableReport {
                    reason: reason.clone(),
                    farkas: farkas_report(farkas),
                });
            }
            Verdict::GuaranteedExtinction {
                transient,
                certificate: c,
                ..
            } => {
                r.transient = transient.iter().map(|&i| net.complex_name(i)).collect();
                r.transient_indices = transient.clone();
                r.absorbing = c.absorbing.iter().copied().collect();
                r.dom_edges = c
                    .dom_edges
                    .iter()
                    .map(|e| DomEdgeReport {
                        from: e.from,
                        to: e.to,
                        from_name: net.complex_name(e.from),
                        to_name: net.complex_name(e.to),
                    })
                    .collect();
                r.forest = c
                    .forest
                    .iter()
                    .map(|&(complex, l)| ForestPick {
                        complex,
                        complex_name: net.complex_name(complex),
                        edge: edge_report(net, &c.dom_edges, l),
                    })
                    .collect();
                r.interior_reactions = net
                    .reactions()
                    .iter()
                    .filter(|x| c.absorbing.contains(&x.source))
                    .map(|x| edge_report(net, &c.dom_edges, EdgeLabel::Reaction(x.index)))
                    .collect();
                r.extinction_pathway = r
                    .forest
                    .iter()
                    .filter(|p| matches!(p.edge.edge, EdgeLabel::Reaction(_)))
                    .map(|p| format!("{}: {} -> {}", p.edge.label, p.edge.source, p.edge.target))
                    .collect();
                r.nontriviality = Some(c.nontriviality);
                r.conservation = Some(rationals(&c.conservation));
                r.witnesses = c
                    .witnesses
                    .iter()
                    .map(|(l, f)| WitnessReport {
                        candidate: edge_report(net, &c.dom_edges, *l),
                        farkas: farkas_report(f),
                    })
                    .collect();
            }
        }
        r
    }

    /// All forest edges as labels, reactions first, each group by index.
    pub fn forest_labels(&self) -> Vec<String> {
        let mut edges: Vec<EdgeLabel> = self
            .forest
            .iter()
            .map(|p| p.edge.edge)
            .chain(self.interior_reactions.iter().map(|e| e.edge))
            .collect();
        edges.sort();
        edges.into_iter().map(edge_label).collect()
    }

    /// Rebuilds the verdict. Names are informational; indices are what count.
    pub fn to_verdict(&self) -> Result<Verdict, ReportError> {
        let stats = self.stats.unwrap_or_default();
        match self.verdict.as_str() {
            "inconclusive" => Ok(Verdict::Inconclusive { stats }),
            "not_applicable" => {
                let na = self.not_applicable.as_ref().ok_or(ReportError::Missing("not_applicable"))?;
                Ok(Verdict::NotApplicable {
                    reason: na.reason.clone(),
                    farkas: farkas_back(&na.farkas)?,
                })
            }
            "guaranteed_extinction" => {
                let conservation = parse_rationals(
                    self.conservation.as_deref().ok_or(ReportError::Missing("conservation"))?,
                )?;
                let witnesses = self
                    .witnesses
                    .iter()
                    .map(|w| Ok((w.candidate.edge, farkas_back(&w.farkas)?)))
                    .collect::<Result<Vec<_>, ReportError>>()?;
                Ok(Verdict::GuaranteedExtinction {
                    transient: self.transient_indices.clone(),
                    certificate: Certificate {
                        conservation,
                        dom_edges: self
                            .dom_edges
                            .iter()
                            .map(|e| DominationEdge { from: e.from, to: e.to })
                            .collect(),
                        absorbing: self.absorbing.iter().copied().collect::<BTreeSet<_>>(),
                        forest: self.forest.iter().map(|p| (p.complex, p.edge.edge)).collect(),
                        nontriviality: self.nontriviality.ok_or(ReportError::Missing("nontriviality"))?,
                        witnesses,
                    },
                    stats,
                })
            }
            other => Err(ReportError::Kind(other.to_string())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verdict: {}", self.verdict.replace('_', " "));
        match self.verdict.as_str() {
            "guaranteed_extinction" => {
                let _ = writeln!(s, "transient complexes ({}): {}", self.transient.len(), self.transient.join(", "));
                let y: Vec<&str> = self.absorbing.iter().map(|&i| self.complexes[i].as_str()).collect();
                let _ = writeln!(s, "absorbing set: {}", y.join(", "));
                let _ = writeln!(s, "domination edges:");
                for (j, e) in self.dom_edges.iter().enumerate() {
                    let _ = writeln!(s, "  D{}: {} -> {}", j + 1, e.from_name, e.to_name);
                }
                let _ = writeln!(s, "unbalanced forest: {}", self.forest_labels().join(", "));
                let _ = writeln!(s, "extinction pathway:");
                for p in &self.extinction_pathway {
                    let _ = writeln!(s, "  {p}");
                }
                let _ = writeln!(s, "farkas witnesses: {}", self.witnesses.len());
            }
            "not_applicable" => {
                if let Some(na) = &self.not_applicable {
                    let _ = writeln!(s, "reason: {}", na.reason);
                }
            }
            _ => {}
        }
        if let Some(st) = &self.stats {
            let _ = writeln!(
                s,
                "search: {} candidates examined ({} rejected, {} skipped), {} forests examined ({} balanced){}",
                st.candidates_examined,
                st.candidates_rejected,
                st.candidates_skipped,
                st.forests_examined,
                st.forests_balanced,
                if st.truncated() { ", truncated" } else { "" }
            );
        }
        s
    }
}

pub fn emit_report(net: &ReactionNetwork, verdict: &Verdict, format: Format) -> String {
    let r = AnalysisReport::new(net, verdict);
    match format {
        Format::Json => r.to_json(),
        Format::Text => r.to_text(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{analyze, verify_verdict, SearchConfig};
    use crate::io::text::parse_crn;

    #[test]
    fn extinction_report_round_trips() {
        let net = parse_crn("X1 + X2 <-> 2 X2\nX2 -> X1").unwrap().network;
        let v = analyze(&net, &SearchConfig::default()).unwrap();
        let json = emit_report(&net, &v, Format::Json);
        let back = AnalysisReport::from_json(&json).unwrap().to_verdict().unwrap();
        assert_eq!(back, v);
        verify_verdict(&net, &back).unwrap();
        let text = emit_report(&net, &v, Format::Text);
        assert!(text.contains("transient complexes (3): X1 + X2, 2 X2, X2"));
    }

    #[test]
    fn not_applicable_carries_witness() {
        let net = parse_crn("X1 -> 2 X2\nX2 -> 2 X1").unwrap().network;
        let v = analyze(&net, &SearchConfig::default()).unwrap();
        let json = emit_report(&net, &v, Format::Json);
        assert!(json.contains("\"num\""));
        let back = AnalysisReport::from_json(&json).unwrap().to_verdict().unwrap();
        verify_verdict(&net, &back).unwrap();
    }

    #[test]
    fn rational_encoding() {
        let q = Q::new(BigInt::from(-3), BigInt::from(6));
        let r = Rational::from(&q);
        assert_eq!((r.num.as_str(), r.den.as_str()), ("-1", "2"));
        assert_eq!(r.to_q().unwrap(), q);
        assert!(Rational { num: "1".into(), den: "0".into() }.to_q().is_err());
    }
}
