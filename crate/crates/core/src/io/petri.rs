//! Petri-net documents: places are species, transitions are reactions with
//! input and output multiplicities. The incidence matrix is written on export
//! and, when present, checked on import.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Complex, ModelError, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub inputs: BTreeMap<String, i64>,
    #[serde(default)]
    pub outputs: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetriNet {
    pub places: Vec<String>,
    pub transitions: Vec<Transition>,
    /// Rows are places, columns transitions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Error)]
pub enum PetriError {
    #[error("malformed Petri document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("transition {transition} refers to unknown place `{place}`")]
    UnknownPlace { transition: usize, place: String },
    #[error("transition {transition} has negative multiplicity {value} on `{place}`")]
    NegativeMultiplicity {
        transition: usize,
        place: String,
        value: i64,
    },
    #[error("incidence matrix does not match the arcs (place {place}, transition {transition})")]
    IncidenceMismatch { place: usize, transition: usize },
    #[error("incidence matrix has the wrong shape")]
    IncidenceShape,
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn petri_export(net: &ReactionNetwork) -> PetriNet {
    let names = net.species_names();
    let arcs = |c: &Complex| -> BTreeMap<String, i64> {
        c.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, &v)| (names[i].clone(), v as i64))
            .collect()
    };
    let transitions = net
        .reactions()
        .iter()
        .map(|r| Transition {
            name: Some(format!("R{}", r.index + 1)),
            inputs: arcs(net.complex(r.source)),
            outputs: arcs(net.complex(r.target)),
        })
        .collect();
    PetriNet {
        places: names,
        transitions,
        incidence: Some(net.stoich_matrix().to_rows()),
    }
}

pub fn petri_import(doc: &PetriNet) -> Result<ReactionNetwork, PetriError> {
    let index: HashMap<&str, usize> = doc.places.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let m = doc.places.len();
    let mut reactions = Vec::with_capacity(doc.transitions.len());
    for (t, tr) in doc.transitions.iter().enumerate() {
        let side = |arcs: &BTreeMap<String, i64>| -> Result<Complex, PetriError> {
            let mut v = vec![0u64; m];
            for (place, &value) in arcs {
                let i = *index.get(place.as_str()).ok_or_else(|| PetriError::UnknownPlace {
                    transition: t,
                    place: place.clone(),
                })?;
                if value < 0 {
                    return Err(PetriError::NegativeMultiplicity {
                        transition: t,
                        place: place.clone(),
                        value,
                    });
                }
                v[i] = value as u64;
            }
            Ok(Complex::new(v))
        };
        reactions.push((side(&tr.inputs)?, side(&tr.outputs)?));
    }
    let net = ReactionNetwork::from_complexes(&doc.places, reactions)?;
    if let Some(inc) = &doc.incidence {
        let gamma = net.stoich_matrix();
        if inc.len() != m || inc.iter().any(|row| row.len() != doc.transitions.len()) {
            return Err(PetriError::IncidenceShape);
        }
        for (i, row) in inc.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if gamma.get(i, k) != v {
                    return Err(PetriError::IncidenceMismatch { place: i, transition: k });
                }
            }
        }
    }
    Ok(net)
}

pub fn petri_from_json(text: &str) -> Result<PetriNet, PetriError> {
    Ok(serde_json::from_str(text)?)
}

pub fn petri_to_json(doc: &PetriNet) -> String {
    serde_json::to_string_pretty(doc).expect("Petri documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::text::parse_crn;

    #[test]
    fn conserved_pair_incidence() {
        let net = parse_crn("X1 + X2 <-> 2 X2\nX2 -> X1").unwrap().network;
        let doc = petri_export(&net);
        assert_eq!(doc.incidence, Some(vec![vec![-1, 1, 1], vec![1, -1, -1]]));
        let back = petri_import(&petri_from_json(&petri_to_json(&doc)).unwrap()).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn missing_outputs_give_zero_target() {
        let doc = petri_from_json(r#"{"places":["A"],"transitions":[{"inputs":{"A":1}}]}"#).unwrap();
        let net = petri_import(&doc).unwrap();
        assert!(net.target(0).is_zero());
    }

    #[test]
    fn rejects_bad_documents() {
        let neg = petri_from_json(r#"{"places":["A"],"transitions":[{"inputs":{"A":-1}}]}"#).unwrap();
        assert!(matches!(petri_import(&neg), Err(PetriError::NegativeMultiplicity { .. })));
        let unknown = petri_from_json(r#"{"places":["A"],"transitions":[{"inputs":{"B":1}}]}"#).unwrap();
        assert!(matches!(petri_import(&unknown), Err(PetriError::UnknownPlace { .. })));
        let wrong = petri_from_json(r#"{"places":["A"],"transitions":[{"inputs":{"A":1}}],"incidence":[[1]]}"#).unwrap();
        assert!(matches!(petri_import(&wrong), Err(PetriError::IncidenceMismatch { .. })));
        assert!(petri_from_json("{\"places\": 3}").is_err());
    }
}
