//! Species, complexes, reactions and the stoichiometric matrix.
//!
//! A [`ReactionNetwork`] is immutable once built. Complexes are derived from
//! the reaction list and deduplicated in first-appearance order (source
//! before target, reactions in input order), which fixes complex indices for
//! every downstream certificate.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("reaction {reaction}: complex has {found} coefficients, expected {expected}")]
    CoefficientLength {
        reaction: usize,
        expected: usize,
        found: usize,
    },
    #[error("reaction {reaction}: negative coefficient {value} for species {species}")]
    NegativeCoefficient {
        reaction: usize,
        species: usize,
        value: i64,
    },
    #[error("vector length {found} does not match species count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("reaction index {index} out of range (network has {count} reactions)")]
    InvalidReaction { index: usize, count: usize },
    #[error("stoichiometric entry overflows i64")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Species {
    pub index: usize,
    pub name: String,
}

/// A nonnegative integer combination of species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Complex(Vec<u64>);

impl Complex {
    pub fn new(coeffs: Vec<u64>) -> Self {
        Complex(coeffs)
    }

    pub fn zero(species: usize) -> Self {
        Complex(vec![0; species])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Complex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// True iff `other` is dominated by `self`: `other <= self` and they differ.
    pub fn dominates(&self, other: &Complex) -> bool {
        other.le(self) && self != other
    }

    /// Renders the complex with the given species names, e.g. `2 X1 + X2`.
    pub fn display<'a>(&'a self, names: &'a [Species]) -> ComplexDisplay<'a> {
        ComplexDisplay {
            complex: self,
            species: names,
        }
    }
}

pub struct ComplexDisplay<'a> {
    complex: &'a Complex,
    species: &'a [Species],
}

impl fmt::Display for ComplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.complex.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let name = self.species.get(i).map(|s| s.name.as_str()).unwrap_or("?");
            if c == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{c} {name}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A reaction `source -> target`, stored as indices into the complex list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reaction {
    pub index: usize,
    pub source: usize,
    pub target: usize,
}

impl Reaction {
    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Molecular counts, one per species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State(Vec<u64>);

impl State {
    pub fn new(counts: Vec<u64>) -> Self {
        State(counts)
    }

    pub fn zero(species: usize) -> Self {
        State(vec![0; species])
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `m x r` integer matrix whose column `k` is the reaction vector of reaction `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoichMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl StoichMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        StoichMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds an `rows x cols` matrix; needed when one dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        StoichMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, k: usize) -> i64 {
        self.entries[i * self.cols + k]
    }

    fn set(&mut self, i: usize, k: usize, v: i64) {
        self.entries[i * self.cols + k] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, k)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> StoichMatrix {
        let mut t = StoichMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for k in 0..self.cols {
                t.set(k, i, self.get(i, k));
            }
        }
        t
    }

    /// Matrix-vector product `self * v` over i128.
    pub fn apply(&self, v: &[i128]) -> Vec<i128> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) as i128 * v[k]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
}

impl ReactionNetwork {
    /// Builds a network from species names and reactions given as coefficient
    /// vectors. Complexes are deduplicated in first-appearance order.
    pub fn new<S: AsRef<str>>(
        species_names: &[S],
        reactions: &[(Vec<i64>, Vec<i64>)],
    ) -> Result<Self, ModelError> {
        let m = species_names.len();
        let mut checked = Vec::with_capacity(reactions.len());
        for (k, (src, tgt)) in reactions.iter().enumerate() {
            let to_complex = |v: &Vec<i64>| -> Result<Complex, ModelError> {
                if v.len() != m {
                    return Err(ModelError::CoefficientLength {
                        reaction: k,
                        expected: m,
                        found: v.len(),
                    });
                }
                v.iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        u64::try_from(c).map_err(|_| ModelError::NegativeCoefficient {
                            reaction: k,
                            species: i,
                            value: c,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Complex)
            };
            checked.push((to_complex(src)?, to_complex(tgt)?));
        }
        Self::from_complexes(species_names, checked)
    }

    pub fn from_complexes<S: AsRef<str>>(
        species_names: &[S],
        reactions: Vec<(Complex, Complex)>,
    ) -> Result<Self, ModelError> {
        let m = species_names.len();
        let mut seen = HashSet::new();
        let species = species_names
            .iter()
            .enumerate()
            .map(|(index, name)| {
                let name = name.as_ref().to_string();
                if !seen.insert(name.clone()) {
                    return Err(ModelError::DuplicateSpecies(name));
                }
                Ok(Species { index, name })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut complexes: Vec<Complex> = Vec::new();
        let mut lookup: HashMap<Complex, usize> = HashMap::new();
        let mut intern = |c: Complex| -> usize {
            if let Some(&i) = lookup.get(&c) {
                return i;
            }
            let i = complexes.len();
            lookup.insert(c.clone(), i);
            complexes.push(c);
            i
        };
        let mut out = Vec::with_capacity(reactions.len());
        for (index, (src, tgt)) in reactions.into_iter().enumerate() {
            for c in [&src, &tgt] {
                if c.len() != m {
                    return Err(ModelError::CoefficientLength {
                        reaction: index,
                        expected: m,
                        found: c.len(),
                    });
                }
                if c.coeffs().iter().any(|&x| x > i64::MAX as u64) {
                    return Err(ModelError::Overflow);
                }
            }
            let source = intern(src);
            let target = intern(tgt);
            out.push(Reaction {
                index,
                source,
                target,
            });
        }
        Ok(ReactionNetwork {
            species,
            complexes,
            reactions: out,
        })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    pub fn complex_count(&self) -> usize {
        self.complexes.len()
    }

    pub fn reaction_count(&self) -> usize {
        self.reactions.len()
    }

    pub fn complex(&self, i: usize) -> &Complex {
        &self.complexes[i]
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn complex_index(&self, c: &Complex) -> Option<usize> {
        self.complexes.iter().position(|x| x == c)
    }

    pub fn source(&self, k: usize) -> &Complex {
        &self.complexes[self.reactions[k].source]
    }

    pub fn target(&self, k: usize) -> &Complex {
        &self.complexes[self.reactions[k].target]
    }

    pub fn complex_name(&self, i: usize) -> String {
        self.complexes[i].display(&self.species).to_string()
    }

    pub fn reaction_vector(&self, k: usize) -> Vec<i64> {
        let (s, t) = (self.source(k), self.target(k));
        s.coeffs()
            .iter()
            .zip(t.coeffs())
            .map(|(&a, &b)| b as i64 - a as i64)
            .collect()
    }

    pub fn stoich_matrix(&self) -> StoichMatrix {
        let m = self.species_count();
        let r = self.reaction_count();
        let mut g = StoichMatrix::zeros(m, r);
        for k in 0..r {
            for (i, v) in self.reaction_vector(k).into_iter().enumerate() {
                g.set(i, k, v);
            }
        }
        g
    }

    fn check_len(&self, len: usize) -> Result<(), ModelError> {
        if len != self.species_count() {
            return Err(ModelError::LengthMismatch {
                expected: self.species_count(),
                found: len,
            });
        }
        Ok(())
    }

    /// Fires reaction `k` at `state`. `Ok(None)` means the source is not charged.
    pub fn fire(&self, state: &State, k: usize) -> Result<Option<State>, ModelError> {
        self.check_len(state.0.len())?;
        let reaction = self
            .reactions
            .get(k)
            .ok_or(ModelError::InvalidReaction {
                index: k,
                count: self.reaction_count(),
            })?;
        Ok(self.fire_unchecked(state, reaction))
    }

    pub(crate) fn fire_unchecked(&self, state: &State, reaction: &Reaction) -> Option<State> {
        let src = &self.complexes[reaction.source];
        if !charged(src, state) {
            return None;
        }
        let tgt = &self.complexes[reaction.target];
        let counts = state
            .0
            .iter()
            .zip(src.coeffs().iter().zip(tgt.coeffs()))
            .map(|(&x, (&s, &t))| x - s + t)
            .collect();
        Some(State(counts))
    }

    pub fn species_names(&self) -> Vec<String> {
        self.species.iter().map(|s| s.name.clone()).collect()
    }
}

fn charged(y: &Complex, x: &State) -> bool {
    y.0.iter().zip(&x.0).all(|(a, b)| a <= b)
}

/// True iff `y` is charged at `x`, i.e. `x >= y` componentwise.
pub fn is_charged(y: &Complex, x: &State) -> Result<bool, ModelError> {
    if y.len() != x.0.len() {
        return Err(ModelError::LengthMismatch {
            expected: y.len(),
            found: x.0.len(),
        });
    }
    Ok(charged(y, x))
}
