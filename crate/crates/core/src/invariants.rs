//! Conservation tests and nonnegative kernel generators.
//!
//! Strict positivity `c > 0` is encoded as `c >= 1`; both systems are
//! homogeneous in `c`, so the encoding loses nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::lp::{q, Feasibility, LinearSystem, LpError, Q};
use crate::model::StoichMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConservationKind {
    /// `c^T Γ = 0`
    Conservative,
    /// `c^T Γ <= 0`
    Subconservative,
}

/// The system over `c` (one variable per species) deciding `kind`.
///
/// Rows are laid out as: one row per reaction column (equalities for
/// `Conservative`, `-c^T Γ_k >= 0` inequalities for `Subconservative`), then
/// the lower bounds `c_i >= 1` in species order.
pub fn conservation_system(gamma: &StoichMatrix, kind: ConservationKind) -> LinearSystem {
    let m = gamma.rows();
    let mut sys = LinearSystem::new(m);
    for k in 0..gamma.cols() {
        let col = gamma.column(k);
        let res = match kind {
            ConservationKind::Conservative => {
                sys.add_equality(col.iter().map(|&g| q(g)).collect(), q(0))
            }
            ConservationKind::Subconservative => {
                sys.add_inequality(col.iter().map(|&g| q(-g)).collect(), q(0))
            }
        };
        res.expect("row length equals species count");
    }
    for i in 0..m {
        sys.add_lower_bound(i, q(1));
    }
    sys
}

pub fn is_conservative(gamma: &StoichMatrix) -> Result<Feasibility, LpError> {
    conservation_system(gamma, ConservationKind::Conservative).solve()
}

pub fn is_subconservative(gamma: &StoichMatrix) -> Result<Feasibility, LpError> {
    conservation_system(gamma, ConservationKind::Subconservative).solve()
}

/// Extreme rays of a pointed cone, as primitive nonnegative integer vectors in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<BigInt>>,
}

impl ConeGenerators {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Rays as `i64` rows, if every entry fits.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.rays
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn of(v: &[BigInt]) -> Self {
        let mut w = vec![0u64; v.len().div_ceil(64).max(1)];
        for (j, x) in v.iter().enumerate() {
            if !x.is_zero() {
                w[j / 64] |= 1 << (j % 64);
            }
        }
        Bits(w)
    }

    fn union(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }

    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Extreme rays of `{v >= 0 : A v = 0}` by double description, starting from
/// the orthant and intersecting one hyperplane at a time.
pub fn nonneg_kernel_generators(a: &StoichMatrix) -> ConeGenerators {
    let q_cols = a.cols();
    let mut rays: Vec<(Vec<BigInt>, Bits)> = (0..q_cols)
        .map(|j| {
            let mut v = vec![BigInt::zero(); q_cols];
            v[j] = BigInt::from(1);
            let b = Bits::of(&v);
            (v, b)
        })
        .collect();

    for i in 0..a.rows() {
        let row = a.row(i);
        if row.iter().all(|&x| x == 0) {
            continue;
        }
        let dot = |v: &[BigInt]| -> BigInt {
            row.iter()
                .zip(v)
                .filter(|(&c, x)| c != 0 && !x.is_zero())
                .map(|(&c, x)| BigInt::from(c) * x)
                .sum()
        };
        let vals: Vec<BigInt> = rays.iter().map(|(v, _)| dot(v)).collect();
        let mut next: Vec<(Vec<BigInt>, Bits)> = Vec::new();
        for (idx, (r, b)) in rays.iter().enumerate() {
            if vals[idx].is_zero() {
                next.push((r.clone(), b.clone()));
            }
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&t| vals[t].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&t| vals[t].is_negative()).collect();
        for &p in &pos {
            for &n in &neg {
                let sup = rays[p].1.union(&rays[n].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, (_, b))| t == p || t == n || !b.subset_of(&sup));
                if !adjacent {
                    continue;
                }
                let (ap, an) = (&vals[p], -&vals[n]);
                let v: Vec<BigInt> = rays[p]
                    .0
                    .iter()
                    .zip(&rays[n].0)
                    .map(|(x, y)| &an * x + ap * y)
                    .collect();
                let v = primitive(v);
                let b = Bits::of(&v);
                next.push((v, b));
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|(v, _)| v).collect();
    out.sort();
    out.dedup();
    ConeGenerators { rays: out }
}

/// Nonnegative conservation vectors: rays of `{c >= 0 : Γ^T c = 0}`.
pub fn p_invariants(gamma: &StoichMatrix) -> ConeGenerators {
    nonneg_kernel_generators(&gamma.transpose())
}

/// Nonnegative reaction-count cycles: rays of `{v >= 0 : Γ v = 0}`.
pub fn t_invariants(gamma: &StoichMatrix) -> ConeGenerators {
    nonneg_kernel_generators(gamma)
}

/// True iff `v` lies in the cone spanned by `gens`, decided exactly.
pub fn in_cone(gens: &ConeGenerators, v: &[Q]) -> Result<bool, LpError> {
    let n = gens.len();
    let mut sys = LinearSystem::new(n);
    for j in 0..v.len() {
        let coeffs = gens.rays.iter().map(|r| Q::from_integer(r[j].clone())).collect();
        sys.add_equality(coeffs, v[j].clone())?;
    }
    for t in 0..n {
        sys.add_lower_bound(t, q(0));
    }
    Ok(sys.solve()?.is_feasible())
}
