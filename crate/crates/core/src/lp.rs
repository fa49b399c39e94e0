//! Exact rational feasibility with checkable certificates.
//!
//! A [`LinearSystem`] over free variables `x` holds equalities `a·x = b` and
//! inequalities `g·x >= h`. Sign constraints are ordinary inequality rows, so
//! an infeasibility proof is a single multiplier vector: free multipliers on
//! the equalities, nonnegative ones on the inequalities, combining the rows
//! into `0 >= 1`.
//!
//! The solver is a dense Phase-I simplex with Bland's rule over
//! `BigRational`. When the auxiliary optimum is positive, the final simplex
//! multipliers are exactly such a combination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint has {found} coefficients, system has {expected} variables")]
    Dimension { expected: usize, found: usize },
    #[error("internal solver failure: {0}")]
    Internal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate has {found} multipliers, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("inequality multiplier {0} is negative")]
    NegativeMultiplier(usize),
    #[error("combination leaves a nonzero coefficient on variable {0}")]
    NonzeroCombination(usize),
    #[error("combined right-hand side is not positive")]
    NonpositiveBound,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointViolation {
    #[error("point has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("equality {0} violated")]
    Equality(usize),
    #[error("inequality {0} violated")]
    Inequality(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

impl Constraint {
    fn eval(&self, x: &[Q]) -> Q {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, _)| !a.is_zero())
            .fold(Q::zero(), |acc, (a, v)| acc + a * v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    num_vars: usize,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub equality: Vec<Q>,
    pub inequality: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Q]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn farkas(&self) -> Option<&FarkasCertificate> {
        match self {
            Feasibility::Feasible(_) => None,
            Feasibility::Infeasible(c) => Some(c),
        }
    }
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    fn check(&self, coeffs: &[Q]) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars {
            return Err(LpError::Dimension {
                expected: self.num_vars,
                found: coeffs.len(),
            });
        }
        Ok(())
    }

    /// Adds `coeffs·x = rhs`; returns the row index.
    pub fn add_equality(&mut self, coeffs: Vec<Q>, rhs: Q) -> Result<usize, LpError> {
        self.check(&coeffs)?;
        self.equalities.push(Constraint { coeffs, rhs });
        Ok(self.equalities.len() - 1)
    }

    /// Adds `coeffs·x >= rhs`; returns the row index.
    pub fn add_inequality(&mut self, coeffs: Vec<Q>, rhs: Q) -> Result<usize, LpError> {
        self.check(&coeffs)?;
        self.inequalities.push(Constraint { coeffs, rhs });
        Ok(self.inequalities.len() - 1)
    }

    /// Adds `x_var >= rhs`.
    pub fn add_lower_bound(&mut self, var: usize, rhs: Q) -> usize {
        let mut coeffs = vec![Q::zero(); self.num_vars];
        coeffs[var] = Q::one();
        self.inequalities.push(Constraint { coeffs, rhs });
        self.inequalities.len() - 1
    }

    /// Exact membership check.
    pub fn check_point(&self, x: &[Q]) -> Result<(), PointViolation> {
        if x.len() != self.num_vars {
            return Err(PointViolation::Dimension {
                expected: self.num_vars,
                found: x.len(),
            });
        }
        for (i, c) in self.equalities.iter().enumerate() {
            if c.eval(x) != c.rhs {
                return Err(PointViolation::Equality(i));
            }
        }
        for (i, c) in self.inequalities.iter().enumerate() {
            if c.eval(x) < c.rhs {
                return Err(PointViolation::Inequality(i));
            }
        }
        Ok(())
    }

    /// Decides feasibility. Either witness is re-checked before returning.
    pub fn solve(&self) -> Result<Feasibility, LpError> {
        let outcome = Simplex::new(self).run()?;
        match &outcome {
            Feasibility::Feasible(x) => self
                .check_point(x)
                .map_err(|e| LpError::Internal(format!("witness rejected: {e}")))?,
            Feasibility::Infeasible(cert) => cert
                .verify(self)
                .map_err(|e| LpError::Internal(format!("Farkas certificate rejected: {e}")))?,
        }
        Ok(outcome)
    }
}

impl FarkasCertificate {
    /// Re-derives `0 >= positive` from the rows of `sys`.
    pub fn verify(&self, sys: &LinearSystem) -> Result<(), CertificateError> {
        if self.equality.len() != sys.equalities.len() {
            return Err(CertificateError::Length {
                expected: sys.equalities.len(),
                found: self.equality.len(),
            });
        }
        if self.inequality.len() != sys.inequalities.len() {
            return Err(CertificateError::Length {
                expected: sys.inequalities.len(),
                found: self.inequality.len(),
            });
        }
        if let Some(j) = self.inequality.iter().position(|z| z.is_negative()) {
            return Err(CertificateError::NegativeMultiplier(j));
        }
        let mut combo = vec![Q::zero(); sys.num_vars];
        let mut bound = Q::zero();
        let rows = sys
            .equalities
            .iter()
            .zip(&self.equality)
            .chain(sys.inequalities.iter().zip(&self.inequality));
        for (row, mult) in rows {
            if mult.is_zero() {
                continue;
            }
            for (acc, a) in combo.iter_mut().zip(&row.coeffs) {
                if !a.is_zero() {
                    *acc += mult * a;
                }
            }
            bound += mult * &row.rhs;
        }
        if let Some(v) = combo.iter().position(|c| !c.is_zero()) {
            return Err(CertificateError::NonzeroCombination(v));
        }
        if !bound.is_positive() {
            return Err(CertificateError::NonpositiveBound);
        }
        Ok(())
    }
}

/// Dense Phase-I tableau over `x = x⁺ - x⁻`, slacks and one artificial per row.
struct Simplex<'a> {
    sys: &'a LinearSystem,
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    signs: Vec<bool>,
    ncols: usize,
}

impl<'a> Simplex<'a> {
    fn new(sys: &'a LinearSystem) -> Self {
        let n = sys.num_vars;
        let mi = sys.inequalities.len();
        let nrows = sys.equalities.len() + mi;
        let art0 = 2 * n + mi;
        let ncols = art0 + nrows;
        let mut rows = Vec::with_capacity(nrows);
        let mut signs = Vec::with_capacity(nrows);
        let all = sys
            .equalities
            .iter()
            .map(|c| (c, None))
            .chain(sys.inequalities.iter().enumerate().map(|(t, c)| (c, Some(t))));
        for (i, (c, slack)) in all.enumerate() {
            let flip = c.rhs.is_negative();
            let s = |v: &Q| if flip { -v } else { v.clone() };
            let mut row = vec![Q::zero(); ncols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    row[j] = s(a);
                    row[n + j] = -s(a);
                }
            }
            if let Some(t) = slack {
                row[2 * n + t] = s(&-Q::one());
            }
            row[art0 + i] = Q::one();
            row[ncols] = s(&c.rhs);
            rows.push(row);
            signs.push(flip);
        }
        let mut obj = vec![Q::zero(); ncols + 1];
        for (j, o) in obj.iter_mut().enumerate() {
            if (art0..ncols).contains(&j) {
                continue;
            }
            for row in &rows {
                if !row[j].is_zero() {
                    *o -= &row[j];
                }
            }
        }
        let basis = (art0..ncols).collect();
        Simplex {
            sys,
            rows,
            obj,
            basis,
            signs,
            ncols,
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &piv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Q>| {
            let f = row[e].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let delta = &f * &prow[j];
                row[j] -= delta;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = e;
    }

    fn run(mut self) -> Result<Feasibility, LpError> {
        let rhs = self.ncols;
        while let Some(e) = (0..self.ncols).find(|&j| self.obj[j].is_negative()) {
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[e];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Err(LpError::Internal("auxiliary problem unbounded".into()));
            };
            self.pivot(r, e);
        }

        let n = self.sys.num_vars;
        let value = -self.obj[rhs].clone();
        if value.is_zero() {
            let mut x = vec![Q::zero(); n];
            for (i, &b) in self.basis.iter().enumerate() {
                let v = &self.rows[i][rhs];
                if b < n {
                    x[b] += v;
                } else if b < 2 * n {
                    x[b - n] -= v;
                }
            }
            return Ok(Feasibility::Feasible(x));
        }

        // simplex multipliers y_i = 1 - d(art_i); undo row sign flips, then
        // normalise so the combined bound is exactly 1
        let art0 = self.ncols - self.rows.len();
        let me = self.sys.equalities.len();
        let mut mult: Vec<Q> = (0..self.rows.len())
            .map(|i| {
                let y = Q::one() - &self.obj[art0 + i];
                if self.signs[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        for m in mult.iter_mut() {
            *m /= &value;
        }
        let inequality = mult.split_off(me);
        Ok(Feasibility::Infeasible(FarkasCertificate {
            equality: mult,
            inequality,
        }))
    }
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn to_primitive_integers(v: &[Q]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

pub fn to_rationals(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn direct_contradiction() {
        let mut sys = LinearSystem::new(1);
        sys.add_inequality(row(&[1]), q(1)).unwrap();
        sys.add_inequality(row(&[-1]), q(0)).unwrap();
        let out = sys.solve().unwrap();
        let cert = out.farkas().expect("infeasible");
        assert_eq!(cert.inequality, row(&[1, 1]));
        cert.verify(&sys).unwrap();
    }

    #[test]
    fn equal_pair_is_feasible() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(row(&[1, -1]), q(0)).unwrap();
        sys.add_inequality(row(&[1, 0]), q(1)).unwrap();
        let out = sys.solve().unwrap();
        assert_eq!(out.witness().unwrap(), row(&[1, 1]).as_slice());
    }

    #[test]
    fn dimension_mismatch() {
        let mut sys = LinearSystem::new(2);
        assert_eq!(
            sys.add_equality(row(&[1]), q(0)),
            Err(LpError::Dimension { expected: 2, found: 1 })
        );
    }

    #[test]
    fn negative_rhs_and_free_variables() {
        // x <= -3 and x >= -5, x free
        let mut sys = LinearSystem::new(1);
        sys.add_inequality(row(&[-1]), q(3)).unwrap();
        sys.add_inequality(row(&[1]), q(-5)).unwrap();
        let x = sys.solve().unwrap().witness().unwrap().to_vec();
        assert!(x[0] <= q(-3) && x[0] >= q(-5));
        // x <= -3 and x >= -2
        let mut bad = LinearSystem::new(1);
        bad.add_inequality(row(&[-1]), q(3)).unwrap();
        bad.add_inequality(row(&[1]), q(-2)).unwrap();
        bad.solve().unwrap().farkas().unwrap().verify(&bad).unwrap();
    }

    #[test]
    fn inconsistent_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(row(&[1, 1]), q(1)).unwrap();
        sys.add_equality(row(&[2, 2]), q(3)).unwrap();
        let cert = sys.solve().unwrap().farkas().unwrap().clone();
        cert.verify(&sys).unwrap();
        let mut corrupt = cert.clone();
        corrupt.equality[0] = q(0);
        assert!(corrupt.verify(&sys).is_err());
    }

    #[test]
    fn empty_system_is_feasible() {
        let sys = LinearSystem::new(3);
        assert_eq!(sys.solve().unwrap(), Feasibility::Feasible(row(&[0, 0, 0])));
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Q::new(1.into(), 2.into()), q(0), Q::new(3.into(), 4.into())];
        assert_eq!(to_primitive_integers(&v), vec![BigInt::from(2), 0.into(), 3.into()]);
        assert_eq!(to_primitive_integers(&row(&[0, 0])), vec![BigInt::from(0), 0.into()]);
    }

    #[test]
    fn point_violations_are_located() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(row(&[1, -1]), q(0)).unwrap();
        sys.add_inequality(row(&[1, 0]), q(1)).unwrap();
        assert_eq!(sys.check_point(&row(&[1, 2])), Err(PointViolation::Equality(0)));
        assert_eq!(sys.check_point(&row(&[0, 0])), Err(PointViolation::Inequality(0)));
        assert!(sys.check_point(&row(&[1])).is_err());
    }
}
