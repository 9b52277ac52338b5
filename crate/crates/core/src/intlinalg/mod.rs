//! Exact integer linear algebra: Smith and Hermite forms, integer system
//! solving with infeasibility certificates, and lattice bases.
//!
//! Nothing in this module touches floating point.

mod hermite;
mod matrix;
mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use hermite::{hermite_normal_form, HermiteForm};
pub use matrix::{gcd_all, IntMatrix};
pub use smith::{smith_normal_form, SmithDecomposition};

use crate::error::{Error, Result};
use matrix::dot;

/// Proof that `A x = b` has no integer solution.
///
/// The row combination `u` satisfies `u A ≡ 0 (mod modulus)` entrywise while
/// `u b ≢ 0 (mod modulus)`. A modulus of zero means congruence is equality,
/// i.e. the system has no rational solution either.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfeasibilityCertificate {
    #[serde(with = "crate::json::big_vec")]
    pub combination: Vec<BigInt>,
    #[serde(with = "crate::json::big")]
    pub modulus: BigInt,
}

impl InfeasibilityCertificate {
    pub fn is_rational_obstruction(&self) -> bool {
        self.modulus.is_zero()
    }

    pub fn verify(&self, a: &IntMatrix, b: &[BigInt]) -> bool {
        let Ok(ua) = a.vec_mul(&self.combination) else {
            return false;
        };
        if b.len() != self.combination.len() {
            return false;
        }
        let ub = dot(&self.combination, b);
        let vanishes = |x: &BigInt| {
            if self.modulus.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(&self.modulus)
            }
        };
        ua.iter().all(vanishes) && !vanishes(&ub)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemSolution {
    Solution(Vec<BigInt>),
    Infeasible(InfeasibilityCertificate),
}

impl SystemSolution {
    pub fn solution(&self) -> Option<&[BigInt]> {
        match self {
            SystemSolution::Solution(x) => Some(x),
            SystemSolution::Infeasible(_) => None,
        }
    }

    pub fn into_solution(self) -> Option<Vec<BigInt>> {
        match self {
            SystemSolution::Solution(x) => Some(x),
            SystemSolution::Infeasible(_) => None,
        }
    }
}

/// Solves `A x = b` over the integers.
///
/// Feasibility is decided exactly through the Smith form; a negative answer
/// carries a checkable [`InfeasibilityCertificate`].
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Result<SystemSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    Ok(solve_with_smith(&snf, b))
}

pub(crate) fn solve_with_smith(snf: &SmithDecomposition, b: &[BigInt]) -> SystemSolution {
    let (m, n) = snf.original_shape;
    let c = snf.u.mul_vec(b).expect("shape checked by caller");
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c[i].is_zero() {
                return SystemSolution::Infeasible(InfeasibilityCertificate {
                    combination: snf.u.row(i).to_vec(),
                    modulus: BigInt::zero(),
                });
            }
        } else {
            let (q, r) = c[i].div_rem(&di);
            if !r.is_zero() {
                return SystemSolution::Infeasible(InfeasibilityCertificate {
                    combination: snf.u.row(i).to_vec(),
                    modulus: di,
                });
            }
            y[i] = q;
        }
    }
    SystemSolution::Solution(snf.v.mul_vec(&y).expect("square V"))
}

/// Saturated basis of the integer kernel `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank()..a.cols()).map(|j| snf.v.col(j)).collect()
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.determinant().is_ok_and(|d| d.abs().is_one())
}

/// Integer inverse of a unimodular matrix.
pub fn invert_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    if !is_unimodular(m) {
        return Err(Error::NotUnimodular);
    }
    // U M V = I, hence M^{-1} = V U
    let snf = smith_normal_form(m);
    debug_assert_eq!(snf.d, IntMatrix::identity(m.rows()));
    Ok(snf.v.mul(&snf.u))
}

/// A basis of a subgroup of `Z^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LatticeBasis {
    pub ambient_dim: usize,
    #[serde(with = "crate::json::big_vec2")]
    pub basis_vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis_vectors.len()
    }

    /// Basis vectors as the rows of a matrix.
    pub fn as_rows(&self) -> IntMatrix {
        IntMatrix::from_rows(self.basis_vectors.clone(), self.ambient_dim)
            .expect("basis vectors have ambient length")
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let a = self.as_rows().transpose();
        Ok(solve_integer_system(&a, v)?.into_solution())
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }
}

/// Basis of the subgroup of `Z^cols` generated by the rows of `b`, in
/// Hermite normal form.
pub fn row_lattice_basis(b: &IntMatrix) -> LatticeBasis {
    let hnf = hermite_normal_form(b);
    LatticeBasis {
        ambient_dim: b.cols(),
        basis_vectors: (0..hnf.rank).map(|i| hnf.h.row(i).to_vec()).collect(),
    }
}

/// Basis of the subgroup of `Z^rows` generated by the columns of `b`.
pub fn column_lattice_basis(b: &IntMatrix) -> LatticeBasis {
    row_lattice_basis(&b.transpose())
}

/// Largest absolute entry of a vector.
pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
}
