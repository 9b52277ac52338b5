//! Replacing a bilinear form by a square invertible one with the same
//! achievable values.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{hermite_normal_form, invert_unimodular, IntMatrix};

/// `B''` has as rows a basis of the row lattice of `B` and `B'` has as
/// columns a basis of the column lattice of `B''`. The witnesses satisfy
///
/// * `B'' = R·B` and `B = S·B''`
/// * `B' = B''·C` and `B'' = B'·T`
///
/// so `uᵀBv = (Sᵀu)ᵀ B' (Tv)` and `u'ᵀB'v' = (Rᵀu')ᵀ B (Cv')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SquareForm {
    pub b_row_basis: IntMatrix,
    pub b_prime: IntMatrix,
    pub r: IntMatrix,
    pub s: IntMatrix,
    pub c: IntMatrix,
    pub t: IntMatrix,
}

impl SquareForm {
    pub fn size(&self) -> usize {
        self.b_prime.rows()
    }

    /// Transports `(u, v)` for `B` to `(u', v')` for `B'`.
    pub fn forward(&self, u: &[BigInt], v: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        Ok((self.s.vec_mul(u)?, self.t.mul_vec(v)?))
    }

    /// Transports `(u', v')` for `B'` to `(u, v)` for `B`.
    pub fn backward(&self, u: &[BigInt], v: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        Ok((self.r.vec_mul(u)?, self.c.mul_vec(v)?))
    }

    /// Re-checks every witness identity and that `B'` is square invertible.
    pub fn verify(&self, b: &IntMatrix) -> std::result::Result<(), String> {
        let checks = [
            (self.r.try_mul(b), &self.b_row_basis, "B'' = R B"),
            (self.s.try_mul(&self.b_row_basis), b, "B = S B''"),
            (self.b_row_basis.try_mul(&self.c), &self.b_prime, "B' = B'' C"),
            (self.b_prime.try_mul(&self.t), &self.b_row_basis, "B'' = B' T"),
        ];
        for (lhs, rhs, what) in checks {
            match lhs {
                Ok(m) if &m == rhs => {}
                _ => return Err(format!("{what} fails")),
            }
        }
        if !self.b_prime.is_square() {
            return Err("B' is not square".into());
        }
        match self.b_prime.determinant() {
            Ok(d) if d != BigInt::from(0) => Ok(()),
            _ => Err("B' is singular".into()),
        }
    }
}

pub fn squareify(b: &IntMatrix) -> Result<SquareForm> {
    if b.is_zero() {
        return Err(Error::InvalidInput("cannot squareify the zero form".into()));
    }
    let rows = hermite_normal_form(b);
    let t = rows.rank;
    let keep: Vec<usize> = (0..t).collect();
    let b2 = rows.h.select_rows(&keep);
    let r = rows.u.select_rows(&keep);
    let s = invert_unimodular(&rows.u)?.select_cols(&keep);

    // column lattice of B'' through the row form of its transpose
    let cols = hermite_normal_form(&b2.transpose());
    debug_assert_eq!(cols.rank, t);
    let b_prime = cols.h.select_rows(&keep).transpose();
    let c = cols.u.select_rows(&keep).transpose();
    let t_mat = invert_unimodular(&cols.u)?.select_cols(&keep).transpose();

    Ok(SquareForm {
        b_row_basis: b2,
        b_prime,
        r,
        s,
        c,
        t: t_mat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        let b = IntMatrix::from_i64_rows(&[[2, 0], [4, 0]]);
        let sq = squareify(&b).unwrap();
        assert_eq!(sq.b_prime, IntMatrix::from_i64_rows(&[[2]]));
        sq.verify(&b).unwrap();

        let b = IntMatrix::from_i64_rows(&[[0, 1], [0, 0]]);
        let sq = squareify(&b).unwrap();
        assert_eq!(sq.b_prime, IntMatrix::from_i64_rows(&[[1]]));
        sq.verify(&b).unwrap();

        assert!(squareify(&IntMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn invertible_input_keeps_its_determinant() {
        let b = IntMatrix::from_i64_rows(&[[2, 1], [1, 3]]);
        let sq = squareify(&b).unwrap();
        sq.verify(&b).unwrap();
        assert_eq!(sq.size(), 2);
        use num_traits::Signed;
        assert_eq!(sq.b_prime.determinant().unwrap().abs(), BigInt::from(5));
    }

    #[test]
    fn transports_preserve_values() {
        let b = IntMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6]]);
        let sq = squareify(&b).unwrap();
        sq.verify(&b).unwrap();
        let (u, v) = (ints(&[1, -2]), ints(&[3, 0, -1]));
        let value = b.vec_mul(&u).unwrap().iter().zip(&v).map(|(x, y)| x * y).sum::<BigInt>();
        let (u2, v2) = sq.forward(&u, &v).unwrap();
        let value2 = sq.b_prime.vec_mul(&u2).unwrap().iter().zip(&v2).map(|(x, y)| x * y).sum::<BigInt>();
        assert_eq!(value, value2);
    }
}
