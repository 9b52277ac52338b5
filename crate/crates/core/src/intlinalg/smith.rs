use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// Certified Smith decomposition `U * A * V = D`.
///
/// `U` and `V` are unimodular, `D` is diagonal with nonnegative entries
/// `d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub original_shape: (usize, usize),
}

impl SmithDecomposition {
    /// Diagonal entries of `D`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Re-checks every certificate identity against the source matrix.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), String> {
        if a.shape() != self.original_shape {
            return Err("shape differs from the source".into());
        }
        let (m, n) = self.original_shape;
        if self.u.shape() != (m, m) || self.v.shape() != (n, n) || self.d.shape() != (m, n) {
            return Err("factor shapes are inconsistent".into());
        }
        if self.u.mul(a).mul(&self.v) != self.d {
            return Err("U*A*V != D".into());
        }
        for (name, w) in [("U", &self.u), ("V", &self.v)] {
            let det = w.determinant().map_err(|e| e.to_string())?;
            if det.abs() != BigInt::from(1) {
                return Err(format!("det({name}) = {det}"));
            }
        }
        if !self.d.is_diagonal() {
            return Err("D is not diagonal".into());
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return Err("negative invariant factor".into());
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            if !ok {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Smith normal form with unimodular transforms. Never fails; zero and
/// non-square matrices are fine.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = a.shape();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v, a.shape());
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(d, u, v, a.shape())
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, shape: (usize, usize)) -> SmithDecomposition {
    SmithDecomposition {
        u,
        v,
        d,
        original_shape: shape,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, a);
        assert_eq!(s.u, a);
        assert_eq!(s.v, a);
        s.verify(&a).unwrap();
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        s.verify(&a).unwrap();
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn two_by_two_example() {
        // Reference: gcd of entries is 2 and |det| = 8, so the factors are (2, 4).
        let a = IntMatrix::from_i64_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.invariant_factors(), ints(&[2, 4]));
    }

    #[test]
    fn empty_shapes() {
        for (m, n) in [(0, 0), (0, 3), (3, 0)] {
            let a = IntMatrix::zeros(m, n);
            smith_normal_form(&a).verify(&a).unwrap();
        }
    }

    #[test]
    fn divisibility_needs_row_mixing() {
        // diag(2, 3) has Smith form diag(1, 6)
        let a = IntMatrix::from_i64_rows(&[[2, 0], [0, 3]]);
        let s = smith_normal_form(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.invariant_factors(), ints(&[1, 6]));
    }
}
