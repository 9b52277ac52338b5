use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form `H = U * B` with `U` unimodular.
///
/// Nonzero rows of `H` come first; each has a positive pivot strictly to the
/// right of the previous row's pivot, and the entries above a pivot are
/// reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite_normal_form(b: &IntMatrix) -> HermiteForm {
    let (m, n) = b.shape();
    let mut h = b.clone();
    let mut u = IntMatrix::identity(m);
    let mut row = 0;
    let mut pivots = Vec::new();

    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let pick = (row..m)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&i, &j| h[(i, col)].abs().cmp(&h[(j, col)].abs()));
            let Some(p) = pick else { break };
            h.swap_rows(row, p);
            u.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, col)] / &h[(row, col)]);
                h.add_row_multiple(i, row, &q);
                u.add_row_multiple(i, row, &q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        for i in 0..row {
            let q = -h[(i, col)].div_floor(&h[(row, col)]);
            h.add_row_multiple(i, row, &q);
            u.add_row_multiple(i, row, &q);
        }
        pivots.push(col);
        row += 1;
    }
    HermiteForm {
        h,
        u,
        rank: row,
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn hnf_is_echelon_and_certified() {
        let b = IntMatrix::from_i64_rows(&[[2, 3, 1], [4, 1, 0], [6, 4, 1]]);
        let f = hermite_normal_form(&b);
        assert_eq!(f.u.mul(&b), f.h);
        assert_eq!(f.u.determinant().unwrap().abs(), BigInt::from(1));
        assert_eq!(f.rank, 2);
        for (r, &c) in f.pivots.iter().enumerate() {
            assert!(f.h[(r, c)] > BigInt::zero());
            for above in 0..r {
                assert!(f.h[(above, c)] >= BigInt::zero() && f.h[(above, c)] < f.h[(r, c)]);
            }
        }
        assert!(f.h.row(2).iter().all(Zero::is_zero));
    }
}
