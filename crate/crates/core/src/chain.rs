//! Finite free chain complexes over the integers and their (co)homology.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{FgAbelianGroup, Subquotient};
use crate::error::{Error, Result};
use crate::intlinalg::{kernel_basis, smith_normal_form, IntMatrix};

/// `boundaries[n]` is the matrix of `∂_n : C_n → C_{n-1}` (rows index
/// `C_{n-1}`, columns index `C_n`); `∂_0` has zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `higher[k]` is `∂_{k+1}`; shapes must chain together.
    pub fn new(ranks: Vec<usize>, higher: Vec<IntMatrix>) -> Result<Self> {
        if higher.len() + 1 != ranks.len().max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{} chain groups need {} boundary maps, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                higher.len()
            )));
        }
        let mut boundaries = vec![IntMatrix::zeros(0, ranks.first().copied().unwrap_or(0))];
        for (k, m) in higher.into_iter().enumerate() {
            if m.shape() != (ranks[k], ranks[k + 1]) {
                return Err(Error::DimensionMismatch(format!(
                    "boundary in degree {} has shape {:?}, expected {:?}",
                    k + 1,
                    m.shape(),
                    (ranks[k], ranks[k + 1])
                )));
            }
            boundaries.push(m);
        }
        Ok(Self { ranks, boundaries })
    }

    /// Highest degree carrying a chain group (possibly of rank zero).
    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_n`, with the empty map outside the stored range.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        match self.boundaries.get(n) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.rank(n.wrapping_sub(1)), self.rank(n)),
        }
    }

    /// Checks `∂_{n-1} ∘ ∂_n = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len())
            .all(|n| self.boundaries[n - 1].mul(&self.boundaries[n]).is_zero())
    }

    pub fn homology(&self, n: usize) -> FgAbelianGroup {
        let out = smith_normal_form(&self.boundary(n)).rank();
        let incoming = smith_normal_form(&self.boundary(n + 1));
        let free = self.rank(n) - out - incoming.rank();
        let torsion: Vec<BigInt> = incoming
            .invariant_factors()
            .into_iter()
            .filter(|t| !t.is_one())
            .collect();
        FgAbelianGroup::from_cyclic_orders(free, &torsion)
    }

    /// Homology in every degree up to the top.
    pub fn all_homology(&self) -> Vec<FgAbelianGroup> {
        (0..self.ranks.len()).map(|n| self.homology(n)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(n, &r)| if n % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// `H^n(C; π)` from integral homology by universal coefficients.
    pub fn cohomology(&self, n: usize, pi: &FgAbelianGroup) -> FgAbelianGroup {
        let hom = hom_group(&self.homology(n), pi);
        let ext = match n.checked_sub(1) {
            Some(m) => ext_group(&self.homology(m), pi),
            None => FgAbelianGroup::trivial(),
        };
        FgAbelianGroup::direct_sum(&[hom, ext])
    }

    /// Least `d` with `H_n = 0` for `n > d` and `H_d` torsion-free; `-1`
    /// when all homology vanishes.
    pub fn cohomological_dimension(&self) -> i64 {
        let h = self.all_homology();
        let Some(top) = h.iter().rposition(|g| !g.is_trivial()) else {
            return -1;
        };
        if h[top].torsion_factors.is_empty() {
            top as i64
        } else {
            top as i64 + 1
        }
    }

    /// Explicit `H^n(C; π)` as a subquotient of the cochain lattice, with
    /// coordinates indexed `cell * summands + component`.
    pub fn explicit_cohomology(&self, n: usize, pi: &FgAbelianGroup) -> Result<Subquotient> {
        let moduli = pi.moduli();
        let nc = moduli.len();
        let dim = self.rank(n) * nc;
        let delta = coboundary_with_coefficients(&self.boundary(n + 1), nc);

        // cocycles: δφ ≡ 0 modulo the component moduli
        let torsion_rows: Vec<(usize, BigInt)> = (0..self.rank(n + 1))
            .flat_map(|cell| {
                moduli
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| !t.is_zero())
                    .map(move |(c, t)| (cell * nc + c, t.clone()))
            })
            .collect();
        let mut ext = IntMatrix::zeros(delta.rows(), dim + torsion_rows.len());
        for i in 0..delta.rows() {
            for j in 0..dim {
                ext[(i, j)] = delta[(i, j)].clone();
            }
        }
        for (k, (row, t)) in torsion_rows.iter().enumerate() {
            ext[(*row, dim + k)] = -t;
        }
        let cycles: Vec<Vec<BigInt>> = kernel_basis(&ext)
            .into_iter()
            .map(|v| v[..dim].to_vec())
            .collect();

        let mut boundaries: Vec<Vec<BigInt>> = match n.checked_sub(1) {
            Some(_) => coboundary_with_coefficients(&self.boundary(n), nc)
                .transpose()
                .to_rows(),
            None => Vec::new(),
        };
        for cell in 0..self.rank(n) {
            for (c, t) in moduli.iter().enumerate() {
                if !t.is_zero() {
                    let mut v = vec![BigInt::zero(); dim];
                    v[cell * nc + c] = t.clone();
                    boundaries.push(v);
                }
            }
        }
        Subquotient::new(dim, &cycles, &boundaries)
    }
}

/// Coboundary `C^n → C^{n+1}` with coefficients in a group with `nc`
/// cyclic summands, from the boundary `∂_{n+1}`.
pub(crate) fn coboundary_with_coefficients(boundary: &IntMatrix, nc: usize) -> IntMatrix {
    boundary.transpose().kron_identity(nc)
}

/// `Hom(G, π)` for finitely generated `G` and `π`.
pub fn hom_group(g: &FgAbelianGroup, pi: &FgAbelianGroup) -> FgAbelianGroup {
    let free = g.free_rank * pi.free_rank;
    let mut orders = Vec::new();
    for _ in 0..g.free_rank {
        orders.extend(pi.torsion_factors.iter().cloned());
    }
    for a in &g.torsion_factors {
        for t in &pi.torsion_factors {
            orders.push(a.gcd(t));
        }
    }
    FgAbelianGroup::from_cyclic_orders(free, &orders)
}

/// `Ext(G, π)`; only the torsion of `G` contributes.
pub fn ext_group(g: &FgAbelianGroup, pi: &FgAbelianGroup) -> FgAbelianGroup {
    let mut orders = Vec::new();
    for a in &g.torsion_factors {
        for _ in 0..pi.free_rank {
            orders.push(a.clone());
        }
        for t in &pi.torsion_factors {
            orders.push(a.gcd(t));
        }
    }
    FgAbelianGroup::from_cyclic_orders(0, &orders)
}
