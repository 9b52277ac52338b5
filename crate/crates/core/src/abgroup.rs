//! Finitely generated abelian groups in invariant-factor form.
//!
//! A group is `Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with `t_1 | ... | t_k`,
//! `t_i ≥ 2`. Elements are coordinate vectors in that decomposition.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{
    invert_unimodular, row_lattice_basis, smith_normal_form, solve_integer_system, IntMatrix,
    LatticeBasis,
};

/// Change of basis between presentation generators and invariant-factor
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// Relations as rows, one column per generator.
    pub relations: IntMatrix,
    /// Maps generator coordinates to invariant-factor coordinates
    /// (rows: free coordinates first, then torsion).
    pub to_invariant: IntMatrix,
    /// Columns are generator-coordinate representatives of the canonical
    /// basis elements.
    pub from_invariant: IntMatrix,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::json::big_vec")]
    pub torsion_factors: Vec<BigInt>,
    #[serde(skip)]
    pub presentation: Option<Presentation>,
}

// Equality is isomorphism type; the stored presentation is bookkeeping.
impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion_factors == other.torsion_factors
    }
}

impl Eq for FgAbelianGroup {}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion_factors.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupElement {
    #[serde(with = "crate::json::big_vec")]
    pub free_part: Vec<BigInt>,
    #[serde(with = "crate::json::big_vec")]
    pub torsion_part: Vec<BigInt>,
}

impl GroupElement {
    /// Concatenated coordinates, free part first.
    pub fn coordinates(&self) -> Vec<BigInt> {
        self.free_part
            .iter()
            .chain(&self.torsion_part)
            .cloned()
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free_part.iter().chain(&self.torsion_part).all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementOrder {
    Finite(#[serde(with = "crate::json::big")] BigInt),
    Infinite,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion_factors: Vec::new(),
            presentation: None,
        }
    }

    pub fn cyclic(order: u64) -> Self {
        match order {
            0 => Self::free(1),
            1 => Self::trivial(),
            t => Self {
                free_rank: 0,
                torsion_factors: vec![BigInt::from(t)],
                presentation: None,
            },
        }
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/orders[i]`; orders may be arbitrary
    /// positive integers (1 is dropped, 0 counts as a free summand).
    pub fn from_cyclic_orders(free: usize, orders: &[BigInt]) -> Self {
        let n = free + orders.len();
        let mut diag = vec![BigInt::zero(); n];
        for (i, t) in orders.iter().enumerate() {
            diag[free + i] = t.clone();
        }
        let mut g = Self::from_presentation(&IntMatrix::diagonal(n, n, &diag));
        g.presentation = None;
        g
    }

    /// Cokernel of the relation matrix (rows are relations among the column
    /// generators), with the change of basis recorded.
    pub fn from_presentation(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let n = relations.cols();
        let diag = snf.diagonal();
        let d_at = |i: usize| diag.get(i).cloned().unwrap_or_else(BigInt::zero);

        // rowspace(R) = rowspace(D V^{-1}), so y = x V has relations d_i y_i = 0
        let v_inv = invert_unimodular(&snf.v).expect("Smith transforms are unimodular");
        let free_idx: Vec<usize> = (0..n).filter(|&i| d_at(i).is_zero()).collect();
        let tors_idx: Vec<usize> = (0..n)
            .filter(|&i| {
                let d = d_at(i);
                !d.is_zero() && !d.is_one()
            })
            .collect();
        let order: Vec<usize> = free_idx.iter().chain(&tors_idx).copied().collect();
        let to_invariant = snf.v.transpose().select_rows(&order);
        let from_invariant = v_inv.select_rows(&order).transpose();

        Self {
            free_rank: free_idx.len(),
            torsion_factors: tors_idx.iter().map(|&i| d_at(i)).collect(),
            presentation: Some(Presentation {
                relations: relations.clone(),
                to_invariant,
                from_invariant,
            }),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of cyclic summands.
    pub fn num_summands(&self) -> usize {
        self.free_rank + self.torsion_factors.len()
    }

    /// Coordinate moduli: zero for free summands, `t_i` for torsion.
    pub fn moduli(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion_factors.iter().cloned())
            .collect()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion_factors.iter().product())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors.iter().product()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free_part: vec![BigInt::zero(); self.free_rank],
            torsion_part: vec![BigInt::zero(); self.torsion_factors.len()],
        }
    }

    /// Builds an element from raw coordinates, reducing torsion entries.
    pub fn element(&self, coords: &[BigInt]) -> Result<GroupElement> {
        if coords.len() != self.num_summands() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group with {} summands",
                coords.len(),
                self.num_summands()
            )));
        }
        let (f, t) = coords.split_at(self.free_rank);
        Ok(GroupElement {
            free_part: f.to_vec(),
            torsion_part: t
                .iter()
                .zip(&self.torsion_factors)
                .map(|(x, m)| x.mod_floor(m))
                .collect(),
        })
    }

    pub fn from_i64(&self, coords: &[i64]) -> Result<GroupElement> {
        let c: Vec<BigInt> = coords.iter().map(|&x| x.into()).collect();
        self.element(&c)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.free_part.len() == self.free_rank
            && x.torsion_part.len() == self.torsion_factors.len()
            && x
                .torsion_part
                .iter()
                .zip(&self.torsion_factors)
                .all(|(v, t)| !v.is_negative_or_ge(t))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let c: Vec<BigInt> = x
            .coordinates()
            .iter()
            .zip(y.coordinates())
            .map(|(a, b)| a + b)
            .collect();
        self.element(&c).expect("same group")
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        let c: Vec<BigInt> = x.coordinates().iter().map(|a| -a).collect();
        self.element(&c).expect("same group")
    }

    pub fn scale(&self, k: &BigInt, x: &GroupElement) -> GroupElement {
        let c: Vec<BigInt> = x.coordinates().iter().map(|a| a * k).collect();
        self.element(&c).expect("same group")
    }

    /// Coordinates of a presentation-generator vector in invariant-factor form.
    pub fn element_from_generators(&self, x: &[BigInt]) -> Result<GroupElement> {
        let p = self
            .presentation
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("group carries no presentation".into()))?;
        self.element(&p.to_invariant.mul_vec(x)?)
    }

    /// A generator-coordinate representative of an element.
    pub fn element_to_generators(&self, x: &GroupElement) -> Result<Vec<BigInt>> {
        let p = self
            .presentation
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("group carries no presentation".into()))?;
        p.from_invariant.mul_vec(&x.coordinates())
    }

    /// Least `n ≥ 1` with `n·x = 0`, or infinite when the free part is nonzero.
    pub fn element_order(&self, x: &GroupElement) -> ElementOrder {
        if x.free_part.iter().any(|v| !v.is_zero()) {
            return ElementOrder::Infinite;
        }
        let n = x
            .torsion_part
            .iter()
            .zip(&self.torsion_factors)
            .fold(BigInt::one(), |acc, (v, t)| acc.lcm(&(t / v.gcd(t))));
        ElementOrder::Finite(n)
    }

    /// One representative per coset of `rG`, lexicographically minimal with
    /// nonnegative entries, listed in lexicographic order.
    pub fn cosets_mod_r(&self, r: u64) -> Result<Vec<GroupElement>> {
        if r == 0 {
            return Err(Error::InvalidInput("r must be positive".into()));
        }
        let r_big = BigInt::from(r);
        let ranges: Vec<BigInt> = std::iter::repeat_n(r_big.clone(), self.free_rank)
            .chain(self.torsion_factors.iter().map(|t| t.gcd(&r_big)))
            .collect();
        let raw = enumerate_box(&ranges)?;
        Ok(raw.into_iter().map(|c| self.element(&c).unwrap()).collect())
    }

    /// All elements `x` with `r·x = 0`; the free part is always zero.
    pub fn order_dividing_subgroup(&self, r: u64) -> Result<Vec<GroupElement>> {
        if r == 0 {
            return Err(Error::InvalidInput("r must be positive".into()));
        }
        let r_big = BigInt::from(r);
        // in Z/t the r-torsion is generated by t / gcd(r, t), of order gcd(r, t)
        let ranges: Vec<BigInt> = std::iter::repeat_n(BigInt::one(), self.free_rank)
            .chain(self.torsion_factors.iter().map(|t| t.gcd(&r_big)))
            .collect();
        let steps: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion_factors.iter().map(|t| t / t.gcd(&r_big)))
            .collect();
        let raw = enumerate_box(&ranges)?;
        Ok(raw
            .into_iter()
            .map(|c| {
                let scaled: Vec<BigInt> = c.iter().zip(&steps).map(|(a, s)| a * s).collect();
                self.element(&scaled).unwrap()
            })
            .collect())
    }

    /// Direct sum, recanonicalized.
    pub fn direct_sum(groups: &[FgAbelianGroup]) -> FgAbelianGroup {
        let free = groups.iter().map(|g| g.free_rank).sum();
        let orders: Vec<BigInt> = groups
            .iter()
            .flat_map(|g| g.torsion_factors.iter().cloned())
            .collect();
        Self::from_cyclic_orders(free, &orders)
    }

    /// Lists every element of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::InvalidInput("group is infinite".into()));
        }
        let raw = enumerate_box(&self.torsion_factors)?;
        Ok(raw.into_iter().map(|c| self.element(&c).unwrap()).collect())
    }

    /// Whether `y` lies in the subgroup generated by `gens`.
    pub fn in_span(&self, gens: &[GroupElement], y: &GroupElement) -> Result<bool> {
        // solve sum c_i g_i + sum k_j t_j e_j = y
        let n = self.num_summands();
        let mut cols: Vec<Vec<BigInt>> = gens.iter().map(GroupElement::coordinates).collect();
        for (j, t) in self.torsion_factors.iter().enumerate() {
            let mut c = vec![BigInt::zero(); n];
            c[self.free_rank + j] = t.clone();
            cols.push(c);
        }
        let a = IntMatrix::from_columns(&cols, n)?;
        Ok(solve_integer_system(&a, &y.coordinates())?
            .solution()
            .is_some())
    }
}

/// Enumerates the box `∏ [0, ranges[i])` in lexicographic order.
fn enumerate_box(ranges: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let count: BigInt = ranges.iter().product();
    let count = count
        .to_usize()
        .filter(|&c| c <= 50_000_000)
        .ok_or_else(|| Error::InvalidInput(format!("{count} elements is too many to list")))?;
    let sizes: Vec<usize> = ranges.iter().map(|x| x.to_usize().unwrap()).collect();
    let mut out = Vec::with_capacity(count);
    let mut idx = vec![0usize; sizes.len()];
    for _ in 0..count {
        out.push(idx.iter().map(|&k| BigInt::from(k)).collect());
        for pos in (0..sizes.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
    Ok(out)
}

trait RangeCheck {
    fn is_negative_or_ge(&self, bound: &BigInt) -> bool;
}

impl RangeCheck for BigInt {
    fn is_negative_or_ge(&self, bound: &BigInt) -> bool {
        *self < BigInt::zero() || self >= bound
    }
}

/// `L_cycles / L_boundaries` for lattices `L_boundaries ⊆ L_cycles ⊆ Z^n`,
/// with explicit coordinates. Used for cohomology with coefficients.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbelianGroup,
    /// Basis of the cycle lattice.
    pub cycles: LatticeBasis,
}

impl Subquotient {
    /// `cycle_generators` must span a lattice containing every boundary
    /// generator.
    pub fn new(
        ambient: usize,
        cycle_generators: &[Vec<BigInt>],
        boundary_generators: &[Vec<BigInt>],
    ) -> Result<Self> {
        let gens = IntMatrix::from_rows(cycle_generators.to_vec(), ambient)?;
        let cycles = row_lattice_basis(&gens);
        let k = cycles.rank();
        let basis_t = cycles.as_rows().transpose();
        let mut rel_rows = Vec::with_capacity(boundary_generators.len());
        for b in boundary_generators {
            let c = solve_integer_system(&basis_t, b)?
                .into_solution()
                .ok_or_else(|| {
                    Error::InvalidInput("boundary generator outside the cycle lattice".into())
                })?;
            rel_rows.push(c);
        }
        let relations = IntMatrix::from_rows(rel_rows, k)?;
        Ok(Self {
            group: FgAbelianGroup::from_presentation(&relations),
            cycles,
        })
    }

    /// Class of a cycle vector, or `None` if it is not a cycle.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Option<GroupElement>> {
        match self.cycles.coordinates(v)? {
            Some(c) => Ok(Some(self.group.element_from_generators(&c)?)),
            None => Ok(None),
        }
    }

    /// An ambient representative of a class.
    pub fn representative(&self, x: &GroupElement) -> Result<Vec<BigInt>> {
        let c = self.group.element_to_generators(x)?;
        self.cycles.as_rows().vec_mul(&c)
    }

    /// Representatives of the canonical generators, in coordinate order.
    pub fn generator_representatives(&self) -> Result<Vec<Vec<BigInt>>> {
        (0..self.group.num_summands())
            .map(|i| {
                let mut c = vec![BigInt::zero(); self.group.num_summands()];
                c[i] = BigInt::one();
                let e = self.group.element(&c)?;
                self.representative(&e)
            })
            .collect()
    }
}
