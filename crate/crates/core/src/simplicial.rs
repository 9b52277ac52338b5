//! Finite simplicial complexes and pairs, their integral and coefficient
//! (co)homology, and explicit cocycle extension.
//!
//! Simplices are oriented by their sorted vertex labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abgroup::{FgAbelianGroup, GroupElement};
use crate::chain::{coboundary_with_coefficients, ChainComplex};
use crate::error::{Error, Result};
use crate::intlinalg::{solve_integer_system, IntMatrix};

pub type Simplex = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `by_dim[k]` lists the k-simplices in sorted order.
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl SimplicialComplex {
    /// Face closure of the given simplices. Vertex lists are sorted and
    /// deduplicated; empty lists are ignored.
    pub fn from_maximal(simplices: &[Simplex]) -> Self {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            close_faces(&s, &mut all);
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        let index = by_dim
            .iter()
            .flat_map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        Self { by_dim, index }
    }

    pub fn empty() -> Self {
        Self::from_maximal(&[])
    }

    /// Dimension, or `-1` for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.by_dim.len() as i64 - 1
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index.contains_key(s)
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn num_simplices(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Simplices not contained in any larger simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        let mut out = Vec::new();
        for k in (0..self.by_dim.len()).rev() {
            for s in &self.by_dim[k] {
                if !covered.contains(s) {
                    out.push(s.clone());
                }
            }
            if k > 0 {
                for s in &self.by_dim[k] {
                    for i in 0..s.len() {
                        let face = face(s, i);
                        let stored = &self.by_dim[k - 1][self.index[&face]];
                        covered.insert(stored);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.by_dim.iter().flatten().all(|s| other.contains(s))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.chain_complex().euler_characteristic()
    }

    /// `∂_k` restricted to simplices outside `sub` (which may be empty).
    fn relative_boundary(&self, sub: &SimplicialComplex, k: usize) -> IntMatrix {
        let cols: Vec<&Simplex> = self.simplices(k).iter().filter(|s| !sub.contains(s)).collect();
        let rows: Vec<&Simplex> = match k.checked_sub(1) {
            Some(j) => self.simplices(j).iter().filter(|s| !sub.contains(s)).collect(),
            None => Vec::new(),
        };
        let row_pos: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, s) in cols.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for i in 0..s.len() {
                if let Some(&r) = row_pos.get(&face(s, i)) {
                    m[(r, j)] = if i % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                }
            }
        }
        m
    }

    pub fn chain_complex(&self) -> ChainComplex {
        relative_chain_complex(self, &Self::empty())
    }
}

fn face(s: &[u32], i: usize) -> Simplex {
    s.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect()
}

fn close_faces(s: &Simplex, acc: &mut BTreeSet<Simplex>) {
    if !acc.insert(s.clone()) || s.len() == 1 {
        return;
    }
    for i in 0..s.len() {
        close_faces(&face(s, i), acc);
    }
}

fn relative_chain_complex(total: &SimplicialComplex, sub: &SimplicialComplex) -> ChainComplex {
    let top = total.by_dim.len();
    let ranks: Vec<usize> = (0..top)
        .map(|k| total.simplices(k).iter().filter(|s| !sub.contains(s)).count())
        .collect();
    let higher = (1..top).map(|k| total.relative_boundary(sub, k)).collect();
    ChainComplex::new(ranks, higher).expect("simplicial boundaries have matching shapes")
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.maximal_simplices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::from_maximal(&Vec::<Simplex>::deserialize(d)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialPair {
    pub total: SimplicialComplex,
    pub sub: SimplicialComplex,
}

#[derive(Deserialize)]
struct RawPair {
    total: SimplicialComplex,
    #[serde(default = "SimplicialComplex::empty")]
    sub: SimplicialComplex,
}

impl<'de> Deserialize<'de> for SimplicialPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPair::deserialize(d)?;
        SimplicialPair::new(raw.total, raw.sub).map_err(serde::de::Error::custom)
    }
}

impl SimplicialPair {
    pub fn new(total: SimplicialComplex, sub: SimplicialComplex) -> Result<Self> {
        if !sub.is_subcomplex_of(&total) {
            return Err(Error::InvalidInput(
                "subcomplex has a simplex missing from the total complex".into(),
            ));
        }
        Ok(Self { total, sub })
    }

    /// The pair `(X, ∅)`.
    pub fn absolute(total: SimplicialComplex) -> Self {
        Self {
            total,
            sub: SimplicialComplex::empty(),
        }
    }

    pub fn chain_complex(&self) -> ChainComplex {
        relative_chain_complex(&self.total, &self.sub)
    }
}

pub fn relative_homology(pair: &SimplicialPair, n: usize) -> FgAbelianGroup {
    pair.chain_complex().homology(n)
}

pub fn relative_cohomology(pair: &SimplicialPair, n: usize, pi: &FgAbelianGroup) -> FgAbelianGroup {
    pair.chain_complex().cohomology(n, pi)
}

pub fn cohomological_dimension(pair: &SimplicialPair) -> i64 {
    pair.chain_complex().cohomological_dimension()
}

/// An `n`-cochain with values in `coefficients`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainSpec {
    pub degree: usize,
    pub coefficients: FgAbelianGroup,
    #[serde(with = "cochain_values")]
    pub values: BTreeMap<Simplex, GroupElement>,
}

mod cochain_values {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        simplex: Simplex,
        value: GroupElement,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<Simplex, GroupElement>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| Entry {
                simplex: k.clone(),
                value: v.clone(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Simplex, GroupElement>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| {
                let mut k = e.simplex;
                k.sort_unstable();
                (k, e.value)
            })
            .collect())
    }
}

impl CochainSpec {
    pub fn zero(complex: &SimplicialComplex, degree: usize, pi: &FgAbelianGroup) -> Self {
        Self {
            degree,
            coefficients: pi.clone(),
            values: complex
                .simplices(degree)
                .iter()
                .map(|s| (s.clone(), pi.zero()))
                .collect(),
        }
    }

    /// Checks that values are given on exactly the `degree`-simplices and lie
    /// in the coefficient group.
    pub fn validate_on(&self, complex: &SimplicialComplex) -> Result<()> {
        let expected = complex.simplices(self.degree);
        if self.values.len() != expected.len() || expected.iter().any(|s| !self.values.contains_key(s))
        {
            return Err(Error::InvalidInput(format!(
                "cochain must be defined on exactly the {}-simplices",
                self.degree
            )));
        }
        for v in self.values.values() {
            if !self.coefficients.contains(v) {
                return Err(Error::InvalidInput(format!("value {v:?} is not a group element")));
            }
        }
        Ok(())
    }

    /// Flat coordinate vector in the `simplex * summands + component` layout.
    fn flatten(&self, complex: &SimplicialComplex) -> Vec<BigInt> {
        complex
            .simplices(self.degree)
            .iter()
            .flat_map(|s| self.values[s].coordinates())
            .collect()
    }

    fn unflatten(
        complex: &SimplicialComplex,
        degree: usize,
        pi: &FgAbelianGroup,
        flat: &[BigInt],
    ) -> Result<Self> {
        let nc = pi.num_summands();
        let values = complex
            .simplices(degree)
            .iter()
            .enumerate()
            .map(|(i, s)| Ok((s.clone(), pi.element(&flat[i * nc..(i + 1) * nc])?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            degree,
            coefficients: pi.clone(),
            values,
        })
    }

    /// Whether `δφ = 0` on `complex`.
    pub fn is_cocycle(&self, complex: &SimplicialComplex) -> Result<bool> {
        self.validate_on(complex)?;
        let nc = self.coefficients.num_summands();
        let delta = coboundary_with_coefficients(&complex.chain_complex().boundary(self.degree + 1), nc);
        let image = delta.mul_vec(&self.flatten(complex))?;
        let moduli = self.coefficients.moduli();
        Ok(image.iter().enumerate().all(|(i, x)| {
            let t = &moduli[i % nc];
            if t.is_zero() {
                x.is_zero()
            } else {
                (x % t).is_zero()
            }
        }))
    }

    /// Restriction to a subcomplex.
    pub fn restrict(&self, sub: &SimplicialComplex) -> Self {
        Self {
            degree: self.degree,
            coefficients: self.coefficients.clone(),
            values: sub
                .simplices(self.degree)
                .iter()
                .filter_map(|s| self.values.get(s).map(|v| (s.clone(), v.clone())))
                .collect(),
        }
    }
}

/// Matrix of `i^* : H^n(X; π) → H^n(A; π)` in invariant-factor coordinates;
/// column `j` is the image of the `j`-th canonical generator of the source.
pub fn restriction_map(pair: &SimplicialPair, n: usize, pi: &FgAbelianGroup) -> Result<IntMatrix> {
    let hx = pair.total.chain_complex().explicit_cohomology(n, pi)?;
    let ha = pair.sub.chain_complex().explicit_cohomology(n, pi)?;
    let mut cols = Vec::new();
    for rep in hx.generator_representatives()? {
        let cochain = CochainSpec::unflatten(&pair.total, n, pi, &rep)?;
        let restricted = cochain.restrict(&pair.sub).flatten(&pair.sub);
        let class = ha
            .class_of(&restricted)?
            .expect("restriction of a cocycle is a cocycle");
        cols.push(class.coordinates());
    }
    IntMatrix::from_columns(&cols, ha.group.num_summands())
}

/// A cocycle on `X` restricting to `boundary_cocycle` on `A`, if one exists.
pub fn cocycle_extension(
    pair: &SimplicialPair,
    n: usize,
    pi: &FgAbelianGroup,
    boundary_cocycle: &CochainSpec,
) -> Result<Option<CochainSpec>> {
    if boundary_cocycle.degree != n || boundary_cocycle.coefficients != *pi {
        return Err(Error::InvalidInput("cochain degree or coefficients differ".into()));
    }
    if !boundary_cocycle.is_cocycle(&pair.sub)? {
        return Err(Error::NotACocycle);
    }
    let x = &pair.total;
    let nc = pi.num_summands();
    let moduli = pi.moduli();
    let delta = coboundary_with_coefficients(&x.chain_complex().boundary(n + 1), nc);

    // fixed part: the given values on A, zero elsewhere
    let mut fixed = vec![BigInt::zero(); x.simplices(n).len() * nc];
    let mut free_cols = Vec::new();
    for (i, s) in x.simplices(n).iter().enumerate() {
        match boundary_cocycle.values.get(s) {
            Some(v) => fixed[i * nc..(i + 1) * nc].clone_from_slice(&v.coordinates()),
            None => free_cols.extend(i * nc..(i + 1) * nc),
        }
    }
    // δ(fixed + free) - T k = 0 with slack k on torsion coordinates
    let slack_rows: Vec<usize> = (0..delta.rows())
        .filter(|r| !moduli[r % nc].is_zero())
        .collect();
    let mut system = IntMatrix::zeros(delta.rows(), free_cols.len() + slack_rows.len());
    for r in 0..delta.rows() {
        for (j, &c) in free_cols.iter().enumerate() {
            system[(r, j)] = delta[(r, c)].clone();
        }
    }
    for (k, &r) in slack_rows.iter().enumerate() {
        system[(r, free_cols.len() + k)] = -&moduli[r % nc];
    }
    let rhs: Vec<BigInt> = delta.mul_vec(&fixed)?.into_iter().map(|v| -v).collect();
    let Some(sol) = solve_integer_system(&system, &rhs)?.into_solution() else {
        return Ok(None);
    };
    let mut flat = fixed;
    for (j, &c) in free_cols.iter().enumerate() {
        flat[c] = sol[j].clone();
    }
    let ext = CochainSpec::unflatten(x, n, pi, &flat)?;
    debug_assert!(ext.is_cocycle(x).unwrap_or(false));
    Ok(Some(ext))
}

/// Small complexes used in tests, examples and benchmarks.
pub mod fixtures {
    use super::*;

    pub fn point() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec![0]])
    }

    pub fn circle() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    pub fn disk() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec![0, 1, 2]])
    }

    /// `(D², ∂D²)`.
    pub fn disk_pair() -> SimplicialPair {
        SimplicialPair::new(disk(), circle()).unwrap()
    }

    /// Boundary of the tetrahedron.
    pub fn sphere() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
    }

    /// Six-vertex real projective plane.
    pub fn projective_plane() -> SimplicialComplex {
        SimplicialComplex::from_maximal(&[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 6, 2],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![4, 5, 2],
            vec![5, 6, 3],
            vec![6, 2, 4],
        ])
    }

    /// Seven-vertex torus.
    pub fn torus() -> SimplicialComplex {
        let mut tris = Vec::new();
        for i in 0..7u32 {
            tris.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            tris.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        SimplicialComplex::from_maximal(&tris)
    }

    /// Annulus `S¹ × I` with the bottom circle `{0,1,2}` and the isolated
    /// top vertex `3` as subcomplex.
    pub fn cylinder_pair() -> SimplicialPair {
        let x = SimplicialComplex::from_maximal(&[
            vec![0, 1, 4],
            vec![0, 3, 4],
            vec![1, 2, 5],
            vec![1, 4, 5],
            vec![2, 0, 3],
            vec![2, 3, 5],
        ]);
        let a = SimplicialComplex::from_maximal(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3]]);
        SimplicialPair::new(x, a).unwrap()
    }
}
