//! Simulating a `QDIFF` system by a `QBLIN` one over given forms.
//!
//! After reshuffling so that `b¹₁₁ ≠ 0`, the emitted system has unknown
//! vectors `u_i` (length `m`), `v_j` (length `n`) and square matrices `Z`
//! (`m × m`) and `W` (`n × n`), with equation families
//!
//! * main: `Σ a_ij u_iᵀ B_p v_j = bᵖ₁₁ c_q`
//! * zw: `Zᵀ B_p W = B_p`
//! * u-zero: `(u_iᵀ B_p W)_ℓ = 0` for `ℓ ≥ 2`
//! * v-zero: `(Zᵀ B_p v_j)_k = 0` for `k ≥ 2`
//!
//! Every family is bilinear in one column of `Z` or one `u_i` against one
//! column of `W` or one `v_j`, so the whole thing is a genuine `QBLIN`
//! system whose left blocks are `Z`'s columns then the `u_i` and whose right
//! blocks are `W`'s columns then the `v_j` (padded with unused blocks when
//! `m ≠ n`).

use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::system::{evaluate, Assignment, QuadraticSystem, Shape};
use crate::error::{Error, Result};
use crate::intlinalg::{invert_unimodular, kernel_basis, IntMatrix};

/// Index permutations applied before building the system: entry `i` of each
/// list is the original index now at position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Reshuffle {
    pub forms: Vec<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquationFamilies {
    pub main: Range<usize>,
    pub zw: Range<usize>,
    pub u_zero: Range<usize>,
    pub v_zero: Range<usize>,
}

/// The emitted system with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstBilp {
    pub system: QuadraticSystem,
    pub source: QuadraticSystem,
    pub reshuffle: Reshuffle,
    /// Reshuffled forms.
    pub forms: Vec<IntMatrix>,
    pub m: usize,
    pub n: usize,
    /// Equation indices (within each form's block of equations).
    pub families: EquationFamilies,
}

fn permute_form(b: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    b.select_rows(rows).select_cols(cols)
}

fn swap_perm(len: usize, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.swap(0, k);
    p
}

/// Moves the first nonzero entry (in `(p, k, l)` order) to `B_1[0][0]`.
pub fn reshuffle_forms(forms: &[IntMatrix]) -> Result<(Vec<IntMatrix>, Reshuffle)> {
    let first = forms
        .iter()
        .enumerate()
        .find_map(|(p, b)| {
            (0..b.rows())
                .flat_map(|k| (0..b.cols()).map(move |l| (k, l)))
                .find(|&(k, l)| !b[(k, l)].is_zero())
                .map(|(k, l)| (p, k, l))
        })
        .ok_or_else(|| Error::InvalidInput("all forms are zero".into()))?;
    let (p, k, l) = first;
    let (m, n) = forms[0].shape();
    let shuffle = Reshuffle {
        forms: swap_perm(forms.len(), p),
        rows: swap_perm(m, k),
        cols: swap_perm(n, l),
    };
    let out = shuffle
        .forms
        .iter()
        .map(|&i| permute_form(&forms[i], &shuffle.rows, &shuffle.cols))
        .collect();
    Ok((out, shuffle))
}

impl InstBilp {
    pub fn r(&self) -> usize {
        self.source.r
    }

    fn offset(&self) -> usize {
        self.m.max(self.n)
    }

    pub fn blocks(&self) -> usize {
        self.offset() + self.r()
    }

    fn u_name(block: usize, k: usize) -> String {
        format!("u{}_{}", block + 1, k + 1)
    }

    fn v_name(block: usize, l: usize) -> String {
        format!("v{}_{}", block + 1, l + 1)
    }

    /// Assembles an assignment from `Z`, `W` and the vectors; padding blocks
    /// are zero.
    pub fn assignment(
        &self,
        z: &IntMatrix,
        w: &IntMatrix,
        u: &[Vec<BigInt>],
        v: &[Vec<BigInt>],
    ) -> Assignment {
        let mut a = Assignment::new();
        let off = self.offset();
        for block in 0..self.blocks() {
            for k in 0..self.m {
                let val = if block < self.m {
                    z[(k, block)].clone()
                } else if block >= off {
                    u[block - off][k].clone()
                } else {
                    BigInt::zero()
                };
                a.insert(Self::u_name(block, k), val);
            }
            for l in 0..self.n {
                let val = if block < self.n {
                    w[(l, block)].clone()
                } else if block >= off {
                    v[block - off][l].clone()
                } else {
                    BigInt::zero()
                };
                a.insert(Self::v_name(block, l), val);
            }
        }
        a
    }

    /// Reads `Z`, `W`, the `u_i` and the `v_j` back out of an assignment.
    pub fn unpack(&self, a: &Assignment) -> Result<(IntMatrix, IntMatrix, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
        self.system.values(a)?;
        let get = |name: String| a[&name].clone();
        let off = self.offset();
        let mut z = IntMatrix::zeros(self.m, self.m);
        let mut w = IntMatrix::zeros(self.n, self.n);
        for c in 0..self.m {
            for k in 0..self.m {
                z[(k, c)] = get(Self::u_name(c, k));
            }
        }
        for c in 0..self.n {
            for l in 0..self.n {
                w[(l, c)] = get(Self::v_name(c, l));
            }
        }
        let u = (0..self.r())
            .map(|i| (0..self.m).map(|k| get(Self::u_name(off + i, k))).collect())
            .collect();
        let v = (0..self.r())
            .map(|j| (0..self.n).map(|l| get(Self::v_name(off + j, l))).collect())
            .collect();
        Ok((z, w, u, v))
    }

    /// Residual split by equation family, listed form by form.
    pub fn family_residuals(&self, a: &Assignment) -> Result<FamilyResiduals> {
        let res = evaluate(&self.system, a)?;
        let per_form = self.system.s();
        let pick = |range: &Range<usize>| -> Vec<BigInt> {
            (0..self.forms.len())
                .flat_map(|p| range.clone().map(move |e| p * per_form + e))
                .map(|i| res[i].clone())
                .collect()
        };
        Ok(FamilyResiduals {
            main: pick(&self.families.main),
            zw: pick(&self.families.zw),
            u_zero: pick(&self.families.u_zero),
            v_zero: pick(&self.families.v_zero),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyResiduals {
    #[serde(with = "crate::json::big_vec")]
    pub main: Vec<BigInt>,
    #[serde(with = "crate::json::big_vec")]
    pub zw: Vec<BigInt>,
    #[serde(with = "crate::json::big_vec")]
    pub u_zero: Vec<BigInt>,
    #[serde(with = "crate::json::big_vec")]
    pub v_zero: Vec<BigInt>,
}

impl FamilyResiduals {
    pub fn is_zero(&self) -> bool {
        [&self.main, &self.zw, &self.u_zero, &self.v_zero]
            .iter()
            .all(|f| f.iter().all(Zero::is_zero))
    }

    /// Sum of absolute residuals.
    pub fn l1(&self) -> BigInt {
        [&self.main, &self.zw, &self.u_zero, &self.v_zero]
            .iter()
            .flat_map(|f| f.iter())
            .map(Signed::abs)
            .sum()
    }
}

/// Builds the inst-BILp system for `qdiff` over `forms`.
pub fn reduce_qdiff_to_qblin(qdiff: &QuadraticSystem, forms: &[IntMatrix]) -> Result<InstBilp> {
    if qdiff.shape != Shape::QDiff {
        return Err(Error::InvalidInput(format!("expected a QDIFF system, got {}", qdiff.shape)));
    }
    qdiff.validate()?;
    let first = forms.first().ok_or_else(|| Error::InvalidInput("no forms given".into()))?;
    if forms.iter().any(|b| b.shape() != first.shape()) || first.rows() == 0 || first.cols() == 0 {
        return Err(Error::InvalidInput("forms must share a nonempty shape".into()));
    }
    let (shuffled, reshuffle) = reshuffle_forms(forms)?;
    let (m, n) = first.shape();
    let r = qdiff.r;
    let off = m.max(n);
    let blocks = off + r;
    let unit = |i: usize, j: usize| {
        let mut a = IntMatrix::zeros(blocks, blocks);
        a[(i, j)] = BigInt::one();
        a
    };

    let mut coefficients = Vec::new();
    // rhs per form, one entry per equation
    let mut rhs: Vec<Vec<BigInt>> = vec![Vec::new(); shuffled.len()];

    for (q, a) in qdiff.coefficients.iter().enumerate() {
        let mut big = IntMatrix::zeros(blocks, blocks);
        for i in 0..r {
            for j in 0..r {
                big[(off + i, off + j)] = a[(i, j)].clone();
            }
        }
        coefficients.push(big);
        for (p, b) in shuffled.iter().enumerate() {
            rhs[p].push(&b[(0, 0)] * &qdiff.rhs[0][q]);
        }
    }
    let main = 0..coefficients.len();
    for k in 0..m {
        for l in 0..n {
            coefficients.push(unit(k, l));
            for (p, b) in shuffled.iter().enumerate() {
                rhs[p].push(b[(k, l)].clone());
            }
        }
    }
    let zw = main.end..coefficients.len();
    for i in 0..r {
        for l in 1..n {
            coefficients.push(unit(off + i, l));
            for row in rhs.iter_mut() {
                row.push(BigInt::zero());
            }
        }
    }
    let u_zero = zw.end..coefficients.len();
    for j in 0..r {
        for k in 1..m {
            coefficients.push(unit(k, off + j));
            for row in rhs.iter_mut() {
                row.push(BigInt::zero());
            }
        }
    }
    let v_zero = u_zero.end..coefficients.len();

    let system = QuadraticSystem::new(Shape::QBlin, blocks, coefficients, rhs, shuffled.clone())?;
    Ok(InstBilp {
        system,
        source: qdiff.clone(),
        reshuffle,
        forms: shuffled,
        m,
        n,
        families: EquationFamilies {
            main,
            zw,
            u_zero,
            v_zero,
        },
    })
}

fn qdiff_values(qdiff: &QuadraticSystem, a: &Assignment) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let vals = qdiff.values(a)?;
    let r = qdiff.r;
    Ok((vals[..r].to_vec(), vals[r..].to_vec()))
}

fn scaled_vec(x: &BigInt, e: &[BigInt]) -> Vec<BigInt> {
    e.iter().map(|c| x * c).collect()
}

fn unit_vec(len: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::one();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ForwardWitness {
    #[serde(with = "crate::json::big_map")]
    pub assignment: Assignment,
    pub residuals: FamilyResiduals,
    pub valid: bool,
}

/// `Z = I`, `W = I`, `u_i = x_i e₁`, `v_j = y_j e₁`, evaluated against
/// every equation family.
pub fn forward_witness(inst: &InstBilp, solution: &Assignment) -> Result<ForwardWitness> {
    let (x, y) = qdiff_values(&inst.source, solution)?;
    let (e_m, e_n) = (unit_vec(inst.m), unit_vec(inst.n));
    let u: Vec<Vec<BigInt>> = x.iter().map(|xi| scaled_vec(xi, &e_m)).collect();
    let v: Vec<Vec<BigInt>> = y.iter().map(|yj| scaled_vec(yj, &e_n)).collect();
    let assignment = inst.assignment(&IntMatrix::identity(inst.m), &IntMatrix::identity(inst.n), &u, &v);
    let residuals = inst.family_residuals(&assignment)?;
    Ok(ForwardWitness {
        valid: residuals.is_zero(),
        assignment,
        residuals,
    })
}

/// The witness with `e₁` replaced by lattice vectors `c`, `d` satisfying
/// `cᵀB_p ∈ span(e₁ᵀ)` and `B_p d ∈ span(e₁)` for every `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrectedWitness {
    #[serde(with = "crate::json::big_vec")]
    pub c: Vec<BigInt>,
    #[serde(with = "crate::json::big_vec")]
    pub d: Vec<BigInt>,
    /// `cᵀ B_p d` for each form.
    #[serde(with = "crate::json::big_vec")]
    pub pairings: Vec<BigInt>,
    #[serde(with = "crate::json::big_map")]
    pub assignment: Assignment,
    /// Residuals against the emitted system.
    pub residuals: FamilyResiduals,
    /// Main-family residuals with right-hand sides `(cᵀB_p d)·c_q`.
    #[serde(with = "crate::json::big_vec")]
    pub rescaled_main: Vec<BigInt>,
    /// Whether `cᵀB_p d = bᵖ₁₁` for all `p`, so no rescaling is needed.
    pub matches_original_scale: bool,
    pub valid: bool,
}

pub fn corrected_witness(inst: &InstBilp, solution: &Assignment) -> Result<Option<CorrectedWitness>> {
    let (x, y) = qdiff_values(&inst.source, solution)?;
    let (m, n) = (inst.m, inst.n);
    // c must kill columns 2..n of every B_p; d must be killed by rows 2..m
    let mut c_rows = Vec::new();
    let mut d_rows = Vec::new();
    for b in &inst.forms {
        for l in 1..n {
            c_rows.push(b.col(l));
        }
        for k in 1..m {
            d_rows.push(b.row(k).to_vec());
        }
    }
    let c_space = kernel_basis(&IntMatrix::from_rows(c_rows, m)?);
    let d_space = kernel_basis(&IntMatrix::from_rows(d_rows, n)?);
    let pairing = |c: &[BigInt], d: &[BigInt]| -> Vec<BigInt> {
        inst.forms
            .iter()
            .map(|b| {
                let cb = b.vec_mul(c).expect("length m");
                cb.iter().zip(d).map(|(p, q)| p * q).sum()
            })
            .collect()
    };
    let Some((mut c, d, mut pairings)) = c_space
        .iter()
        .flat_map(|c| d_space.iter().map(move |d| (c, d)))
        .map(|(c, d)| (c.clone(), d.clone(), pairing(c, d)))
        .find(|(_, _, p)| p.iter().any(|x| !x.is_zero()))
    else {
        return Ok(None);
    };
    let lead = pairings.iter().position(|x| !x.is_zero()).expect("nonzero pairing");
    if pairings[lead].signum() == -inst.forms[lead][(0, 0)].signum() {
        c.iter_mut().for_each(|x| *x = -&*x);
        pairings.iter_mut().for_each(|x| *x = -&*x);
    }
    let u: Vec<Vec<BigInt>> = x.iter().map(|xi| scaled_vec(xi, &c)).collect();
    let v: Vec<Vec<BigInt>> = y.iter().map(|yj| scaled_vec(yj, &d)).collect();
    let assignment = inst.assignment(&IntMatrix::identity(m), &IntMatrix::identity(n), &u, &v);
    let residuals = inst.family_residuals(&assignment)?;

    // main equations against the rescaled right-hand side
    let mut rescaled_main = Vec::new();
    for (p, b) in inst.forms.iter().enumerate() {
        for (q, a) in inst.source.coefficients.iter().enumerate() {
            let mut lhs = BigInt::zero();
            for i in 0..inst.r() {
                for j in 0..inst.r() {
                    let ub = b.vec_mul(&u[i])?;
                    let val: BigInt = ub.iter().zip(&v[j]).map(|(s, t)| s * t).sum();
                    lhs += &a[(i, j)] * val;
                }
            }
            rescaled_main.push(lhs - &pairings[p] * &inst.source.rhs[0][q]);
        }
    }
    let matches_original_scale = inst
        .forms
        .iter()
        .zip(&pairings)
        .all(|(b, p)| &b[(0, 0)] == p);
    let valid = rescaled_main.iter().all(Zero::is_zero)
        && [&residuals.zw, &residuals.u_zero, &residuals.v_zero]
            .iter()
            .all(|f| f.iter().all(Zero::is_zero));
    Ok(Some(CorrectedWitness {
        c,
        d,
        pairings,
        assignment,
        residuals,
        rescaled_main,
        matches_original_scale,
        valid,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BackwardTransport {
    /// `u' = Z⁻¹u`, `v' = W⁻¹v`, `Z' = W' = I`.
    #[serde(with = "crate::json::big_map")]
    pub normalized: Assignment,
    pub normalized_solves_inst: bool,
    /// `x_i = (u'_iᵀ B_1)_1`, `y_j = (v'_j)_1`.
    #[serde(with = "crate::json::big_map")]
    pub qdiff_assignment: Assignment,
    /// `b¹₁₁`: the extracted values solve the system with right-hand
    /// sides multiplied by this.
    #[serde(with = "crate::json::big")]
    pub scale: BigInt,
    pub solves_scaled: bool,
    /// A solution of the original system when one can be read off by
    /// dividing out the scale.
    #[serde(with = "crate::json::big_map_opt")]
    pub unscaled: Option<Assignment>,
}

/// The `QDIFF` system with every right-hand side multiplied by `k`.
pub fn scaled_qdiff(qdiff: &QuadraticSystem, k: &BigInt) -> QuadraticSystem {
    let mut s = qdiff.clone();
    for c in s.rhs.iter_mut().flatten() {
        *c *= k;
    }
    s
}

pub fn backward_transport(inst: &InstBilp, inst_solution: &Assignment) -> Result<BackwardTransport> {
    let (z, w, u, v) = inst.unpack(inst_solution)?;
    let z_inv = invert_unimodular(&z)?;
    let w_inv = invert_unimodular(&w)?;
    let u2: Vec<Vec<BigInt>> = u.iter().map(|ui| z_inv.mul_vec(ui)).collect::<Result<_>>()?;
    let v2: Vec<Vec<BigInt>> = v.iter().map(|vj| w_inv.mul_vec(vj)).collect::<Result<_>>()?;
    let normalized = inst.assignment(&IntMatrix::identity(inst.m), &IntMatrix::identity(inst.n), &u2, &v2);
    let normalized_solves_inst = evaluate(&inst.system, &normalized)?.iter().all(Zero::is_zero);

    let b1 = &inst.forms[0];
    let scale = b1[(0, 0)].clone();
    let x: Vec<BigInt> = u2.iter().map(|ui| Ok(b1.vec_mul(ui)?[0].clone())).collect::<Result<_>>()?;
    let y: Vec<BigInt> = v2.iter().map(|vj| vj[0].clone()).collect();
    let source = &inst.source;
    let to_assignment = |x: &[BigInt], y: &[BigInt]| {
        source.assignment_from_values(&x.iter().chain(y).cloned().collect::<Vec<_>>())
    };
    let qdiff_assignment = to_assignment(&x, &y);
    let solves_scaled = evaluate(&scaled_qdiff(source, &scale), &qdiff_assignment)?
        .iter()
        .all(Zero::is_zero);

    // the pairing can also be split as (u'_i)_1 · (B_1 v'_j)_1
    let x_alt: Vec<BigInt> = u2.iter().map(|ui| ui[0].clone()).collect();
    let y_alt: Vec<BigInt> = v2.iter().map(|vj| Ok(b1.mul_vec(vj)?[0].clone())).collect::<Result<_>>()?;
    let divides_all = |vals: &[BigInt]| vals.iter().all(|t| t.is_multiple_of(&scale));
    let divide = |vals: &[BigInt]| vals.iter().map(|t| t / &scale).collect::<Vec<_>>();
    let candidates = [
        divides_all(&x).then(|| to_assignment(&divide(&x), &y)),
        divides_all(&y).then(|| to_assignment(&x, &divide(&y))),
        divides_all(&x_alt).then(|| to_assignment(&divide(&x_alt), &y_alt)),
        divides_all(&y_alt).then(|| to_assignment(&x_alt, &divide(&y_alt))),
    ];
    let mut unscaled = None;
    for cand in candidates.into_iter().flatten() {
        if evaluate(source, &cand)?.iter().all(Zero::is_zero) {
            unscaled = Some(cand);
            break;
        }
    }
    Ok(BackwardTransport {
        normalized,
        normalized_solves_inst,
        qdiff_assignment,
        scale,
        solves_scaled,
        unscaled,
    })
}
