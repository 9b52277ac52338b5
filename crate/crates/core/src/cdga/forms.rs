//! Extraction of the integer bilinear forms `B_p` from the first nontrivial
//! differential of a minimal model.
//!
//! With `d` the least degree carrying a nonzero differential, the
//! distinguished term is the least canonical monomial among the shortest
//! terms of all `dη` (`deg η = d`). Its first two factors are `α`, `β` and
//! the rest is `μ`. For each `η_p`, `B_p[i][j]` is the coefficient of the
//! ordered product `α_i β_j μ`. When `α` and `β` have the same degree `e`,
//! the coefficient `C[i][j]` of `α_i α_j μ` (`i ≤ j`) is completed to
//! `B = C + (-1)^e Cᵀ`, so `dη = a²` gives `B = (2)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{MinimalModel, Monomial};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistinguishedTerm {
    pub coefficient: String,
    pub alpha: String,
    pub beta: String,
    pub eta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BilinearForms {
    pub d: u32,
    pub d1: u32,
    pub d2: u32,
    /// Factors of `μ`, empty for `μ = 1`.
    pub mu: Vec<String>,
    pub mu_degrees: Vec<u32>,
    pub p_degree: usize,
    pub distinguished: DistinguishedTerm,
    /// Generators of degree `d`, one form each.
    pub etas: Vec<String>,
    /// Row basis of every `B_p`.
    pub alpha_basis: Vec<String>,
    /// Column basis of every `B_p`.
    pub beta_basis: Vec<String>,
    /// Common factor that cleared all denominators.
    #[serde(with = "crate::json::big")]
    pub scale: BigInt,
    pub forms: Vec<IntMatrix>,
}

impl BilinearForms {
    pub fn m(&self) -> usize {
        self.alpha_basis.len()
    }

    pub fn n(&self) -> usize {
        self.beta_basis.len()
    }
}

pub fn extract_bilinear_forms(model: &MinimalModel) -> Result<BilinearForms> {
    let d = model.first_nontrivial_degree().ok_or(Error::RationalHSpace)?;
    let etas: Vec<usize> = (0..model.generators().len())
        .filter(|&i| model.generators()[i].degree == d)
        .collect();
    let w = etas
        .iter()
        .filter_map(|&i| model.differential_of(i).p_degree())
        .min()
        .expect("some differential in degree d is nonzero");
    if w < 2 {
        return Err(Error::InvalidModel("differential has a linear term".into()));
    }
    let (eta0, lead, lead_coeff) = etas
        .iter()
        .flat_map(|&i| {
            model
                .differential_of(i)
                .terms()
                .filter(|(m, _)| m.p_degree() == w)
                .map(move |(m, c)| (i, m.clone(), c.clone()))
        })
        .min_by(|x, y| x.1.cmp(&y.1))
        .expect("a shortest term exists");
    let (alpha, beta) = (lead.factors()[0], lead.factors()[1]);
    let mu = Monomial(lead.factors()[2..].to_vec());
    let d1 = model.generators()[alpha].degree;
    let d2 = model.generators()[beta].degree;

    // terms of the form α'β'μ for each η, as (η position, α', β', coefficient of the ordered product)
    let mut entries = Vec::new();
    for (p, &eta) in etas.iter().enumerate() {
        for (m, c) in model.differential_of(eta).terms() {
            if m.p_degree() != w {
                continue;
            }
            let Some(rest) = m.remove(&mu) else { continue };
            let (g, h) = (rest[0], rest[1]);
            let (dg, dh) = (model.generators()[g].degree, model.generators()[h].degree);
            let (a, b) = if (dg, dh) == (d1, d2) {
                (g, h)
            } else if (dh, dg) == (d1, d2) {
                (h, g)
            } else {
                continue;
            };
            let mut word = vec![a, b];
            word.extend_from_slice(mu.factors());
            let (sign, canon) = Monomial::canonicalize(&word, |i| model.is_odd(i))
                .expect("the term is nonzero, so the ordered product is too");
            debug_assert_eq!(&canon, m);
            let coeff = if sign < 0 { -c.clone() } else { c.clone() };
            entries.push((p, a, b, coeff));
        }
    }

    let alpha_set: BTreeSet<usize> = entries.iter().map(|e| e.1).collect();
    let beta_set: BTreeSet<usize> = entries.iter().map(|e| e.2).collect();
    let (alpha_basis, beta_basis): (Vec<usize>, Vec<usize>) = if d1 == d2 {
        let all: Vec<usize> = alpha_set.union(&beta_set).copied().collect();
        (all.clone(), all)
    } else {
        (alpha_set.into_iter().collect(), beta_set.into_iter().collect())
    };
    let row = |g: usize| alpha_basis.binary_search(&g).expect("in basis");
    let col = |g: usize| beta_basis.binary_search(&g).expect("in basis");

    let (m, n) = (alpha_basis.len(), beta_basis.len());
    let mut rational = vec![vec![vec![BigRational::zero(); n]; m]; etas.len()];
    let completion = if d1.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
    for (p, a, b, c) in entries {
        let (i, j) = (row(a), col(b));
        rational[p][i][j] += &c;
        if d1 == d2 {
            rational[p][j][i] += &c * &completion;
        }
    }

    let scale = rational
        .iter()
        .flatten()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale_q = BigRational::from_integer(scale.clone());
    let forms = rational
        .into_iter()
        .map(|b| {
            let rows: Vec<Vec<BigInt>> = b
                .into_iter()
                .map(|r| r.into_iter().map(|x| (x * &scale_q).to_integer()).collect())
                .collect();
            IntMatrix::from_rows(rows, n).expect("rectangular")
        })
        .collect();

    let names = |v: &[usize]| v.iter().map(|&i| model.name(i).to_string()).collect::<Vec<_>>();
    Ok(BilinearForms {
        d,
        d1,
        d2,
        mu: names(mu.factors()),
        mu_degrees: mu.factors().iter().map(|&g| model.generators()[g].degree).collect(),
        p_degree: w,
        distinguished: DistinguishedTerm {
            coefficient: crate::json::format_rational(&lead_coeff),
            alpha: model.name(alpha).to_string(),
            beta: model.name(beta).to_string(),
            eta: model.name(eta0).to_string(),
        },
        etas: names(&etas),
        alpha_basis: names(&alpha_basis),
        beta_basis: names(&beta_basis),
        scale,
        forms,
    })
}
