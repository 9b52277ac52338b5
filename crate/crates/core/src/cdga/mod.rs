//! Free graded-commutative algebras over the rationals with decomposable
//! differentials (Sullivan minimal models).

mod forms;
mod poly;
pub mod qlinalg;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use forms::{extract_bilinear_forms, BilinearForms, DistinguishedTerm};
pub use poly::{Monomial, Polynomial};

use crate::error::{Error, Result};
use crate::json::{format_rational, parse_rational};
use qlinalg::{nullspace, rank, QVec, Span};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// Generators are kept sorted by `(degree, name)`; monomials refer to them
/// by position in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    generators: Vec<Generator>,
    differential: Vec<Polynomial>,
    index: HashMap<String, usize>,
}

impl MinimalModel {
    /// `differential` maps generator names to their images; generators
    /// without an entry are closed.
    pub fn new(generators: Vec<Generator>, differential: BTreeMap<String, Polynomial>) -> Result<Self> {
        let mut model = Self::with_generators(generators)?;
        for (name, p) in differential {
            let i = model.generator_index(&name)?;
            model.differential[i] = p;
        }
        Ok(model)
    }

    fn with_generators(mut generators: Vec<Generator>) -> Result<Self> {
        generators.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::InvalidModel(format!("generator `{}` has degree 0", g.name)));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate generator `{}`", g.name)));
            }
        }
        let differential = vec![Polynomial::zero(); generators.len()];
        Ok(Self {
            generators,
            differential,
            index,
        })
    }

    /// Builds a model from `(name, degree)` pairs and differential terms
    /// `(name, [(coefficient, ordered product of names)])`.
    pub fn from_table(gens: &[(&str, u32)], diff: &[(&str, &[(i64, &[&str])])]) -> Result<Self> {
        let generators = gens
            .iter()
            .map(|(n, d)| Generator {
                name: n.to_string(),
                degree: *d,
            })
            .collect();
        let mut model = Self::with_generators(generators)?;
        for (name, terms) in diff {
            let i = model.generator_index(name)?;
            let mut p = Polynomial::zero();
            for (c, word) in terms.iter() {
                p = p.add(&model.word(word, BigRational::from_integer((*c).into()))?);
            }
            model.differential[i] = p;
        }
        Ok(model)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidModel(format!("unknown generator `{name}`")))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn differential_of(&self, i: usize) -> &Polynomial {
        &self.differential[i]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.generators[i].degree % 2 == 1
    }

    fn odd_fn(&self) -> impl Fn(usize) -> bool + '_ {
        move |i| self.is_odd(i)
    }

    /// The ordered product of named generators times `c`, in canonical form.
    pub fn word(&self, names: &[&str], c: BigRational) -> Result<Polynomial> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.generator_index(n))
            .collect::<Result<_>>()?;
        Ok(match Monomial::canonicalize(&idx, self.odd_fn()) {
            Some((sign, m)) => Polynomial::term(m, if sign < 0 { -c } else { c }),
            None => Polynomial::zero(),
        })
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors().iter().map(|&i| self.generators[i].degree).sum()
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(b, &self.odd_fn())
    }

    /// `d` extended to monomials by the graded Leibniz rule.
    pub fn d_monomial(&self, m: &Monomial) -> Polynomial {
        let f = m.factors();
        let mut out = Polynomial::zero();
        let mut sign_degree = 0u32;
        for k in 0..f.len() {
            let dk = &self.differential[f[k]];
            if !dk.is_zero() {
                let prefix = Polynomial::term(Monomial(f[..k].to_vec()), BigRational::one());
                let suffix = Polynomial::term(Monomial(f[k + 1..].to_vec()), BigRational::one());
                let mut t = self.mul(&self.mul(&prefix, dk), &suffix);
                if sign_degree % 2 == 1 {
                    t = t.scale(&-BigRational::one());
                }
                out = out.add(&t);
            }
            sign_degree += self.generators[f[k]].degree;
        }
        out
    }

    pub fn d(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    /// Canonical monomials of total degree `n`, in increasing order.
    pub fn monomial_basis(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.fill_basis(0, n, &mut cur, &mut out);
        out.sort();
        out
    }

    fn fill_basis(&self, start: usize, remaining: u32, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial(cur.clone()));
            return;
        }
        for i in start..self.generators.len() {
            let deg = self.generators[i].degree;
            if deg > remaining {
                break;
            }
            if self.is_odd(i) && cur.last() == Some(&i) {
                continue;
            }
            cur.push(i);
            self.fill_basis(i, remaining - deg, cur, out);
            cur.pop();
        }
    }

    /// Least generator degree with nonzero differential.
    pub fn first_nontrivial_degree(&self) -> Option<u32> {
        (0..self.generators.len())
            .filter(|&i| !self.differential[i].is_zero())
            .map(|i| self.generators[i].degree)
            .min()
    }

    /// Whether `dη = 0` for every generator of degree at most `d`.
    pub fn is_rational_hspace_through(&self, d: u32) -> bool {
        self.first_nontrivial_degree().is_none_or(|k| k > d)
    }

    pub fn validate_minimal(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree < 2 {
                violations.push(format!("generator `{}` has degree {} < 2", g.name, g.degree));
            }
            let dg = &self.differential[i];
            if dg.terms().any(|(m, _)| self.monomial_degree(m) != g.degree + 1) {
                violations.push(format!("d({}) does not have degree {}", g.name, g.degree + 1));
            }
            if dg.terms().any(|(m, _)| m.p_degree() < 2) {
                violations.push(format!("d({}) is not decomposable", g.name));
            }
            if !self.d(dg).is_zero() {
                violations.push(format!("d(d({})) is nonzero", g.name));
            }
        }
        violations
    }

    /// Matrix of `d` from degree `n` to degree `n + 1` in monomial bases,
    /// as rows indexed by the target basis.
    fn d_matrix(&self, source: &[Monomial], target: &[Monomial]) -> Vec<QVec> {
        let pos: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = vec![vec![BigRational::zero(); source.len()]; target.len()];
        for (j, m) in source.iter().enumerate() {
            for (t, c) in self.d_monomial(m).terms() {
                rows[pos[t]][j] = c.clone();
            }
        }
        rows
    }

    fn vector_to_poly(basis: &[Monomial], v: &[BigRational]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn to_json_value(&self) -> ModelJson {
        let generators = self.generators.clone();
        let differential = self
            .generators
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.differential[*i].is_zero())
            .map(|(i, g)| (g.name.clone(), self.terms_json(&self.differential[i])))
            .collect();
        ModelJson {
            generators,
            differential,
        }
    }

    pub fn terms_json(&self, p: &Polynomial) -> Vec<TermJson> {
        p.terms()
            .map(|(m, c)| TermJson {
                coeff: format_rational(c),
                monomial: m.factors().iter().map(|&i| self.name(i).to_string()).collect(),
            })
            .collect()
    }

    pub fn format_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.terms()
            .map(|(m, c)| {
                let body = if m.factors().is_empty() {
                    "1".to_string()
                } else {
                    m.factors().iter().map(|&i| self.name(i)).collect::<Vec<_>>().join("*")
                };
                format!("{}*{}", format_rational(c), body)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for MinimalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "{} (deg {}): d = {}", g.name, g.degree, self.format_polynomial(&self.differential[i]))?;
        }
        Ok(())
    }
}

/// Rational cohomology in one degree with representative cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaCohomology {
    pub degree: u32,
    pub dimension: usize,
    pub representatives: Vec<Polynomial>,
}

/// `H^n` of the model; `max_degree` bounds the truncation and must be at
/// least `n`.
pub fn cdga_cohomology(model: &MinimalModel, n: u32, max_degree: u32) -> Result<CdgaCohomology> {
    if n > max_degree {
        return Err(Error::InvalidInput(format!(
            "degree {n} exceeds the truncation bound {max_degree}"
        )));
    }
    let here = model.monomial_basis(n);
    let above = model.monomial_basis(n + 1);
    let below = if n == 0 { Vec::new() } else { model.monomial_basis(n - 1) };

    let cocycles = nullspace(&model.d_matrix(&here, &above), here.len());
    let d_in = model.d_matrix(&below, &here);
    let boundary_rank = rank(&transpose(&d_in, below.len()), here.len());

    let mut span = Span::new(here.len());
    for j in 0..below.len() {
        let col: QVec = d_in.iter().map(|r| r[j].clone()).collect();
        span.insert(&col);
    }
    debug_assert_eq!(span.dim(), boundary_rank);
    let mut representatives = Vec::new();
    for z in &cocycles {
        if span.insert(z) {
            representatives.push(MinimalModel::vector_to_poly(&here, z));
        }
    }
    Ok(CdgaCohomology {
        degree: n,
        dimension: cocycles.len() - boundary_rank,
        representatives,
    })
}

fn transpose(rows: &[QVec], cols: usize) -> Vec<QVec> {
    (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Word length of the shortest term; an error for the zero polynomial.
pub fn p_degree(p: &Polynomial) -> Result<usize> {
    p.p_degree().ok_or(Error::ZeroPolynomial)
}

/// The algebra endomorphism sending every generator `g` to `r·g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiEndomorphism {
    pub r: i64,
}

impl ChiEndomorphism {
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let r = BigRational::from_integer(self.r.into());
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let w = m.p_degree();
            out.add_term(m.clone(), c * Pow::pow(&r, w));
        }
        out
    }
}

pub fn chi_endomorphism(_model: &MinimalModel, r: i64) -> ChiEndomorphism {
    ChiEndomorphism { r }
}

pub fn chi_pullback(model: &MinimalModel, r: i64, cocycle: &Polynomial) -> Polynomial {
    chi_endomorphism(model, r).apply(cocycle)
}

/// Generators of degree at most `up_to` on which `χ_r ∘ d ≠ d ∘ χ_r`.
pub fn chi_commutator_failures(model: &MinimalModel, r: i64, up_to: u32) -> Vec<String> {
    let chi = chi_endomorphism(model, r);
    (0..model.generators.len())
        .filter(|&i| model.generators[i].degree <= up_to)
        .filter(|&i| {
            let g = Polynomial::generator(i);
            chi.apply(&model.d(&g)) != model.d(&chi.apply(&g))
        })
        .map(|i| model.name(i).to_string())
        .collect()
}

/// Whether `χ_r(k·c)` has every coefficient divisible by `r`, where `k`
/// clears the denominators of `c`.
pub fn chi_pullback_divisible(model: &MinimalModel, r: i64, cocycle: &Polynomial) -> bool {
    let k = BigRational::from_integer(cocycle.denominator_lcm());
    let pulled = chi_pullback(model, r, &cocycle.scale(&k));
    let r = BigInt::from(r);
    pulled
        .integer_coefficients()
        .is_some_and(|cs| cs.iter().all(|(_, c)| (c % &r).is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<TermJson>>,
}

impl TryFrom<ModelJson> for MinimalModel {
    type Error = Error;

    fn try_from(raw: ModelJson) -> Result<Self> {
        let mut model = MinimalModel::with_generators(raw.generators)?;
        for (name, terms) in raw.differential {
            let i = model.generator_index(&name)?;
            let mut p = Polynomial::zero();
            for t in terms {
                let c = parse_rational(&t.coeff)?;
                let names: Vec<&str> = t.monomial.iter().map(String::as_str).collect();
                p = p.add(&model.word(&names, c)?);
            }
            model.differential[i] = p;
        }
        Ok(model)
    }
}

impl Serialize for MinimalModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MinimalModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MinimalModel::try_from(ModelJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Models used in tests, examples and benchmarks.
pub mod fixtures {
    use super::*;

    /// `Λ(b₃)`, `db = 0`.
    pub fn s3() -> MinimalModel {
        MinimalModel::from_table(&[("b", 3)], &[]).unwrap()
    }

    /// `Λ(a₂, b₃)`, `db = a²`.
    pub fn s2() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2), ("b", 3)], &[("b", &[(1, &["a", "a"])])]).unwrap()
    }

    /// `Λ(a₂)`, zero differential.
    pub fn polynomial_a2() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2)], &[]).unwrap()
    }

    /// `Λ(a₂, b₃)` with zero differential.
    pub fn s2_times_s3() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2), ("b", 3)], &[]).unwrap()
    }

    pub fn point() -> MinimalModel {
        MinimalModel::from_table(&[], &[]).unwrap()
    }

    /// `Λ(a₂, b₃, η₄)`, `dη = ab`.
    pub fn mixed_pair() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2), ("b", 3), ("eta", 4)], &[("eta", &[(1, &["a", "b"])])])
            .unwrap()
    }

    /// Two generators in each of degrees 2 and 3, `dη = a₁b₁ + 2a₂b₂`.
    pub fn diag12() -> MinimalModel {
        MinimalModel::from_table(
            &[("a1", 2), ("a2", 2), ("b1", 3), ("b2", 3), ("eta", 4)],
            &[("eta", &[(1, &["a1", "b1"]), (2, &["a2", "b2"])])],
        )
        .unwrap()
    }

    /// `Λ(x₃, y₃, z₅)`, zero differential.
    pub fn odd_product() -> MinimalModel {
        MinimalModel::from_table(&[("x", 3), ("y", 3), ("z", 5)], &[]).unwrap()
    }

    /// `Λ(a₂, c₂, b₅)` with zero differential.
    pub fn two_even() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2), ("c", 2), ("b", 5)], &[]).unwrap()
    }

    /// Complex projective plane: `Λ(a₂, b₅)`, `db = a³`.
    pub fn cp2() -> MinimalModel {
        MinimalModel::from_table(&[("a", 2), ("b", 5)], &[("b", &[(1, &["a", "a", "a"])])]).unwrap()
    }

    /// `dη = a₁b₁ + a₁b₂ + a₂b₂`, whose form has a nonzero entry off the
    /// first row and column.
    pub fn shear() -> MinimalModel {
        MinimalModel::from_table(
            &[("a1", 2), ("a2", 2), ("b1", 3), ("b2", 3), ("eta", 4)],
            &[("eta", &[(1, &["a1", "b1"]), (1, &["a1", "b2"]), (1, &["a2", "b2"])])],
        )
        .unwrap()
    }

    /// Zero-differential fixtures.
    pub fn free_models() -> Vec<MinimalModel> {
        vec![s3(), polynomial_a2(), s2_times_s3(), point(), odd_product(), two_even()]
    }

    /// Every fixture.
    pub fn all() -> Vec<MinimalModel> {
        let mut v = free_models();
        v.extend([s2(), mixed_pair(), diag12(), shear(), cp2()]);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn validation() {
        assert!(s3().validate_minimal().is_empty());
        assert!(s2().validate_minimal().is_empty());
        let bad = MinimalModel::from_table(&[("a", 2), ("b", 3)], &[("b", &[(1, &["a"])])]).unwrap();
        assert_eq!(bad.validate_minimal().len(), 2);
        for m in all() {
            assert!(m.validate_minimal().is_empty(), "{m}");
        }
    }

    #[test]
    fn d_squared_vanishes_through_degree_8() {
        for m in all() {
            for n in 0..=8 {
                for mono in m.monomial_basis(n) {
                    assert!(m.d(&m.d_monomial(&mono)).is_zero());
                }
            }
        }
    }

    #[test]
    fn leibniz_signs() {
        // d(b·b') for odd b, b' with db = a², db' = 0 gives a²b'
        let m = MinimalModel::from_table(
            &[("a", 2), ("b", 3), ("c", 3)],
            &[("b", &[(1, &["a", "a"])]), ("c", &[(1, &["a", "a"])])],
        )
        .unwrap();
        let bc = m.word(&["b", "c"], q(1)).unwrap();
        let expected = m
            .word(&["a", "a", "c"], q(1))
            .unwrap()
            .sub(&m.word(&["b", "a", "a"], q(1)).unwrap());
        assert_eq!(m.d(&bc), expected);
        assert!(m.d(&m.d(&bc)).is_zero());
    }

    #[test]
    fn hspace_checks() {
        for d in 0..=10 {
            assert!(s3().is_rational_hspace_through(d));
        }
        assert!(s2().is_rational_hspace_through(2));
        assert!(!s2().is_rational_hspace_through(3));
        assert!(point().is_rational_hspace_through(100));
        assert_eq!(s3().first_nontrivial_degree(), None);
        assert_eq!(s2().first_nontrivial_degree(), Some(3));
        assert_eq!(s2_times_s3().first_nontrivial_degree(), None);
    }

    #[test]
    fn cohomology_examples() {
        let h = cdga_cohomology(&polynomial_a2(), 4, 4).unwrap();
        assert_eq!(h.dimension, 1);
        assert_eq!(h.representatives, vec![polynomial_a2().word(&["a", "a"], q(1)).unwrap()]);
        let dims: Vec<usize> = (0..=6)
            .map(|n| cdga_cohomology(&s2(), n, 6).unwrap().dimension)
            .collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 0, 0, 0]);
        let cp2_dims: Vec<usize> = (0..=8)
            .map(|n| cdga_cohomology(&cp2(), n, 8).unwrap().dimension)
            .collect();
        assert_eq!(cp2_dims, vec![1, 0, 1, 0, 1, 0, 0, 0, 0]);
        assert!(cdga_cohomology(&s2(), 5, 4).is_err());
    }

    #[test]
    fn p_degrees() {
        let m = MinimalModel::from_table(&[("a", 2), ("b", 2), ("c", 2)], &[]).unwrap();
        let a2 = m.word(&["a", "a"], q(1)).unwrap();
        assert_eq!(p_degree(&a2), Ok(2));
        let mixed = a2.add(&m.word(&["a", "b", "c"], q(1)).unwrap());
        assert_eq!(p_degree(&mixed), Ok(2));
        assert_eq!(p_degree(&Polynomial::generator(0)), Ok(1));
        assert_eq!(p_degree(&Polynomial::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn chi_examples() {
        let m = polynomial_a2();
        let a2 = m.word(&["a", "a"], q(1)).unwrap();
        assert_eq!(chi_pullback(&m, 1, &a2), a2);
        assert_eq!(chi_pullback(&m, 2, &a2), a2.scale(&q(4)));
        for model in free_models() {
            assert!(chi_commutator_failures(&model, 2, 6).is_empty());
        }
        // on S² the differential is quadratic, so χ_r and d agree only for r ∈ {0, 1}
        assert!(chi_commutator_failures(&s2(), 1, 6).is_empty());
        assert_eq!(chi_commutator_failures(&s2(), 2, 6), vec!["b".to_string()]);
    }

    #[test]
    fn chi_divisibility_on_free_models() {
        for m in free_models() {
            for n in 1..=6 {
                for c in cdga_cohomology(&m, n, 6).unwrap().representatives {
                    for r in [2, 3, 5] {
                        assert!(chi_pullback_divisible(&m, r, &c));
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"generators":[{"name":"b","degree":3},{"name":"a","degree":2}],
            "differential":{"b":[{"coeff":"1","monomial":["a","a"]}]}}"#;
        let m: MinimalModel = serde_json::from_str(src).unwrap();
        assert_eq!(m, s2());
        let back: MinimalModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"generators":[{"name":"a","degree":2}],"differential":{"z":[]}}"#;
        assert!(serde_json::from_str::<MinimalModel>(bad).is_err());
    }

    #[test]
    fn odd_sign_normalization_in_input() {
        let m = MinimalModel::from_table(&[("x", 3), ("y", 3), ("w", 5)], &[("w", &[(1, &["y", "x"])])])
            .unwrap();
        let xy = m.word(&["x", "y"], q(-1)).unwrap();
        assert_eq!(m.differential_of(m.generator_index("w").unwrap()), &xy);
    }
}
