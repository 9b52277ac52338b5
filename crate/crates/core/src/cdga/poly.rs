//! Monomials and polynomials in a free graded-commutative algebra.
//!
//! Generators are referred to by index; the caller supplies each index's
//! parity when a sign is needed.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A canonical monomial: generator indices in nondecreasing order, with no
/// odd generator repeated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<usize>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Self(vec![i])
    }

    /// Word length.
    pub fn p_degree(&self) -> usize {
        self.0.len()
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    /// Sorts an ordered product into canonical form. Returns the sign picked
    /// up from transposing odd factors, or `None` if an odd factor repeats.
    pub fn canonicalize(word: &[usize], odd: impl Fn(usize) -> bool) -> Option<(i8, Monomial)> {
        let mut inversions = 0usize;
        for i in 0..word.len() {
            for j in i + 1..word.len() {
                let (a, b) = (word[i], word[j]);
                if odd(a) && odd(b) {
                    if a == b {
                        return None;
                    }
                    if a > b {
                        inversions += 1;
                    }
                }
            }
        }
        let mut sorted = word.to_vec();
        sorted.sort_unstable();
        Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, Monomial(sorted)))
    }

    /// Removes one occurrence of each factor of `sub`, if all are present.
    pub fn remove(&self, sub: &Monomial) -> Option<Vec<usize>> {
        let mut rest = self.0.clone();
        for g in &sub.0 {
            let pos = rest.iter().position(|x| x == g)?;
            rest.remove(pos);
        }
        Some(rest)
    }
}

/// A finite rational combination of canonical monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(i: usize) -> Self {
        Self::term(Monomial::generator(i), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, odd: &impl Fn(usize) -> bool) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let word: Vec<usize> = a.0.iter().chain(&b.0).copied().collect();
                if let Some((sign, m)) = Monomial::canonicalize(&word, odd) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Least word length among the terms; `None` for the zero polynomial.
    pub fn p_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::p_degree).min()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Coefficients as integers, when all are integral.
    pub fn integer_coefficients(&self) -> Option<Vec<(Monomial, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }

    /// Largest absolute coefficient numerator, for diagnostics.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}
