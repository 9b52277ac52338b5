use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;
use crate::json::BigIntRepr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    #[serde(rename = "QSYM")]
    QSym,
    #[serde(rename = "QSKEW")]
    QSkew,
    #[serde(rename = "QDIFF")]
    QDiff,
    #[serde(rename = "QBLIN")]
    QBlin,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::QSym => "QSYM",
            Shape::QSkew => "QSKEW",
            Shape::QDiff => "QDIFF",
            Shape::QBlin => "QBLIN",
        })
    }
}

/// Variable name to value.
pub type Assignment = BTreeMap<String, BigInt>;

/// A system of quadratic equations in one of the four shapes:
///
/// * `QSYM`:  `Σ_{i<j} a_ij x_i x_j = b_q`
/// * `QSKEW`: `Σ_{i<j} a_ij (x_i y_j − x_j y_i) = b_q`
/// * `QDIFF`: `Σ_{i,j} a_ij x_i y_j = c_q`
/// * `QBLIN`: `Σ_{i,j} a_ij u_iᵀ B_p v_j = c_pq`
///
/// `coefficients[q]` is the `r × r` matrix `(a_ij)` of equation `q`. For
/// `QBLIN`, `rhs[p][q]` is `c_pq`; the other shapes have a single `rhs` row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    pub shape: Shape,
    pub r: usize,
    pub coefficients: Vec<IntMatrix>,
    pub rhs: Vec<Vec<BigInt>>,
    pub forms: Vec<IntMatrix>,
}

/// One equation `Σ coeff · x_a · x_b = rhs` over variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub terms: Vec<(BigInt, usize, usize)>,
    pub rhs: BigInt,
}

impl QuadraticSystem {
    pub fn new(
        shape: Shape,
        r: usize,
        coefficients: Vec<IntMatrix>,
        rhs: Vec<Vec<BigInt>>,
        forms: Vec<IntMatrix>,
    ) -> Result<Self> {
        let sys = Self {
            shape,
            r,
            coefficients,
            rhs,
            forms,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// A `QDIFF` system from small integer data.
    pub fn qdiff(coefficients: &[Vec<Vec<i64>>], rhs: &[i64]) -> Result<Self> {
        let r = coefficients.first().map_or(0, Vec::len);
        Self::new(
            Shape::QDiff,
            r,
            coefficients.iter().map(|a| small_matrix(a, r)).collect::<Result<_>>()?,
            vec![rhs.iter().map(|&c| c.into()).collect()],
            Vec::new(),
        )
    }

    pub fn s(&self) -> usize {
        self.coefficients.len()
    }

    pub fn t(&self) -> usize {
        self.forms.len()
    }

    /// Row and column count of the forms (`QBLIN` only).
    pub fn form_shape(&self) -> (usize, usize) {
        self.forms.first().map_or((0, 0), IntMatrix::shape)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        for (q, a) in self.coefficients.iter().enumerate() {
            if a.shape() != (self.r, self.r) {
                return bad(format!("coefficient matrix {q} is not {0}x{0}", self.r));
            }
            if matches!(self.shape, Shape::QSym | Shape::QSkew) {
                for i in 0..self.r {
                    for j in 0..=i {
                        if !a[(i, j)].is_zero() {
                            return bad(format!(
                                "{} coefficients need i < j; equation {q} has a nonzero ({i},{j}) entry",
                                self.shape
                            ));
                        }
                    }
                }
            }
        }
        let rows = if self.shape == Shape::QBlin { self.t() } else { 1 };
        if self.rhs.len() != rows || self.rhs.iter().any(|row| row.len() != self.s()) {
            return bad(format!("right-hand side must be {rows} row(s) of length {}", self.s()));
        }
        if self.shape == Shape::QBlin {
            let Some(first) = self.forms.first() else {
                return bad("QBLIN needs at least one form".into());
            };
            if first.rows() == 0 || first.cols() == 0 {
                return bad("forms must be nonempty matrices".into());
            }
            if self.forms.iter().any(|b| b.shape() != first.shape()) {
                return bad("forms have different shapes".into());
            }
            if self.forms.iter().all(IntMatrix::is_zero) {
                return bad("all forms are zero".into());
            }
        } else if !self.forms.is_empty() {
            return bad(format!("{} systems carry no forms", self.shape));
        }
        Ok(())
    }

    /// Variable names in search order.
    pub fn variables(&self) -> Vec<String> {
        let r = self.r;
        match self.shape {
            Shape::QSym => (1..=r).map(|i| format!("x{i}")).collect(),
            Shape::QSkew | Shape::QDiff => (1..=r)
                .map(|i| format!("x{i}"))
                .chain((1..=r).map(|j| format!("y{j}")))
                .collect(),
            Shape::QBlin => {
                let (m, n) = self.form_shape();
                let mut v = Vec::with_capacity(r * (m + n));
                for b in 1..=r {
                    v.extend((1..=m).map(|k| format!("u{b}_{k}")));
                    v.extend((1..=n).map(|l| format!("v{b}_{l}")));
                }
                v
            }
        }
    }

    fn x(&self, i: usize) -> usize {
        i
    }

    fn y(&self, j: usize) -> usize {
        self.r + j
    }

    fn u(&self, i: usize, k: usize) -> usize {
        let (m, n) = self.form_shape();
        i * (m + n) + k
    }

    fn v(&self, j: usize, l: usize) -> usize {
        let (m, n) = self.form_shape();
        j * (m + n) + m + l
    }

    /// The equations over variable indices, in residual order (for `QBLIN`,
    /// form-major: all `q` for `p = 1`, then `p = 2`, ...).
    pub fn equations(&self) -> Vec<Equation> {
        let mut out = Vec::new();
        let forms: Vec<Option<&IntMatrix>> = if self.shape == Shape::QBlin {
            self.forms.iter().map(Some).collect()
        } else {
            vec![None]
        };
        for (p, form) in forms.into_iter().enumerate() {
            for (q, a) in self.coefficients.iter().enumerate() {
                let mut terms = Vec::new();
                for i in 0..self.r {
                    for j in 0..self.r {
                        let c = &a[(i, j)];
                        if c.is_zero() {
                            continue;
                        }
                        match self.shape {
                            Shape::QSym => terms.push((c.clone(), self.x(i), self.x(j))),
                            Shape::QSkew => {
                                terms.push((c.clone(), self.x(i), self.y(j)));
                                terms.push((-c, self.x(j), self.y(i)));
                            }
                            Shape::QDiff => terms.push((c.clone(), self.x(i), self.y(j))),
                            Shape::QBlin => {
                                let b = form.expect("forms present");
                                for k in 0..b.rows() {
                                    for l in 0..b.cols() {
                                        if !b[(k, l)].is_zero() {
                                            terms.push((c * &b[(k, l)], self.u(i, k), self.v(j, l)));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                out.push(Equation {
                    terms: merge_terms(terms),
                    rhs: self.rhs[p][q].clone(),
                });
            }
        }
        out
    }

    /// Values in search order; errors on missing or unknown names.
    pub fn values(&self, assignment: &Assignment) -> Result<Vec<BigInt>> {
        let vars = self.variables();
        let values = vars
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        if assignment.len() != vars.len() {
            let known: std::collections::HashSet<&String> = vars.iter().collect();
            let extra = assignment
                .keys()
                .find(|k| !known.contains(k))
                .expect("more names than variables");
            return Err(Error::UnknownVariable(extra.clone()));
        }
        Ok(values)
    }

    pub fn assignment_from_values(&self, values: &[BigInt]) -> Assignment {
        self.variables().into_iter().zip(values.iter().cloned()).collect()
    }
}

fn merge_terms(terms: Vec<(BigInt, usize, usize)>) -> Vec<(BigInt, usize, usize)> {
    let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    for (c, a, b) in terms {
        let key = (a.min(b), a.max(b));
        *acc.entry(key).or_insert_with(BigInt::zero) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((a, b), c)| (c, a, b))
        .collect()
}

fn small_matrix(rows: &[Vec<i64>], cols: usize) -> Result<IntMatrix> {
    IntMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        cols,
    )
}

/// Left side minus right side of every equation, exactly.
pub fn evaluate(system: &QuadraticSystem, assignment: &Assignment) -> Result<Vec<BigInt>> {
    let values = system.values(assignment)?;
    Ok(system
        .equations()
        .iter()
        .map(|eq| {
            let lhs: BigInt = eq
                .terms
                .iter()
                .map(|(c, a, b)| c * &values[*a] * &values[*b])
                .sum();
            lhs - &eq.rhs
        })
        .collect())
}

pub fn is_solution(system: &QuadraticSystem, assignment: &Assignment) -> Result<bool> {
    Ok(evaluate(system, assignment)?.iter().all(Zero::is_zero))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RhsJson {
    Flat(Vec<BigIntRepr>),
    Nested(Vec<Vec<BigIntRepr>>),
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    shape: Shape,
    r: usize,
    coefficients: Vec<IntMatrix>,
    rhs: RhsJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    forms: Vec<IntMatrix>,
}

impl Serialize for QuadraticSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let to_repr = |row: &Vec<BigInt>| row.iter().cloned().map(BigIntRepr).collect::<Vec<_>>();
        let rhs = if self.shape == Shape::QBlin {
            RhsJson::Nested(self.rhs.iter().map(to_repr).collect())
        } else {
            RhsJson::Flat(self.rhs.first().map(to_repr).unwrap_or_default())
        };
        SystemJson {
            shape: self.shape,
            r: self.r,
            coefficients: self.coefficients.clone(),
            rhs,
            forms: self.forms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SystemJson::deserialize(d)?;
        let unwrap = |row: Vec<BigIntRepr>| row.into_iter().map(|x| x.0).collect::<Vec<_>>();
        let rhs = match raw.rhs {
            RhsJson::Flat(row) if raw.shape != Shape::QBlin => vec![unwrap(row)],
            RhsJson::Nested(rows) if raw.shape == Shape::QBlin => rows.into_iter().map(unwrap).collect(),
            // an empty list parses as flat; for QBLIN it means no forms or no equations
            RhsJson::Flat(row) if row.is_empty() => vec![Vec::new(); raw.forms.len()],
            _ => {
                return Err(serde::de::Error::custom(
                    "QBLIN needs a nested right-hand side; other shapes a flat one",
                ))
            }
        };
        // a 0-row matrix serializes as [], losing its width
        let coefficients = raw
            .coefficients
            .into_iter()
            .map(|a| if a.rows() == 0 { IntMatrix::zeros(raw.r, raw.r) } else { a })
            .collect();
        QuadraticSystem::new(raw.shape, raw.r, coefficients, rhs, raw.forms)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(&str, i64)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), BigInt::from(*v))).collect()
    }

    #[test]
    fn zero_assignment_on_homogeneous_system() {
        let sys = QuadraticSystem::qdiff(&[vec![vec![1, 2], vec![0, -1]]], &[0]).unwrap();
        let zero = sys.assignment_from_values(&vec![BigInt::zero(); 4]);
        assert_eq!(evaluate(&sys, &zero).unwrap(), vec![BigInt::zero()]);
    }

    #[test]
    fn skew_example() {
        let a = IntMatrix::from_i64_rows(&[[0, 1], [0, 0]]);
        let sys = QuadraticSystem::new(Shape::QSkew, 2, vec![a], vec![vec![1.into()]], vec![]).unwrap();
        let sol = assign(&[("x1", 1), ("x2", 0), ("y1", 0), ("y2", 1)]);
        assert_eq!(evaluate(&sys, &sol).unwrap(), vec![BigInt::zero()]);
        // swapping the blocks negates the left side: residual -1 - 1
        let swapped = assign(&[("x1", 0), ("x2", 1), ("y1", 1), ("y2", 0)]);
        assert_eq!(evaluate(&sys, &swapped).unwrap(), vec![BigInt::from(-2)]);
    }

    #[test]
    fn missing_and_unknown_variables() {
        let sys = QuadraticSystem::qdiff(&[vec![vec![1]]], &[6]).unwrap();
        assert_eq!(
            evaluate(&sys, &assign(&[("x1", 1)])),
            Err(Error::MissingVariable("y1".into()))
        );
        assert_eq!(
            evaluate(&sys, &assign(&[("x1", 1), ("y1", 1), ("z", 0)])),
            Err(Error::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn validation_rules() {
        let lower = IntMatrix::from_i64_rows(&[[0, 0], [1, 0]]);
        assert!(QuadraticSystem::new(Shape::QSym, 2, vec![lower], vec![vec![0.into()]], vec![]).is_err());
        let a = IntMatrix::from_i64_rows(&[[1]]);
        let zero_form = IntMatrix::zeros(1, 1);
        assert!(QuadraticSystem::new(Shape::QBlin, 1, vec![a.clone()], vec![vec![0.into()]], vec![zero_form])
            .is_err());
        assert!(QuadraticSystem::new(Shape::QDiff, 1, vec![a], vec![vec![]], vec![]).is_err());
    }

    #[test]
    fn qblin_equations() {
        // u^T B v with B = [[1, 2]] and a = 3: 3 u1 v1 + 6 u1 v2 = 5
        let sys = QuadraticSystem::new(
            Shape::QBlin,
            1,
            vec![IntMatrix::from_i64_rows(&[[3]])],
            vec![vec![5.into()]],
            vec![IntMatrix::from_i64_rows(&[[1, 2]])],
        )
        .unwrap();
        assert_eq!(sys.variables(), vec!["u1_1", "v1_1", "v1_2"]);
        let r = evaluate(&sys, &assign(&[("u1_1", 1), ("v1_1", 1), ("v1_2", 1)])).unwrap();
        assert_eq!(r, vec![BigInt::from(4)]);
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"shape":"QDIFF","r":1,"coefficients":[[[2]]],"rhs":[1]}"#;
        let sys: QuadraticSystem = serde_json::from_str(src).unwrap();
        assert_eq!(sys.s(), 1);
        let back: QuadraticSystem = serde_json::from_str(&serde_json::to_string(&sys).unwrap()).unwrap();
        assert_eq!(back, sys);
        let blin = r#"{"shape":"QBLIN","r":1,"coefficients":[[[1]]],"rhs":[["2"]],"forms":[[["2"]]]}"#;
        let sys: QuadraticSystem = serde_json::from_str(blin).unwrap();
        assert_eq!(sys.rhs, vec![vec![BigInt::from(2)]]);
        let mismatched = r#"{"shape":"QBLIN","r":1,"coefficients":[[[1]]],"rhs":[2],"forms":[[["2"]]]}"#;
        assert!(serde_json::from_str::<QuadraticSystem>(mismatched).is_err());
    }
}
