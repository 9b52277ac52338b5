//! Formal cell pairs `(X, A)` built from bilinear systems, and their
//! cellular homology.
//!
//! Cells carry symbolic attaching expressions; only their Hurewicz images
//! enter the cellular boundary.

mod expr;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use expr::Expr;

use crate::abgroup::FgAbelianGroup;
use crate::cdga::BilinearForms;
use crate::chain::ChainComplex;
use crate::diophantine::{QuadraticSystem, Shape};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    InA,
    /// A sphere of `X` outside `A` shared by several fat wedges.
    Sphere,
    FatWedge,
    Cylinder,
    RelationCell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dimension: u32,
    pub role: Role,
    pub attaching: Expr,
}

impl Cell {
    fn new(id: impl Into<String>, dimension: u32, role: Role, attaching: Expr) -> Self {
        Cell {
            id: id.into(),
            dimension,
            role,
            attaching,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPairDescription {
    pub cells: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
}

impl CellPairDescription {
    pub fn dimension(&self) -> u32 {
        self.cells.iter().map(|c| c.dimension).max().unwrap_or(0)
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn count(&self, role: Role) -> usize {
        self.cells.iter().filter(|c| c.role == role).count()
    }

    /// Checks identifiers, degrees and that the `A` cells form a subcomplex.
    pub fn validate(&self) -> Result<()> {
        let mut dims = HashMap::new();
        for c in &self.cells {
            if dims.insert(c.id.as_str(), c.dimension).is_some() {
                return Err(Error::MalformedAttaching(format!("duplicate cell `{}`", c.id)));
            }
        }
        let lookup = |id: &str| dims.get(id).copied();
        for c in &self.cells {
            let bad = |why: String| Err(Error::MalformedAttaching(format!("cell `{}`: {why}", c.id)));
            match c.attaching.degree(&lookup)? {
                None => {}
                Some(k) if c.dimension >= 1 && k == c.dimension - 1 => {}
                Some(k) => return bad(format!("attaches along a degree-{k} class")),
            }
            if c.role == Role::InA {
                for id in c.attaching.ids() {
                    if self.cell(id).is_some_and(|x| x.role != Role::InA) {
                        return bad(format!("lies in A but attaches to `{id}` outside A"));
                    }
                }
            }
            for (id, _) in c.attaching.hurewicz() {
                if dims[id.as_str()] + 1 != c.dimension {
                    return bad(format!("boundary meets `{id}` of the wrong dimension"));
                }
            }
        }
        Ok(())
    }

    /// Cellular chain complex of `X`, or of `(X, A)` when `relative`.
    pub fn chain_complex(&self, relative: bool) -> Result<ChainComplex> {
        self.validate()?;
        let top = self.dimension() as usize;
        let mut index: Vec<Vec<&Cell>> = vec![Vec::new(); top + 1];
        for c in &self.cells {
            if !(relative && c.role == Role::InA) {
                index[c.dimension as usize].push(c);
            }
        }
        let position: HashMap<&str, usize> = index
            .iter()
            .flat_map(|cells| cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)))
            .collect();
        let ranks: Vec<usize> = index.iter().map(Vec::len).collect();
        let mut higher = Vec::with_capacity(top);
        for k in 1..=top {
            let mut m = IntMatrix::zeros(ranks[k - 1], ranks[k]);
            for (j, c) in index[k].iter().enumerate() {
                for (id, coeff) in c.attaching.hurewicz() {
                    // relative: faces in A are dropped
                    if let Some(&i) = position.get(id.as_str()) {
                        m[(i, j)] += coeff;
                    }
                }
            }
            higher.push(m);
        }
        ChainComplex::new(ranks, higher)
    }
}

/// Proper subsets of `{0, …, t-1}` with their dimensions `Σ n_i`, by size
/// and then lexicographically.
pub fn fat_wedge_cells(dims: &[u32]) -> Vec<(Vec<usize>, u32)> {
    let t = dims.len();
    let mut out: Vec<(Vec<usize>, u32)> = (0u64..(1u64 << t).saturating_sub(1))
        .map(|mask| {
            let subset: Vec<usize> = (0..t).filter(|&i| mask >> i & 1 == 1).collect();
            let dim = subset.iter().map(|&i| dims[i]).sum();
            (subset, dim)
        })
        .collect();
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multipliers {
    #[serde(with = "crate::json::big_vec")]
    pub p: Vec<BigInt>,
    #[serde(with = "crate::json::big")]
    pub rho1: BigInt,
    #[serde(with = "crate::json::big")]
    pub rho2: BigInt,
    #[serde(with = "crate::json::big")]
    pub rho: BigInt,
}

impl Multipliers {
    pub fn ones(t: usize) -> Self {
        Multipliers {
            p: vec![BigInt::one(); t],
            rho1: BigInt::one(),
            rho2: BigInt::one(),
            rho: BigInt::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereAssignment {
    pub sphere: String,
    /// Label of the target class.
    pub target: String,
    #[serde(with = "crate::json::big")]
    pub multiplier: BigInt,
    /// Prescribed pairings with the degree-`d` generators.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty", with = "crate::json::big_map")]
    pub pairings: BTreeMap<String, BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescription {
    pub assignments: Vec<SphereAssignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    pub pair: CellPairDescription,
    pub map: MapDescription,
}

fn sd(q: usize) -> String {
    format!("sd{}", q + 1)
}
fn e_id(i: usize) -> String {
    format!("e{}", i + 1)
}
fn a_id(i: usize) -> String {
    format!("a{}", i + 1)
}
fn b_id(j: usize) -> String {
    format!("b{}", j + 1)
}

/// Builds the pair and the map on `A` for a `QBLIN` system whose forms come
/// from `target`.
pub fn encode(system: &QuadraticSystem, target: &BilinearForms, mult: &Multipliers) -> Result<Encoding> {
    if system.shape != Shape::QBlin {
        return Err(Error::InvalidInput(format!("expected a QBLIN system, got {}", system.shape)));
    }
    system.validate()?;
    if system.forms.len() != target.forms.len() || system.form_shape() != (target.m(), target.n()) {
        return Err(Error::DimensionMismatch(format!(
            "system has {} forms of shape {:?}, target has {} of shape {}x{}",
            system.forms.len(),
            system.form_shape(),
            target.forms.len(),
            target.m(),
            target.n()
        )));
    }
    let t = target.mu_degrees.len();
    if mult.p.len() != t {
        return Err(Error::InvalidInput(format!("expected {t} multipliers p_i, got {}", mult.p.len())));
    }
    let positive = |x: &BigInt| x > &BigInt::zero();
    if !(mult.p.iter().all(positive) && positive(&mult.rho1) && positive(&mult.rho2) && positive(&mult.rho)) {
        return Err(Error::InvalidInput("multipliers must be positive".into()));
    }
    let (d, d1, d2) = (target.d, target.d1, target.d2);
    if d1 + d2 + target.mu_degrees.iter().sum::<u32>() != d + 1 {
        return Err(Error::DimensionMismatch("target degrees do not add up to d + 1".into()));
    }
    let r = system.r;
    let s = system.s();

    let mut cells = vec![Cell::new("pt", 0, Role::InA, Expr::Zero)];
    cells.extend((0..s).map(|q| Cell::new(sd(q), d, Role::InA, Expr::Zero)));
    cells.extend((0..t).map(|i| Cell::new(e_id(i), target.mu_degrees[i], Role::InA, Expr::Zero)));
    cells.extend((0..r).map(|i| Cell::new(a_id(i), d1, Role::Sphere, Expr::Zero)));
    cells.extend((0..r).map(|j| Cell::new(b_id(j), d2, Role::Sphere, Expr::Zero)));

    let mut wedge_dims = vec![d1, d2];
    wedge_dims.extend_from_slice(&target.mu_degrees);
    let top_factors = |i: usize, j: usize| {
        let mut v = vec![a_id(i), b_id(j)];
        v.extend((0..t).map(e_id));
        v
    };
    for i in 0..r {
        for j in 0..r {
            let factors = top_factors(i, j);
            for (subset, dim) in fat_wedge_cells(&wedge_dims) {
                if subset.len() < 2 {
                    continue;
                }
                let names: Vec<String> = subset.iter().map(|&k| factors[k].clone()).collect();
                let id = format!("w{}_{}.{}", i + 1, j + 1, names.join("."));
                cells.push(Cell::new(id, dim, Role::FatWedge, Expr::Whitehead(names)));
            }
        }
    }

    for (prefix, deg, rho, base) in [("a", d1, &mult.rho1, a_id as fn(usize) -> String), ("b", d2, &mult.rho2, b_id)] {
        for i in 0..r {
            let target_sphere = format!("{prefix}{}'", i + 1);
            cells.push(Cell::new(&target_sphere, deg, Role::Cylinder, Expr::Zero));
            let boundary = Expr::Sum(vec![
                (BigInt::one(), Expr::deg(rho.clone(), Expr::cell(&target_sphere))),
                (-BigInt::one(), Expr::cell(base(i))),
            ]);
            cells.push(Cell::new(format!("cyl.{prefix}{}", i + 1), deg + 1, Role::Cylinder, boundary));
        }
    }

    for (q, a) in system.coefficients.iter().enumerate() {
        let mut terms = vec![(BigInt::one(), Expr::cell(sd(q)))];
        for i in 0..r {
            for j in 0..r {
                if !a[(i, j)].is_zero() {
                    terms.push((-a[(i, j)].clone(), Expr::Whitehead(top_factors(i, j))));
                }
            }
        }
        cells.push(Cell::new(
            format!("rel{}", q + 1),
            d + 1,
            Role::RelationCell,
            Expr::deg(mult.rho.clone(), Expr::Sum(terms)),
        ));
    }

    let mut assumptions = Vec::new();
    if t > 0 {
        let ps: Vec<String> = mult.p.iter().zip(&target.mu).map(|(p, g)| format!("{p}*{g}")).collect();
        assumptions.push(format!("the Whitehead product set [{}] contains zero", ps.join(",")));
    }
    if r > 0 {
        assumptions.push(format!(
            "[{}*g,{}*h,p_1 e_1,...,p_t e_t] is nonempty for g of degree {d1} and h of degree {d2}",
            mult.rho1, mult.rho2
        ));
    }
    if !mult.rho.is_one() || s > 0 {
        assumptions.push(format!("{} annihilates the torsion of the degree-{d} homotopy group", mult.rho));
    }

    let mut assignments = Vec::new();
    for q in 0..s {
        let pairings = target
            .etas
            .iter()
            .enumerate()
            .map(|(p, eta)| (eta.clone(), system.rhs[p][q].clone()))
            .collect();
        assignments.push(SphereAssignment {
            sphere: sd(q),
            target: format!("pairing class {}", q + 1),
            multiplier: BigInt::one(),
            pairings,
        });
    }
    for i in 0..t {
        assignments.push(SphereAssignment {
            sphere: e_id(i),
            target: format!("dual({})", target.mu[i]),
            multiplier: mult.p[i].clone(),
            pairings: BTreeMap::new(),
        });
    }

    let pair = CellPairDescription { cells, assumptions };
    pair.validate()?;
    Ok(Encoding {
        pair,
        map: MapDescription { assignments },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomologyReport {
    pub d: u32,
    pub dimension: u32,
    /// `H_n(X, A)` for `n = 0, …, dim X`.
    pub relative: Vec<FgAbelianGroup>,
    /// `H_n(X)` for `n = 0, …, dim X`.
    pub absolute: Vec<FgAbelianGroup>,
    /// Degrees above `d` with nonzero relative homology.
    pub nonvanishing_above_d: Vec<u32>,
    pub vanishes_above_d: bool,
    pub cohomological_dimension: i64,
}

pub fn verify_relative_homology(desc: &CellPairDescription, d: u32) -> Result<HomologyReport> {
    let rel = desc.chain_complex(true)?;
    let abs = desc.chain_complex(false)?;
    let relative = rel.all_homology();
    let nonvanishing_above_d: Vec<u32> = (0..relative.len() as u32)
        .filter(|&n| n > d && !relative[n as usize].is_trivial())
        .collect();
    Ok(HomologyReport {
        d,
        dimension: desc.dimension(),
        absolute: abs.all_homology(),
        vanishes_above_d: nonvanishing_above_d.is_empty(),
        nonvanishing_above_d,
        cohomological_dimension: rel.cohomological_dimension(),
        relative,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkewEncoding {
    pub complex: CellPairDescription,
    /// Degree of the collapse map on each 6-cell.
    #[serde(with = "crate::json::big_vec")]
    pub cell_degrees: Vec<BigInt>,
}

/// A wedge of 3-spheres with one 6-cell per equation, attached along the
/// Whitehead products named by its coefficients.
pub fn encode_skew_example(system: &QuadraticSystem) -> Result<SkewEncoding> {
    if system.shape != Shape::QSkew {
        return Err(Error::InvalidInput(format!("expected a QSKEW system, got {}", system.shape)));
    }
    system.validate()?;
    let r = system.r;
    let mut cells = vec![Cell::new("pt", 0, Role::InA, Expr::Zero)];
    cells.extend((0..r).map(|i| Cell::new(format!("id{}", i + 1), 3, Role::Sphere, Expr::Zero)));
    for (k, a) in system.coefficients.iter().enumerate() {
        let mut terms = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                let c = &a[(i, j)];
                if !c.is_zero() {
                    terms.push((c.clone(), Expr::Whitehead(vec![format!("id{}", i + 1), format!("id{}", j + 1)])));
                }
            }
        }
        let attaching = if terms.is_empty() { Expr::Zero } else { Expr::Sum(terms) };
        cells.push(Cell::new(format!("c{}", k + 1), 6, Role::RelationCell, attaching));
    }
    let complex = CellPairDescription {
        cells,
        assumptions: Vec::new(),
    };
    complex.validate()?;
    Ok(SkewEncoding {
        complex,
        cell_degrees: system.rhs[0].iter().map(|b| -b).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{extract_bilinear_forms, fixtures};
    use crate::diophantine::reduce_qdiff_to_qblin;

    fn sphere_instance() -> (QuadraticSystem, BilinearForms) {
        let target = extract_bilinear_forms(&fixtures::s2()).unwrap();
        let sys = QuadraticSystem::new(
            Shape::QBlin,
            1,
            vec![IntMatrix::from_i64_rows(&[[1]])],
            vec![vec![BigInt::one()]],
            target.forms.clone(),
        )
        .unwrap();
        (sys, target)
    }

    #[test]
    fn fat_wedge_examples() {
        let dims = |v: &[u32]| fat_wedge_cells(v).into_iter().map(|c| c.1).collect::<Vec<_>>();
        assert_eq!(fat_wedge_cells(&[2, 2]), vec![(vec![], 0), (vec![0], 2), (vec![1], 2)]);
        assert_eq!(dims(&[2, 2, 3]), vec![0, 2, 2, 3, 4, 5, 5]);
        assert_eq!(fat_wedge_cells(&[3]), vec![(vec![], 0)]);
    }

    #[test]
    fn sphere_target_golden() {
        let (sys, target) = sphere_instance();
        let enc = encode(&sys, &target, &Multipliers::ones(0)).unwrap();
        let listing: Vec<String> = enc
            .pair
            .cells
            .iter()
            .map(|c| format!("{} {} {:?} {}", c.id, c.dimension, c.role, c.attaching))
            .collect();
        assert_eq!(
            listing,
            vec![
                "pt 0 InA 0",
                "sd1 3 InA 0",
                "a1 2 Sphere 0",
                "b1 2 Sphere 0",
                "a1' 2 Cylinder 0",
                "cyl.a1 3 Cylinder sum(1*a1',-1*a1)",
                "b1' 2 Cylinder 0",
                "cyl.b1 3 Cylinder sum(1*b1',-1*b1)",
                "rel1 4 RelationCell sum(1*sd1,-1*whitehead(a1,b1))",
            ]
        );
        assert_eq!(enc.map.assignments.len(), 1);
        assert_eq!(enc.map.assignments[0].pairings["b"], BigInt::one());
    }

    #[test]
    fn sphere_target_homology() {
        let (sys, target) = sphere_instance();
        let enc = encode(&sys, &target, &Multipliers::ones(0)).unwrap();
        let rep = verify_relative_homology(&enc.pair, 3).unwrap();
        // the relation cell is a relative cycle: its boundary lies in A
        assert_eq!(rep.relative[4], FgAbelianGroup::free(1));
        assert_eq!(rep.nonvanishing_above_d, vec![4]);
        assert!(!rep.vanishes_above_d);
        assert_eq!(rep.cohomological_dimension, 4);
        // in X itself the relation cell kills the sphere of A
        assert!(rep.absolute[4].is_trivial());
        assert!(rep.absolute[3].is_trivial());
    }

    #[test]
    fn multipliers_show_up_as_degree_markers() {
        let (sys, target) = sphere_instance();
        let mult = Multipliers {
            p: vec![],
            rho1: 2.into(),
            rho2: 1.into(),
            rho: 3.into(),
        };
        let enc = encode(&sys, &target, &mult).unwrap();
        assert_eq!(enc.pair.cell("cyl.a1").unwrap().attaching.to_string(), "sum(1*deg(2,a1'),-1*a1)");
        assert_eq!(
            enc.pair.cell("rel1").unwrap().attaching.to_string(),
            "deg(3,sum(1*sd1,-1*whitehead(a1,b1)))"
        );
        let rep = verify_relative_homology(&enc.pair, 3).unwrap();
        // the cylinder identifies a1 with 2 a1', leaving a free group
        assert_eq!(rep.relative[2], FgAbelianGroup::free(2));
    }

    #[test]
    fn no_equations() {
        let target = extract_bilinear_forms(&fixtures::s2()).unwrap();
        let sys = QuadraticSystem::new(Shape::QBlin, 1, vec![], vec![vec![]], target.forms.clone()).unwrap();
        let enc = encode(&sys, &target, &Multipliers::ones(0)).unwrap();
        assert_eq!(enc.pair.count(Role::RelationCell), 0);
        let rep = verify_relative_homology(&enc.pair, 3).unwrap();
        assert!(rep.vanishes_above_d);
    }

    #[test]
    fn x_equal_to_a_is_acyclic() {
        let desc = CellPairDescription {
            cells: vec![
                Cell::new("pt", 0, Role::InA, Expr::Zero),
                Cell::new("s", 2, Role::InA, Expr::Zero),
            ],
            assumptions: vec![],
        };
        let rep = verify_relative_homology(&desc, 1).unwrap();
        assert!(rep.relative.iter().all(FgAbelianGroup::is_trivial));
        assert_eq!(rep.cohomological_dimension, -1);
    }

    #[test]
    fn malformed_descriptions() {
        let cell = |id: &str, dim, role, e: &str| Cell::new(id, dim, role, e.parse().unwrap());
        let cases = [
            vec![cell("x", 2, Role::Sphere, "0"), cell("x", 2, Role::Sphere, "0")],
            vec![cell("x", 2, Role::Sphere, "y")],
            vec![cell("x", 2, Role::Sphere, "0"), cell("c", 4, Role::Cylinder, "x")],
            vec![cell("x", 2, Role::Sphere, "0"), cell("c", 2, Role::InA, "whitehead(x)")],
        ];
        for cells in cases {
            let desc = CellPairDescription { cells, assumptions: vec![] };
            assert!(matches!(desc.validate(), Err(Error::MalformedAttaching(_))), "{desc:?}");
        }
    }

    fn direct_fat_wedge_count(r: usize, t: usize) -> usize {
        // subsets of {a_i, b_j, e_1..e_t} with at least two members, not all
        let mut count = 0;
        for _ in 0..r * r {
            for mask in 0u32..(1 << (t + 2)) {
                let size = mask.count_ones() as usize;
                if size >= 2 && size < t + 2 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn cell_counts() {
        for t in 0..=2usize {
            let mut spec: Vec<(String, u32)> = vec![("a".into(), 2), ("b".into(), 2)];
            let mut diff_term = vec!["a".to_string(), "b".to_string()];
            for i in 0..t {
                spec.push((format!("x{i}"), 3));
                diff_term.push(format!("x{i}"));
            }
            let d = 3 + 3 * t as u32;
            spec.push(("eta".into(), d));
            let gens: Vec<(&str, u32)> = spec.iter().map(|(n, k)| (n.as_str(), *k)).collect();
            let term: Vec<&str> = diff_term.iter().map(String::as_str).collect();
            let model =
                crate::cdga::MinimalModel::from_table(&gens, &[("eta", &[(1, term.as_slice())])]).unwrap();
            let target = extract_bilinear_forms(&model).unwrap();
            assert_eq!(target.mu_degrees.len(), t);
            for r in 1..=2 {
                let q = QuadraticSystem::qdiff(&[vec![vec![1; r]; r]], &[1]).unwrap();
                let sys = QuadraticSystem::new(
                    Shape::QBlin,
                    r,
                    q.coefficients.clone(),
                    vec![vec![BigInt::one()]],
                    target.forms.clone(),
                )
                .unwrap();
                let enc = encode(&sys, &target, &Multipliers::ones(t)).unwrap();
                assert_eq!(enc.pair.count(Role::FatWedge), direct_fat_wedge_count(r, t));
                assert_eq!(enc.pair.count(Role::FatWedge), r * r * ((1 << (t + 2)) - t - 4));
                assert_eq!(enc.pair.count(Role::InA), 1 + 1 + t);
            }
        }
    }

    #[test]
    fn coefficient_scaling_only_touches_relation_cells() {
        let (sys, target) = sphere_instance();
        let mut scaled = sys.clone();
        scaled.coefficients[0] = IntMatrix::from_i64_rows(&[[3]]);
        let a = encode(&sys, &target, &Multipliers::ones(0)).unwrap();
        let b = encode(&scaled, &target, &Multipliers::ones(0)).unwrap();
        for (x, y) in a.pair.cells.iter().zip(&b.pair.cells) {
            assert_eq!(x == y, x.role != Role::RelationCell);
        }
        let mut rhs = sys.clone();
        rhs.rhs[0][0] = BigInt::from(5);
        let c = encode(&rhs, &target, &Multipliers::ones(0)).unwrap();
        assert_eq!(a.pair, c.pair);
        assert_ne!(a.map, c.map);
    }

    #[test]
    fn reduced_instances_encode() {
        let target = extract_bilinear_forms(&fixtures::diag12()).unwrap();
        let q = QuadraticSystem::qdiff(&[vec![vec![1, -1], vec![2, 0]]], &[2]).unwrap();
        let inst = reduce_qdiff_to_qblin(&q, &target.forms).unwrap();
        let enc = encode(&inst.system, &target, &Multipliers::ones(0)).unwrap();
        let rep = verify_relative_homology(&enc.pair, target.d).unwrap();
        let s = inst.system.s() as usize;
        assert_eq!(rep.relative[target.d as usize + 1], FgAbelianGroup::free(s));
    }

    #[test]
    fn skew_examples() {
        let sys = QuadraticSystem::new(
            Shape::QSkew,
            2,
            vec![IntMatrix::from_i64_rows(&[[0, 1], [0, 0]])],
            vec![vec![BigInt::zero()]],
            vec![],
        )
        .unwrap();
        let enc = encode_skew_example(&sys).unwrap();
        assert_eq!(enc.complex.cell("c1").unwrap().attaching.to_string(), "sum(1*whitehead(id1,id2))");
        assert_eq!(enc.cell_degrees, vec![BigInt::zero()]);

        let one = QuadraticSystem::new(
            Shape::QSkew,
            1,
            vec![IntMatrix::from_i64_rows(&[[0]])],
            vec![vec![BigInt::from(3)]],
            vec![],
        )
        .unwrap();
        let enc = encode_skew_example(&one).unwrap();
        assert_eq!(enc.complex.cell("c1").unwrap().attaching, Expr::Zero);
        assert_eq!(enc.cell_degrees, vec![BigInt::from(-3)]);
    }

    #[test]
    fn skew_golden() {
        let sys = QuadraticSystem::new(
            Shape::QSkew,
            3,
            vec![
                IntMatrix::from_i64_rows(&[[0, 2, -1], [0, 0, -1], [0, 0, 0]]),
                IntMatrix::from_i64_rows(&[[0, -1, 0], [0, 0, -3], [0, 0, 0]]),
            ],
            vec![vec![BigInt::from(1), BigInt::from(-2)]],
            vec![],
        )
        .unwrap();
        let enc = encode_skew_example(&sys).unwrap();
        let json = serde_json::to_string(&enc).unwrap();
        assert_eq!(
            json,
            r#"{"complex":{"cells":[{"id":"pt","dimension":0,"role":"in-a","attaching":"0"},{"id":"id1","dimension":3,"role":"sphere","attaching":"0"},{"id":"id2","dimension":3,"role":"sphere","attaching":"0"},{"id":"id3","dimension":3,"role":"sphere","attaching":"0"},{"id":"c1","dimension":6,"role":"relation-cell","attaching":"sum(2*whitehead(id1,id2),-1*whitehead(id1,id3),-1*whitehead(id2,id3))"},{"id":"c2","dimension":6,"role":"relation-cell","attaching":"sum(-1*whitehead(id1,id2),-3*whitehead(id2,id3))"}]},"cellDegrees":["-1","2"]}"#
        );
        let back: SkewEncoding = serde_json::from_str(&json).unwrap();
        assert_eq!(back, enc);
    }
}
