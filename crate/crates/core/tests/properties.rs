use hspace_core::abgroup::FgAbelianGroup;
use hspace_core::cdga::{fixtures as models, MinimalModel, Monomial, Polynomial};
use hspace_core::diophantine::{
    brute_force_solve, evaluate, forward_witness, reduce_qdiff_to_qblin, squareify, QuadraticSystem, Shape,
};
use hspace_core::encoder::{fat_wedge_cells, Expr};
use hspace_core::intlinalg::{
    hermite_normal_form, invert_unimodular, smith_normal_form, solve_integer_system, IntMatrix, SystemSolution,
};
use hspace_core::simplicial::{relative_homology, SimplicialComplex, SimplicialPair};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, n), m)
            .prop_map(move |rows| IntMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(), n).unwrap())
    })
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_certificate(a in matrix(6, 6, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.determinant().unwrap().abs().is_one());
        prop_assert!(snf.v.determinant().unwrap().abs().is_one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
    }

    #[test]
    fn hermite_certificate(b in matrix(5, 5, 6)) {
        let f = hermite_normal_form(&b);
        prop_assert_eq!(f.u.mul(&b), f.h.clone());
        prop_assert!(f.u.determinant().unwrap().abs().is_one());
        for (row, &c) in f.pivots.iter().enumerate() {
            prop_assert!(f.h[(row, c)].is_positive());
            for below in row + 1..f.h.rows() {
                prop_assert!(f.h[(below, c)].is_zero());
            }
        }
        for row in f.rank..f.h.rows() {
            prop_assert!(f.h.row(row).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solver_answers_are_certified(a in matrix(3, 3, 4), seed in prop::collection::vec(-4i64..=4, 3)) {
        let b = ints(&seed[..a.rows()]);
        match solve_integer_system(&a, &b).unwrap() {
            SystemSolution::Solution(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
            SystemSolution::Infeasible(cert) => prop_assert!(cert.verify(&a, &b)),
        }
    }

    #[test]
    fn unimodular_inverse(ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..12)) {
        let mut m = IntMatrix::identity(4);
        for (i, j, k) in ops {
            if i != j {
                let mut e = IntMatrix::identity(4);
                e[(i, j)] = BigInt::from(k);
                m = e.mul(&m);
            }
        }
        let inv = invert_unimodular(&m).unwrap();
        prop_assert_eq!(inv.mul(&m), IntMatrix::identity(4));
    }

    #[test]
    fn presentation_of_diagonal(orders in prop::collection::vec(0u64..8, 1..4)) {
        let diag: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
        let rel = IntMatrix::diagonal(orders.len(), orders.len(), &diag);
        let g = FgAbelianGroup::from_presentation(&rel);
        let free = orders.iter().filter(|&&x| x == 0).count();
        prop_assert_eq!(g.free_rank, free);
        let finite: BigInt = orders.iter().filter(|&&x| x > 0).map(|&x| BigInt::from(x)).product();
        prop_assert_eq!(g.torsion_order(), finite);
    }

    #[test]
    fn coset_and_kernel_counts(orders in prop::collection::vec(2u64..9, 0..3), free in 0usize..2, r in 1u64..7) {
        let g = FgAbelianGroup::from_cyclic_orders(free, &orders.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let gcds: u64 = g.torsion_factors.iter().map(|t| t.gcd(&BigInt::from(r))).map(|x| u64::try_from(x).unwrap()).product();
        prop_assert_eq!(g.cosets_mod_r(r).unwrap().len() as u64, r.pow(free as u32) * gcds);
        let kernel = g.order_dividing_subgroup(r).unwrap();
        prop_assert_eq!(kernel.len() as u64, gcds);
        for x in &kernel {
            prop_assert!(g.scale(&BigInt::from(r), x).is_zero());
        }
    }

    #[test]
    fn group_law(orders in prop::collection::vec(2u64..7, 1..3), xs in prop::collection::vec(-10i64..10, 6)) {
        let g = FgAbelianGroup::from_cyclic_orders(1, &orders.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let k = g.num_summands();
        let x = g.from_i64(&xs[..k]).unwrap();
        let y = g.from_i64(&xs[3..3 + k]).unwrap();
        prop_assert_eq!(g.add(&x, &y), g.add(&y, &x));
        prop_assert!(g.add(&x, &g.neg(&x)).is_zero());
    }

    #[test]
    fn euler_characteristic_matches_homology(faces in prop::collection::vec(prop::collection::btree_set(0u32..6, 1..4), 1..6)) {
        let maximal: Vec<Vec<u32>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
        let k = SimplicialComplex::from_maximal(&maximal);
        let pair = SimplicialPair::absolute(k.clone());
        let chi: i64 = (0..=3)
            .map(|n| {
                let rank = relative_homology(&pair, n).free_rank as i64;
                if n % 2 == 0 { rank } else { -rank }
            })
            .sum();
        prop_assert_eq!(chi, k.euler_characteristic());
        let trivial = SimplicialPair::new(k.clone(), k).unwrap();
        for n in 0..=3 {
            prop_assert!(relative_homology(&trivial, n).is_trivial());
        }
    }

    #[test]
    fn leibniz_rule(word_a in prop::collection::vec(0usize..3, 1..3), word_b in prop::collection::vec(0usize..3, 1..3)) {
        let m = models::mixed_pair();
        let poly = |w: &[usize]| w.iter().fold(Polynomial::constant(BigRational::one()), |acc, &g| m.mul(&acc, &Polynomial::generator(g)));
        let (x, y) = (poly(&word_a), poly(&word_b));
        let deg: u32 = word_a.iter().map(|&g| m.generators()[g].degree).sum();
        let sign = if deg.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        let lhs = m.d(&m.mul(&x, &y));
        let rhs = m.mul(&m.d(&x), &y).add(&m.mul(&x, &m.d(&y)).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_commutativity(i in 0usize..3, j in 0usize..3) {
        let m: MinimalModel = models::mixed_pair();
        let (x, y) = (Polynomial::generator(i), Polynomial::generator(j));
        let (p, q) = (m.generators()[i].degree, m.generators()[j].degree);
        let sign = if (p * q) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        prop_assert_eq!(m.mul(&x, &y), m.mul(&y, &x).scale(&sign));
        prop_assert!(Monomial::generator(i).p_degree() == 1);
    }

    #[test]
    fn qdiff_rhs_scaling(a in prop::collection::vec(-2i64..=2, 4), x in prop::collection::vec(-3i64..=3, 4), k in -3i64..=3) {
        let coeffs = vec![vec![a[0], a[1]], vec![a[2], a[3]]];
        let lhs = a[0] * x[0] * x[2] + a[1] * x[0] * x[3] + a[2] * x[1] * x[2] + a[3] * x[1] * x[3];
        let sys = QuadraticSystem::qdiff(std::slice::from_ref(&coeffs), &[lhs]).unwrap();
        let sol = sys.assignment_from_values(&ints(&x));
        prop_assert!(evaluate(&sys, &sol).unwrap().iter().all(Zero::is_zero));
        let scaled = QuadraticSystem::qdiff(&[coeffs], &[k * lhs]).unwrap();
        let y_scaled = ints(&[x[0], x[1], k * x[2], k * x[3]]);
        prop_assert!(evaluate(&scaled, &scaled.assignment_from_values(&y_scaled)).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn qskew_swap_negates(a12 in -3i64..=3, a13 in -3i64..=3, a23 in -3i64..=3, rhs in -3i64..=3, v in prop::collection::vec(-3i64..=3, 6)) {
        let a = IntMatrix::from_i64_rows(&[[0, a12, a13], [0, 0, a23], [0, 0, 0]]);
        let sys = QuadraticSystem::new(Shape::QSkew, 3, vec![a], vec![vec![BigInt::from(rhs)]], vec![]).unwrap();
        let swapped: Vec<i64> = v[3..].iter().chain(&v[..3]).copied().collect();
        let r1 = &evaluate(&sys, &sys.assignment_from_values(&ints(&v))).unwrap()[0];
        let r2 = &evaluate(&sys, &sys.assignment_from_values(&ints(&swapped))).unwrap()[0];
        // (L - c) + (-L - c) = -2c
        prop_assert_eq!(r1 + r2, BigInt::from(-2 * rhs));
    }

    #[test]
    fn squareify_identities(b in matrix(4, 4, 4)) {
        prop_assume!(!b.is_zero());
        let sq = squareify(&b).unwrap();
        prop_assert!(sq.verify(&b).is_ok());
        prop_assert_eq!(sq.size(), smith_normal_form(&b).rank());
    }

    #[test]
    fn expressions_round_trip(ids in prop::collection::vec("[a-z][a-z0-9_']{0,3}", 1..4), coeffs in prop::collection::vec(-5i64..=5, 1..4), k in 2i64..5) {
        let wh = Expr::Whitehead(ids.clone());
        let terms: Vec<(BigInt, Expr)> = coeffs.iter().zip(ids.iter().cycle()).map(|(&c, id)| (BigInt::from(c), Expr::Cell(id.clone()))).collect();
        let e = Expr::Sum(vec![(BigInt::one(), Expr::deg(BigInt::from(k), Expr::Sum(terms))), (BigInt::from(-1), wh)]);
        prop_assert_eq!(e.to_string().parse::<Expr>().unwrap(), e);
    }

    #[test]
    fn fat_wedge_counts(dims in prop::collection::vec(1u32..5, 1..6)) {
        let cells = fat_wedge_cells(&dims);
        prop_assert_eq!(cells.len(), (1usize << dims.len()) - 1);
        let total: u32 = dims.iter().sum();
        prop_assert!(cells.iter().all(|(s, d)| s.len() < dims.len() && *d < total));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forward_witness_on_diagonal_forms(c in -3i64..=3, x in -2i64..=2, y in -2i64..=2) {
        let sys = QuadraticSystem::qdiff(&[vec![vec![1]]], &[x * y]).unwrap();
        let forms = vec![IntMatrix::from_i64_rows(&[[1, 0], [0, c]])];
        let inst = reduce_qdiff_to_qblin(&sys, &forms).unwrap();
        let fw = forward_witness(&inst, &sys.assignment_from_values(&ints(&[x, y]))).unwrap();
        prop_assert!(fw.valid);
    }

    #[test]
    fn box_search_finds_planted_products(x in -3i64..=3, y in -3i64..=3) {
        let sys = QuadraticSystem::qdiff(&[vec![vec![1]]], &[x * y]).unwrap();
        let sol = brute_force_solve(&sys, 3, 10_000).unwrap().unwrap();
        prop_assert_eq!(&sol["x1"] * &sol["y1"], BigInt::from(x * y));
    }
}
