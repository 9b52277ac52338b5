//! Exhaustive box search with interval pruning.
//!
//! Values are tried from `-N` to `N` for each variable in the system's
//! variable order, so the first solution found is the lexicographically
//! least one in the box. Variables that occur in no equation are fixed
//! to `-N`.

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};

use super::system::{Assignment, QuadraticSystem};
use crate::error::{Error, Result};

/// Largest box half-width accepted by the search.
pub const MAX_BOUND: u64 = 1 << 20;

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub solution: Option<Assignment>,
    /// Search nodes visited (one per tentative value).
    pub explored: u64,
}

struct Compiled {
    eqs: Vec<(Vec<(i128, usize, usize)>, i128)>,
    watch: Vec<Vec<usize>>,
}

fn compile(system: &QuadraticSystem, nvars: usize) -> Result<Compiled> {
    let small = |x: &BigInt| {
        x.to_i64()
            .map(i128::from)
            .ok_or_else(|| Error::InvalidInput(format!("coefficient {x} is too large for box search")))
    };
    let mut eqs = Vec::new();
    let mut watch = vec![Vec::new(); nvars];
    for (e, eq) in system.equations().into_iter().enumerate() {
        let terms = eq
            .terms
            .iter()
            .map(|(c, a, b)| Ok((small(c)?, *a, *b)))
            .collect::<Result<Vec<_>>>()?;
        for &(_, a, b) in &terms {
            for v in [a, b] {
                if watch[v].last() != Some(&e) {
                    watch[v].push(e);
                }
            }
        }
        eqs.push((terms, small(&eq.rhs)?));
    }
    Ok(Compiled { eqs, watch })
}

struct Search<'a> {
    c: &'a Compiled,
    n: i128,
    order: Vec<usize>,
    values: Vec<i128>,
    assigned: Vec<bool>,
    explored: u64,
    budget: u64,
}

impl Search<'_> {
    fn feasible(&self, e: usize) -> bool {
        let (terms, rhs) = &self.c.eqs[e];
        let n = self.n;
        let (mut lo, mut hi) = (0i128, 0i128);
        for &(c, a, b) in terms {
            let (ta, tb) = (self.assigned[a], self.assigned[b]);
            if a == b {
                if ta {
                    let v = c * self.values[a] * self.values[a];
                    lo += v;
                    hi += v;
                } else if c > 0 {
                    hi += c * n * n;
                } else {
                    lo += c * n * n;
                }
                continue;
            }
            match (ta, tb) {
                (true, true) => {
                    let v = c * self.values[a] * self.values[b];
                    lo += v;
                    hi += v;
                }
                (true, false) | (false, true) => {
                    let fixed = if ta { self.values[a] } else { self.values[b] };
                    let span = (c * fixed).abs() * n;
                    lo -= span;
                    hi += span;
                }
                (false, false) => {
                    let span = c.abs() * n * n;
                    lo -= span;
                    hi += span;
                }
            }
        }
        lo <= *rhs && *rhs <= hi
    }

    fn run(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let var = self.order[depth];
        self.assigned[var] = true;
        for v in -self.n..=self.n {
            self.explored += 1;
            if self.explored > self.budget {
                return Err(Error::BudgetExceeded {
                    required: String::new(),
                    explored: self.explored,
                    budget: self.budget,
                });
            }
            self.values[var] = v;
            if self.c.watch[var].iter().all(|&e| self.feasible(e)) && self.run(depth + 1)? {
                return Ok(true);
            }
        }
        self.assigned[var] = false;
        Ok(false)
    }
}

/// Searches `[-bound, bound]^vars` for a solution, visiting at most `budget`
/// nodes.
pub fn brute_force_search(system: &QuadraticSystem, bound: u64, budget: u64) -> Result<SearchOutcome> {
    if bound > MAX_BOUND {
        return Err(Error::InvalidInput(format!("bound {bound} exceeds {MAX_BOUND}")));
    }
    let vars = system.variables();
    let c = compile(system, vars.len())?;
    let n = i128::from(bound);
    let mut values = vec![-n; vars.len()];
    let order: Vec<usize> = (0..vars.len()).filter(|&v| !c.watch[v].is_empty()).collect();

    let mut search = Search {
        c: &c,
        n,
        order,
        values: values.clone(),
        assigned: vec![false; vars.len()],
        explored: 0,
        budget,
    };
    let constant_ok = (0..c.eqs.len()).all(|e| search.feasible(e));
    let found = constant_ok
        && search.run(0).map_err(|e| match e {
            Error::BudgetExceeded { explored, budget, .. } => Error::BudgetExceeded {
                required: BigInt::from(2 * bound + 1).pow(vars.len()).to_string(),
                explored,
                budget,
            },
            other => other,
        })?;
    let explored = search.explored;
    let solution = found.then(|| {
        values.clone_from(&search.values);
        vars.into_iter()
            .zip(values.iter().map(|&v| BigInt::from(v)))
            .collect()
    });
    Ok(SearchOutcome { solution, explored })
}

/// Some solution in `[-bound, bound]^vars`, or `None` if the box has none.
pub fn brute_force_solve(system: &QuadraticSystem, bound: u64, budget: u64) -> Result<Option<Assignment>> {
    Ok(brute_force_search(system, bound, budget)?.solution)
}

#[cfg(test)]
mod tests {
    use super::super::system::{evaluate, Shape};
    use super::*;
    use crate::intlinalg::IntMatrix;
    use num_traits::Zero;

    fn xy_equals(c: i64) -> QuadraticSystem {
        QuadraticSystem::qdiff(&[vec![vec![1]]], &[c]).unwrap()
    }

    #[test]
    fn product_six() {
        let sol = brute_force_solve(&xy_equals(6), 6, DEFAULT_BUDGET).unwrap().unwrap();
        let x = &sol["x1"] * &sol["y1"];
        assert_eq!(x, BigInt::from(6));
        // lexicographically least: x = -6, y = -1
        assert_eq!(sol["x1"], BigInt::from(-6));
    }

    #[test]
    fn product_seven_small_box() {
        assert!(brute_force_solve(&xy_equals(7), 2, DEFAULT_BUDGET).unwrap().is_none());
    }

    /// Plain enumeration of the whole box in lexicographic order.
    fn reference(system: &QuadraticSystem, n: i64) -> Option<Vec<i64>> {
        let vars = system.variables().len();
        let side = (2 * n + 1) as usize;
        let total = side.pow(vars as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut vals = vec![0i64; vars];
            for v in (0..vars).rev() {
                vals[v] = (rem % side) as i64 - n;
                rem /= side;
            }
            let a = system.assignment_from_values(&vals.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
            if evaluate(system, &a).unwrap().iter().all(Zero::is_zero) {
                return Some(vals);
            }
        }
        None
    }

    #[test]
    fn three_variable_fixture_matches_reference() {
        // x1x2 + 2 x1x3 - x2x3 = 3
        let a = IntMatrix::from_i64_rows(&[[0, 1, 2], [0, 0, -1], [0, 0, 0]]);
        let sys = QuadraticSystem::new(Shape::QSym, 3, vec![a], vec![vec![3.into()]], vec![]).unwrap();
        for n in 0..=3 {
            let got = brute_force_solve(&sys, n, DEFAULT_BUDGET).unwrap();
            let want = reference(&sys, n as i64);
            let got_vals = got.map(|s| sys.variables().iter().map(|v| s[v].to_i64().unwrap()).collect::<Vec<_>>());
            assert_eq!(got_vals, want, "n = {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = xy_equals(7);
        match brute_force_solve(&sys, 3, 5) {
            Err(Error::BudgetExceeded { required, budget, .. }) => {
                assert_eq!(required, "49");
                assert_eq!(budget, 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unused_variables_sit_at_the_lower_corner() {
        let a = IntMatrix::from_i64_rows(&[[0, 1], [0, 0]]);
        let sys = QuadraticSystem::new(Shape::QDiff, 2, vec![a], vec![vec![1.into()]], vec![]).unwrap();
        let sol = brute_force_solve(&sys, 2, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(sol["x2"], BigInt::from(-2));
        assert_eq!(sol["y1"], BigInt::from(-2));
        assert_eq!(&sol["x1"] * &sol["y2"], BigInt::from(1));
    }
}
