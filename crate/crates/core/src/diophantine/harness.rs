//! Empirical comparison of a `QDIFF` system with its `QBLIN` simulation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::brute::brute_force_search;
use super::reduce::{
    backward_transport, corrected_witness, forward_witness, reduce_qdiff_to_qblin, BackwardTransport,
    CorrectedWitness, ForwardWitness, InstBilp,
};
use super::system::{Assignment, QuadraticSystem, Shape};
use crate::cdga::{extract_bilinear_forms, fixtures, MinimalModel};
use crate::error::{Error, Result};
use crate::intlinalg::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HarnessReport {
    pub bound: u64,
    #[serde(with = "crate::json::big_map_opt")]
    pub qdiff_solution: Option<Assignment>,
    pub qdiff_explored: u64,
    #[serde(with = "crate::json::big_map_opt")]
    pub inst_solution: Option<Assignment>,
    pub inst_explored: u64,
    /// `b¹₁₁` after reshuffling.
    #[serde(with = "crate::json::big")]
    pub scale: BigInt,
    pub forward: Option<ForwardWitness>,
    pub corrected: Option<CorrectedWitness>,
    pub backward: Option<BackwardTransport>,
    /// Set when a box solution of the simulation could not be transported
    /// back to a solution of the scaled system.
    pub backward_failure: Option<String>,
    /// Box solution, or an unscaled solution read off a simulation solution.
    pub qdiff_certified: bool,
    /// Box solution, or a witness built from a `QDIFF` solution that solves
    /// the simulation exactly.
    pub inst_certified: bool,
    pub verdict: Verdict,
}

fn backward_check(inst: &InstBilp, solution: &Assignment) -> (Option<BackwardTransport>, Option<String>) {
    match backward_transport(inst, solution) {
        Ok(b) if b.normalized_solves_inst && b.solves_scaled => (Some(b), None),
        Ok(b) => {
            let why = if b.normalized_solves_inst {
                "extracted values do not solve the scaled system"
            } else {
                "normalized assignment does not solve the simulation"
            };
            (Some(b), Some(why.into()))
        }
        Err(e) => (None, Some(e.to_string())),
    }
}

/// Searches both systems in `[-bound, bound]` and transports whatever is
/// found in each direction.
pub fn equivalence_harness(
    qdiff: &QuadraticSystem,
    forms: &[IntMatrix],
    bound: u64,
    budget: u64,
) -> Result<HarnessReport> {
    let inst = reduce_qdiff_to_qblin(qdiff, forms)?;
    let q = brute_force_search(qdiff, bound, budget)?;
    let i = brute_force_search(&inst.system, bound, budget)?;

    let (forward, corrected) = match &q.solution {
        Some(sol) => (Some(forward_witness(&inst, sol)?), corrected_witness(&inst, sol)?),
        None => (None, None),
    };
    let (backward, backward_failure) = match &i.solution {
        Some(sol) => backward_check(&inst, sol),
        None => (None, None),
    };

    let qdiff_certified =
        q.solution.is_some() || backward.as_ref().is_some_and(|b| b.unscaled.is_some());
    let inst_certified = i.solution.is_some()
        || forward.as_ref().is_some_and(|f| f.valid)
        || corrected.as_ref().is_some_and(|c| c.residuals.is_zero());
    let verdict = if qdiff_certified == inst_certified {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(HarnessReport {
        bound,
        qdiff_solution: q.solution,
        qdiff_explored: q.explored,
        inst_solution: i.solution,
        inst_explored: i.explored,
        scale: inst.forms[0][(0, 0)].clone(),
        forward,
        corrected,
        backward,
        backward_failure,
        qdiff_certified,
        inst_certified,
        verdict,
    })
}

/// A named source of bilinear forms for the batch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFamily {
    pub name: String,
    pub forms: Vec<IntMatrix>,
}

impl FormFamily {
    pub fn from_model(name: &str, model: &MinimalModel) -> Result<Self> {
        Ok(FormFamily {
            name: name.into(),
            forms: extract_bilinear_forms(model)?.forms,
        })
    }

    /// Forms of the 2-sphere, of `diag(1, 2)` and of the shear model.
    pub fn standard() -> Vec<FormFamily> {
        [("s2", fixtures::s2()), ("diag12", fixtures::diag12()), ("shear", fixtures::shear())]
            .iter()
            .map(|(n, m)| Self::from_model(n, m).expect("fixture forms"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchConfig {
    pub seed: u64,
    pub instances: usize,
    pub bound: u64,
    pub budget: u64,
    pub max_r: usize,
    pub max_s: usize,
    pub max_entry: i64,
}

impl BatchConfig {
    pub fn standard(seed: u64) -> Self {
        BatchConfig {
            seed,
            instances: 120,
            bound: 3,
            budget: super::brute::DEFAULT_BUDGET,
            max_r: 2,
            max_s: 2,
            max_entry: 2,
        }
    }
}

/// Draws a `QDIFF` system with `r ≤ max_r`, `s ≤ max_s` and every entry in
/// `[-max_entry, max_entry]`.
pub fn random_qdiff<R: Rng>(rng: &mut R, max_r: usize, max_s: usize, max_entry: i64) -> QuadraticSystem {
    let r = rng.gen_range(1..=max_r);
    let s = rng.gen_range(1..=max_s);
    let mut draw = || BigInt::from(rng.gen_range(-max_entry..=max_entry));
    let coefficients = (0..s)
        .map(|_| {
            let rows = (0..r).map(|_| (0..r).map(|_| draw()).collect()).collect();
            IntMatrix::from_rows(rows, r).expect("square")
        })
        .collect();
    let rhs = vec![(0..s).map(|_| draw()).collect()];
    QuadraticSystem::new(Shape::QDiff, r, coefficients, rhs, Vec::new()).expect("well formed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchEntry {
    pub index: usize,
    pub family: String,
    pub system: QuadraticSystem,
    pub report: Option<HarnessReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchSummary {
    pub instances: usize,
    pub errors: usize,
    pub qdiff_solvable: usize,
    pub inst_solvable: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub backward_checked: usize,
    pub backward_failures: usize,
    pub backward_unscaled: usize,
    pub forward_checked: usize,
    pub forward_valid: usize,
    pub forward_invalid: usize,
    /// Largest and total absolute forward residual.
    #[serde(with = "crate::json::big")]
    pub forward_residual_max: BigInt,
    #[serde(with = "crate::json::big")]
    pub forward_residual_total: BigInt,
    /// Forward failures per equation family.
    pub forward_main_failures: usize,
    pub forward_zw_failures: usize,
    pub forward_u_zero_failures: usize,
    pub forward_v_zero_failures: usize,
    pub corrected_valid: usize,
    pub corrected_exact_scale: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchReport {
    pub config: BatchConfig,
    pub families: Vec<FormFamily>,
    pub entries: Vec<BatchEntry>,
    pub summary: BatchSummary,
}

fn nonzero(v: &[BigInt]) -> bool {
    v.iter().any(|x| !x.is_zero())
}

fn summarize(entries: &[BatchEntry]) -> BatchSummary {
    let mut s = BatchSummary {
        instances: entries.len(),
        ..Default::default()
    };
    for e in entries {
        let Some(r) = &e.report else {
            s.errors += 1;
            continue;
        };
        s.qdiff_solvable += usize::from(r.qdiff_solution.is_some());
        s.inst_solvable += usize::from(r.inst_solution.is_some());
        match r.verdict {
            Verdict::Consistent => s.consistent += 1,
            Verdict::Inconsistent => s.inconsistent += 1,
        }
        if r.inst_solution.is_some() {
            s.backward_checked += 1;
            s.backward_failures += usize::from(r.backward_failure.is_some());
            s.backward_unscaled += usize::from(r.backward.as_ref().is_some_and(|b| b.unscaled.is_some()));
        }
        if let Some(f) = &r.forward {
            s.forward_checked += 1;
            if f.valid {
                s.forward_valid += 1;
            } else {
                s.forward_invalid += 1;
            }
            let l1 = f.residuals.l1();
            if l1 > s.forward_residual_max {
                s.forward_residual_max = l1.clone();
            }
            s.forward_residual_total += l1;
            s.forward_main_failures += usize::from(nonzero(&f.residuals.main));
            s.forward_zw_failures += usize::from(nonzero(&f.residuals.zw));
            s.forward_u_zero_failures += usize::from(nonzero(&f.residuals.u_zero));
            s.forward_v_zero_failures += usize::from(nonzero(&f.residuals.v_zero));
        }
        if let Some(c) = &r.corrected {
            s.corrected_valid += usize::from(c.valid);
            s.corrected_exact_scale += usize::from(c.valid && c.matches_original_scale);
        }
    }
    s
}

/// Runs the harness on `config.instances` seeded systems, cycling through
/// the form families.
pub fn harness_batch(config: &BatchConfig, families: &[FormFamily]) -> Result<BatchReport> {
    if families.is_empty() {
        return Err(Error::InvalidInput("no form families".into()));
    }
    if config.max_r == 0 || config.max_s == 0 || config.max_entry < 0 {
        return Err(Error::InvalidInput("batch sizes must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut entries = Vec::with_capacity(config.instances);
    for index in 0..config.instances {
        let family = &families[index % families.len()];
        let system = random_qdiff(&mut rng, config.max_r, config.max_s, config.max_entry);
        let (report, error) = match equivalence_harness(&system, &family.forms, config.bound, config.budget) {
            Ok(r) => (Some(r), None),
            Err(e @ Error::BudgetExceeded { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        entries.push(BatchEntry {
            index,
            family: family.name.clone(),
            system,
            report,
            error,
        });
    }
    let summary = summarize(&entries);
    Ok(BatchReport {
        config: config.clone(),
        families: families.to_vec(),
        entries,
        summary,
    })
}

impl BatchSummary {
    /// Mean absolute forward residual as an exact fraction string.
    pub fn forward_residual_mean(&self) -> String {
        if self.forward_checked == 0 {
            return "0".into();
        }
        let mean = num_rational::BigRational::new(
            self.forward_residual_total.clone(),
            BigInt::from(self.forward_checked),
        );
        crate::json::format_rational(&mean)
    }

    pub fn describe(&self) -> String {
        format!(
            "instances {}, errors {}, qdiff solvable {}, simulation solvable {}, consistent {}, inconsistent {}, \
             backward checked {} failed {} unscaled {}, forward checked {} valid {} invalid {} \
             (families main {} zw {} u-zero {} v-zero {}), residual max {} mean {}, corrected valid {} exact scale {}",
            self.instances,
            self.errors,
            self.qdiff_solvable,
            self.inst_solvable,
            self.consistent,
            self.inconsistent,
            self.backward_checked,
            self.backward_failures,
            self.backward_unscaled,
            self.forward_checked,
            self.forward_valid,
            self.forward_invalid,
            self.forward_main_failures,
            self.forward_zw_failures,
            self.forward_u_zero_failures,
            self.forward_v_zero_failures,
            self.forward_residual_max.abs(),
            self.forward_residual_mean(),
            self.corrected_valid,
            self.corrected_exact_scale,
        )
    }
}
