use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hspace_core::abgroup::FgAbelianGroup;
use hspace_core::cdga::{extract_bilinear_forms, BilinearForms, MinimalModel};
use hspace_core::diophantine::{
    brute_force_search, equivalence_harness, harness_batch, reduce_qdiff_to_qblin, BatchConfig, FormFamily,
    HarnessReport, QuadraticSystem, Shape, Verdict, DEFAULT_BUDGET,
};
use hspace_core::encoder::{encode, verify_relative_homology, CellPairDescription, Encoding, HomologyReport, Multipliers};
use hspace_core::intlinalg::IntMatrix;
use hspace_core::simplicial::{cohomological_dimension, relative_cohomology, SimplicialPair};
use hspace_core::Error;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "hspace", version, about = "Exact computations around rational H-spaces and bilinear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H^n(X, A; π) of a simplicial pair.
    Cohomology(Job),
    /// Cohomological dimension of a simplicial pair.
    Cd(Job),
    /// Whether a minimal model is a rational H-space through a degree.
    HspaceCheck(Job),
    /// Bilinear forms of the first nonzero differential.
    ExtractForms(Job),
    /// Rewrite a QDIFF system over given forms as a QBLIN system.
    Reduce(Job),
    /// Box search for an integer solution.
    Solve(Job),
    /// Compare solvability of a QDIFF system and its reduction.
    Harness(Job),
    /// Build the cell pair and boundary map for a QBLIN system.
    Encode(Job),
    /// Homology of an encoded cell pair.
    Verify(Job),
    /// extract, reduce, encode, verify and harness in one report.
    Pipeline(Job),
}

#[derive(Args)]
struct Job {
    /// Input file; repeat for commands taking several.
    #[arg(long, short)]
    input: Vec<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, short)]
    degree: Option<u32>,
    /// Search box is [-bound, bound].
    #[arg(long, default_value_t = 3)]
    bound: u64,
    /// Search nodes allowed per box search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for randomized batches.
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient group, e.g. `Z`, `Z/6`, `Z^2 + Z/2`, `0`.
    #[arg(long, default_value = "Z")]
    coefficients: String,
    /// Number of random instances for a seeded harness batch.
    #[arg(long)]
    instances: Option<usize>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn staged(stage: &str, e: Error) -> Self {
        let mut f = Failure::from(e);
        f.message = format!("{stage}: {}", f.message);
        f
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::RationalHSpace => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(serde_json::Value, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (job, run): (&Job, fn(&Job) -> Outcome) = match &cli.command {
        Command::Cohomology(j) => (j, cohomology),
        Command::Cd(j) => (j, cd),
        Command::HspaceCheck(j) => (j, hspace_check),
        Command::ExtractForms(j) => (j, extract_forms),
        Command::Reduce(j) => (j, reduce),
        Command::Solve(j) => (j, solve),
        Command::Harness(j) => (j, harness),
        Command::Encode(j) => (j, encode_cmd),
        Command::Verify(j) => (j, verify),
        Command::Pipeline(j) => (j, pipeline),
    };
    let result = run(job).and_then(|(report, affirmative)| {
        emit(job.output.as_deref(), &report)?;
        Ok(affirmative)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(path: Option<&Path>, report: &serde_json::Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json(x: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn inputs(job: &Job, names: &[&str]) -> Result<Vec<PathBuf>, Failure> {
    if job.input.len() != names.len() {
        return Err(Failure::input(format!(
            "expected {} --input file(s) ({}), got {}",
            names.len(),
            names.join(", "),
            job.input.len()
        )));
    }
    Ok(job.input.clone())
}

fn degree(job: &Job) -> Result<u32, Failure> {
    job.degree.ok_or_else(|| Failure::input("--degree is required"))
}

/// Parses `Z`, `Z/n`, `Z^k` and `0`, joined by `+`.
fn parse_group(s: &str) -> Result<FgAbelianGroup, Failure> {
    let bad = || Failure::input(format!("bad coefficient group `{s}`"));
    let mut free = 0;
    let mut torsion = Vec::new();
    for part in s.split('+').map(str::trim) {
        if part == "0" {
            continue;
        }
        let rest = part.strip_prefix('Z').ok_or_else(bad)?;
        if rest.is_empty() {
            free += 1;
        } else if let Some(k) = rest.strip_prefix('^') {
            free += k.parse::<usize>().map_err(|_| bad())?;
        } else if let Some(n) = rest.strip_prefix('/') {
            match n.parse::<u64>().map_err(|_| bad())? {
                0 => free += 1,
                n => torsion.push(n.into()),
            }
        } else {
            return Err(bad());
        }
    }
    Ok(FgAbelianGroup::from_cyclic_orders(free, &torsion))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GroupReport {
    degree: u32,
    coefficients: String,
    group: String,
    detail: FgAbelianGroup,
}

fn cohomology(job: &Job) -> Outcome {
    let [pair] = &inputs(job, &["pair"])?[..] else { unreachable!() };
    let pair: SimplicialPair = read(pair)?;
    let n = degree(job)?;
    let pi = parse_group(&job.coefficients)?;
    let g = relative_cohomology(&pair, n as usize, &pi);
    let report = GroupReport {
        degree: n,
        coefficients: pi.to_string(),
        group: g.to_string(),
        detail: g,
    };
    Ok((json(&report), true))
}

fn cd(job: &Job) -> Outcome {
    let [pair] = &inputs(job, &["pair"])?[..] else { unreachable!() };
    let pair: SimplicialPair = read(pair)?;
    Ok((serde_json::json!({ "cohomologicalDimension": cohomological_dimension(&pair) }), true))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HspaceVerdict {
    checked_through: Option<u32>,
    first_nontrivial_degree: Option<u32>,
    rational_hspace: bool,
    verdict: String,
}

fn hspace_check(job: &Job) -> Outcome {
    let [model] = &inputs(job, &["model"])?[..] else { unreachable!() };
    let model: MinimalModel = read(model)?;
    let first = model.first_nontrivial_degree();
    let ok = match job.degree {
        Some(d) => model.is_rational_hspace_through(d),
        None => first.is_none(),
    };
    let verdict = match (ok, job.degree, first) {
        (true, Some(d), _) => format!("rational H-space through degree {d}"),
        (true, None, _) => "rational H-space through all checked degrees".to_string(),
        (false, _, Some(k)) => format!("fails at {k}"),
        (false, _, None) => unreachable!("a model with zero differential passes"),
    };
    let report = HspaceVerdict {
        checked_through: job.degree,
        first_nontrivial_degree: first,
        rational_hspace: ok,
        verdict,
    };
    Ok((json(&report), ok))
}

fn extract_forms(job: &Job) -> Outcome {
    let [model] = &inputs(job, &["model"])?[..] else { unreachable!() };
    let model: MinimalModel = read(model)?;
    Ok((json(&extract_bilinear_forms(&model)?), true))
}

/// Either the output of `extract-forms` or a bare list of matrices.
#[derive(Deserialize)]
#[serde(untagged)]
enum FormsFile {
    Extracted(Box<BilinearForms>),
    Bare(Vec<IntMatrix>),
}

impl FormsFile {
    fn matrices(&self) -> &[IntMatrix] {
        match self {
            FormsFile::Extracted(f) => &f.forms,
            FormsFile::Bare(m) => m,
        }
    }
}

fn expect_shape(system: &QuadraticSystem, shape: Shape, path: &Path) -> Result<(), Failure> {
    if system.shape == shape {
        Ok(())
    } else {
        Err(Failure::input(format!("{}: expected a {shape} system, got {}", path.display(), system.shape)))
    }
}

fn reduce(job: &Job) -> Outcome {
    let [sys, forms] = &inputs(job, &["QDIFF system", "forms"])?[..] else { unreachable!() };
    let qdiff: QuadraticSystem = read(sys)?;
    expect_shape(&qdiff, Shape::QDiff, sys)?;
    let forms: FormsFile = read(forms)?;
    Ok((json(&reduce_qdiff_to_qblin(&qdiff, forms.matrices())?), true))
}

fn solve(job: &Job) -> Outcome {
    let [sys] = &inputs(job, &["system"])?[..] else { unreachable!() };
    let system: QuadraticSystem = read(sys)?;
    let out = brute_force_search(&system, job.bound, job.budget)?;
    let found = out.solution.is_some();
    let solution = out
        .solution
        .map(|a| a.into_iter().map(|(k, v)| (k, v.to_string())).collect::<std::collections::BTreeMap<_, _>>());
    let report = serde_json::json!({
        "bound": job.bound,
        "explored": out.explored,
        "solution": solution,
    });
    Ok((report, found))
}

fn harness(job: &Job) -> Outcome {
    if job.input.is_empty() {
        let seed = job.seed.ok_or_else(|| Failure::input("a seeded batch needs --seed"))?;
        let mut config = BatchConfig::standard(seed);
        config.bound = job.bound;
        config.budget = job.budget;
        if let Some(n) = job.instances {
            config.instances = n;
        }
        let report = harness_batch(&config, &FormFamily::standard())?;
        let ok = report.summary.inconsistent == 0 && report.summary.errors == 0;
        return Ok((json(&report), ok));
    }
    let [sys, forms] = &inputs(job, &["QDIFF system", "forms"])?[..] else { unreachable!() };
    let qdiff: QuadraticSystem = read(sys)?;
    expect_shape(&qdiff, Shape::QDiff, sys)?;
    let forms: FormsFile = read(forms)?;
    let report = equivalence_harness(&qdiff, forms.matrices(), job.bound, job.budget)?;
    let ok = report.verdict == Verdict::Consistent;
    Ok((json(&report), ok))
}

fn encode_cmd(job: &Job) -> Outcome {
    let paths = &job.input;
    if !(2..=3).contains(&paths.len()) {
        return Err(Failure::input(
            "expected --input files: QBLIN system, extracted forms, optionally multipliers",
        ));
    }
    let system: QuadraticSystem = read(&paths[0])?;
    expect_shape(&system, Shape::QBlin, &paths[0])?;
    let target: BilinearForms = read(&paths[1])?;
    let mult = match paths.get(2) {
        Some(p) => read(p)?,
        None => Multipliers::ones(target.mu_degrees.len()),
    };
    Ok((json(&encode(&system, &target, &mult)?), true))
}

/// Either a full encoding or just its cell pair.
#[derive(Deserialize)]
#[serde(untagged)]
enum PairFile {
    Encoding(Box<Encoding>),
    Pair(CellPairDescription),
}

fn verify(job: &Job) -> Outcome {
    let [file] = &inputs(job, &["cell pair"])?[..] else { unreachable!() };
    let pair = match read::<PairFile>(file)? {
        PairFile::Encoding(e) => e.pair,
        PairFile::Pair(p) => p,
    };
    let report = verify_relative_homology(&pair, degree(job)?)?;
    let ok = report.vanishes_above_d;
    Ok((json(&report), ok))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EncodingSummary {
    cells: usize,
    dimension: u32,
    by_dimension: Vec<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PipelineReport {
    forms: BilinearForms,
    qdiff: QuadraticSystem,
    qblin: QuadraticSystem,
    encoding: EncodingSummary,
    homology: HomologyReport,
    harness: HarnessReport,
}

fn pipeline(job: &Job) -> Outcome {
    let [model, sys] = &inputs(job, &["model", "QDIFF system"])?[..] else { unreachable!() };
    let model: MinimalModel = read(model)?;
    let qdiff: QuadraticSystem = read(sys)?;
    expect_shape(&qdiff, Shape::QDiff, sys)?;

    let forms = extract_bilinear_forms(&model).map_err(|e| Failure::staged("extract", e))?;
    let inst = reduce_qdiff_to_qblin(&qdiff, &forms.forms).map_err(|e| Failure::staged("reduce", e))?;
    let enc = encode(&inst.system, &forms, &Multipliers::ones(forms.mu_degrees.len()))
        .map_err(|e| Failure::staged("encode", e))?;
    let homology = verify_relative_homology(&enc.pair, forms.d).map_err(|e| Failure::staged("verify", e))?;
    let harness = equivalence_harness(&qdiff, &forms.forms, job.bound, job.budget)
        .map_err(|e| Failure::staged("harness", e))?;

    let dim = enc.pair.dimension();
    let mut by_dimension = vec![0; dim as usize + 1];
    for c in &enc.pair.cells {
        by_dimension[c.dimension as usize] += 1;
    }
    let ok = harness.verdict == Verdict::Consistent;
    let report = PipelineReport {
        forms,
        qdiff,
        qblin: inst.system,
        encoding: EncodingSummary {
            cells: enc.pair.cells.len(),
            dimension: dim,
            by_dimension,
        },
        homology,
        harness,
    };
    Ok((json(&report), ok))
}
