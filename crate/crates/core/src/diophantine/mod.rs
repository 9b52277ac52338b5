//! Quadratic Diophantine systems, box search and the reduction to
//! bilinear systems over prescribed forms.

mod brute;
mod harness;
mod reduce;
mod squareify;
mod system;

pub use brute::{brute_force_search, brute_force_solve, SearchOutcome, DEFAULT_BUDGET, MAX_BOUND};
pub use harness::{
    equivalence_harness, harness_batch, random_qdiff, BatchConfig, BatchEntry, BatchReport, BatchSummary, FormFamily,
    HarnessReport, Verdict,
};
pub use reduce::{
    backward_transport, corrected_witness, forward_witness, reduce_qdiff_to_qblin, reshuffle_forms, scaled_qdiff,
    BackwardTransport, CorrectedWitness, EquationFamilies, FamilyResiduals, ForwardWitness, InstBilp, Reshuffle,
};
pub use squareify::{squareify, SquareForm};
pub use system::{evaluate, is_solution, Assignment, Equation, QuadraticSystem, Shape};
