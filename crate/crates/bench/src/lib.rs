//! Inputs shared by the benchmarks.

use hspace_core::diophantine::{reduce_qdiff_to_qblin, InstBilp, QuadraticSystem};
use hspace_core::intlinalg::IntMatrix;

/// A dense `n × n` matrix with entries in `[-9, 9]` from a fixed linear
/// congruential sequence.
pub fn dense_matrix(n: usize) -> IntMatrix {
    let mut state: i64 = 12_345;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = (state * 1_103_515_245 + 12_345).rem_euclid(1 << 31);
                    state % 19 - 9
                })
                .collect()
        })
        .collect();
    IntMatrix::from_i64_rows(&rows)
}

/// `x₁y₁ + x₂y₂ = 5` over the form `diag(1, 2)`.
pub fn small_inst() -> InstBilp {
    let qdiff = QuadraticSystem::qdiff(&[vec![vec![1, 0], vec![0, 1]]], &[5]).unwrap();
    let forms = [IntMatrix::from_i64_rows(&[[1, 0], [0, 2]])];
    reduce_qdiff_to_qblin(&qdiff, &forms).unwrap()
}
