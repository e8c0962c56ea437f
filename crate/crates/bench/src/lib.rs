//! Seeded inputs for the benchmarks, so every run measures the same work.

use std::sync::Arc;

use galmod::fixtures::{random_matrix, weyl};
use galmod::{FiniteMatrixGroup, GLattice, IntegerMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6761_6c6d;

/// `count` matrices of the given shape with entries in `[-9, 9]`.
pub fn smith_inputs(count: usize, rows: usize, cols: usize) -> Vec<IntegerMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| random_matrix(&mut rng, rows, cols, -9, 9)).collect()
}

/// Random lattices of rank at most 4 over groups of order at most 12.
pub fn random_lattices(count: usize) -> Vec<GLattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count)
        .map(|_| {
            let max_rank = rng.gen_range(2..=4);
            galmod::fixtures::random_lattice(&mut rng, max_rank, 12, 2)
        })
        .collect()
}

/// The degree-5 Weyl group with its natural lattice.
pub fn dp5_lattice() -> (Arc<FiniteMatrixGroup>, GLattice) {
    let w = weyl(5);
    let m = GLattice::natural(w.clone());
    (w, m)
}
