//! Standard small groups and random generators of lattices, shared by the
//! test suites and benchmarks. Randomness always comes from the caller's RNG,
//! so seeded callers get reproducible families.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::delpezzo::{picard_preset, weyl_group};
use crate::error::{Error, Result};
use crate::group::{enumerate_group, FiniteMatrixGroup, GLattice, DEFAULT_ELEMENT_CAP};
use crate::linalg::{Integer, IntegerMatrix};
use crate::resolution::PermutationDescriptor;

fn named(name: &str, rows: &[Vec<i64>]) -> (String, IntegerMatrix) {
    (name.to_string(), IntegerMatrix::from_i64_rows(rows))
}

fn permutation_matrix(images: &[usize]) -> Vec<Vec<i64>> {
    let n = images.len();
    let mut rows = vec![vec![0; n]; n];
    for (j, &i) in images.iter().enumerate() {
        rows[i][j] = 1;
    }
    rows
}

/// The order-2 group acting on `Z` by `−1` (generator `t`).
pub fn sign_group() -> Arc<FiniteMatrixGroup> {
    Arc::new(enumerate_group(1, &[named("t", &[vec![-1]])], 10).expect("sign group"))
}

/// The rank-1 sign lattice.
pub fn sign_lattice() -> GLattice {
    GLattice::natural(sign_group())
}

/// `S_n` permuting coordinates of `Z^n`, generated by a transposition `a` and an `n`-cycle `b`.
pub fn symmetric_group(n: usize) -> Arc<FiniteMatrixGroup> {
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Arc::new(
        enumerate_group(
            n,
            &[
                named("a", &permutation_matrix(&swap)),
                named("b", &permutation_matrix(&cycle)),
            ],
            DEFAULT_ELEMENT_CAP,
        )
        .expect("symmetric group"),
    )
}

/// The cyclic group of order `n` permuting coordinates of `Z^n`.
pub fn cyclic_group(n: usize) -> Arc<FiniteMatrixGroup> {
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Arc::new(enumerate_group(n, &[named("c", &permutation_matrix(&cycle))], DEFAULT_ELEMENT_CAP).expect("cyclic group"))
}

/// The dihedral group of order 8 acting on `Z^2` (rotation `r`, reflection `s`).
pub fn dihedral8() -> Arc<FiniteMatrixGroup> {
    Arc::new(
        enumerate_group(
            2,
            &[
                named("r", &[vec![0, -1], vec![1, 0]]),
                named("s", &[vec![1, 0], vec![0, -1]]),
            ],
            DEFAULT_ELEMENT_CAP,
        )
        .expect("dihedral group"),
    )
}

/// `Z/2 × Z/2` acting on `Z^2` by sign changes.
pub fn klein_four() -> Arc<FiniteMatrixGroup> {
    Arc::new(
        enumerate_group(
            2,
            &[
                named("a", &[vec![-1, 0], vec![0, 1]]),
                named("b", &[vec![1, 0], vec![0, -1]]),
            ],
            DEFAULT_ELEMENT_CAP,
        )
        .expect("Klein four group"),
    )
}

/// Weyl group of the degree-5 (order 120) or degree-6 (order 12) preset.
pub fn weyl(degree: u32) -> Arc<FiniteMatrixGroup> {
    let p = picard_preset(degree).expect("supported degree");
    Arc::new(weyl_group(&p, DEFAULT_ELEMENT_CAP).expect("Weyl group"))
}

/// Groups of order at most 24 used for permutation-lattice suites.
pub fn small_groups() -> Vec<(&'static str, Arc<FiniteMatrixGroup>)> {
    vec![
        ("C2", sign_group()),
        ("C2xC2", klein_four()),
        ("S3", symmetric_group(3)),
        ("C4", cyclic_group(4)),
        ("C6", cyclic_group(6)),
        ("D8", dihedral8()),
        ("W(A2xA1)", weyl(6)),
        ("S4", symmetric_group(4)),
    ]
}

/// A random integer matrix with entries in `[lo, hi]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, lo: i64, hi: i64) -> IntegerMatrix {
    let data = (0..rows * cols)
        .map(|_| Integer::from(rng.gen_range(lo..=hi)))
        .collect();
    IntegerMatrix::new(rows, cols, data).expect("shape")
}

/// A random unimodular matrix: a product of a few elementary operations.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntegerMatrix {
    let mut u = IntegerMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = Integer::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut e = IntegerMatrix::identity(n);
        e.set(i, j, c);
        u = &u * &e;
    }
    u
}

fn random_signed_permutation<R: Rng>(rng: &mut R, n: usize) -> IntegerMatrix {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    let mut m = IntegerMatrix::zeros(n, n);
    for (j, &i) in images.iter().enumerate() {
        m.set(i, j, Integer::from(if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    m
}

/// A random faithful lattice: one or two signed permutation matrices
/// conjugated by a common random unimodular matrix, kept only when every
/// generator entry lies in `[-entry_bound, entry_bound]` and the generated
/// group has at most `max_order` elements. Ranks range over `1..=max_rank`.
pub fn random_lattice<R: Rng>(rng: &mut R, max_rank: usize, max_order: usize, entry_bound: i64) -> GLattice {
    loop {
        let n = rng.gen_range(1..=max_rank);
        let u = random_unimodular(rng, n);
        let u_inv = crate::linalg::unimodular_inverse(&u).expect("unimodular");
        let count = rng.gen_range(1..=2);
        let gens: Vec<(String, IntegerMatrix)> = (0..count)
            .map(|k| {
                (
                    format!("g{}", k + 1),
                    &(&u * &random_signed_permutation(rng, n)) * &u_inv,
                )
            })
            .collect();
        let bound = Integer::from(entry_bound);
        if gens.iter().any(|(_, g)| g.max_abs_entry() > bound) {
            continue;
        }
        match enumerate_group(n, &gens, max_order) {
            Ok(group) => return GLattice::natural(Arc::new(group)),
            Err(Error::CapExceeded { .. }) => continue,
            Err(e) => panic!("random generator produced an invalid group: {e}"),
        }
    }
}

/// A random descriptor with `1..=max_parts` parts.
pub fn random_descriptor<R: Rng>(rng: &mut R, group: &FiniteMatrixGroup, max_parts: usize) -> PermutationDescriptor {
    let classes = group.catalog().classes().len();
    let k = rng.gen_range(1..=max_parts);
    let mut parts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..classes)).collect();
    parts.sort_unstable();
    PermutationDescriptor::new(parts)
}

/// Restriction of the natural lattice of `group` to each subgroup class
/// representative, with the class index.
pub fn restricted_natural_lattices(group: &Arc<FiniteMatrixGroup>) -> Result<Vec<(usize, GLattice)>> {
    let natural = GLattice::natural(group.clone());
    group
        .catalog()
        .classes()
        .iter()
        .enumerate()
        .map(|(i, h)| Ok((i, crate::group::restrict_action(&natural, h)?)))
        .collect()
}
