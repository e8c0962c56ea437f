//! Picard lattices of Del Pezzo surfaces of degree 5 and 6.
//!
//! Vectors are written in the coordinates `(a, b_1, …, b_r)` standing for
//! `a·ℓ_0 − Σ b_i·ℓ_i`, where `ℓ_0` is the pullback of a line and `ℓ_i` are
//! the exceptional classes. In these coordinates the intersection pairing is
//! `diag(1, −1, …, −1)` and the canonical class `ϖ = −3ℓ_0 + Σ ℓ_i` is
//! `(−3, −1, …, −1)`. All matrices act on column vectors in these coordinates.

use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_group, restrict_action, FiniteMatrixGroup, GLattice, Subgroup};
use crate::linalg::{dot, ivec, Integer, IntegerMatrix};
use crate::resolution::{permutation_descriptor_of, Resolution};

/// The Picard lattice of a Del Pezzo surface with its intersection form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardLattice {
    pub degree: u32,
    pub basis_names: Vec<String>,
    pub pairing: IntegerMatrix,
    #[serde(with = "crate::serde_int::vec")]
    pub canonical: Vec<Integer>,
}

impl PicardLattice {
    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }
}

/// Degree 5 (rank 5, four exceptional classes) or degree 6 (rank 4).
pub fn picard_preset(degree: u32) -> Result<PicardLattice> {
    let blown_up = match degree {
        5 => 4,
        6 => 3,
        d => return Err(Error::UnsupportedDegree(d)),
    };
    let rank = blown_up + 1;
    let mut diag = vec![-Integer::one(); rank];
    diag[0] = Integer::one();
    let mut canonical = vec![-Integer::one(); rank];
    canonical[0] = Integer::from(-3);
    Ok(PicardLattice {
        degree,
        basis_names: (0..rank).map(|i| format!("l{i}")).collect(),
        pairing: IntegerMatrix::diagonal(&diag),
        canonical,
    })
}

/// `uᵀ · pairing · v`
pub fn intersection(p: &PicardLattice, u: &[Integer], v: &[Integer]) -> Result<Integer> {
    if u.len() != p.rank() || v.len() != p.rank() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} in a rank-{} lattice",
            u.len(),
            v.len(),
            p.rank()
        )));
    }
    Ok(dot(u, &p.pairing.mul_vec(v)?))
}

/// Largest `t ≥ 0` with `t² · c ≤ bound`.
fn isqrt_bound(bound: &Integer, c: &Integer) -> i64 {
    let mut t = 0i64;
    while Integer::from((t + 1) * (t + 1)) * c <= *bound {
        t += 1;
    }
    t
}

/// All `ℓ` with `(ϖ, ℓ) = 0` and `(ℓ, ℓ) = −2`, in lexicographic order.
///
/// On `ϖ^⊥` the pairing is negative definite, so Cauchy–Schwarz against the
/// projection of the coordinate functional `J e_i` bounds each coordinate:
/// `ℓ_i² · (ϖ,ϖ) ≤ 2(ϖ_i² − J_ii·(ϖ,ϖ))`. The box is scanned exhaustively.
pub fn roots(p: &PicardLattice) -> Vec<Vec<Integer>> {
    let w = &p.canonical;
    let c = intersection(p, w, w).expect("canonical class has the lattice rank");
    assert!(c.is_positive(), "canonical class must have positive square");
    let bounds: Vec<i64> = (0..p.rank())
        .map(|i| {
            let slack = Integer::from(2) * (&w[i] * &w[i] - p.pairing.get(i, i) * &c);
            isqrt_bound(&slack, &c)
        })
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let v: Vec<Integer> = ivec(&current);
        if intersection(p, w, &v).expect("rank").is_zero()
            && intersection(p, &v, &v).expect("rank") == Integer::from(-2)
        {
            out.push(v);
        }
        // odometer, last coordinate fastest, so the scan is lexicographic
        let mut i = p.rank();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < bounds[i] {
                current[i] += 1;
                break;
            }
            current[i] = -bounds[i];
        }
    }
}

/// The reflection `x ↦ x + (x, r)·r` at a root `r`, i.e. `I + r·(J r)ᵀ`.
pub fn reflection_matrix(p: &PicardLattice, root: &[Integer]) -> Result<IntegerMatrix> {
    let square = intersection(p, root, root)?;
    if square != Integer::from(-2) {
        return Err(Error::NotARoot(square.to_string()));
    }
    let jr = p.pairing.mul_vec(root)?;
    let n = p.rank();
    let mut m = IntegerMatrix::identity(n);
    for (i, r) in root.iter().enumerate() {
        for (j, c) in jr.iter().enumerate() {
            *m.get_mut(i, j) += r * c;
        }
    }
    Ok(m)
}

/// Simple roots `s_1 = ℓ_1 − ℓ_2`, `s_2 = ℓ_2 − ℓ_3`, `s_3 = ℓ_3 − ℓ_4` and
/// `s_4 = ℓ_0 − ℓ_1 − ℓ_2 − ℓ_3` of the degree-5 lattice, named `s1..s4`.
pub fn simple_roots_dp5() -> Vec<(String, Vec<Integer>)> {
    vec![
        ("s1".into(), ivec(&[0, -1, 1, 0, 0])),
        ("s2".into(), ivec(&[0, 0, -1, 1, 0])),
        ("s3".into(), ivec(&[0, 0, 0, -1, 1])),
        ("s4".into(), ivec(&[1, 1, 1, 1, 0])),
    ]
}

/// The simple reflections of the degree-5 lattice, named `s1..s4`.
///
/// `s1..s3` swap the coordinates `b_i, b_{i+1}`; `s4` sends
/// `(a, b_1, b_2, b_3, b_4)` to `(2a−b_1−b_2−b_3, a−b_2−b_3, a−b_1−b_3, a−b_1−b_2, b_4)`.
pub fn simple_reflections_dp5() -> Vec<(String, IntegerMatrix)> {
    let swap = |i: usize| {
        let mut m = IntegerMatrix::identity(5);
        m.set(i, i, Integer::zero());
        m.set(i + 1, i + 1, Integer::zero());
        m.set(i, i + 1, Integer::one());
        m.set(i + 1, i, Integer::one());
        m
    };
    let s4 = IntegerMatrix::from_i64_rows(&[
        [2, -1, -1, -1, 0],
        [1, 0, -1, -1, 0],
        [1, -1, 0, -1, 0],
        [1, -1, -1, 0, 0],
        [0, 0, 0, 0, 1],
    ]);
    vec![
        ("s1".into(), swap(1)),
        ("s2".into(), swap(2)),
        ("s3".into(), swap(3)),
        ("s4".into(), s4),
    ]
}

/// Named generators of the Weyl group: the four simple reflections in
/// degree 5, and the reflections at `s1 = ℓ_1 − ℓ_2`, `s2 = ℓ_2 − ℓ_3`,
/// `s4 = ℓ_0 − ℓ_1 − ℓ_2 − ℓ_3` in degree 6.
pub fn weyl_generators(p: &PicardLattice) -> Result<Vec<(String, IntegerMatrix)>> {
    match p.degree {
        5 => Ok(simple_reflections_dp5()),
        6 => [("s1", [0, -1, 1, 0]), ("s2", [0, 0, -1, 1]), ("s4", [1, 1, 1, 1])]
            .iter()
            .map(|(name, r)| Ok((name.to_string(), reflection_matrix(p, &ivec(r))?)))
            .collect(),
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// The Weyl group of the preset, enumerated from [`weyl_generators`].
pub fn weyl_group(p: &PicardLattice, element_cap: usize) -> Result<FiniteMatrixGroup> {
    enumerate_group(p.rank(), &weyl_generators(p)?, element_cap)
}

/// `h_i = ℓ_0 − ℓ_i` for `i = 1..4` and `h_5 = 2ℓ_0 − ℓ_1 − ℓ_2 − ℓ_3 − ℓ_4`.
pub fn h_vectors_dp5() -> Vec<Vec<Integer>> {
    vec![
        ivec(&[1, 1, 0, 0, 0]),
        ivec(&[1, 0, 1, 0, 0]),
        ivec(&[1, 0, 0, 1, 0]),
        ivec(&[1, 0, 0, 0, 1]),
        ivec(&[2, 1, 1, 1, 1]),
    ]
}

/// Basis of `P` in [`explicit_resolution`]: `e, e_1, …, e_5`.
pub const EXPLICIT_BASIS: [&str; 6] = ["e", "e1", "e2", "e3", "e4", "e5"];

/// The kernel generator `x = e_1 + … + e_5 + 2e` in the basis [`EXPLICIT_BASIS`].
pub fn explicit_kernel_generator() -> Vec<Integer> {
    ivec(&[2, 1, 1, 1, 1, 1])
}

/// The retraction `e ↦ −2`, `e_i ↦ 1` of the kernel inclusion.
pub fn explicit_retraction() -> Vec<Integer> {
    ivec(&[-2, 1, 1, 1, 1, 1])
}

/// Permutation of `h_1..h_5` induced by a matrix, or `None` if the matrix does
/// not permute them or moves the canonical class.
fn h_permutation(a: &IntegerMatrix, canonical: &[Integer]) -> Option<Vec<usize>> {
    if a.mul_vec(canonical).ok()? != canonical {
        return None;
    }
    let hs = h_vectors_dp5();
    hs.iter()
        .map(|h| {
            let image = a.mul_vec(h).ok()?;
            hs.iter().position(|x| *x == image)
        })
        .collect()
}

/// Orbit sizes (descending) of the group acting on `h_1..h_5`.
pub fn h_orbit_sizes(m: &GLattice) -> Result<Vec<usize>> {
    let canonical = picard_preset(5)?.canonical;
    let perms: Vec<Vec<usize>> = m
        .actions()
        .iter()
        .map(|a| h_permutation(a, &canonical))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("action does not permute h1..h5".into()))?;
    let mut seen = [false; 5];
    let mut sizes = Vec::new();
    for i in 0..5 {
        if seen[i] {
            continue;
        }
        let mut size = 0;
        for p in &perms {
            if !seen[p[i]] {
                seen[p[i]] = true;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// The resolution `0 → Z·x → P → Pic → 0` of the degree-5 Picard lattice
/// with `P = Z e ⊕ Z e_1 ⊕ … ⊕ Z e_5`, `f(e) = ϖ`, `f(e_i) = h_i`, the group
/// permuting the `e_i` as it permutes the `h_i` and fixing `e`. The action on
/// `m` must be through Weyl group matrices. The splitting comes from the
/// retraction [`explicit_retraction`].
pub fn explicit_resolution(m: &GLattice) -> Result<Resolution> {
    let preset = picard_preset(5)?;
    if m.rank() != 5 {
        return Err(Error::DimensionMismatch(format!(
            "rank {} lattice, expected 5",
            m.rank()
        )));
    }
    let mut actions = Vec::with_capacity(m.group().order());
    for (x, a) in m.actions().iter().enumerate() {
        let perm = h_permutation(a, &preset.canonical).ok_or_else(|| {
            Error::InvalidInput(format!(
                "element {} does not act through the Weyl group",
                m.group().word_string(x)
            ))
        })?;
        let mut pa = IntegerMatrix::zeros(6, 6);
        pa.set(0, 0, Integer::one());
        for (i, &j) in perm.iter().enumerate() {
            pa.set(j + 1, i + 1, Integer::one());
        }
        actions.push(pa);
    }
    let p = GLattice::from_element_actions(m.group_arc().clone(), actions)?;
    let mut columns = vec![preset.canonical.clone()];
    columns.extend(h_vectors_dp5());
    let f = IntegerMatrix::from_columns(&columns, 5);
    let iota = IntegerMatrix::column_vector(&explicit_kernel_generator());
    let descriptor =
        permutation_descriptor_of(&p).ok_or_else(|| Error::Internal("P is not a permutation lattice".into()))?;
    let retraction = IntegerMatrix::new(1, 6, explicit_retraction())?;
    Resolution::assemble(m.clone(), p, descriptor, iota, f)?.with_retraction(retraction)
}

/// [`explicit_resolution`] for the Picard lattice restricted to a subgroup of
/// the degree-5 Weyl group.
pub fn explicit_resolution_dp5(weyl: &Arc<FiniteMatrixGroup>, w: &Subgroup) -> Result<Resolution> {
    explicit_resolution(&restrict_action(&GLattice::natural(weyl.clone()), w)?)
}

/// Whether every element fixes the canonical class and preserves the pairing.
pub fn preserves_structure(p: &PicardLattice, group: &FiniteMatrixGroup) -> bool {
    group.elements().iter().all(|g| {
        g.mul_vec(&p.canonical).ok().as_deref() == Some(p.canonical.as_slice())
            && &(&g.transpose() * &p.pairing) * g == p.pairing
    })
}

/// `(ϖ, ϖ)`, which equals the degree.
pub fn canonical_square(p: &PicardLattice) -> i64 {
    intersection(p, &p.canonical, &p.canonical)
        .expect("rank")
        .to_i64()
        .expect("small")
}
