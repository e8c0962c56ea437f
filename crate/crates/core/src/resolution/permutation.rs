//! Permutation lattices `⊕ Z[G/H]` and the bounded recognition of lattices
//! that are isomorphic to one.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{equivariant_isomorphic, invariant_sublattice, FiniteMatrixGroup, GLattice, IsoVerdict, Subgroup};
use crate::linalg::{Integer, IntegerMatrix};

/// A permutation lattice `⊕_i Z[G/H_i]`, each `H_i` given by its index in the
/// group's subgroup catalog ([`FiniteMatrixGroup::catalog`]).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationDescriptor {
    parts: Vec<usize>,
}

impl PermutationDescriptor {
    pub fn new(parts: Vec<usize>) -> Self {
        PermutationDescriptor { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `Σ [G:H_i]`
    pub fn rank(&self, group: &FiniteMatrixGroup) -> usize {
        let classes = group.catalog().classes();
        self.parts.iter().map(|&c| group.order() / classes[c].order()).sum()
    }

    /// One label `g·H<c>` per basis vector, in basis order.
    pub fn basis_labels(&self, group: &FiniteMatrixGroup) -> Vec<String> {
        let classes = group.catalog().classes();
        self.parts
            .iter()
            .flat_map(|&c| {
                classes[c]
                    .left_coset_representatives(group)
                    .into_iter()
                    .map(move |r| format!("{}·H{c}", group.word_string(r)))
            })
            .collect()
    }

    /// `Z[G/H3] + Z[G/H18]`, or `0` when empty.
    pub fn describe(&self) -> String {
        if self.parts.is_empty() {
            return "0".to_string();
        }
        self.parts
            .iter()
            .map(|c| format!("Z[G/H{c}]"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn check_parts(group: &FiniteMatrixGroup, descriptor: &PermutationDescriptor) -> Result<()> {
    let n = group.catalog().classes().len();
    match descriptor.parts.iter().find(|&&c| c >= n) {
        Some(c) => Err(Error::InvalidInput(format!(
            "subgroup class H{c} does not exist (the group has {n} classes)"
        ))),
        None => Ok(()),
    }
}

/// The permutation lattice of `descriptor`: parts in descriptor order, cosets
/// of each part in the order of [`Subgroup::left_coset_representatives`], and
/// every element acting by left multiplication on cosets.
pub fn permutation_lattice(group: &Arc<FiniteMatrixGroup>, descriptor: &PermutationDescriptor) -> Result<GLattice> {
    check_parts(group, descriptor)?;
    let classes = group.catalog().classes();
    let rank = descriptor.rank(group);
    let mut actions = vec![IntegerMatrix::zeros(rank, rank); group.order()];
    let mut offset = 0;
    for &c in &descriptor.parts {
        let (reps, perms) = classes[c].coset_action(group);
        for (x, perm) in perms.iter().enumerate() {
            for (coset, &image) in perm.iter().enumerate() {
                actions[x].set(offset + image, offset + coset, Integer::from(1));
            }
        }
        offset += reps.len();
    }
    Ok(GLattice::from_actions_unchecked(group.clone(), rank, actions))
}

/// Number of orbits of `k` on the points `0..n` permuted by `perms` (indexed by element).
fn orbit_count(perms: &[Vec<usize>], k: &Subgroup, n: usize) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for &g in k.generators() {
        for (p, &q) in perms[g].iter().enumerate() {
            let (a, b) = (find(&mut parent, p), find(&mut parent, q));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

/// Describes a lattice whose generators act by permutation matrices as a sum
/// of coset lattices, one part per orbit of basis vectors (orbits ordered by
/// their least basis index, parts then sorted). `None` if some element does
/// not act by a permutation matrix.
pub fn permutation_descriptor_of(p: &GLattice) -> Option<PermutationDescriptor> {
    let group = p.group();
    if !p.actions().iter().all(IntegerMatrix::is_permutation_matrix) {
        return None;
    }
    let image = |x: usize, i: usize| -> usize {
        let a = p.action(x);
        (0..p.rank())
            .find(|&r| !a.get(r, i).eq(&Integer::from(0)))
            .expect("permutation column")
    };
    let mut assigned = vec![false; p.rank()];
    let mut parts = Vec::new();
    for i in 0..p.rank() {
        if assigned[i] {
            continue;
        }
        for x in 0..group.order() {
            assigned[image(x, i)] = true;
        }
        let stabilizer: Vec<usize> = (0..group.order()).filter(|&x| image(x, i) == i).collect();
        let h = Subgroup::from_members(group, &stabilizer)?;
        parts.push(group.catalog().class_of(group, &h));
    }
    parts.sort_unstable();
    Some(PermutationDescriptor::new(parts))
}

/// Verdict of [`is_permutation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationVerdict {
    /// `M` is isomorphic to the permutation lattice of `descriptor`; `witness`
    /// is a unimodular equivariant map from that lattice to `M`.
    Yes {
        descriptor: PermutationDescriptor,
        witness: IntegerMatrix,
    },
    /// Certainly not a permutation lattice.
    NoCertain(String),
    /// Candidates passed every screen but the bounded searches found no witness.
    Unknown,
}

impl PermutationVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PermutationVerdict::Yes { .. })
    }

    /// `yes`, `no` or `unknown`.
    pub fn label(&self) -> &'static str {
        match self {
            PermutationVerdict::Yes { .. } => "yes",
            PermutationVerdict::NoCertain(_) => "no",
            PermutationVerdict::Unknown => "unknown",
        }
    }
}

/// Upper limit on candidate descriptors passed to the isomorphism search.
pub const PERMUTATION_CANDIDATE_BUDGET: usize = 10_000;

/// Bounded recognition of permutation lattices.
///
/// Candidates are the multisets of subgroup classes whose coset lattices have
/// total rank `rank(M)` and, for every class `K`, as many `K`-orbits as
/// `rank(M^K)`; for a permutation lattice these two numbers agree, so the
/// screen loses nothing. Each surviving candidate is compared with `M` by
/// [`equivariant_isomorphic`] at coefficient bound `bound`.
pub fn is_permutation(m: &GLattice, bound: u32) -> Result<PermutationVerdict> {
    let group = m.group_arc().clone();
    let classes = group.catalog().classes();
    let targets: Vec<usize> = classes.iter().map(|k| invariant_sublattice(m, k).cols()).collect();
    // orbits[c][k]: number of K_k-orbits on G/H_c
    let orbits: Vec<Vec<usize>> = classes
        .iter()
        .map(|h| {
            let (reps, perms) = h.coset_action(&group);
            classes.iter().map(|k| orbit_count(&perms, k, reps.len())).collect()
        })
        .collect();

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut overflow = false;
    let mut current = Vec::new();
    let mut sums = vec![0usize; classes.len()];
    enumerate_candidates(
        0,
        &orbits,
        &targets,
        &mut current,
        &mut sums,
        &mut candidates,
        &mut overflow,
    );
    if candidates.is_empty() && !overflow {
        return Ok(PermutationVerdict::NoCertain(
            "no sum of coset lattices matches the ranks of the invariant sublattices".into(),
        ));
    }
    let mut inconclusive = overflow;
    for parts in candidates {
        let descriptor = PermutationDescriptor::new(parts);
        let p = permutation_lattice(&group, &descriptor)?;
        match equivariant_isomorphic(&p, m, bound)? {
            IsoVerdict::Yes(witness) => return Ok(PermutationVerdict::Yes { descriptor, witness }),
            IsoVerdict::NoCertain(_) => {}
            IsoVerdict::Unknown => inconclusive = true,
        }
    }
    Ok(if inconclusive {
        PermutationVerdict::Unknown
    } else {
        PermutationVerdict::NoCertain("every candidate permutation lattice was ruled out".into())
    })
}

/// Non-decreasing class sequences starting at `from` whose orbit counts add up
/// to `targets` exactly. Class 0 is the trivial subgroup, so its orbit count is
/// the coset count and the rank constraint is part of the check.
fn enumerate_candidates(
    from: usize,
    orbits: &[Vec<usize>],
    targets: &[usize],
    current: &mut Vec<usize>,
    sums: &mut [usize],
    out: &mut Vec<Vec<usize>>,
    overflow: &mut bool,
) {
    if *overflow {
        return;
    }
    if sums == targets {
        if out.len() >= PERMUTATION_CANDIDATE_BUDGET {
            *overflow = true;
            return;
        }
        out.push(current.clone());
        return;
    }
    for c in from..orbits.len() {
        if orbits[c]
            .iter()
            .zip(sums.iter())
            .zip(targets)
            .any(|((o, s), t)| s + o > *t)
        {
            continue;
        }
        for (s, o) in sums.iter_mut().zip(&orbits[c]) {
            *s += o;
        }
        current.push(c);
        enumerate_candidates(c, orbits, targets, current, sums, out, overflow);
        current.pop();
        for (s, o) in sums.iter_mut().zip(&orbits[c]) {
            *s -= o;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_group;

    fn s3() -> Arc<FiniteMatrixGroup> {
        let a = IntegerMatrix::from_i64_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        let b = IntegerMatrix::from_i64_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        Arc::new(enumerate_group(3, &[("a".into(), a), ("b".into(), b)], 100).unwrap())
    }

    fn sign() -> GLattice {
        let g = enumerate_group(1, &[("t".into(), IntegerMatrix::from_i64_rows(&[[-1]]))], 10).unwrap();
        GLattice::natural(Arc::new(g))
    }

    #[test]
    fn coset_lattices_have_expected_shape() {
        let g = s3();
        let top = g.catalog().classes().len() - 1;
        let p = permutation_lattice(&g, &PermutationDescriptor::new(vec![top])).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(p.is_trivial_action());
        let regular = permutation_lattice(&g, &PermutationDescriptor::new(vec![0])).unwrap();
        assert_eq!(regular.rank(), 6);
        assert!(regular.actions().iter().all(IntegerMatrix::is_permutation_matrix));
        // the action is a homomorphism
        GLattice::from_element_actions(g.clone(), regular.actions().to_vec()).unwrap();
        let d = PermutationDescriptor::new(vec![1, top]);
        assert_eq!(d.rank(&g), 4);
        assert_eq!(d.basis_labels(&g).len(), 4);
        assert_eq!(d.describe(), format!("Z[G/H1] + Z[G/H{top}]"));
        assert!(permutation_lattice(&g, &PermutationDescriptor::new(vec![99])).is_err());
    }

    #[test]
    fn descriptor_recovered_from_action() {
        let g = s3();
        let d = PermutationDescriptor::new(vec![0, 1, 2]);
        let p = permutation_lattice(&g, &d).unwrap();
        assert_eq!(permutation_descriptor_of(&p), Some(d));
        assert_eq!(permutation_descriptor_of(&sign()), None);
    }

    #[test]
    fn recognizes_trivial_and_natural_lattices() {
        let g = s3();
        let top = g.catalog().classes().len() - 1;
        match is_permutation(&GLattice::trivial(g.clone(), 2), 3).unwrap() {
            PermutationVerdict::Yes { descriptor, .. } => assert_eq!(descriptor.parts(), &[top, top]),
            other => panic!("{other:?}"),
        }
        // the natural 3-dimensional action is Z[S3/S2]
        let natural = GLattice::natural(g.clone());
        match is_permutation(&natural, 3).unwrap() {
            PermutationVerdict::Yes { descriptor, witness } => {
                assert_eq!(descriptor.rank(&g), 3);
                assert!(crate::linalg::is_unimodular(&witness).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sign_lattice_is_not_permutation() {
        assert!(matches!(
            is_permutation(&sign(), 3).unwrap(),
            PermutationVerdict::NoCertain(_)
        ));
    }
}
