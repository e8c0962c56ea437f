//! Finite groups of unimodular matrices, their subgroup catalogs, and lattices
//! with a group action.
//!
//! Conventions: matrices act on column vectors from the left and the product
//! `gh` acts as `g` after `h`, so `(gh)·v = g·(h·v)`.

mod lattice;
mod subgroups;

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{is_unimodular, IntegerMatrix};

pub(crate) use lattice::equivariance_equations;
pub use lattice::{
    equivariant_isomorphic, hom_lattice, invariant_sublattice, restrict_action, GLattice, GMap, IsoVerdict,
    ISO_SEARCH_BUDGET,
};
pub use subgroups::{subgroup_classes, Subgroup, SubgroupCatalog};

pub const DEFAULT_ELEMENT_CAP: usize = 100_000;
pub const DEFAULT_ISO_BOUND: u32 = 3;

/// A finite group of unimodular matrices, enumerated from named generators.
///
/// Elements are indexed in breadth-first order: the identity is element 0 and
/// every element carries the shortlex-least word (generators ordered by name)
/// that produces it.
pub struct FiniteMatrixGroup {
    rank: usize,
    generator_names: Vec<String>,
    generators: Vec<usize>,
    elements: Vec<IntegerMatrix>,
    lookup: HashMap<IntegerMatrix, usize>,
    words: Vec<Vec<usize>>,
    /// right Cayley graph: `right[x][j]` is the index of `x · generator_j`
    right: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    element_cap: usize,
    table: OnceLock<Vec<u32>>,
    catalog: OnceLock<SubgroupCatalog>,
}

impl std::fmt::Debug for FiniteMatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteMatrixGroup")
            .field("rank", &self.rank)
            .field("order", &self.order())
            .field("generators", &self.generator_names)
            .finish()
    }
}

/// Enumerates the group generated by `generators` (all `rank`×`rank`).
///
/// Fails with [`Error::NonUnimodularGenerator`] before enumerating, and with
/// [`Error::CapExceeded`] as soon as the closure passes `element_cap` elements.
pub fn enumerate_group(
    rank: usize,
    generators: &[(String, IntegerMatrix)],
    element_cap: usize,
) -> Result<FiniteMatrixGroup> {
    for (i, (name, g)) in generators.iter().enumerate() {
        if g.rows() != rank || g.cols() != rank {
            return Err(Error::DimensionMismatch(format!(
                "generator `{name}` is {}x{}, expected {rank}x{rank}",
                g.rows(),
                g.cols()
            )));
        }
        if !is_unimodular(g)? {
            return Err(Error::NonUnimodularGenerator { name: name.clone() });
        }
        if generators[..i].iter().any(|(other, _)| other == name) {
            return Err(Error::DuplicateGenerator(name.clone()));
        }
    }
    let mut by_name: Vec<usize> = (0..generators.len()).collect();
    by_name.sort_by(|&a, &b| generators[a].0.cmp(&generators[b].0));

    let identity = IntegerMatrix::identity(rank);
    let mut elements = vec![identity.clone()];
    let mut lookup = HashMap::from([(identity, 0usize)]);
    // BFS parent links, expanded into words once the closure is finite
    let mut parents: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let mut row = vec![0; generators.len()];
        for &j in &by_name {
            let y = &elements[head] * &generators[j].1;
            let idx = match lookup.get(&y) {
                Some(&idx) => idx,
                None => {
                    if elements.len() >= element_cap {
                        return Err(Error::CapExceeded { cap: element_cap });
                    }
                    let idx = elements.len();
                    parents.push((head, j));
                    lookup.insert(y.clone(), idx);
                    elements.push(y);
                    idx
                }
            };
            row[j] = idx;
        }
        right.push(row);
        head += 1;
    }
    let mut words: Vec<Vec<usize>> = Vec::with_capacity(elements.len());
    words.push(vec![]);
    for &(parent, j) in &parents[1..] {
        let mut w = words[parent].clone();
        w.push(j);
        words.push(w);
    }
    let generator_idx: Vec<usize> = (0..generators.len()).map(|j| right[0][j]).collect();
    let mut group = FiniteMatrixGroup {
        rank,
        generator_names: generators.iter().map(|(n, _)| n.clone()).collect(),
        generators: generator_idx,
        elements,
        lookup,
        words,
        right,
        inverses: vec![],
        element_cap,
        table: OnceLock::new(),
        catalog: OnceLock::new(),
    };
    group.inverses = group.compute_inverses();
    Ok(group)
}

impl FiniteMatrixGroup {
    /// The group of order 1 acting on `rank`-dimensional lattices.
    pub fn trivial(rank: usize) -> Self {
        enumerate_group(rank, &[], 1).expect("trivial group")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    pub fn elements(&self) -> &[IntegerMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntegerMatrix {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Element indices of the generators, in the order they were given.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.generator_names
            .iter()
            .position(|n| n == name)
            .map(|j| self.generators[j])
    }

    pub fn index_of(&self, m: &IntegerMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    /// Generator positions (into [`Self::generators`]) spelling element `i`.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// Word of element `i` in generator names, `"1"` for the identity.
    pub fn word_string(&self, i: usize) -> String {
        if self.words[i].is_empty() {
            return "1".to_string();
        }
        self.words[i]
            .iter()
            .map(|&j| self.generator_names[j].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    fn table(&self) -> Option<&[u32]> {
        const TABLE_LIMIT: usize = 4096;
        if self.order() > TABLE_LIMIT {
            return None;
        }
        Some(self.table.get_or_init(|| {
            let n = self.order();
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.walk(a, b) as u32;
                }
            }
            t
        }))
    }

    /// `a · b` by following the word of `b` through the Cayley graph from `a`.
    fn walk(&self, a: usize, b: usize) -> usize {
        self.words[b].iter().fold(a, |x, &j| self.right[x][j])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.walk(a, b),
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    fn compute_inverses(&self) -> Vec<usize> {
        let gen_inv: Vec<usize> = (0..self.generators.len())
            .map(|j| {
                // g^{-1} = g^{ord-1}
                let mut x = 0;
                loop {
                    let next = self.right[x][j];
                    if next == 0 {
                        return x;
                    }
                    x = next;
                }
            })
            .collect();
        (0..self.order())
            .map(|a| self.words[a].iter().rev().fold(0, |x, &j| self.walk(x, gen_inv[j])))
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g h g^{-1}`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    /// Subgroup classes, computed once and cached.
    pub fn catalog(&self) -> &SubgroupCatalog {
        self.catalog.get_or_init(|| SubgroupCatalog::compute(self))
    }

    /// True when both groups consist of the same matrices in the same order.
    pub fn same_as(&self, other: &FiniteMatrixGroup) -> bool {
        std::ptr::eq(self, other) || self.elements == other.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, m: IntegerMatrix) -> (String, IntegerMatrix) {
        (name.to_string(), m)
    }

    #[test]
    fn small_groups() {
        let g = enumerate_group(3, &[], 10).unwrap();
        assert_eq!(g.order(), 1);
        let g = enumerate_group(1, &[named("t", IntegerMatrix::from_i64_rows(&[[-1]]))], 10).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inverse(1), 1);
        assert_eq!(g.word_string(1), "t");
        assert_eq!(g.word_string(0), "1");
    }

    #[test]
    fn rejects_bad_generators() {
        let bad = named("bad", IntegerMatrix::from_i64_rows(&[[2, 0], [0, 1]]));
        assert_eq!(
            enumerate_group(2, &[bad], 10).unwrap_err(),
            Error::NonUnimodularGenerator { name: "bad".into() }
        );
        let shear = named("u", IntegerMatrix::from_i64_rows(&[[1, 1], [0, 1]]));
        assert_eq!(
            enumerate_group(2, &[shear], 50).unwrap_err(),
            Error::CapExceeded { cap: 50 }
        );
        let a = named("a", IntegerMatrix::identity(2));
        assert!(matches!(
            enumerate_group(2, &[a.clone(), a], 10),
            Err(Error::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn bfs_order_is_shortlex_by_name() {
        // S3 on three coordinates, generators supplied out of name order
        let b = named("b", IntegerMatrix::from_i64_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]));
        let a = named("a", IntegerMatrix::from_i64_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]));
        let g = enumerate_group(3, &[b, a], 100).unwrap();
        assert_eq!(g.order(), 6);
        let words: Vec<String> = (0..6).map(|i| g.word_string(i)).collect();
        assert_eq!(words[..3], ["1", "a", "b"]);
        for i in 1..6 {
            assert!(g.word(i - 1).len() <= g.word(i).len());
        }
    }

    #[test]
    fn group_axioms_on_dihedral_group() {
        let r = named("r", IntegerMatrix::from_i64_rows(&[[0, -1], [1, 0]]));
        let s = named("s", IntegerMatrix::from_i64_rows(&[[1, 0], [0, -1]]));
        let g = enumerate_group(2, &[r, s], 100).unwrap();
        assert_eq!(g.order(), 8);
        for a in 0..8 {
            assert_eq!(g.mul(a, g.inverse(a)), 0);
            for b in 0..8 {
                let m = g.element(a) * g.element(b);
                assert_eq!(g.index_of(&m), Some(g.mul(a, b)));
                for c in 0..8 {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }
}
