use std::collections::{BTreeMap, HashSet};

use super::FiniteMatrixGroup;

/// A subgroup, stored as the sorted list of member indices in its parent group
/// together with a generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup {
            members: vec![0],
            generators: vec![],
        }
    }

    /// The whole group, generated by the group's own generators.
    pub fn full(group: &FiniteMatrixGroup) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
            generators: dedup_nontrivial(group.generators()),
        }
    }

    /// The subgroup generated by the given elements (which are kept as generators).
    pub fn generated_by(group: &FiniteMatrixGroup, generators: &[usize]) -> Self {
        let generators = dedup_nontrivial(generators);
        let members = closure(group, &generators);
        Subgroup { members, generators }
    }

    /// Subgroup with the given member set; a generating set is chosen greedily
    /// by scanning members in index order. Returns `None` if the set is not a subgroup.
    pub fn from_members(group: &FiniteMatrixGroup, members: &[usize]) -> Option<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut generators = Vec::new();
        let mut span = vec![0usize];
        for &m in &sorted {
            if span.binary_search(&m).is_err() {
                generators.push(m);
                span = closure(group, &generators);
            }
        }
        (span == sorted).then_some(Subgroup {
            members: sorted,
            generators,
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Generators written as words in the parent group's generator names.
    pub fn describe(&self, group: &FiniteMatrixGroup) -> String {
        if self.generators.is_empty() {
            return "<1>".to_string();
        }
        let gens: Vec<String> = self.generators.iter().map(|&g| group.word_string(g)).collect();
        format!("<{}>", gens.join(", "))
    }

    /// Left cosets `gH` in breadth-first order of their first element; each coset
    /// is returned as its representative (the first element in group order).
    pub fn left_coset_representatives(&self, group: &FiniteMatrixGroup) -> Vec<usize> {
        let mut seen = vec![false; group.order()];
        let mut reps = Vec::new();
        for g in 0..group.order() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &h in &self.members {
                seen[group.mul(g, h)] = true;
            }
        }
        reps
    }

    /// For every group element, the permutation it induces on the left cosets
    /// (indexed as in [`Self::left_coset_representatives`]).
    pub fn coset_action(&self, group: &FiniteMatrixGroup) -> (Vec<usize>, Vec<Vec<usize>>) {
        let reps = self.left_coset_representatives(group);
        let mut coset_of = vec![usize::MAX; group.order()];
        for (c, &r) in reps.iter().enumerate() {
            for &h in &self.members {
                coset_of[group.mul(r, h)] = c;
            }
        }
        let perms = (0..group.order())
            .map(|x| reps.iter().map(|&r| coset_of[group.mul(x, r)]).collect())
            .collect();
        (reps, perms)
    }
}

fn dedup_nontrivial(gens: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &g in gens {
        if g != 0 && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Sorted members of the subgroup generated by `gens`.
fn closure(group: &FiniteMatrixGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.order()];
    seen[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &g in gens {
            let y = group.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

/// One representative per conjugacy class of subgroups.
///
/// Representatives are the lexicographically least member list of their class,
/// and classes are sorted by subgroup order and then by member list.
#[derive(Clone, Debug)]
pub struct SubgroupCatalog {
    classes: Vec<Subgroup>,
    class_sizes: Vec<usize>,
}

impl SubgroupCatalog {
    /// Cyclic subgroups first, then joins with cyclic subgroups until nothing
    /// new appears, then reduction modulo conjugation. Every subgroup is the
    /// join of its cyclic subgroups, so the search is complete; it is sized
    /// for groups of order up to a few hundred.
    pub(super) fn compute(group: &FiniteMatrixGroup) -> Self {
        let n = group.order();
        let mut cyclic: Vec<Subgroup> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for g in 0..n {
            let h = Subgroup::generated_by(group, &[g]);
            if seen.insert(h.members.clone()) {
                cyclic.push(h);
            }
        }
        let mut all = cyclic.clone();
        let mut head = 0;
        while head < all.len() {
            let base = all[head].clone();
            head += 1;
            for c in &cyclic {
                let Some(&cg) = c.generators.first() else { continue };
                if base.contains(cg) {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(cg);
                let joined = Subgroup::generated_by(group, &gens);
                if seen.insert(joined.members.clone()) {
                    all.push(joined);
                }
            }
        }

        let mut by_key: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for h in &all {
            *by_key.entry(conjugacy_key(group, &h.members)).or_default() += 1;
        }
        let mut classes: Vec<(Subgroup, usize)> = by_key
            .into_iter()
            .map(|(key, size)| {
                let sub = Subgroup::from_members(group, &key).expect("conjugate of a subgroup");
                (sub, size)
            })
            .collect();
        classes.sort_by(|(a, _), (b, _)| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        let (classes, class_sizes) = classes.into_iter().unzip();
        SubgroupCatalog { classes, class_sizes }
    }

    pub fn classes(&self) -> &[Subgroup] {
        &self.classes
    }

    /// Number of subgroups in each class.
    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn subgroup_count(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    /// Index of the class containing `h`.
    pub fn class_of(&self, group: &FiniteMatrixGroup, h: &Subgroup) -> usize {
        let key = conjugacy_key(group, &h.members);
        self.classes
            .iter()
            .position(|c| c.members == key)
            .expect("every subgroup lies in a catalogued class")
    }
}

/// Least sorted member list among all conjugates of `members`.
fn conjugacy_key(group: &FiniteMatrixGroup, members: &[usize]) -> Vec<usize> {
    let mut best = members.to_vec();
    for g in 0..group.order() {
        let mut conj: Vec<usize> = members.iter().map(|&h| group.conjugate(g, h)).collect();
        conj.sort_unstable();
        if conj < best {
            best = conj;
        }
    }
    best
}

/// Conjugacy-class representatives of subgroups of `group`.
pub fn subgroup_classes(group: &FiniteMatrixGroup) -> Vec<Subgroup> {
    group.catalog().classes().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::enumerate_group;
    use crate::linalg::IntegerMatrix;

    fn s3() -> FiniteMatrixGroup {
        let a = IntegerMatrix::from_i64_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        let b = IntegerMatrix::from_i64_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        enumerate_group(3, &[("a".into(), a), ("b".into(), b)], 100).unwrap()
    }

    #[test]
    fn catalog_of_tiny_groups() {
        let g = FiniteMatrixGroup::trivial(2);
        assert_eq!(subgroup_classes(&g).len(), 1);
        let c2 = enumerate_group(1, &[("t".into(), IntegerMatrix::from_i64_rows(&[[-1]]))], 10).unwrap();
        let classes = subgroup_classes(&c2);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].order(), 1);
        assert_eq!(classes[1].order(), 2);
    }

    #[test]
    fn s3_has_four_classes_six_subgroups() {
        let g = s3();
        let cat = g.catalog();
        let orders: Vec<usize> = cat.classes().iter().map(Subgroup::order).collect();
        assert_eq!(orders, [1, 2, 3, 6]);
        assert_eq!(cat.class_sizes(), &[1, 3, 1, 1]);
        assert_eq!(cat.subgroup_count(), 6);
    }

    #[test]
    fn cosets_partition_the_group() {
        let g = s3();
        let h = &subgroup_classes(&g)[1];
        let (reps, perms) = h.coset_action(&g);
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], 0);
        for (x, p) in perms.iter().enumerate() {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, [0, 1, 2], "element {x} does not permute cosets");
        }
    }

    #[test]
    fn from_members_validates() {
        let g = s3();
        // element 1 is the transposition `a`
        assert_eq!(Subgroup::from_members(&g, &[1, 0]).unwrap().generators(), &[1]);
        let full: Vec<usize> = (0..6).collect();
        let s = Subgroup::from_members(&g, &full).unwrap();
        assert_eq!(s.order(), 6);
        assert!(Subgroup::from_members(&g, &[0, 1, 2]).is_none());
    }
}
