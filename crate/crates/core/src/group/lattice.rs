use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{enumerate_group, FiniteMatrixGroup, Subgroup};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Integer, IntegerMatrix};

/// A free abelian group of finite rank with an action of a finite matrix group.
///
/// The action is stored per element. Cloning is cheap.
#[derive(Clone)]
pub struct GLattice {
    group: Arc<FiniteMatrixGroup>,
    rank: usize,
    action: Arc<Vec<IntegerMatrix>>,
}

impl std::fmt::Debug for GLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GLattice")
            .field("rank", &self.rank)
            .field("group_order", &self.group.order())
            .finish()
    }
}

impl GLattice {
    /// The lattice `Z^n` on which the group acts through its own matrices.
    pub fn natural(group: Arc<FiniteMatrixGroup>) -> Self {
        let action = group.elements().to_vec();
        GLattice {
            rank: group.rank(),
            group,
            action: Arc::new(action),
        }
    }

    /// `Z^rank` with every element acting as the identity.
    pub fn trivial(group: Arc<FiniteMatrixGroup>, rank: usize) -> Self {
        let action = vec![IntegerMatrix::identity(rank); group.order()];
        GLattice {
            group,
            rank,
            action: Arc::new(action),
        }
    }

    /// Extends images of the group generators (in [`FiniteMatrixGroup::generators`]
    /// order) multiplicatively; fails unless they define a homomorphism.
    pub fn from_generator_images(group: Arc<FiniteMatrixGroup>, images: &[IntegerMatrix]) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        let rank = images.first().map_or(0, IntegerMatrix::rows);
        for (name, img) in group.generator_names().iter().zip(images) {
            if img.rows() != rank || img.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "image of `{name}` is {}x{}, expected {rank}x{rank}",
                    img.rows(),
                    img.cols()
                )));
            }
        }
        let action: Vec<IntegerMatrix> = (0..group.order())
            .map(|x| {
                group
                    .word(x)
                    .iter()
                    .fold(IntegerMatrix::identity(rank), |acc, &j| &acc * &images[j])
            })
            .collect();
        Self::from_element_actions(group, action)
    }

    /// Per-element action matrices, validated against the multiplication table.
    pub fn from_element_actions(group: Arc<FiniteMatrixGroup>, action: Vec<IntegerMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let rank = action.first().map_or(0, IntegerMatrix::rows);
        if action.iter().any(|a| a.rows() != rank || a.cols() != rank) {
            return Err(Error::DimensionMismatch("action matrices of differing sizes".into()));
        }
        if !action[0].is_identity() {
            return Err(Error::NotAHomomorphism("identity does not act trivially".into()));
        }
        let lattice = GLattice {
            group,
            rank,
            action: Arc::new(action),
        };
        lattice.check_homomorphism()?;
        Ok(lattice)
    }

    /// `action(x)·action(g) = action(xg)` for all elements x and generators g.
    fn check_homomorphism(&self) -> Result<()> {
        let g = &self.group;
        for (j, &gen) in g.generators().iter().enumerate() {
            let ag = &self.action[gen];
            for x in 0..g.order() {
                if &self.action[x] * ag != self.action[g.mul(x, gen)] {
                    return Err(Error::NotAHomomorphism(format!(
                        "relation through generator `{}` fails at element {}",
                        g.generator_names()[j],
                        g.word_string(x)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Wraps per-element actions that are known to form a homomorphism.
    pub(crate) fn from_actions_unchecked(
        group: Arc<FiniteMatrixGroup>,
        rank: usize,
        action: Vec<IntegerMatrix>,
    ) -> Self {
        debug_assert_eq!(action.len(), group.order());
        GLattice {
            group,
            rank,
            action: Arc::new(action),
        }
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteMatrixGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, element: usize) -> &IntegerMatrix {
        &self.action[element]
    }

    pub fn actions(&self) -> &[IntegerMatrix] {
        &self.action
    }

    pub fn same_group(&self, other: &GLattice) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group.same_as(&other.group)
    }

    /// True if every element acts as the identity.
    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(IntegerMatrix::is_identity)
    }

    /// Direct sum with block-diagonal action.
    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        let n = self.rank + other.rank;
        let action = self
            .action
            .iter()
            .zip(other.action.iter())
            .map(|(a, b)| {
                let mut m = IntegerMatrix::zeros(n, n);
                for i in 0..self.rank {
                    for j in 0..self.rank {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..other.rank {
                    for j in 0..other.rank {
                        m.set(self.rank + i, self.rank + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Ok(GLattice {
            group: self.group.clone(),
            rank: n,
            action: Arc::new(action),
        })
    }

    /// The lattice spanned by the columns of `basis` (a saturated, full-column-rank
    /// matrix whose span is stable under the action), with the induced action.
    pub fn sublattice(&self, basis: &IntegerMatrix) -> Result<GLattice> {
        if basis.rows() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "basis vectors of length {} in a rank-{} lattice",
                basis.rows(),
                self.rank
            )));
        }
        let left = crate::linalg::left_inverse(basis).ok_or(Error::NotInjective)?;
        let mut action = Vec::with_capacity(self.group.order());
        for a in self.action.iter() {
            let image = a * basis;
            let induced = &left * &image;
            if basis * &induced != image {
                return Err(Error::NotEquivariant(
                    "sublattice is not stable under the action".into(),
                ));
            }
            action.push(induced);
        }
        Ok(GLattice {
            group: self.group.clone(),
            rank: basis.cols(),
            action: Arc::new(action),
        })
    }
}

/// An equivariant homomorphism `source -> target`, stored as a
/// `target.rank × source.rank` matrix.
#[derive(Clone, Debug)]
pub struct GMap {
    source: GLattice,
    target: GLattice,
    matrix: IntegerMatrix,
}

impl GMap {
    /// Checks dimensions and equivariance against every generator.
    pub fn new(source: GLattice, target: GLattice, matrix: IntegerMatrix) -> Result<Self> {
        if !source.same_group(&target) {
            return Err(Error::GroupMismatch);
        }
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let group = source.group();
        for (j, &g) in group.generators().iter().enumerate() {
            if &matrix * source.action(g) != target.action(g) * &matrix {
                return Err(Error::NotEquivariant(format!(
                    "fails for generator `{}`",
                    group.generator_names()[j]
                )));
            }
        }
        Ok(GMap { source, target, matrix })
    }

    pub fn source(&self) -> &GLattice {
        &self.source
    }

    pub fn target(&self) -> &GLattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    /// `self ∘ first`
    pub fn after(&self, first: &GMap) -> Result<GMap> {
        if first.target.rank() != self.source.rank() {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        GMap::new(first.source.clone(), self.target.clone(), &self.matrix * &first.matrix)
    }

    pub fn identity(lattice: &GLattice) -> GMap {
        GMap {
            source: lattice.clone(),
            target: lattice.clone(),
            matrix: IntegerMatrix::identity(lattice.rank()),
        }
    }
}

/// Saturated basis (columns, column Hermite form) of the invariants `M^H`.
pub fn invariant_sublattice(m: &GLattice, h: &Subgroup) -> IntegerMatrix {
    let n = m.rank();
    let mut stacked = IntegerMatrix::zeros(0, n);
    let id = IntegerMatrix::identity(n);
    for &g in h.generators() {
        stacked = stacked.vstack(&(m.action(g) - &id)).expect("square actions");
    }
    kernel_basis(&stacked)
}

/// Linear equations on the entries of an unknown `N.rank × M.rank` matrix `T`
/// (entry `T[i][k]` is unknown `i * M.rank + k`) expressing
/// `T·A_M(g) = A_N(g)·T` for every generator `g`.
pub(crate) fn equivariance_equations(m: &GLattice, n: &GLattice) -> IntegerMatrix {
    let (rm, rn) = (m.rank(), n.rank());
    let unknowns = rm * rn;
    let gens = m.group().generators();
    let mut system = IntegerMatrix::zeros(gens.len() * unknowns, unknowns);
    for (gi, &g) in gens.iter().enumerate() {
        let (am, an) = (m.action(g), n.action(g));
        for i in 0..rn {
            for j in 0..rm {
                let row = gi * unknowns + i * rm + j;
                for k in 0..rm {
                    let c = am.get(k, j);
                    if !c.is_zero() {
                        *system.get_mut(row, i * rm + k) += c;
                    }
                }
                for k in 0..rn {
                    let c = an.get(i, k);
                    if !c.is_zero() {
                        *system.get_mut(row, k * rm + j) -= c;
                    }
                }
            }
        }
    }
    system
}

/// Basis of the lattice of equivariant homomorphisms `M -> N`, each a
/// `N.rank × M.rank` matrix.
pub fn hom_lattice(m: &GLattice, n: &GLattice) -> Result<Vec<IntegerMatrix>> {
    if !m.same_group(n) {
        return Err(Error::GroupMismatch);
    }
    let kernel = kernel_basis(&equivariance_equations(m, n));
    Ok((0..kernel.cols())
        .map(|c| IntegerMatrix::new(n.rank(), m.rank(), kernel.column(c)).expect("shape"))
        .collect())
}

/// The same lattice viewed as a module over the subgroup `h`, which is
/// re-enumerated as a standalone group generated by `h`'s generators (named
/// by their words in the parent generators).
pub fn restrict_action(m: &GLattice, h: &Subgroup) -> Result<GLattice> {
    let parent = m.group();
    let gens: Vec<(String, IntegerMatrix)> = h
        .generators()
        .iter()
        .map(|&g| (parent.word_string(g), parent.element(g).clone()))
        .collect();
    let sub = enumerate_group(parent.rank(), &gens, parent.element_cap())?;
    let action = sub
        .elements()
        .iter()
        .map(|x| {
            let idx = parent
                .index_of(x)
                .ok_or_else(|| Error::Internal("subgroup element missing from parent".into()))?;
            Ok(m.action(idx).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    GLattice::from_element_actions(Arc::new(sub), action)
}

/// Outcome of an equivariant isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// A unimodular equivariant `T: M -> N`.
    Yes(IntegerMatrix),
    /// Provably not isomorphic.
    NoCertain(String),
    /// The bounded search found no witness.
    Unknown,
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
}

/// Upper limit on coefficient vectors examined by [`equivariant_isomorphic`].
pub const ISO_SEARCH_BUDGET: u64 = 2_000_000;

/// Semi-decision for `M ≅ N` as G-lattices.
///
/// Certain negatives come from differing ranks or differing invariant ranks
/// over some subgroup class. Otherwise integer combinations of the
/// intertwiner basis with coefficients in `[-bound, bound]` are tried, shell
/// by shell in increasing max-norm, until a unimodular one appears.
pub fn equivariant_isomorphic(m: &GLattice, n: &GLattice, bound: u32) -> Result<IsoVerdict> {
    if !m.same_group(n) {
        return Err(Error::GroupMismatch);
    }
    if m.rank() != n.rank() {
        return Ok(IsoVerdict::NoCertain(format!(
            "ranks differ ({} vs {})",
            m.rank(),
            n.rank()
        )));
    }
    if m.rank() == 0 {
        return Ok(IsoVerdict::Yes(IntegerMatrix::zeros(0, 0)));
    }
    let group = m.group();
    for (idx, h) in group.catalog().classes().iter().enumerate() {
        let (a, b) = (invariant_sublattice(m, h).cols(), invariant_sublattice(n, h).cols());
        if a != b {
            return Ok(IsoVerdict::NoCertain(format!(
                "invariants under class H{idx} {} have ranks {a} and {b}",
                h.describe(group)
            )));
        }
    }
    let basis = hom_lattice(m, n)?;
    if basis.is_empty() {
        return Ok(IsoVerdict::NoCertain("no nonzero equivariant map".into()));
    }
    Ok(match search_unimodular(&basis, bound) {
        Some(t) => IsoVerdict::Yes(t),
        None => IsoVerdict::Unknown,
    })
}

/// Coefficient vectors are visited shell by shell in max-norm; inside a
/// shell by support size, then by the pattern of nonzero values (positive
/// before negative, small before large), then by support positions.
fn search_unimodular(basis: &[IntegerMatrix], bound: u32) -> Option<IntegerMatrix> {
    let d = basis.len();
    let n = basis[0].rows();
    let small: Option<Vec<Vec<i64>>> = basis
        .iter()
        .map(|b| {
            b.entries()
                .iter()
                .map(|x| x.to_i64().filter(|v| v.abs() < (1 << 20)))
                .collect()
        })
        .collect();
    let mut examined: u64 = 0;
    let mut coeffs = vec![0i64; d];
    for shell in 1..=bound as i64 {
        let values: Vec<i64> = (1..=shell).flat_map(|v| [v, -v]).collect();
        for k in 1..=d {
            let mut pattern = vec![0usize; k];
            loop {
                if pattern.iter().any(|&i| values[i].abs() == shell) {
                    let mut support: Vec<usize> = (0..k).collect();
                    loop {
                        examined += 1;
                        if examined > ISO_SEARCH_BUDGET {
                            return None;
                        }
                        coeffs.iter_mut().for_each(|c| *c = 0);
                        for (&pos, &v) in support.iter().zip(&pattern) {
                            coeffs[pos] = values[v];
                        }
                        let unimodular = small
                            .as_ref()
                            .and_then(|sb| small_combination_det(sb, &coeffs, n))
                            .map(|det| det.abs() == 1)
                            .unwrap_or_else(|| {
                                combination(basis, &coeffs)
                                    .determinant()
                                    .map(|det| det.abs().is_one())
                                    .unwrap_or(false)
                            });
                        if unimodular {
                            return Some(combination(basis, &coeffs));
                        }
                        if !next_combination(&mut support, d) {
                            break;
                        }
                    }
                }
                if !next_tuple(&mut pattern, values.len()) {
                    break;
                }
            }
        }
    }
    None
}

/// Advances a strictly increasing `k`-subset of `0..n` lexicographically.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Advances a tuple over `0..radix`, first entry fastest.
fn next_tuple(t: &mut [usize], radix: usize) -> bool {
    for x in t.iter_mut() {
        if *x + 1 < radix {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

fn combination(basis: &[IntegerMatrix], coeffs: &[i64]) -> IntegerMatrix {
    let mut t = IntegerMatrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            t = &t + &b.scale(&Integer::from(c));
        }
    }
    t
}

/// Determinant of `Σ c_k B_k` in checked 128-bit arithmetic; `None` on overflow.
fn small_combination_det(basis: &[Vec<i64>], coeffs: &[i64], n: usize) -> Option<i128> {
    let mut a = vec![0i128; n * n];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (x, &y) in a.iter_mut().zip(b) {
            *x = x.checked_add((c as i128).checked_mul(y as i128)?)?;
        }
    }
    // Bareiss
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let i = (k + 1..n).find(|&i| a[i * n + k] != 0)?;
            for j in 0..n {
                a.swap(k * n + j, i * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j]
                    .checked_mul(a[k * n + k])?
                    .checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteMatrixGroup> {
        Arc::new(enumerate_group(1, &[("t".into(), IntegerMatrix::from_i64_rows(&[[-1]]))], 10).unwrap())
    }

    #[test]
    fn invariants_of_sign_action() {
        let g = c2();
        let m = GLattice::natural(g.clone());
        assert_eq!(
            invariant_sublattice(&m, &Subgroup::trivial()),
            IntegerMatrix::identity(1)
        );
        assert_eq!(invariant_sublattice(&m, &Subgroup::full(&g)).cols(), 0);
    }

    #[test]
    fn hom_examples() {
        let g = c2();
        let sign = GLattice::natural(g.clone());
        let triv = GLattice::trivial(g.clone(), 1);
        assert_eq!(hom_lattice(&triv, &triv).unwrap(), vec![IntegerMatrix::identity(1)]);
        assert!(hom_lattice(&sign, &triv).unwrap().is_empty());
        let one = Arc::new(FiniteMatrixGroup::trivial(2));
        let (a, b) = (GLattice::trivial(one.clone(), 2), GLattice::trivial(one, 3));
        assert_eq!(hom_lattice(&a, &b).unwrap().len(), 6);
    }

    #[test]
    fn generator_images_must_be_a_homomorphism() {
        let g = c2();
        // t has order 2 but the image has order 4
        let bad = IntegerMatrix::from_i64_rows(&[[0, -1], [1, 0]]);
        assert!(matches!(
            GLattice::from_generator_images(g.clone(), &[bad]),
            Err(Error::NotAHomomorphism(_))
        ));
        let swap = IntegerMatrix::from_i64_rows(&[[0, 1], [1, 0]]);
        let regular = GLattice::from_generator_images(g, &[swap]).unwrap();
        assert_eq!(regular.rank(), 2);
    }

    #[test]
    fn gmap_checks_equivariance() {
        let g = c2();
        let sign = GLattice::natural(g.clone());
        let triv = GLattice::trivial(g, 1);
        assert!(GMap::new(sign.clone(), triv, IntegerMatrix::identity(1)).is_err());
        assert!(GMap::new(sign.clone(), sign, IntegerMatrix::identity(1)).is_ok());
    }

    #[test]
    fn isomorphism_verdicts() {
        let g = c2();
        let sign = GLattice::natural(g.clone());
        let triv = GLattice::trivial(g.clone(), 1);
        assert_eq!(
            equivariant_isomorphic(&sign, &sign, 3).unwrap(),
            IsoVerdict::Yes(IntegerMatrix::identity(1))
        );
        assert!(matches!(
            equivariant_isomorphic(&sign, &triv, 3).unwrap(),
            IsoVerdict::NoCertain(_)
        ));
        let two = GLattice::trivial(g, 2);
        assert!(matches!(
            equivariant_isomorphic(&triv, &two, 3).unwrap(),
            IsoVerdict::NoCertain(_)
        ));
    }

    #[test]
    fn small_det_matches_bareiss() {
        let basis = vec![vec![2, 1, 1, 1], vec![0, 1, 1, 0]];
        let det = small_combination_det(&basis, &[1, -1], 2).unwrap();
        // [[2,0],[0,1]]
        assert_eq!(det, 2);
    }
}
