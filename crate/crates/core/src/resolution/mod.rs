//! Coflasque resolutions `0 → C → P → M → 0` with `P` a permutation lattice,
//! exact decisions for their splitting, invertibility verdicts and the
//! complement `N` with `M ⊕ N ≅ P`.

mod permutation;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::is_coflabby;
use crate::error::{Error, Result};
use crate::group::{equivariance_equations, invariant_sublattice, GLattice, GMap};
use crate::linalg::{
    is_unimodular, kernel_basis, lattice_basis, left_inverse, smith_normal_form, solve_linear_integer,
    solve_linear_integer_detailed, unimodular_inverse, Integer, IntegerMatrix, SolveObstruction,
};

pub use permutation::{
    is_permutation, permutation_descriptor_of, permutation_lattice, PermutationDescriptor, PermutationVerdict,
    PERMUTATION_CANDIDATE_BUDGET,
};

/// Which subgroup classes contribute summands `Z[G/H] ⊗ v` to `P`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionStrategy {
    /// Classes are visited from the largest subgroup down; for each class `H`,
    /// basis vectors `v` of `M^H` are added only while the `H`-invariants of the
    /// `P` built so far do not already map onto `M^H`. This keeps `P` small and
    /// still gives a coflabby kernel.
    #[default]
    Pruned,
    /// `P = ⊕_H Z[G/H] ⊗ M^H` over every class, with the full invariant basis.
    /// The rank grows with the number of classes times their indices, so this
    /// is only practical for small groups.
    AllClasses,
}

/// An equivariant splitting of a resolution: `f∘s = id_M` and `r∘ι = id_C`.
#[derive(Clone, Debug)]
pub struct Splitting {
    section: GMap,
    retraction: GMap,
}

impl Splitting {
    pub fn section(&self) -> &GMap {
        &self.section
    }

    pub fn retraction(&self) -> &GMap {
        &self.retraction
    }
}

/// A short exact sequence `0 → C --ι--> P --f--> M → 0` of lattices with `P`
/// a permutation lattice and `C` coflabby. Constructors verify every
/// invariant, so a value of this type is always exact and coflasque.
#[derive(Clone, Debug)]
pub struct Resolution {
    m: GLattice,
    p: GLattice,
    descriptor: PermutationDescriptor,
    c: GLattice,
    inclusion: GMap,
    surjection: GMap,
    splitting: Option<Splitting>,
}

/// Independently recomputed exactness and splitting checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCheck {
    /// `rank P = rank C + rank M`
    pub rank_identity: bool,
    /// all Smith divisors of `f` equal 1
    pub surjective: bool,
    /// `f ∘ ι = 0`
    pub composition_zero: bool,
    /// every vector of a kernel basis of `f` is an integer combination of the columns of `ι`
    pub kernel_spanned: bool,
    pub coflabby: bool,
    /// `f ∘ s = id`, when a splitting is present
    pub section_identity: Option<bool>,
    /// `r ∘ ι = id`, when a splitting is present
    pub retraction_identity: Option<bool>,
}

impl ResolutionCheck {
    pub fn all_green(&self) -> bool {
        self.rank_identity
            && self.surjective
            && self.composition_zero
            && self.kernel_spanned
            && self.coflabby
            && self.section_identity != Some(false)
            && self.retraction_identity != Some(false)
    }
}

fn is_surjective(f: &IntegerMatrix) -> bool {
    let diag = smith_normal_form(f).diagonal();
    diag.len() == f.rows() && diag.iter().all(One::is_one)
}

impl Resolution {
    /// Builds and validates a resolution from the matrices of `ι` (`P.rank × C.rank`)
    /// and `f` (`M.rank × P.rank`). `C` is the sublattice spanned by the columns of `ι`.
    pub fn assemble(
        m: GLattice,
        p: GLattice,
        descriptor: PermutationDescriptor,
        inclusion: IntegerMatrix,
        surjection: IntegerMatrix,
    ) -> Result<Self> {
        let surjection = GMap::new(p.clone(), m.clone(), surjection)?;
        if !is_surjective(surjection.matrix()) {
            return Err(Error::NotSurjective);
        }
        if left_inverse(&inclusion).is_none() {
            return Err(Error::NotInjective);
        }
        let c = p.sublattice(&inclusion)?;
        let inclusion = GMap::new(c.clone(), p.clone(), inclusion)?;
        if !(surjection.matrix() * inclusion.matrix()).is_zero() || c.rank() + m.rank() != p.rank() {
            return Err(Error::Internal("sequence is not exact at P".into()));
        }
        let report = is_coflabby(&c);
        if !report.coflabby {
            let group = c.group();
            let classes = group.catalog().classes();
            let failing: Vec<String> = report
                .failing
                .iter()
                .map(|(i, h1)| format!("H{i} {} (H^1 = {h1})", classes[*i].describe(group)))
                .collect();
            return Err(Error::CoflasquenessViolated(failing.join(", ")));
        }
        Ok(Resolution {
            m,
            p,
            descriptor,
            c,
            inclusion,
            surjection,
            splitting: None,
        })
    }

    /// Attaches a splitting given by a section `s` of `f`; the retraction
    /// `r = L(id − s f)` is derived from a left inverse `L` of `ι`.
    pub fn with_section(mut self, s: IntegerMatrix) -> Result<Self> {
        let section = GMap::new(self.m.clone(), self.p.clone(), s)?;
        if !(self.surjection.matrix() * section.matrix()).is_identity() {
            return Err(Error::InvalidInput("f ∘ s is not the identity".into()));
        }
        let left = left_inverse(self.inclusion.matrix()).ok_or(Error::NotInjective)?;
        let complement = &IntegerMatrix::identity(self.p.rank()) - &(section.matrix() * self.surjection.matrix());
        let retraction = GMap::new(self.p.clone(), self.c.clone(), &left * &complement)?;
        if !(retraction.matrix() * self.inclusion.matrix()).is_identity() {
            return Err(Error::Internal("derived retraction does not split ι".into()));
        }
        self.splitting = Some(Splitting { section, retraction });
        Ok(self)
    }

    /// Attaches a splitting given by a retraction `r` of `ι`; the section is
    /// read off the inverse of the stacked isomorphism `[f; r]: P → M ⊕ C`.
    pub fn with_retraction(mut self, r: IntegerMatrix) -> Result<Self> {
        let retraction = GMap::new(self.p.clone(), self.c.clone(), r)?;
        if !(retraction.matrix() * self.inclusion.matrix()).is_identity() {
            return Err(Error::InvalidInput("r ∘ ι is not the identity".into()));
        }
        let stacked = self.surjection.matrix().vstack(retraction.matrix())?;
        let inverse = unimodular_inverse(&stacked).ok_or_else(|| Error::Internal("[f; r] is not invertible".into()))?;
        let cols: Vec<usize> = (0..self.m.rank()).collect();
        let section = GMap::new(self.m.clone(), self.p.clone(), inverse.select_columns(&cols))?;
        if !(self.surjection.matrix() * section.matrix()).is_identity() {
            return Err(Error::Internal("derived section does not split f".into()));
        }
        self.splitting = Some(Splitting { section, retraction });
        Ok(self)
    }

    pub fn m(&self) -> &GLattice {
        &self.m
    }

    pub fn p(&self) -> &GLattice {
        &self.p
    }

    /// Describes `P` up to reordering of its basis.
    pub fn descriptor(&self) -> &PermutationDescriptor {
        &self.descriptor
    }

    pub fn c(&self) -> &GLattice {
        &self.c
    }

    pub fn inclusion(&self) -> &GMap {
        &self.inclusion
    }

    pub fn surjection(&self) -> &GMap {
        &self.surjection
    }

    pub fn splitting(&self) -> Option<&Splitting> {
        self.splitting.as_ref()
    }

    /// Recomputes exactness, coflabbiness and the splitting identities.
    pub fn verify(&self) -> ResolutionCheck {
        let f = self.surjection.matrix();
        let iota = self.inclusion.matrix();
        let kernel = kernel_basis(f);
        let kernel_spanned = kernel.cols() == iota.cols()
            && (0..kernel.cols()).all(|j| matches!(solve_linear_integer(iota, &kernel.column(j)), Ok(Some(_))));
        let (section_identity, retraction_identity) = match &self.splitting {
            Some(s) => (
                Some((f * s.section.matrix()).is_identity()),
                Some((s.retraction.matrix() * iota).is_identity()),
            ),
            None => (None, None),
        };
        ResolutionCheck {
            rank_identity: self.p.rank() == self.c.rank() + self.m.rank(),
            surjective: is_surjective(f),
            composition_zero: (f * iota).is_zero(),
            kernel_spanned,
            coflabby: is_coflabby(&self.c).coflabby,
            section_identity,
            retraction_identity,
        }
    }
}

/// A coflasque resolution of `M` by the [`ResolutionStrategy::Pruned`] construction.
pub fn coflasque_resolution(m: &GLattice) -> Result<Resolution> {
    coflasque_resolution_with(m, ResolutionStrategy::Pruned)
}

/// A coflasque resolution of `M`.
///
/// `P` is a sum of parts `Z[G/H] ⊗ v` with `v ∈ M^H` and trivial action on
/// the second factor, so `P` is a permutation lattice; `f` sends `gH ⊗ v` to
/// `g·v` and `C = ker f`. Every `M^H` lies in the image of `P^H` (the part
/// `H` contributes its own invariants, or they were already reached), which
/// makes `C` coflabby; this is also checked before returning.
pub fn coflasque_resolution_with(m: &GLattice, strategy: ResolutionStrategy) -> Result<Resolution> {
    let group = m.group_arc().clone();
    let classes = group.catalog().classes();
    let cosets: Vec<Vec<usize>> = classes.iter().map(|h| h.left_coset_representatives(&group)).collect();
    let mut parts: Vec<(usize, Vec<Integer>)> = Vec::new();
    for (c, h) in classes.iter().enumerate().rev() {
        let invariants = invariant_sublattice(m, h);
        match strategy {
            ResolutionStrategy::AllClasses => {
                parts.extend(invariants.columns().into_iter().map(|v| (c, v)));
            }
            ResolutionStrategy::Pruned => loop {
                let image = invariant_image(m, h, &parts, &cosets);
                let missing = invariants
                    .columns()
                    .into_iter()
                    .find(|v| !matches!(solve_linear_integer(&image, v), Ok(Some(_))));
                match missing {
                    Some(v) => parts.push((c, v)),
                    None => break,
                }
            },
        }
    }
    parts.sort_by_key(|(c, _)| *c);

    let mut columns = Vec::new();
    for (c, v) in &parts {
        for &r in &cosets[*c] {
            columns.push(m.action(r).mul_vec(v)?);
        }
    }
    let f = IntegerMatrix::from_columns(&columns, m.rank());
    let descriptor = PermutationDescriptor::new(parts.iter().map(|(c, _)| *c).collect());
    let p = permutation_lattice(&group, &descriptor)?;
    let iota = kernel_basis(&f);
    Resolution::assemble(m.clone(), p, descriptor, iota, f)
}

/// Columns spanning the image in `M` of the `H`-invariants of the permutation
/// lattice built from `parts`: for each part `(K, v)` and each `H`-orbit of
/// cosets `gK`, the sum of `g·v` over the orbit.
fn invariant_image(
    m: &GLattice,
    h: &crate::group::Subgroup,
    parts: &[(usize, Vec<Integer>)],
    cosets: &[Vec<usize>],
) -> IntegerMatrix {
    let group = m.group();
    let classes = group.catalog().classes();
    let mut generators: Vec<Vec<Integer>> = Vec::new();
    for (c, v) in parts {
        let k = &classes[*c];
        let mut covered = vec![false; group.order()];
        for &r in &cosets[*c] {
            if covered[r] {
                continue;
            }
            // the H-orbit of rK: cosets x·r·K for x in H
            let mut sum = vec![Integer::zero(); m.rank()];
            let mut orbit_reps = Vec::new();
            for &x in h.members() {
                let y = group.mul(x, r);
                let rep = cosets[*c]
                    .iter()
                    .copied()
                    .find(|&s| k.contains(group.mul(group.inverse(s), y)))
                    .expect("coset representative");
                if !orbit_reps.contains(&rep) {
                    orbit_reps.push(rep);
                }
            }
            for &rep in &orbit_reps {
                covered[rep] = true;
                let image = m.action(rep).mul_vec(v).expect("vector length");
                for (s, t) in sum.iter_mut().zip(image) {
                    *s += t;
                }
            }
            generators.push(sum);
        }
    }
    lattice_basis(&IntegerMatrix::from_columns(&generators, m.rank()))
}

/// An equivariant section of `f`, or the Smith-form obstruction showing that
/// none exists. The unknowns are the entries of `s`; the constraints are
/// `s·A_M(g) = A_P(g)·s` for every generator and `f·s = id`.
pub fn find_section(f: &GMap) -> Result<std::result::Result<GMap, SolveObstruction>> {
    if !is_surjective(f.matrix()) {
        return Err(Error::NotSurjective);
    }
    let (m, p) = (f.target(), f.source());
    let (rm, rp) = (m.rank(), p.rank());
    let equivariance = equivariance_equations(m, p);
    let mut identity = IntegerMatrix::zeros(rm * rm, rm * rp);
    let mut rhs = vec![Integer::zero(); equivariance.rows()];
    for a in 0..rm {
        for b in 0..rm {
            for i in 0..rp {
                identity.set(a * rm + b, i * rm + b, f.matrix().get(a, i).clone());
            }
            rhs.push(if a == b { Integer::one() } else { Integer::zero() });
        }
    }
    let system = equivariance.vstack(&identity)?;
    Ok(match solve_linear_integer_detailed(&system, &rhs)? {
        Ok(solution) => {
            let s = IntegerMatrix::new(rp, rm, solution.x0)?;
            Ok(GMap::new(m.clone(), p.clone(), s)?)
        }
        Err(obstruction) => Err(obstruction),
    })
}

/// An equivariant `s` with `f∘s = id`, or `None` when no integral one exists.
pub fn section_of_surjection(f: &GMap) -> Result<Option<GMap>> {
    Ok(find_section(f)?.ok())
}

/// An equivariant `r` with `r∘ι = id`, or `None` when no integral one exists.
pub fn retraction_of_inclusion(iota: &GMap) -> Result<Option<GMap>> {
    if left_inverse(iota.matrix()).is_none() {
        return Err(Error::NotInjective);
    }
    let (c, p) = (iota.source(), iota.target());
    let (rc, rp) = (c.rank(), p.rank());
    let equivariance = equivariance_equations(p, c);
    let mut identity = IntegerMatrix::zeros(rc * rc, rc * rp);
    let mut rhs = vec![Integer::zero(); equivariance.rows()];
    for a in 0..rc {
        for b in 0..rc {
            for k in 0..rp {
                identity.set(a * rc + b, a * rp + k, iota.matrix().get(k, b).clone());
            }
            rhs.push(if a == b { Integer::one() } else { Integer::zero() });
        }
    }
    let system = equivariance.vstack(&identity)?;
    Ok(match solve_linear_integer(&system, &rhs)? {
        Some(solution) => {
            let r = IntegerMatrix::new(rc, rp, solution.x0)?;
            Some(GMap::new(p.clone(), c.clone(), r)?)
        }
        None => None,
    })
}

/// Verdict of [`is_invertible`]: the resolution, split when `M` is invertible,
/// or the obstruction to a section otherwise.
#[derive(Clone, Debug)]
pub struct Invertibility {
    pub invertible: bool,
    pub resolution: Resolution,
    pub obstruction: Option<SolveObstruction>,
}

/// Decides whether `M` is invertible (a direct summand of a permutation
/// lattice): exactly when `f` in a coflasque resolution has an equivariant section.
pub fn is_invertible(m: &GLattice) -> Result<Invertibility> {
    let resolution = coflasque_resolution(m)?;
    split_resolution(resolution)
}

/// Tries to split an existing resolution by a section of `f`.
pub fn split_resolution(resolution: Resolution) -> Result<Invertibility> {
    match find_section(resolution.surjection())? {
        Ok(section) => Ok(Invertibility {
            invertible: true,
            resolution: resolution.with_section(section.matrix().clone())?,
            obstruction: None,
        }),
        Err(obstruction) => Ok(Invertibility {
            invertible: false,
            resolution,
            obstruction: Some(obstruction),
        }),
    }
}

/// The complement `N` in `P = s(M) ⊕ N`, with its certificates.
#[derive(Clone, Debug)]
pub struct Complement {
    lattice: GLattice,
    inclusion: GMap,
    idempotent: IntegerMatrix,
    witness: IntegerMatrix,
}

impl Complement {
    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    /// `N → P`
    pub fn inclusion(&self) -> &GMap {
        &self.inclusion
    }

    /// `e = s∘f`, the projection of `P` onto `s(M)` along `N`.
    pub fn idempotent(&self) -> &IntegerMatrix {
        &self.idempotent
    }

    /// The unimodular equivariant `[s | ι_N]: M ⊕ N → P`.
    pub fn witness(&self) -> &IntegerMatrix {
        &self.witness
    }
}

/// `N = image(id_P − s∘f)` for a split resolution, checked to satisfy
/// `M ⊕ N ≅ P` through the explicit block isomorphism `[s | ι_N]`.
pub fn complement_summand(res: &Resolution) -> Result<Complement> {
    let splitting = res.splitting().ok_or(Error::MissingSplitting)?;
    let s = splitting.section.matrix();
    let e = s * res.surjection.matrix();
    if &e * &e != e {
        return Err(Error::Internal("s∘f is not idempotent".into()));
    }
    let p = &res.p;
    let projector = &IntegerMatrix::identity(p.rank()) - &e;
    let basis = lattice_basis(&projector);
    let n = p.sublattice(&basis)?;
    let inclusion = GMap::new(n.clone(), p.clone(), basis.clone())?;
    if e.rank() + n.rank() != p.rank() {
        return Err(Error::Internal("complement has the wrong rank".into()));
    }
    let witness = s.hstack(&basis)?;
    if !is_unimodular(&witness)? {
        return Err(Error::Internal("[s | ι_N] is not unimodular".into()));
    }
    GMap::new(res.m.direct_sum(&n)?, p.clone(), witness.clone())?;
    Ok(Complement {
        lattice: n,
        inclusion,
        idempotent: e,
        witness,
    })
}
