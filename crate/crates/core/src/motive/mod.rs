//! Formal zero-dimensional motive expressions and the decomposition report
//! obtained from a split coflasque resolution of the Picard lattice.
//!
//! A permutation lattice `⊕ Z[G/H_i]` corresponds to the étale algebra whose
//! factors have degrees `[G:H_i]`; that degree multiset is all that is kept.
//! Expressions are multisets of terms and are never simplified by cancellation.

mod render;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{FiniteMatrixGroup, GLattice, Subgroup, DEFAULT_ISO_BOUND};
use crate::linalg::{IntegerMatrix, SolveObstruction};
use crate::resolution::{
    coflasque_resolution, complement_summand, is_permutation, split_resolution, PermutationDescriptor,
    PermutationVerdict, Resolution, ResolutionCheck,
};

pub use render::{Format, Render};

/// An étale algebra up to isomorphism, recorded by the degrees of its field
/// factors (sorted in decreasing order).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EtaleAlgebra {
    degrees: Vec<usize>,
}

impl EtaleAlgebra {
    /// Panics on a zero degree.
    pub fn new(mut degrees: Vec<usize>) -> Self {
        assert!(degrees.iter().all(|&d| d >= 1), "field degrees are positive");
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        EtaleAlgebra { degrees }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `E_5`, `E_{2,1,1,1}` for the letter `E`.
    pub fn label(&self, letter: &str) -> String {
        match self.degrees.as_slice() {
            [d] => format!("{letter}_{d}"),
            ds => format!(
                "{letter}_{{{}}}",
                ds.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// One field factor of degree `[G:H]` per part `H` of the descriptor.
pub fn etale_from_descriptor(group: &FiniteMatrixGroup, d: &PermutationDescriptor) -> EtaleAlgebra {
    let classes = group.catalog().classes();
    EtaleAlgebra::new(d.parts().iter().map(|&c| group.order() / classes[c].order()).collect())
}

/// What a term stands for, before twisting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TermKind {
    /// The unit motive `Z`.
    TateUnit,
    /// `Spec` of an étale algebra, named by a letter such as `E` or `F`.
    Etale { name: String, algebra: EtaleAlgebra },
    /// The motive of the surface.
    Surface,
    /// The middle part `(S, ρ)` cut out by the Picard projector.
    MiddlePart,
}

/// A term `X(twist)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotiveTerm {
    pub twist: u32,
    pub kind: TermKind,
}

/// Highest twist that occurs for a surface.
pub const MAX_TWIST: u32 = 2;

impl MotiveTerm {
    /// Panics if `twist` exceeds [`MAX_TWIST`].
    pub fn new(kind: TermKind, twist: u32) -> Self {
        assert!(twist <= MAX_TWIST, "twist {twist} exceeds the surface bound");
        MotiveTerm { twist, kind }
    }

    pub fn tate(twist: u32) -> Self {
        Self::new(TermKind::TateUnit, twist)
    }

    pub fn etale(name: &str, algebra: EtaleAlgebra, twist: u32) -> Self {
        Self::new(
            TermKind::Etale {
                name: name.to_string(),
                algebra,
            },
            twist,
        )
    }
}

impl fmt::Display for MotiveTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (base, compound) = match &self.kind {
            TermKind::TateUnit => ("Z".to_string(), false),
            TermKind::Etale { name, algebra } => (format!("Spec {}", algebra.label(name)), true),
            TermKind::Surface => ("S".to_string(), false),
            TermKind::MiddlePart => ("(S,rho)".to_string(), false),
        };
        match (self.twist, compound) {
            (0, _) => write!(f, "{base}"),
            (t, true) => write!(f, "({base})({t})"),
            (t, false) => write!(f, "{base}({t})"),
        }
    }
}

/// A formal direct sum of terms. Terms are kept sorted by twist, then kind,
/// then degrees; equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotiveExpression {
    terms: Vec<MotiveTerm>,
}

impl MotiveExpression {
    /// Étale terms of the zero algebra are dropped; nothing else is simplified.
    pub fn new(terms: impl IntoIterator<Item = MotiveTerm>) -> Self {
        let mut terms: Vec<MotiveTerm> = terms
            .into_iter()
            .filter(|t| !matches!(&t.kind, TermKind::Etale { algebra, .. } if algebra.is_zero()))
            .collect();
        terms.sort();
        MotiveExpression { terms }
    }

    pub fn terms(&self) -> &[MotiveTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms equal to `term`.
    pub fn count(&self, term: &MotiveTerm) -> usize {
        self.terms.iter().filter(|t| *t == term).count()
    }
}

impl fmt::Display for MotiveExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The isomorphism `Z(1) ⊕ S ≅ Z ⊕ Z(1) ⊕ (Spec E)(1) ⊕ Z(2)` for a degree-5
/// Del Pezzo surface whose Galois image is `w` inside the Weyl group. `E` has
/// one factor per orbit of `w` on `h_1..h_5`. Returns `(left, right)`.
pub fn dp5_motive(weyl: &FiniteMatrixGroup, w: &Subgroup) -> (MotiveExpression, MotiveExpression) {
    let hs = crate::delpezzo::h_vectors_dp5();
    let mut seen = [false; 5];
    let mut degrees = Vec::new();
    for i in 0..5 {
        if seen[i] {
            continue;
        }
        let mut size = 0;
        for &g in w.members() {
            let image = weyl.element(g).mul_vec(&hs[i]).expect("rank-5 group");
            let j = hs
                .iter()
                .position(|h| *h == image)
                .expect("Weyl elements permute h1..h5");
            if !seen[j] {
                seen[j] = true;
                size += 1;
            }
        }
        degrees.push(size);
    }
    dp5_motive_from_degrees(EtaleAlgebra::new(degrees))
}

/// The two sides of the degree-5 isomorphism for a given algebra `E`.
pub fn dp5_motive_from_degrees(e: EtaleAlgebra) -> (MotiveExpression, MotiveExpression) {
    let left = MotiveExpression::new([MotiveTerm::new(TermKind::Surface, 0), MotiveTerm::tate(1)]);
    let right = MotiveExpression::new([
        MotiveTerm::tate(0),
        MotiveTerm::tate(1),
        MotiveTerm::etale("E", e, 1),
        MotiveTerm::tate(2),
    ]);
    (left, right)
}

/// Overall outcome of the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The motive is a summand of `Z ⊕ (Spec E)(1) ⊕ Z(2)`.
    ZeroDimensional,
    /// The Picard lattice is not invertible.
    NotInvertible,
    /// Invertible, but no zero-cycle of degree one was asserted.
    InvertibleNoZeroCycleAssumed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ZeroDimensional => "zero-dimensional",
            Verdict::NotInvertible => "not invertible",
            Verdict::InvertibleNoZeroCycleAssumed => "invertible, zero-cycle of degree 1 not assumed",
        })
    }
}

/// Who asserted the existence of a zero-cycle of degree one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroCycleSource {
    NotAssumed,
    /// A library caller.
    Caller,
    /// The `--assume-zero-cycle` command-line flag.
    Flag,
    /// The `zero_cycle_degree_one` field of an input file.
    InputFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCycleAssumption {
    pub assumed: bool,
    pub source: ZeroCycleSource,
}

impl ZeroCycleAssumption {
    pub fn from_flag(assumed: bool) -> Self {
        ZeroCycleAssumption {
            assumed,
            source: if assumed {
                ZeroCycleSource::Caller
            } else {
                ZeroCycleSource::NotAssumed
            },
        }
    }
}

/// Summary of the resolution a report is based on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSummary {
    /// `coflasque` (general construction) or `explicit` (the degree-5 one).
    pub construction: String,
    pub permutation_parts: PermutationDescriptor,
    /// Orders of the subgroups in `permutation_parts`.
    pub part_orders: Vec<usize>,
    pub p_rank: usize,
    pub c_rank: usize,
    pub check: ResolutionCheck,
}

impl ResolutionSummary {
    pub fn of(resolution: &Resolution, construction: &str) -> Self {
        let classes = resolution.m().group().catalog().classes();
        ResolutionSummary {
            construction: construction.to_string(),
            permutation_parts: resolution.descriptor().clone(),
            part_orders: resolution
                .descriptor()
                .parts()
                .iter()
                .map(|&c| classes[c].order())
                .collect(),
            p_rank: resolution.p().rank(),
            c_rank: resolution.c().rank(),
            check: resolution.verify(),
        }
    }
}

/// Outcome of [`is_permutation`] in report form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSummary {
    /// `yes`, `no` or `unknown`.
    pub verdict: String,
    pub descriptor: Option<PermutationDescriptor>,
    pub reason: Option<String>,
}

impl PermutationSummary {
    pub fn from_verdict(v: &PermutationVerdict) -> Self {
        match v {
            PermutationVerdict::Yes { descriptor, .. } => PermutationSummary {
                verdict: v.label().into(),
                descriptor: Some(descriptor.clone()),
                reason: None,
            },
            PermutationVerdict::NoCertain(reason) => PermutationSummary {
                verdict: v.label().into(),
                descriptor: None,
                reason: Some(reason.clone()),
            },
            PermutationVerdict::Unknown => PermutationSummary {
                verdict: v.label().into(),
                descriptor: None,
                reason: Some("no witness within the coefficient bound".into()),
            },
        }
    }
}

/// `left` is a direct summand of `right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandStatement {
    pub left: MotiveExpression,
    pub right: MotiveExpression,
}

/// `(S, ρ) ⊕ (Spec F)(1) ≅ (Spec E)(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleRelation {
    pub e: EtaleAlgebra,
    pub f: EtaleAlgebra,
    pub left: MotiveExpression,
    pub right: MotiveExpression,
}

/// `left ≅ right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub left: MotiveExpression,
    pub right: MotiveExpression,
}

/// Evidence for the invertibility verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// An equivariant section `s` of `f` (`P.rank × M.rank`).
    Section { matrix: IntegerMatrix },
    /// The Smith-form obstruction to any section.
    Obstruction { obstruction: SolveObstruction },
}

/// The complement `N` with `M ⊕ N ≅ P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementSummary {
    pub rank: usize,
    pub permutation: PermutationSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub verdict: Verdict,
    pub zero_cycle: ZeroCycleAssumption,
    pub invertible: bool,
    pub resolution: ResolutionSummary,
    /// The algebra `E` of `P`.
    pub etale: EtaleAlgebra,
    pub certificate: Certificate,
    pub complement: Option<ComplementSummary>,
    pub picard_permutation: PermutationSummary,
    pub summand_statement: Option<SummandStatement>,
    pub middle_relation: Option<MiddleRelation>,
    /// The degree-5 isomorphism, present for the degree-5 preset.
    pub theorem: Option<Isomorphism>,
}

impl DecompositionReport {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::InvalidInput(e.to_string()))
    }

    /// Records who asserted the zero-cycle.
    pub fn set_zero_cycle_source(&mut self, source: ZeroCycleSource) {
        self.zero_cycle.source = source;
    }
}

/// Decomposition bookkeeping for `M`, using the default coflasque resolution
/// and isomorphism bound.
pub fn decompose_motive(m: &GLattice, zero_cycle_assumed: bool) -> Result<DecompositionReport> {
    decompose_resolution(
        coflasque_resolution(m)?,
        "coflasque",
        ZeroCycleAssumption::from_flag(zero_cycle_assumed),
        DEFAULT_ISO_BOUND,
    )
}

/// Decomposition bookkeeping starting from a given resolution of the Picard
/// lattice. A resolution without splitting is split by a section of `f` if
/// one exists.
pub fn decompose_resolution(
    resolution: Resolution,
    construction: &str,
    zero_cycle: ZeroCycleAssumption,
    iso_bound: u32,
) -> Result<DecompositionReport> {
    let (invertible, resolution, obstruction) = if resolution.splitting().is_some() {
        (true, resolution, None)
    } else {
        let inv = split_resolution(resolution)?;
        (inv.invertible, inv.resolution, inv.obstruction)
    };
    let group = resolution.m().group();
    let summary = ResolutionSummary::of(&resolution, construction);
    let e = etale_from_descriptor(group, resolution.descriptor());
    let picard_permutation = PermutationSummary::from_verdict(&is_permutation(resolution.m(), iso_bound)?);

    let (certificate, complement) = match (resolution.splitting(), obstruction) {
        (Some(split), _) => {
            let n = complement_summand(&resolution)?;
            let verdict = is_permutation(n.lattice(), iso_bound)?;
            (
                Certificate::Section {
                    matrix: split.section().matrix().clone(),
                },
                Some((n.lattice().rank(), verdict)),
            )
        }
        (None, Some(obstruction)) => (Certificate::Obstruction { obstruction }, None),
        (None, None) => return Err(crate::Error::Internal("neither section nor obstruction".into())),
    };

    let verdict = match (invertible, zero_cycle.assumed) {
        (false, _) => Verdict::NotInvertible,
        (true, false) => Verdict::InvertibleNoZeroCycleAssumed,
        (true, true) => Verdict::ZeroDimensional,
    };
    let mut summand_statement = None;
    let mut middle_relation = None;
    if verdict == Verdict::ZeroDimensional {
        summand_statement = Some(SummandStatement {
            left: MotiveExpression::new([MotiveTerm::new(TermKind::Surface, 0)]),
            right: MotiveExpression::new([
                MotiveTerm::tate(0),
                MotiveTerm::etale("E", e.clone(), 1),
                MotiveTerm::tate(2),
            ]),
        });
        if let Some((_, PermutationVerdict::Yes { descriptor, .. })) = &complement {
            let f = etale_from_descriptor(group, descriptor);
            middle_relation = Some(MiddleRelation {
                left: MotiveExpression::new([
                    MotiveTerm::new(TermKind::MiddlePart, 0),
                    MotiveTerm::etale("F", f.clone(), 1),
                ]),
                right: MotiveExpression::new([MotiveTerm::etale("E", e.clone(), 1)]),
                e: e.clone(),
                f,
            });
        }
    }
    debug_assert_eq!(verdict == Verdict::ZeroDimensional, invertible && zero_cycle.assumed);
    Ok(DecompositionReport {
        verdict,
        zero_cycle,
        invertible,
        resolution: summary,
        etale: e,
        certificate,
        complement: complement.map(|(rank, v)| ComplementSummary {
            rank,
            permutation: PermutationSummary::from_verdict(&v),
        }),
        picard_permutation,
        summand_statement,
        middle_relation,
        theorem: None,
    })
}
