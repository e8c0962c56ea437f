//! Exact integral representation theory for Galois lattices.
//!
//! A Galois lattice is modelled by a finite group of unimodular integer
//! matrices (the image of the Galois action) acting on a free abelian group.
//! The crate decides whether such a lattice is a permutation or an invertible
//! module, builds and splits coflasque resolutions, computes first group
//! cohomology and assembles the resulting zero-dimensional motive
//! decomposition of a geometrically rational surface. The Del Pezzo presets of
//! degree 5 and 6 live in [`delpezzo`].

pub mod cohomology;
pub mod delpezzo;
mod error;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod motive;
pub mod resolution;
pub mod serde_int;

pub use cohomology::{h1, h1_cyclic_oracle, is_coflabby, CoflabbyReport, FiniteAbelianGroup};
pub use error::{Error, Result};
pub use group::{
    enumerate_group, equivariant_isomorphic, hom_lattice, invariant_sublattice, restrict_action, subgroup_classes,
    FiniteMatrixGroup, GLattice, GMap, IsoVerdict, Subgroup, DEFAULT_ELEMENT_CAP, DEFAULT_ISO_BOUND,
};
pub use linalg::{
    is_unimodular, kernel_basis, smith_normal_form, solve_linear_integer, Integer, IntegerMatrix, SmithForm,
    SolveObstruction,
};
pub use motive::{
    decompose_motive, decompose_resolution, dp5_motive, etale_from_descriptor, Certificate, DecompositionReport,
    EtaleAlgebra, Format, Isomorphism, MotiveExpression, MotiveTerm, PermutationSummary, Render, ResolutionSummary,
    TermKind, Verdict, ZeroCycleAssumption, ZeroCycleSource,
};
pub use resolution::{
    coflasque_resolution, coflasque_resolution_with, complement_summand, find_section, is_invertible, is_permutation,
    permutation_lattice, retraction_of_inclusion, section_of_surjection, Complement, Invertibility,
    PermutationDescriptor, PermutationVerdict, Resolution, ResolutionCheck, ResolutionStrategy,
};
