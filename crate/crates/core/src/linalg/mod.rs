//! Exact integer linear algebra: Smith and Hermite normal forms, kernels and
//! integer linear systems. Everything is arbitrary precision; no operation can
//! overflow.

mod hermite;
mod matrix;
mod smith;

pub use hermite::{kernel_basis, lattice_basis};
pub use matrix::{content, dot, ivec, Integer, IntegerMatrix};
pub use smith::{
    is_unimodular, left_inverse, smith_normal_form, solve_columns, solve_linear_integer, solve_linear_integer_detailed,
    unimodular_inverse, IntegerSolution, SmithForm, SolveObstruction,
};
