//! Exact linear algebra kernels: sparse integer matrices, invariant factors,
//! ranks modulo a prime and rational elimination.

mod elim;
mod matrix;
mod modular;
mod snf;

pub use elim::{Elimination, SolveError};
pub use matrix::IntegerMatrix;
pub use modular::{abs_det, is_prime, DixonSolver, ModularElimination};
pub use snf::{integer_rank, invariant_factors, rank_mod_p};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
