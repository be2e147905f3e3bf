//! Exact oracle on finite sets: partial bijections of `{0, …, M−1}`, the
//! crossed product of `ℂ^M` (or exact rationals) by the inverse semigroup they
//! generate, covariant point representations, and a bridge from interval
//! cylinders on invariant grids.

mod algebra;
mod bijection;
pub mod checks;
mod coefficient;
mod covariant;
mod sampling;

pub use algebra::{FiniteAction, FiniteAlgebraElement, Quotient};
pub use bijection::{words, FinitePartialBijection};
pub use coefficient::{Coefficient, Exact};
pub use covariant::{adjoint, is_zero_one, matrix_residual, FiniteCovariantRep};
pub use sampling::{discretize, orbit_grid, sample_interval_to_finite, SampledInstance};
