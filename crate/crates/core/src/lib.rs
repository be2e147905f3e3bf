//! Crossed-product "fuzzy cylinder" algebras of partial ℤ-actions on real
//! intervals, their point-orbit matrix representations, the induced star
//! product and Poisson limit, and two-generator subalgebras.

pub mod crossed_product;
pub mod error;
pub mod finite_oracle;
pub mod function_algebra;
pub mod interval;
pub mod partial_bijection;
pub mod random;
pub mod report;
pub mod representation;
pub mod scalar;
pub mod star_product;
pub mod subalgebra;

pub use crossed_product::{CrossedProductElement, Cylinder, CylinderKind};
pub use finite_oracle::{FiniteAlgebraElement, FinitePartialBijection};
pub use error::{Error, Result};
pub use function_algebra::{Flavor, SupportedFunction};
pub use interval::Interval;
pub use partial_bijection::{BijectionFamily, FamilyKind, PartialBijection, SemigroupElement};
pub use report::{Check, Report};
pub use representation::{MatrixRep, Orbit};
pub use scalar::Scalar;
pub use star_product::{CylinderFunction, PoissonCoefficient};
pub use subalgebra::{CommutatorProfile, ProfileKind, TwoGenSetup};

pub type Interval64 = Interval<f64>;
pub type Interval32 = Interval<f32>;
pub type PartialBijection64 = PartialBijection<f64>;
pub type PartialBijection32 = PartialBijection<f32>;
pub type SupportedFunction64 = SupportedFunction<f64>;
pub type SupportedFunction32 = SupportedFunction<f32>;
pub type Cylinder64 = Cylinder<f64>;
pub type CrossedProductElement64 = CrossedProductElement<f64>;
pub type CrossedProductElement32 = CrossedProductElement<f32>;
pub type MatrixRep64 = MatrixRep<f64>;
