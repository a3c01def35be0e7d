//! Exact computations in the integral cohomology of configuration spaces
//! `F(R^{r+1} - S_m, n)`, topological complexity bounds derived from them,
//! and a planner that reduces moving point obstacles to stationary ones by an
//! explicit ambient isotopy.

pub mod algebra;
pub mod bounds;
pub mod error;
pub mod planner;
pub mod tensor;

pub use algebra::{
    enumerate_basis, poincare_polynomial, straighten, AlgebraSpec, Element, Generator, Monomial,
};
pub use bounds::{
    bounds_report, tc_exact, upper_bound, witness_product, zcl_search, BoundsReport, WitnessFactor,
};
pub use error::{AlgebraError, BoundsError, PlanError};
pub use tensor::{tensor, zero_divisor, TensorElement};
