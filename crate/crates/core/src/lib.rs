//! Rearrangement-invariant function spaces on `(0, 1)`: step functions and
//! their rearrangements, isoperimetric profiles, supremum and Hardy-type
//! operators, r.i. norms, and optimal target/domain norms for Sobolev
//! embeddings, with a numerical verification harness.

// `!(x > 0.0)` style guards reject NaN on purpose; quadrature nodes keep full digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod functions;
pub mod harness;
pub mod norms;
pub mod operators;
pub mod optimal;
pub mod profiles;
pub mod quad;
pub mod parse;

pub use error::{HarnessError, NormError, OperatorError, OptimalError, ParseError, ProfileError, StepError};
pub use functions::{EvalFunction, Monotonicity, Rearranged, StepFunction};
pub use norms::NormFunctional;
pub use profiles::Profile;
