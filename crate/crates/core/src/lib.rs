//! Exact weighted linear matroid intersection.
//!
//! The solver computes the degree of `det sum_i a_i b_i^T x_i t^{c_i}` by
//! maintaining integer row potentials and performing exact Gaussian
//! elimination only when a potential update forces it. A weight-splitting
//! reference solver, a brute-force oracle and a trace comparator sit alongside.

pub mod bench;
pub mod compare;
pub mod degdet;
pub mod exactla;
pub mod frank;
pub mod gen;
pub mod instance;
pub mod intersect;
pub mod matroid;
pub mod oracle;
pub mod result;
pub mod scalar;
pub mod solvers;
pub mod trace;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Arbitrary-precision rational scalar used throughout the public API.
pub type Rational = BigRational;
pub type ExactMatrix = exactla::Matrix<Rational>;
pub type Instance = instance::WmiInstance<Rational>;

pub use result::{Degree, SolveResult, WeightSplitting};
