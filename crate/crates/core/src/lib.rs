//! Coverage depth of linear codes over small finite fields.
//!
//! Columns of a rank-`k` generator matrix are drawn uniformly at random with
//! replacement until the drawn columns span the whole message space. This
//! crate computes the expected number of draws exactly (as rationals), in
//! closed form for simplex, Hamming and MDS codes, by simulation, and
//! searches small parameter sets for codes minimizing it.
//!
//! ```
//! use covdepth::{codes, coverage, FieldSpec, Rational};
//!
//! let gf2 = FieldSpec::with_order(2).unwrap();
//! let simplex = codes::simplex_code(&gf2, 3).unwrap();
//! let exact = coverage::expectation_exact(&simplex).unwrap();
//! assert_eq!(exact, Rational::new(47.into(), 12.into()));
//! ```
//!
//! The closed forms in [`coverage::formulas`] are generic over [`Scalar`] and
//! can be evaluated as exact rationals or as `f64`/`f32` approximations.

pub mod asymptotics;
pub mod codes;
pub mod coverage;
pub mod decimal;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod scalar;
pub mod search;
pub mod verify;

pub use codes::LinearCode;
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use matrix::Matrix;
pub use scalar::Scalar;

/// Exact arbitrary-precision rational used for all exact expectations.
pub type Rational = num_rational::BigRational;
/// Double-precision evaluation of the closed forms.
pub type Approx = f64;
/// Single-precision evaluation of the closed forms.
pub type Approx32 = f32;
