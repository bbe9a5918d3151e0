use std::fmt::Debug;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Number types the closed-form formulas can be evaluated in.
///
/// Exact results use [`BigRational`]; `f64`/`f32` give fast approximations
/// whose integer inputs (field sizes, binomials) are rounded on conversion.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    fn from_biguint(n: &BigUint) -> Self;

    fn from_u64(n: u64) -> Self {
        Self::from_biguint(&BigUint::from(n))
    }
}

impl Scalar for BigRational {
    fn from_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(n.clone().into())
    }
}

impl Scalar for f64 {
    fn from_biguint(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }
}

impl Scalar for f32 {
    fn from_biguint(n: &BigUint) -> Self {
        n.to_f32().unwrap_or(f32::INFINITY)
    }

    fn from_u64(n: u64) -> Self {
        n as f32
    }
}
