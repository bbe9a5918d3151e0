//! Expected number of uniform column draws until the drawn columns of a
//! generator reach full rank.
//!
//! Exact values come from the information-set formula
//!
//! ```text
//! E[C] = n H_n - sum_{s=k}^{n-1} alpha(C, s) / C(n-1, s)
//! ```
//!
//! where `alpha(C, s)` counts size-`s` information sets. The primal route
//! enumerates column subsets of the code itself; the dual route obtains the
//! same counts from independent column subsets of a parity-check matrix,
//! which only touches subsets of size at most `n - k`.

pub mod formulas;
pub mod monte_carlo;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::codes::{dual, independent_subset_counts_budgeted, LinearCode, RankProfile};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::Rational;

pub use monte_carlo::{expectation_monte_carlo, simulate_trial, McEstimate, Simulator, TrialTrace};

/// Which exact computation to use.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Enumerate column subsets of the generator.
    Primal,
    /// Enumerate independent column subsets of the dual generator.
    Dual,
    /// Dual when `n - k < k`, primal otherwise.
    Auto,
}

impl Route {
    pub fn resolve(self, n: usize, k: usize) -> Route {
        match self {
            Route::Auto if n - k < k => Route::Dual,
            Route::Auto => Route::Primal,
            r => r,
        }
    }
}

/// Exact harmonic number `H_m`.
pub fn harmonic(m: u64) -> Rational {
    formulas::harmonic(m)
}

/// Exact MDS lower bound `n (H_n - H_{n-k})` for `1 <= k <= n`.
pub fn mds_bound(n: u64, k: u64) -> Result<Rational> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "bound needs 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    Ok(formulas::mds_bound(n, k))
}

/// Assembles `n H_n - sum_{s=k}^{n-1} alpha(s) / C(n-1, s)`.
pub fn expectation_from_alpha(n: usize, k: usize, alpha: impl Fn(usize) -> u64) -> Rational {
    let mut value = BigRational::from_integer(BigInt::from(n)) * harmonic(n as u64);
    // C(n-1, s), advanced incrementally from C(n-1, 0)
    let mut binom = BigUint::one();
    for s in 0..n {
        if s >= k {
            let a = alpha(s);
            if a != 0 {
                value -= BigRational::new(BigInt::from(a), BigInt::from(binom.clone()));
            }
        }
        binom = binom * (n - 1 - s) / (s + 1);
    }
    value
}

fn check_code(code: &LinearCode) -> Result<()> {
    if code.k() == 0 {
        return Err(Error::InvalidParameter(
            "expectation is undefined for the zero code".into(),
        ));
    }
    Ok(())
}

/// Exact expectation via information sets of the code itself.
pub fn expectation_exact(code: &LinearCode) -> Result<Rational> {
    expectation_exact_budgeted(code, u64::MAX)
}

/// [`expectation_exact`] visiting at most `budget` enumeration nodes.
pub fn expectation_exact_budgeted(code: &LinearCode, budget: u64) -> Result<Rational> {
    check_code(code)?;
    let profile = RankProfile::compute_budgeted(code.generator(), budget)?;
    Ok(expectation_from_alpha(code.n(), code.k(), |s| profile.alpha(s)))
}

/// Exact expectation with `alpha(C, s) = beta_{s-k}(C^perp, n-s)`, the number
/// of independent `(n-s)`-subsets of the dual generator's columns.
pub fn expectation_exact_dual(code: &LinearCode) -> Result<Rational> {
    expectation_exact_dual_budgeted(code, u64::MAX)
}

/// [`expectation_exact_dual`] visiting at most `budget` enumeration nodes.
pub fn expectation_exact_dual_budgeted(code: &LinearCode, budget: u64) -> Result<Rational> {
    check_code(code)?;
    let (n, k) = (code.n(), code.k());
    let parity = dual(code);
    let counts = independent_subset_counts_budgeted(parity.generator(), n - k, budget)?;
    Ok(expectation_from_alpha(n, k, |s| {
        counts.get(n - s).copied().unwrap_or(0)
    }))
}

/// Exact expectation by the chosen route.
pub fn expectation(code: &LinearCode, route: Route) -> Result<Rational> {
    expectation_budgeted(code, route, u64::MAX)
}

/// [`expectation`] visiting at most `budget` enumeration nodes.
pub fn expectation_budgeted(code: &LinearCode, route: Route, budget: u64) -> Result<Rational> {
    check_code(code)?;
    match route.resolve(code.n(), code.k()) {
        Route::Dual => expectation_exact_dual_budgeted(code, budget),
        _ => expectation_exact_budgeted(code, budget),
    }
}

/// Closed form for the q-ary simplex code of dimension `k >= 2`.
pub fn expectation_simplex(field: &FieldSpec, k: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "simplex formula needs k >= 2, got {k}"
        )));
    }
    Ok(formulas::simplex(field.q() as u64, k as u32))
}

/// Closed form for the q-ary Hamming code of redundancy `r >= 2`.
pub fn expectation_hamming(field: &FieldSpec, r: usize) -> Result<Rational> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hamming formula needs r >= 2, got {r}"
        )));
    }
    Ok(formulas::hamming(field.q() as u64, r as u32))
}

/// `value - mds_bound(n, k)`.
pub fn gap_to_bound(code: &LinearCode, value: &Rational) -> Result<Rational> {
    Ok(value - mds_bound(code.n() as u64, code.k() as u64)?)
}

/// True iff `value` equals the MDS bound for the code's parameters.
pub fn meets_bound(code: &LinearCode, value: &Rational) -> Result<bool> {
    Ok(gap_to_bound(code, value)?.is_zero())
}
