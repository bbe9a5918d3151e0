//! Gaps and ratios between closed-form expectations and the MDS bound, plus
//! the limiting values they are expected to approach.
//!
//! Limits are checked as finite-grid trends; nothing here proves a limit.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coverage::formulas;
use crate::decimal::{to_decimal, to_f64};
use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::Rational;

/// Limit of `E/k` for MDS codes whose rate tends to zero.
pub const VANISHING_RATE_LIMIT: f64 = 1.0;

/// Limit of `E[C_n]/k_n` for MDS codes of rate `R`: `(1/R) ln(1/(1-R))`.
pub fn mds_rate_limit(rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate must lie in (0, 1), got {rate}"
        )));
    }
    // ln(1/(1-R)) = -ln_1p(-R), accurate for small R
    Ok(-(-rate).ln_1p() / rate)
}

/// `mds_bound(n, floor(nR)) / floor(nR)` as a float.
pub fn mds_rate_ratio(n: u64, rate: f64) -> Result<f64> {
    let k = (n as f64 * rate).floor() as u64;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "floor({n} * {rate}) is not a valid dimension"
        )));
    }
    Ok(to_f64(&formulas::mds_bound::<Rational>(n, k)) / k as f64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Simplex,
    Hamming,
}

/// Closed-form expectation against the MDS bound at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub family: Family,
    pub q: u64,
    /// Dimension `k` for simplex codes, redundancy `r` for Hamming codes.
    pub param: u32,
    pub n: u64,
    pub exact: Rational,
    pub bound: Rational,
    pub gap: Rational,
    pub ratio: f64,
    /// Predicted leading term of the gap, when the asymptotic statement
    /// applies at these parameters.
    pub predicted_term: Option<f64>,
}

impl GapReport {
    /// `gap / predicted_term`.
    pub fn scaled_gap(&self) -> Option<f64> {
        self.predicted_term.map(|p| to_f64(&self.gap) / p)
    }
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

fn projective_length(q: u64, k: u32) -> Result<u64> {
    formulas::projective_length(q, k)
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("length overflow for q={q}, k={k}")))
}

/// Simplex expectation minus the bound; the predicted gap is `1/(q-1)`,
/// stated for `k >= 3` only.
pub fn simplex_gap(q: u64, k: u32) -> Result<GapReport> {
    check_q(q)?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "simplex codes need k >= 2, got {k}"
        )));
    }
    let n = projective_length(q, k)?;
    let exact: Rational = formulas::simplex(q, k);
    let bound: Rational = formulas::mds_bound(n, k as u64);
    let predicted_term = if k >= 3 {
        Some(1.0 / (q - 1) as f64)
    } else {
        log::warn!("simplex gap prediction needs k >= 3; reporting values only");
        None
    };
    Ok(report(Family::Simplex, q, k, n, exact, bound, predicted_term))
}

/// Hamming expectation minus the bound `n(H_n - H_r)`, with the predicted
/// leading term `(H_r - (r-1)/r) q^{r-2}` of the upper estimate.
pub fn hamming_gap_bound(q: u64, r: u32) -> Result<GapReport> {
    check_q(q)?;
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hamming codes need r >= 2, got {r}"
        )));
    }
    let n = projective_length(q, r)?;
    let exact: Rational = formulas::hamming(q, r);
    let bound: Rational = formulas::mds_bound(n, n - r as u64);
    let leading = hamming_leading_term(q, r);
    Ok(report(Family::Hamming, q, r, n, exact, bound, Some(to_f64(&leading))))
}

/// `(H_r - (r-1)/r) q^{r-2}` exactly.
pub fn hamming_leading_term(q: u64, r: u32) -> Rational {
    let h: Rational = formulas::harmonic(r as u64);
    let frac = BigRational::new((r as i64 - 1).into(), (r as i64).into());
    (h - frac) * BigRational::from_integer(BigUint::from(q).pow(r - 2).into())
}

fn report(
    family: Family,
    q: u64,
    param: u32,
    n: u64,
    exact: Rational,
    bound: Rational,
    predicted_term: Option<f64>,
) -> GapReport {
    let gap = &exact - &bound;
    let ratio = to_f64(&(&exact / &bound));
    GapReport {
        family,
        q,
        param,
        n,
        exact,
        bound,
        gap,
        ratio,
        predicted_term,
    }
}

/// Partial sum of `sum_{i>=1} 1/(q^i - 1)`, the limiting simplex gap for
/// fixed `q` as `k` grows.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesLimit {
    pub q: u64,
    pub value: f64,
    pub partial_sum: Rational,
    /// Number of terms summed.
    pub terms: u32,
}

/// Sums terms until the geometric tail bound `2/q^i` drops below `tol`.
pub fn simplex_gap_series_limit(q: u64, tol: f64) -> Result<SeriesLimit> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {tol}")));
    }
    let qb = BigUint::from(q);
    let mut sum = Rational::zero();
    let mut qi = BigUint::from(1u32);
    let mut terms = 0;
    loop {
        terms += 1;
        qi *= &qb;
        sum += BigRational::new(1.into(), (&qi - 1u32).into());
        if 2.0 / qi.to_f64().unwrap_or(f64::INFINITY) < tol {
            break;
        }
    }
    Ok(SeriesLimit {
        q,
        value: to_f64(&sum),
        partial_sum: sum,
        terms,
    })
}

/// Binary Hamming code of redundancy `r` against its limiting ratio bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryHammingBound {
    pub r: u32,
    /// `H_{2^r - 1} - H_r`.
    pub ratio_bound: f64,
    /// `(H_{2^r - 1} - H_r - 1) 2^r`, the leading coefficient of the
    /// difference estimate.
    pub difference_coefficient: f64,
    /// `E/Ê` from the exact closed forms, when `r` is small enough.
    pub exact_ratio: Option<f64>,
    pub exact_gap: Option<Rational>,
}

/// Largest `r` for which exact binary Hamming values are computed.
pub const EXACT_BINARY_HAMMING_MAX_R: u32 = 10;

pub fn binary_hamming_ratio_bound(r: u32) -> Result<BinaryHammingBound> {
    if !(2..=40).contains(&r) {
        return Err(Error::InvalidParameter(format!("r must lie in 2..=40, got {r}")));
    }
    let n = (1u64 << r) - 1;
    let (ratio_bound, exact_ratio, exact_gap) = if r <= EXACT_BINARY_HAMMING_MAX_R {
        let bound: Rational =
            formulas::harmonic::<Rational>(n) - formulas::harmonic::<Rational>(r as u64);
        let rep = hamming_gap_bound(2, r)?;
        (to_f64(&bound), Some(rep.ratio), Some(rep.gap))
    } else {
        let bound = formulas::harmonic::<f64>(n) - formulas::harmonic::<f64>(r as u64);
        (bound, None, None)
    };
    Ok(BinaryHammingBound {
        r,
        ratio_bound,
        difference_coefficient: (ratio_bound - 1.0) * (1u64 << r) as f64,
        exact_ratio,
        exact_gap,
    })
}

/// Simplex gap reports over a grid of field sizes, sorted by `q`.
pub fn simplex_grid(k: u32, qs: &[u64]) -> Result<Vec<GapReport>> {
    grid(qs, |q| simplex_gap(q, k))
}

/// Hamming gap reports over a grid of field sizes, sorted by `q`.
pub fn hamming_grid(r: u32, qs: &[u64]) -> Result<Vec<GapReport>> {
    grid(qs, |q| hamming_gap_bound(q, r))
}

fn grid(qs: &[u64], f: impl Fn(u64) -> Result<GapReport> + Sync) -> Result<Vec<GapReport>> {
    let mut out = qs.par_iter().map(|&q| f(q)).collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|r| r.q);
    Ok(out)
}

/// Prime powers in `lo..=hi`.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&q| prime_power(q).is_some()).collect()
}

/// Header of [`to_csv`].
pub const CSV_HEADER: &str = "q,k_or_r,n,exact,bound,gap,ratio,predicted_term,gap_over_predicted";

/// One CSV row per report; exact columns rendered with `digits` decimals.
pub fn to_csv(reports: &[GapReport], digits: usize) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in reports {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{},{},{},{:.17},{},{}\n",
            r.q,
            r.param,
            r.n,
            to_decimal(&r.exact, digits),
            to_decimal(&r.bound, digits),
            to_decimal(&r.gap, digits),
            r.ratio,
            opt(r.predicted_term),
            opt(r.scaled_gap()),
        ));
    }
    s
}
