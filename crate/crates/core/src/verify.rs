//! Invariant fixture suite.
//!
//! Each fixture recomputes a known value or property by two independent
//! routes and reports whether they agree. The whole suite runs in a few
//! seconds and backs the `verify` command.

use std::time::Instant;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{
    alpha, alpha_via_dual, dual, extended_reed_solomon, hamming_code, simplex_code, LinearCode, RankProfile,
};
use crate::coverage::{
    expectation, expectation_exact, expectation_exact_dual, expectation_hamming,
    expectation_monte_carlo, expectation_simplex, mds_bound, meets_bound, Route,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matrix::Matrix;
use crate::search::{optimal_coverage, verify_reduction, SearchMode, DEFAULT_BUDGET};
use crate::Rational;

/// Outcome of one fixture.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type Fixture = fn(usize) -> Result<std::result::Result<String, String>>;

const FIXTURES: &[(&str, Fixture)] = &[
    ("field arithmetic", field_arithmetic),
    ("simplex [7,3]_2 routes", simplex_routes),
    ("hamming [7,4]_2 routes", hamming_routes),
    ("hamming [13,10]_3 dual route", hamming_ternary),
    ("reed-solomon meets bound", reed_solomon_bound),
    ("generator invariance", generator_invariance),
    ("dual counting identity", duality_identity),
    ("lower bound", lower_bound),
    ("simplex closed form", simplex_closed_form),
    ("search [7,3]_2", search_simplex),
    ("projective reduction", reduction),
    ("monte carlo schedule", monte_carlo),
];

/// Names of the fixtures in run order.
pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

/// Runs every fixture. Errors inside a fixture count as failures.
pub fn run_fixtures(jobs: usize) -> VerifyReport {
    let mut report = VerifyReport::default();
    for (name, f) in FIXTURES {
        let start = Instant::now();
        let (passed, detail) = match f(jobs) {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        log::info!("{name}: {}", if passed { "ok" } else { "FAILED" });
        report.checks.push(CheckOutcome {
            name,
            passed,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }
    report
}

fn gf(q: u64) -> Result<FieldSpec> {
    FieldSpec::with_order(q)
}

fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, a: T, b: T) -> std::result::Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} != {b:?}"))
    }
}

fn random_code(field: &FieldSpec, k: usize, n: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        if let Ok(c) = LinearCode::new(Matrix::random(field, k, n, rng)) {
            return c;
        }
    }
}

fn field_arithmetic(_: usize) -> Result<std::result::Result<String, String>> {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let f = gf(q)?;
        let elements = f.elements();
        for &a in &elements {
            if f.add(a, f.neg(a)) != crate::FieldElement::ZERO {
                return Ok(Err(format!("GF({q}): additive inverse of {}", a.value())));
            }
            if !a.is_zero() {
                if f.mul(a, f.inv(a)?) != crate::FieldElement::ONE {
                    return Ok(Err(format!("GF({q}): inverse of {}", a.value())));
                }
                if f.pow(a, q - 1) != crate::FieldElement::ONE {
                    return Ok(Err(format!("GF({q}): a^(q-1) for {}", a.value())));
                }
            }
            for &b in &elements {
                if f.mul(a, b) != f.mul(b, a) {
                    return Ok(Err(format!("GF({q}): commutativity")));
                }
            }
        }
        let mut max_order = 1;
        for a in f.nonzero_elements() {
            max_order = max_order.max(f.order(a)?);
        }
        if max_order != q - 1 {
            return Ok(Err(format!("GF({q}): no primitive element")));
        }
    }
    Ok(Ok("10 fields".into()))
}

fn simplex_routes(_: usize) -> Result<std::result::Result<String, String>> {
    let f = gf(2)?;
    let c = simplex_code(&f, 3)?;
    let target = rat(47, 12);
    Ok((|| {
        expect_eq("primal", expectation_exact(&c).ok(), Some(target.clone()))?;
        expect_eq("dual", expectation_exact_dual(&c).ok(), Some(target.clone()))?;
        expect_eq("formula", expectation_simplex(&f, 3).ok(), Some(target.clone()))?;
        expect_eq("alpha(3)", alpha(&c, 3).ok(), Some(28))?;
        expect_eq("alpha(3) via dual", alpha_via_dual(&c, 3).ok(), Some(28))?;
        Ok("47/12".into())
    })())
}

fn hamming_routes(_: usize) -> Result<std::result::Result<String, String>> {
    let f = gf(2)?;
    let c = hamming_code(&f, 3)?;
    let target = rat(347, 60);
    Ok((|| {
        expect_eq("primal", expectation_exact(&c).ok(), Some(target.clone()))?;
        expect_eq("dual", expectation_exact_dual(&c).ok(), Some(target.clone()))?;
        expect_eq("formula", expectation_hamming(&f, 3).ok(), Some(target.clone()))?;
        Ok("347/60".into())
    })())
}

fn hamming_ternary(_: usize) -> Result<std::result::Result<String, String>> {
    let f = gf(3)?;
    let c = hamming_code(&f, 3)?;
    let dual_value = expectation(&c, Route::Dual)?;
    let formula = expectation_hamming(&f, 3)?;
    Ok(expect_eq("[13,10]_3", dual_value, formula.clone())
        .map(|_| crate::decimal::format_rational(&formula)))
}

fn reed_solomon_bound(_: usize) -> Result<std::result::Result<String, String>> {
    for (q, n, k) in [(7u64, 7, 3), (5, 5, 2), (3, 4, 2), (8, 9, 4)] {
        let rs = extended_reed_solomon(&gf(q)?, n, k)?;
        let e = expectation(&rs, Route::Auto)?;
        if !meets_bound(&rs, &e)? || !rs.is_mds() {
            return Ok(Err(format!("[{n},{k}]_{q} misses the bound")));
        }
    }
    Ok(Ok("4 codes".into()))
}

fn generator_invariance(_: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (q, k, n) in [(2u64, 3, 7), (3, 2, 6), (4, 3, 6)] {
        let f = gf(q)?;
        let c = random_code(&f, k, n, &mut rng);
        let e = expectation_exact(&c)?;
        for _ in 0..5 {
            let a = Matrix::random_invertible(&f, k, &mut rng);
            let c2 = c.regenerate(&a)?;
            if expectation_exact(&c2)? != e {
                return Ok(Err(format!("[{n},{k}]_{q}: value changed under A G")));
            }
            let mut g = c.generator().clone();
            let col = rand::Rng::random_range(&mut rng, 0..n);
            let s = f.element(rand::Rng::random_range(&mut rng, 1..q))?;
            g.scale_column(col, s);
            if expectation_exact(&LinearCode::new(g)?)? != e {
                return Ok(Err(format!("[{n},{k}]_{q}: value changed under column scaling")));
            }
        }
    }
    Ok(Ok("15 transforms".into()))
}

fn duality_identity(_: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let mut checked = 0;
    for i in 0..12 {
        let q = [2u64, 3, 4][i % 3];
        let n = 4 + i % 5;
        let k = 1 + i % (n - 1);
        let f = gf(q)?;
        let c = random_code(&f, k, n, &mut rng);
        let d = dual(&c);
        let pc = RankProfile::compute(c.generator());
        let pd = RankProfile::compute(d.generator());
        for s in 0..=n {
            for l in 0..=k {
                let rhs = if l + s >= k { pd.beta(l + s - k, n - s) } else { 0 };
                if pc.beta(l, s) != rhs {
                    return Ok(Err(format!("[{n},{k}]_{q}: l = {l}, s = {s}")));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(format!("{checked} identities")))
}

fn lower_bound(_: usize) -> Result<std::result::Result<String, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0d);
    for i in 0..20 {
        let q = [2u64, 3, 4, 5][i % 4];
        let n = 3 + i % 6;
        let k = 1 + i % n;
        let c = random_code(&gf(q)?, k, n, &mut rng);
        if expectation(&c, Route::Auto)? < mds_bound(n as u64, k as u64)? {
            return Ok(Err(format!("[{n},{k}]_{q} below the bound")));
        }
    }
    Ok(Ok("20 codes".into()))
}

fn simplex_closed_form(_: usize) -> Result<std::result::Result<String, String>> {
    for (q, k) in [(2u64, 2), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
        let f = gf(q)?;
        let code = simplex_code(&f, k)?;
        if expectation(&code, Route::Auto)? != expectation_simplex(&f, k)? {
            return Ok(Err(format!("simplex k = {k}, q = {q}")));
        }
    }
    Ok(Ok("6 codes".into()))
}

fn search_simplex(jobs: usize) -> Result<std::result::Result<String, String>> {
    let rep = optimal_coverage(&gf(2)?, 3, 7, SearchMode::Projective, DEFAULT_BUDGET, jobs)?;
    let unique = rep.optimal_candidates.len() == 1 && rep.optimal_candidates[0].is_distinct();
    Ok((|| {
        expect_eq("minimum", rep.minimum.clone(), rat(47, 12))?;
        expect_eq("unique simplex optimum", unique, true)?;
        let floor = rep.runner_up.clone().is_some_and(|r| r >= rat(17, 4));
        expect_eq("runner-up >= 17/4", floor, true)?;
        Ok(format!("{} candidates", rep.candidates_examined))
    })())
}

fn reduction(_: usize) -> Result<std::result::Result<String, String>> {
    for (q, k, n) in [(2u64, 2, 3), (2, 2, 4), (3, 2, 3)] {
        let check = verify_reduction(&gf(q)?, k, n, DEFAULT_BUDGET)?;
        if !check.holds() {
            return Ok(Err(format!("(q, k, n) = ({q}, {k}, {n}): {check:?}")));
        }
    }
    Ok(Ok("3 instances".into()))
}

fn monte_carlo(jobs: usize) -> Result<std::result::Result<String, String>> {
    let c = simplex_code(&gf(2)?, 3)?;
    let a = expectation_monte_carlo(&c, 50_000, 42, 1)?;
    let b = expectation_monte_carlo(&c, 50_000, 42, jobs.max(2))?;
    if a != b {
        return Ok(Err("estimate depends on worker count".into()));
    }
    let z = a
        .z_score(47.0 / 12.0)
        .ok_or_else(|| Error::InvalidParameter("zero standard error".into()))?;
    if z.abs() > 4.0 {
        return Ok(Err(format!("z = {z:.3}")));
    }
    Ok(Ok(format!("z = {z:.3}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_pass() {
        let report = run_fixtures(2);
        for c in &report.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(report.checks.len(), fixture_names().len());
    }
}
