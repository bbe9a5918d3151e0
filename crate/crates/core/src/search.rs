//! Exhaustive search for codes minimizing the expected draw count.
//!
//! The expected draw count is unchanged by permuting generator columns or
//! scaling a column by a nonzero scalar: neither changes the rank of any
//! drawn set. In projective mode a candidate is therefore a multiset of
//! projective points, stored as a sorted list of indices into
//! [`projective_points`]. Full mode enumerates every `k x n` matrix and is
//! only meant to validate that reduction on tiny parameters.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{projective_points, LinearCode};
use crate::coverage::{expectation, Route};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::matrix::Matrix;
use crate::Rational;

/// Default cap on the number of raw candidates an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Multisets of projective points.
    Projective,
    /// Every matrix, zero columns included.
    Full,
}

/// A candidate generator in canonical form.
///
/// In projective mode `columns` is a nondecreasing list of projective point
/// indices. In full mode it lists each column's encoding as a base-q integer
/// (first coordinate most significant), so `0` is the zero column.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateMultiset {
    pub mode: SearchMode,
    pub columns: Vec<usize>,
}

impl CandidateMultiset {
    pub fn zero_columns(&self) -> usize {
        match self.mode {
            SearchMode::Projective => 0,
            SearchMode::Full => self.columns.iter().filter(|&&c| c == 0).count(),
        }
    }

    /// True iff no point repeats (projective mode).
    pub fn is_distinct(&self) -> bool {
        self.columns.windows(2).all(|w| w[0] != w[1])
    }
}

/// The candidate space for given `(q, k, n, mode)`.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    field: FieldSpec,
    k: usize,
    n: usize,
    mode: SearchMode,
    /// Projective points, or every vector of GF(q)^k in full mode.
    alphabet: Vec<Vec<FieldElement>>,
}

impl SearchSpace {
    /// Fails with [`Error::BudgetExceeded`] when the raw candidate count
    /// exceeds `budget`.
    pub fn new(field: &FieldSpec, k: usize, n: usize, mode: SearchMode, budget: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "search needs 1 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        let q = field.q() as u64;
        let alphabet_size = BigUint::from(q).pow(k as u32);
        let raw = match mode {
            SearchMode::Projective => {
                let points = (&alphabet_size - 1u32) / (q - 1);
                multiset_count(&points, n)
            }
            SearchMode::Full => alphabet_size.pow(n as u32),
        };
        if raw > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                needed: raw.to_string(),
                budget,
            });
        }
        let alphabet = match mode {
            SearchMode::Projective => projective_points(field, k),
            SearchMode::Full => {
                let size = alphabet_size.to_usize().expect("within budget");
                (0..size).map(|c| decode_vector(field, k, c)).collect()
            }
        };
        Ok(SearchSpace {
            field: field.clone(),
            k,
            n,
            mode,
            alphabet,
        })
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }

    /// Number of raw candidates before the spanning filter.
    pub fn raw_count(&self) -> u64 {
        let a = BigUint::from(self.alphabet.len());
        match self.mode {
            SearchMode::Projective => multiset_count(&a, self.n),
            SearchMode::Full => a.pow(self.n as u32),
        }
        .to_u64()
        .expect("within budget")
    }

    /// Every raw candidate in lexicographic order.
    pub fn raw(&self) -> impl Iterator<Item = CandidateMultiset> + '_ {
        (0..self.alphabet.len()).flat_map(move |first| self.raw_with_first(first))
    }

    /// Raw candidates whose first entry is `first`, in lexicographic order.
    pub fn raw_with_first(&self, first: usize) -> impl Iterator<Item = CandidateMultiset> + '_ {
        let mode = self.mode;
        let lo = match mode {
            SearchMode::Projective => first,
            SearchMode::Full => 0,
        };
        Odometer::new(self.n - 1, lo, self.alphabet.len(), mode == SearchMode::Projective).map(
            move |tail| {
                let mut columns = Vec::with_capacity(tail.len() + 1);
                columns.push(first);
                columns.extend(tail);
                CandidateMultiset { mode, columns }
            },
        )
    }

    /// Candidates whose columns span GF(q)^k, in lexicographic order.
    pub fn candidates(&self) -> impl Iterator<Item = CandidateMultiset> + '_ {
        self.raw().filter(|c| self.is_admissible(c))
    }

    pub fn generator(&self, cand: &CandidateMultiset) -> Matrix {
        let cols: Vec<Vec<FieldElement>> = cand
            .columns
            .iter()
            .map(|&i| self.alphabet[i].clone())
            .collect();
        Matrix::from_columns(&self.field, self.k, &cols).expect("columns have length k")
    }

    pub fn is_admissible(&self, cand: &CandidateMultiset) -> bool {
        self.generator(cand).rank() == self.k
    }

    /// The code of an admissible candidate.
    pub fn code(&self, cand: &CandidateMultiset) -> Result<LinearCode> {
        LinearCode::new(self.generator(cand))
    }

    /// Exact expected draw count of an admissible candidate.
    pub fn score(&self, cand: &CandidateMultiset) -> Result<Rational> {
        expectation(&self.code(cand)?, Route::Auto)
    }
}

fn decode_vector(field: &FieldSpec, k: usize, mut code: usize) -> Vec<FieldElement> {
    let q = field.q() as usize;
    let mut v = vec![FieldElement::ZERO; k];
    for i in (0..k).rev() {
        v[i] = field.element((code % q) as u64).unwrap();
        code /= q;
    }
    v
}

/// `C(a + n - 1, n)`, the number of size-`n` multisets over `a` symbols.
fn multiset_count(a: &BigUint, n: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..n {
        c = c * (a + i) / (i + 1);
    }
    c
}

/// Lexicographic counter over length-`len` sequences in `lo..hi`,
/// optionally restricted to nondecreasing sequences.
struct Odometer {
    current: Option<Vec<usize>>,
    hi: usize,
    sorted: bool,
}

impl Odometer {
    fn new(len: usize, lo: usize, hi: usize, sorted: bool) -> Self {
        let current = if lo < hi || len == 0 {
            Some(vec![if sorted { lo } else { 0 }; len])
        } else {
            None
        };
        Odometer { current, hi, sorted }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut i = next.len();
        while i > 0 {
            i -= 1;
            if next[i] + 1 < self.hi {
                next[i] += 1;
                let fill = if self.sorted { next[i] } else { 0 };
                for x in next.iter_mut().skip(i + 1) {
                    *x = fill;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Streams the admissible candidates of a search space.
pub fn enumerate_candidates(
    field: &FieldSpec,
    k: usize,
    n: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<Vec<CandidateMultiset>> {
    let space = SearchSpace::new(field, k, n, mode, budget)?;
    Ok(space.candidates().collect())
}

/// Outcome of [`optimal_coverage`].
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub mode: SearchMode,
    /// Raw candidates before the spanning filter.
    pub raw_candidates: u64,
    /// Spanning candidates scored.
    pub candidates_examined: u64,
    pub minimum: Rational,
    /// Every candidate attaining the minimum, in lexicographic order.
    pub optimal_candidates: Vec<CandidateMultiset>,
    /// Smallest value strictly above the minimum, if any candidate has one.
    pub runner_up: Option<Rational>,
    pub wall_time: Duration,
}

/// Running fold state: the two smallest distinct values seen.
#[derive(Clone, Debug, Default)]
struct Best {
    examined: u64,
    minimum: Option<Rational>,
    argmin: Vec<CandidateMultiset>,
    runner_up: Option<Rational>,
}

impl Best {
    fn offer(&mut self, value: Rational, cand: CandidateMultiset) {
        self.examined += 1;
        match self.minimum.as_ref().map(|m| value.cmp(m)) {
            None => {
                self.minimum = Some(value);
                self.argmin.push(cand);
            }
            Some(Ordering::Less) => {
                self.runner_up = self.minimum.replace(value);
                self.argmin = vec![cand];
            }
            Some(Ordering::Equal) => self.argmin.push(cand),
            Some(Ordering::Greater) => {
                if self.runner_up.as_ref().is_none_or(|r| value < *r) {
                    self.runner_up = Some(value);
                }
            }
        }
    }

    /// Merges a later partition; argmin lists stay in lexicographic order.
    fn merge(mut self, other: Best) -> Best {
        self.examined += other.examined;
        let Some(om) = other.minimum.clone() else {
            return self;
        };
        let Some(sm) = self.minimum.take() else {
            return Best {
                examined: self.examined,
                ..other
            };
        };
        let mut values: Vec<Rational> = [Some(sm.clone()), self.runner_up.take(), Some(om.clone()), other.runner_up]
            .into_iter()
            .flatten()
            .collect();
        values.sort();
        values.dedup();
        let minimum = values[0].clone();
        let mut argmin = Vec::new();
        if sm == minimum {
            argmin.append(&mut self.argmin);
        }
        if om == minimum {
            argmin.extend(other.argmin);
        }
        Best {
            examined: self.examined,
            minimum: Some(minimum),
            argmin,
            runner_up: values.get(1).cloned(),
        }
    }
}

/// Scores every admissible candidate and reports the minimum expectation,
/// all minimizers and the runner-up value. Work is split by first column and
/// merged in order, so the report does not depend on `jobs`.
pub fn optimal_coverage(
    field: &FieldSpec,
    k: usize,
    n: usize,
    mode: SearchMode,
    budget: u64,
    jobs: usize,
) -> Result<SearchReport> {
    let start = Instant::now();
    let space = SearchSpace::new(field, k, n, mode, budget)?;
    let partition = |first: usize| -> Result<Best> {
        let mut best = Best::default();
        for cand in space.raw_with_first(first) {
            let g = space.generator(&cand);
            if g.rank() != k {
                continue;
            }
            let value = expectation(&LinearCode::new(g)?, Route::Auto)?;
            best.offer(value, cand);
        }
        Ok(best)
    };
    let firsts: Vec<usize> = (0..space.alphabet.len()).collect();
    let parts: Vec<Best> = if jobs == 1 {
        firsts.into_iter().map(partition).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| firsts.into_par_iter().map(partition).collect::<Result<_>>())?
    };
    let best = parts.into_iter().fold(Best::default(), Best::merge);
    let minimum = best.minimum.ok_or_else(|| {
        Error::InvalidParameter(format!("no [{n},{k}]_{} candidate spans", field.q()))
    })?;
    Ok(SearchReport {
        n,
        k,
        q: field.q(),
        mode,
        raw_candidates: space.raw_count(),
        candidates_examined: best.examined,
        minimum,
        optimal_candidates: best.argmin,
        runner_up: best.runner_up,
        wall_time: start.elapsed(),
    })
}

/// Brute-force check of the projective reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCheck {
    pub matrices_examined: u64,
    /// Value sets over nonzero-column full-rank matrices and over projective
    /// candidates coincide.
    pub value_sets_equal: bool,
    pub minima_equal: bool,
    /// Every full-rank matrix with a zero column scores strictly above the
    /// minimum.
    pub zero_columns_dominated: bool,
    pub distinct_values: usize,
}

impl ReductionCheck {
    pub fn holds(&self) -> bool {
        self.value_sets_equal && self.minima_equal && self.zero_columns_dominated
    }
}

/// Compares every `k x n` matrix (at most `guard` of them) against the
/// projective candidates.
pub fn verify_reduction(field: &FieldSpec, k: usize, n: usize, guard: u64) -> Result<ReductionCheck> {
    let full = SearchSpace::new(field, k, n, SearchMode::Full, guard)?;
    let proj = SearchSpace::new(field, k, n, SearchMode::Projective, guard)?;

    let mut full_values = BTreeSet::new();
    let mut zero_min: Option<Rational> = None;
    for cand in full.candidates() {
        let v = full.score(&cand)?;
        if cand.zero_columns() > 0 {
            if zero_min.as_ref().is_none_or(|z| v < *z) {
                zero_min = Some(v);
            }
        } else {
            full_values.insert(v);
        }
    }
    let proj_values = proj
        .candidates()
        .map(|c| proj.score(&c))
        .collect::<Result<BTreeSet<_>>>()?;

    let full_min = full_values.first().cloned();
    let proj_min = proj_values.first().cloned();
    Ok(ReductionCheck {
        matrices_examined: full.raw_count(),
        value_sets_equal: full_values == proj_values,
        minima_equal: full_min == proj_min,
        zero_columns_dominated: match (&zero_min, &full_min) {
            (Some(z), Some(m)) => z > m,
            _ => true,
        },
        distinct_values: full_values.len(),
    })
}

/// Bool form of [`verify_reduction`].
pub fn reduction_holds(field: &FieldSpec, k: usize, n: usize, guard: u64) -> Result<bool> {
    Ok(verify_reduction(field, k, n, guard)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::combinations;
    use crate::coverage::{harmonic, mds_bound};
    use num_rational::BigRational;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn raw_counts() {
        let s = SearchSpace::new(&gf(2), 3, 7, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.raw_count(), 1716);
        assert_eq!(s.raw().count(), 1716);
        let s = SearchSpace::new(&gf(2), 2, 3, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.raw().count(), 10);
        let s = SearchSpace::new(&gf(2), 2, 3, SearchMode::Full, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.raw().count(), 64);
    }

    #[test]
    fn raw_enumeration_is_lexicographic_and_unique() {
        let s = SearchSpace::new(&gf(3), 2, 4, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        let all: Vec<_> = s.raw().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|c| c.columns.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn small_candidate_sets() {
        let c = enumerate_candidates(&gf(2), 2, 2, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        let cols: Vec<Vec<usize>> = c.into_iter().map(|c| c.columns).collect();
        assert_eq!(cols, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);

        // oracle: all 10 size-3 multisets over 3 points; the 3 constant ones
        // do not span
        let mut expected = 0;
        for a in 0..3 {
            for b in a..3 {
                for c in b..3 {
                    if !(a == b && b == c) {
                        expected += 1;
                    }
                }
            }
        }
        let c = enumerate_candidates(&gf(2), 2, 3, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.len(), expected);
        assert_eq!(expected, 7);
    }

    #[test]
    fn budget_guard() {
        let err = SearchSpace::new(&gf(2), 3, 7, SearchMode::Projective, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(SearchSpace::new(&gf(2), 4, 3, SearchMode::Projective, 10).is_err());
    }

    #[test]
    fn simplex_is_optimal_for_7_3_2() {
        let rep = optimal_coverage(&gf(2), 3, 7, SearchMode::Projective, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(rep.minimum, r(47, 12));
        assert_eq!(rep.optimal_candidates.len(), 1);
        assert_eq!(rep.optimal_candidates[0].columns, (0..7).collect::<Vec<_>>());
        // enumeration confirms the floor is attained
        assert_eq!(rep.runner_up, Some(r(17, 4)));
        assert!(rep.minimum >= mds_bound(7, 3).unwrap());
    }

    #[test]
    fn projective_matches_full_for_3_2_2() {
        let f = gf(2);
        let p = optimal_coverage(&f, 2, 3, SearchMode::Projective, DEFAULT_BUDGET, 1).unwrap();
        let full = optimal_coverage(&f, 2, 3, SearchMode::Full, DEFAULT_BUDGET, 1).unwrap();
        assert_eq!(p.minimum, full.minimum);
        assert_eq!(p.optimal_candidates.len(), 1);
        assert!(p.optimal_candidates[0].is_distinct());
        // 3 distinct points of GF(2)^2: every pair independent
        assert_eq!(p.minimum, mds_bound(3, 2).unwrap());
    }

    #[test]
    fn mds_configuration_over_gf3() {
        let rep = optimal_coverage(&gf(3), 2, 4, SearchMode::Projective, DEFAULT_BUDGET, 1).unwrap();
        let bound = r(4, 1) * (harmonic(4) - harmonic(2));
        assert_eq!(rep.minimum, bound);
        assert_eq!(rep.minimum, mds_bound(4, 2).unwrap());
        let space = SearchSpace::new(&gf(3), 2, 4, SearchMode::Projective, DEFAULT_BUDGET).unwrap();
        for c in &rep.optimal_candidates {
            let g = space.generator(c);
            for pair in combinations(4, 2) {
                assert_eq!(g.select_columns(&pair).unwrap().rank(), 2);
            }
        }
    }

    #[test]
    fn schedule_independent_reports() {
        let f = gf(3);
        let a = optimal_coverage(&f, 2, 5, SearchMode::Projective, DEFAULT_BUDGET, 1).unwrap();
        let b = optimal_coverage(&f, 2, 5, SearchMode::Projective, DEFAULT_BUDGET, 4).unwrap();
        assert_eq!(a.minimum, b.minimum);
        assert_eq!(a.optimal_candidates, b.optimal_candidates);
        assert_eq!(a.runner_up, b.runner_up);
        assert_eq!(a.candidates_examined, b.candidates_examined);
    }

    #[test]
    fn best_merge_keeps_two_smallest() {
        let cand = |i| CandidateMultiset {
            mode: SearchMode::Projective,
            columns: vec![i],
        };
        let mut a = Best::default();
        a.offer(r(5, 1), cand(0));
        a.offer(r(3, 1), cand(1));
        let mut b = Best::default();
        b.offer(r(3, 1), cand(2));
        b.offer(r(4, 1), cand(3));
        let m = a.merge(b);
        assert_eq!(m.minimum, Some(r(3, 1)));
        assert_eq!(m.argmin, vec![cand(1), cand(2)]);
        assert_eq!(m.runner_up, Some(r(4, 1)));
        assert_eq!(m.examined, 4);
    }

    #[test]
    fn reduction_on_tiny_parameters() {
        let check = verify_reduction(&gf(2), 2, 3, DEFAULT_BUDGET).unwrap();
        assert!(check.holds(), "{check:?}");
        assert_eq!(check.matrices_examined, 64);
        assert!(verify_reduction(&gf(2), 3, 7, 1000).is_err());
    }
}
