//! Linear codes, their standard constructions, and subset counters.
//!
//! For a code `C` with generator `G` and an index set `S`, `dim C(S)` (the
//! subcode supported inside `S`) equals `k - rank(G restricted to the
//! complement of S)`. Every counter below reduces to counting index sets by
//! the rank of the generator columns they select:
//!
//! * `alpha(C, s)`: size-`s` sets whose columns have rank `k`;
//! * `beta(C, l, s)`: size-`s` sets `S` with `dim C(S^c) = l`, i.e. columns of
//!   rank `k - l`.
//!
//! [`alpha`] and [`beta`] enumerate subsets one by one and are the reference
//! semantics. [`RankProfile`] and [`independent_subset_counts`] produce the
//! same numbers with incremental elimination and pruning.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::matrix::{EchelonBasis, Matrix};

/// An `[n, k]_q` linear code given by a full-rank `k x n` generator.
///
/// Zero and repeated columns are allowed. `k = 0` is represented by an empty
/// generator so that duals are always defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    pub fn new(generator: Matrix) -> Result<Self> {
        let rank = generator.rank();
        if rank != generator.rows() {
            return Err(Error::RankDeficient {
                rank,
                expected: generator.rows(),
            });
        }
        Ok(LinearCode { generator })
    }

    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(field, rows)?)
    }

    /// The code spanned by the given columns (their rank must equal `k`).
    pub fn from_columns(field: &FieldSpec, k: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        Self::new(Matrix::from_columns(field, k, columns)?)
    }

    /// The zero code of length `n`.
    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        LinearCode {
            generator: Matrix::zeros(field, 0, n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        self.generator.field()
    }

    #[inline]
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Replaces the generator by `a * G` for an invertible `a`.
    pub fn regenerate(&self, a: &Matrix) -> Result<Self> {
        Self::new(a.mul(&self.generator)?)
    }

    /// Canonical generator (RREF); equal for two codes iff the codes are equal.
    pub fn canonical_generator(&self) -> Matrix {
        self.generator.row_space_canonical()
    }

    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.canonical_generator() == other.canonical_generator()
    }

    /// True iff every `k` columns are linearly independent.
    pub fn is_mds(&self) -> bool {
        let k = self.k();
        combinations(self.n(), k).all(|s| self.generator.select_columns(&s).unwrap().rank() == k)
    }
}

/// Number of points of the projective space over GF(q) of dimension `k - 1`,
/// `(q^k - 1) / (q - 1)`. Saturates on overflow.
pub fn projective_point_count(q: u64, k: u32) -> u64 {
    let mut n: u64 = 0;
    for _ in 0..k {
        n = n.saturating_mul(q).saturating_add(1);
    }
    n
}

/// One representative per nonzero vector of GF(q)^k up to scaling: the
/// vector whose first nonzero coordinate is 1. Ordered lexicographically by
/// coordinate encodings.
pub fn projective_points(field: &FieldSpec, k: usize) -> Vec<Vec<FieldElement>> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for lead in (0..k).rev() {
        let tail = k - lead - 1;
        let count = q.pow(tail as u32);
        for code in 0..count {
            let mut v = vec![FieldElement::ZERO; k];
            v[lead] = FieldElement::ONE;
            let mut c = code;
            for i in (lead + 1..k).rev() {
                v[i] = field.element(c % q).unwrap();
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn projective_normalize(field: &FieldSpec, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let lead = v.iter().find(|e| !e.is_zero())?;
    let inv = field.inv(*lead).ok()?;
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

/// The q-ary simplex code of dimension `k >= 2`: one column per projective point.
pub fn simplex_code(field: &FieldSpec, k: usize) -> Result<LinearCode> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "simplex code needs dimension >= 2, got {k}"
        )));
    }
    check_length(field.q() as u64, k)?;
    LinearCode::from_columns(field, k, &projective_points(field, k))
}

/// The q-ary Hamming code of redundancy `r >= 2`, the dual of the simplex code.
pub fn hamming_code(field: &FieldSpec, r: usize) -> Result<LinearCode> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hamming code needs redundancy >= 2, got {r}"
        )));
    }
    Ok(dual(&simplex_code(field, r)?))
}

fn check_length(q: u64, k: usize) -> Result<()> {
    const MAX_LENGTH: u64 = 1 << 16;
    let n = projective_point_count(q, k as u32);
    if n > MAX_LENGTH {
        return Err(Error::InvalidParameter(format!(
            "code length {n} exceeds {MAX_LENGTH}"
        )));
    }
    Ok(())
}

/// Reed-Solomon code with `G[i][j] = a_j^i`, evaluating at the first `n`
/// field elements in encoding order.
pub fn reed_solomon(field: &FieldSpec, n: usize, k: usize) -> Result<LinearCode> {
    if n as u64 > field.q() as u64 {
        return Err(Error::InvalidParameter(format!(
            "Reed-Solomon length {n} exceeds field size {}",
            field.q()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "Reed-Solomon dimension {k} outside 1..={n}"
        )));
    }
    let mut g = Matrix::zeros(field, k, n);
    for (j, a) in field.elements().into_iter().take(n).enumerate() {
        for i in 0..k {
            g.set(i, j, field.pow(a, i as u64));
        }
    }
    LinearCode::new(g)
}

/// Doubly extended Reed-Solomon code of length `n <= q + 1`. For `n = q + 1`
/// the Vandermonde columns over all of GF(q) are followed by the point at
/// infinity `(0, ..., 0, 1)`; shorter lengths fall back to [`reed_solomon`].
pub fn extended_reed_solomon(field: &FieldSpec, n: usize, k: usize) -> Result<LinearCode> {
    let q = field.q() as usize;
    if n <= q {
        return reed_solomon(field, n, k);
    }
    if n > q + 1 {
        return Err(Error::InvalidParameter(format!(
            "extended Reed-Solomon length {n} exceeds q + 1 = {}",
            q + 1
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "Reed-Solomon dimension {k} outside 1..={n}"
        )));
    }
    let base = reed_solomon(field, q, k.min(q))?;
    if k > q {
        // k = n = q + 1: the whole space
        return LinearCode::new(Matrix::identity(field, n));
    }
    let mut columns = base.generator().columns();
    let mut infinity = vec![FieldElement::ZERO; k];
    infinity[k - 1] = FieldElement::ONE;
    columns.push(infinity);
    LinearCode::from_columns(field, k, &columns)
}

/// The dual code, generated by a kernel basis of the generator.
pub fn dual(code: &LinearCode) -> LinearCode {
    LinearCode {
        generator: code.generator.kernel_basis(),
    }
}

/// `dim C(S)` for a 0-based index set `S`: `k - rank(G on the complement)`.
pub fn shortened_subcode_dim(code: &LinearCode, subset: &[usize]) -> Result<usize> {
    let n = code.n();
    let mut inside = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::InvalidIndex { index: i, len: n });
        }
        inside[i] = true;
    }
    let complement: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    Ok(code.k() - code.generator.select_columns(&complement)?.rank())
}

/// Number of information sets of size `s`, by brute-force enumeration.
pub fn alpha(code: &LinearCode, s: usize) -> Result<u64> {
    let (n, k) = (code.n(), code.k());
    if s > n {
        return Err(Error::InvalidParameter(format!("subset size {s} > n = {n}")));
    }
    if s < k {
        return Ok(0);
    }
    let g = code.generator();
    Ok(combinations(n, s)
        .filter(|sub| g.select_columns(sub).unwrap().rank() == k)
        .count() as u64)
}

/// Number of size-`s` index sets `S` with `dim C(S^c) = l`, by brute force.
/// `l = 0` is admitted and coincides with [`alpha`].
pub fn beta(code: &LinearCode, l: usize, s: usize) -> Result<u64> {
    let n = code.n();
    if l > code.k() {
        return Err(Error::InvalidParameter(format!(
            "dimension {l} exceeds k = {}",
            code.k()
        )));
    }
    if s > n {
        return Err(Error::InvalidParameter(format!("subset size {s} > n = {n}")));
    }
    let mut count = 0;
    for sub in combinations(n, s) {
        let complement: Vec<usize> = (0..n).filter(|i| !sub.contains(i)).collect();
        if shortened_subcode_dim(code, &complement)? == l {
            count += 1;
        }
    }
    Ok(count)
}

/// `alpha(C, s)` computed on the dual side as `beta_{s-k}(C^perp, n-s)`.
pub fn alpha_via_dual(code: &LinearCode, s: usize) -> Result<u64> {
    let (n, k) = (code.n(), code.k());
    if s < k || s > n {
        return Err(Error::InvalidParameter(format!(
            "dual route needs k <= s <= n, got s = {s}"
        )));
    }
    beta(&dual(code), s - k, n - s)
}

/// Lexicographic iterator over the sorted `s`-subsets of `0..n`.
pub fn combinations(n: usize, s: usize) -> Combinations {
    Combinations {
        n,
        current: if s <= n { Some((0..s).collect()) } else { None },
    }
}

pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let s = out.len();
        let mut next = out.clone();
        let mut i = s;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - s + i {
                next[i] += 1;
                for j in i + 1..s {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Counts of column subsets by size and rank: `count(t, r)` is the number of
/// `t`-subsets of generator columns spanning a space of dimension `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    n: usize,
    k: usize,
    counts: Vec<Vec<u64>>,
}

/// Above this many columns the profile enumeration splits work by first index.
const PARALLEL_THRESHOLD: usize = 14;

impl RankProfile {
    /// Depth-first enumeration with incremental elimination. Once the chosen
    /// columns reach rank `k`, all extensions are counted in closed form.
    pub fn compute(generator: &Matrix) -> Self {
        Self::compute_budgeted(generator, u64::MAX).expect("unbounded budget")
    }

    /// [`RankProfile::compute`], failing with [`Error::BudgetExceeded`] once
    /// more than `budget` search nodes have been visited.
    pub fn compute_budgeted(generator: &Matrix, budget: u64) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        let columns = generator.columns();
        let binom = binomial_table(n);
        let field = generator.field();
        let used = AtomicU64::new(0);

        let run = |first: Option<usize>| {
            let mut counts = vec![vec![0u64; k + 1]; n + 1];
            let mut basis = EchelonBasis::new(field, k);
            let mut meter = Meter::new(&used, budget);
            match first {
                None => {
                    counts[0][0] += 1;
                }
                Some(j) => {
                    let added = basis.insert(&columns[j]);
                    profile_visit(&columns, &binom, &mut basis, j + 1, 1, &mut counts, &mut meter);
                    if added {
                        basis.pop();
                    }
                }
            }
            meter.flush();
            counts
        };

        let parts: Vec<Option<usize>> =
            std::iter::once(None).chain((0..n).map(Some)).collect();
        let partials: Vec<Vec<Vec<u64>>> = if n >= PARALLEL_THRESHOLD {
            parts.into_par_iter().map(run).collect()
        } else {
            parts.into_iter().map(run).collect()
        };
        check_budget(&used, budget)?;
        let mut counts = vec![vec![0u64; k + 1]; n + 1];
        for part in partials {
            for (row, prow) in counts.iter_mut().zip(part) {
                for (c, pc) in row.iter_mut().zip(prow) {
                    *c += pc;
                }
            }
        }
        Ok(RankProfile { n, k, counts })
    }

    /// Reference profile: rank of every subset computed from scratch.
    pub fn brute_force(generator: &Matrix) -> Self {
        let (k, n) = (generator.rows(), generator.cols());
        let mut counts = vec![vec![0u64; k + 1]; n + 1];
        for t in 0..=n {
            for sub in combinations(n, t) {
                counts[t][generator.select_columns(&sub).unwrap().rank()] += 1;
            }
        }
        RankProfile { n, k, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of `size`-subsets whose columns have rank `rank`.
    pub fn count(&self, size: usize, rank: usize) -> u64 {
        self.counts
            .get(size)
            .and_then(|row| row.get(rank))
            .copied()
            .unwrap_or(0)
    }

    /// `alpha(C, s)`.
    pub fn alpha(&self, s: usize) -> u64 {
        self.count(s, self.k)
    }

    /// `beta_l(C, s)`; zero when `l > k`.
    pub fn beta(&self, l: usize, s: usize) -> u64 {
        if l > self.k {
            return 0;
        }
        self.count(s, self.k - l)
    }
}

fn profile_visit(
    columns: &[Vec<FieldElement>],
    binom: &[Vec<u64>],
    basis: &mut EchelonBasis,
    next: usize,
    size: usize,
    counts: &mut [Vec<u64>],
    meter: &mut Meter,
) {
    if !meter.tick() {
        return;
    }
    let n = columns.len();
    let rank = basis.rank();
    if basis.is_full() {
        // every superset drawn from next..n keeps full rank
        let rest = n - next;
        for t in 0..=rest {
            counts[size + t][rank] += binom[rest][t];
        }
        return;
    }
    counts[size][rank] += 1;
    for j in next..n {
        let added = basis.insert(&columns[j]);
        profile_visit(columns, binom, basis, j + 1, size + 1, counts, meter);
        if added {
            basis.pop();
        }
    }
}

/// `out[t]` = number of linearly independent `t`-subsets of columns, for
/// `t <= max_size`. Dependent branches are pruned.
pub fn independent_subset_counts(matrix: &Matrix, max_size: usize) -> Vec<u64> {
    independent_subset_counts_budgeted(matrix, max_size, u64::MAX).expect("unbounded budget")
}

/// [`independent_subset_counts`] with a cap on visited search nodes.
pub fn independent_subset_counts_budgeted(
    matrix: &Matrix,
    max_size: usize,
    budget: u64,
) -> Result<Vec<u64>> {
    let n = matrix.cols();
    let max_size = max_size.min(matrix.rows()).min(n);
    let columns = matrix.columns();
    let field = matrix.field();
    let used = AtomicU64::new(0);

    let run = |first: usize| {
        let mut counts = vec![0u64; max_size + 1];
        let mut basis = EchelonBasis::new(field, matrix.rows());
        let mut meter = Meter::new(&used, budget);
        if basis.insert(&columns[first]) {
            independent_visit(&columns, &mut basis, first + 1, max_size, &mut counts, &mut meter);
        }
        meter.flush();
        counts
    };
    let partials: Vec<Vec<u64>> = if max_size == 0 {
        Vec::new()
    } else if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(run).collect()
    } else {
        (0..n).map(run).collect()
    };
    check_budget(&used, budget)?;
    let mut counts = vec![0u64; max_size + 1];
    counts[0] = 1;
    for part in partials {
        for (c, pc) in counts.iter_mut().zip(part) {
            *c += pc;
        }
    }
    Ok(counts)
}

fn independent_visit(
    columns: &[Vec<FieldElement>],
    basis: &mut EchelonBasis,
    next: usize,
    max_size: usize,
    counts: &mut [u64],
    meter: &mut Meter,
) {
    if !meter.tick() {
        return;
    }
    let size = basis.rank();
    counts[size] += 1;
    if size == max_size {
        return;
    }
    for j in next..columns.len() {
        if basis.insert(&columns[j]) {
            independent_visit(columns, basis, j + 1, max_size, counts, meter);
            basis.pop();
        }
    }
}

/// Node counter shared by the workers of one enumeration. Each worker
/// publishes its count in chunks to keep the atomic off the hot path.
struct Meter<'a> {
    local: u64,
    used: &'a AtomicU64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Meter<'a> {
    const CHUNK: u64 = 4096;

    fn new(used: &'a AtomicU64, budget: u64) -> Self {
        Meter {
            local: 0,
            used,
            budget,
            exhausted: false,
        }
    }

    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.local += 1;
        if self.local == Self::CHUNK {
            self.flush();
        }
        !self.exhausted
    }

    fn flush(&mut self) {
        let total = self.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.budget {
            self.exhausted = true;
        }
    }
}

fn check_budget(used: &AtomicU64, budget: u64) -> Result<()> {
    let total = used.load(Ordering::Relaxed);
    if total > budget {
        return Err(Error::BudgetExceeded {
            needed: format!("more than {budget} search nodes"),
            budget,
        });
    }
    Ok(())
}

/// Pascal's triangle up to row `n` (entries fit in u64 for n <= 64).
fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1].saturating_add(if j < i { t[i - 1][j] } else { 0 });
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn binom(n: usize, k: usize) -> u64 {
        binomial_table(n)[n][k]
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(10, 4).count(), 210);
    }

    #[test]
    fn projective_point_examples() {
        assert_eq!(projective_points(&gf(2), 3).len(), 7);
        let f3 = gf(3);
        let pts: Vec<Vec<u32>> = projective_points(&f3, 2)
            .into_iter()
            .map(|v| v.into_iter().map(|e| e.value()).collect())
            .collect();
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        // brute-force quotient of GF(4)^2 \ {0} by scalars
        let f4 = gf(4);
        let mut classes = std::collections::BTreeSet::new();
        for a in f4.elements() {
            for b in f4.elements() {
                if let Some(v) = projective_normalize(&f4, &[a, b]) {
                    classes.insert(v);
                }
            }
        }
        assert_eq!(classes.len(), 5);
        let pts4 = projective_points(&f4, 2);
        assert_eq!(pts4.len(), 5);
        assert_eq!(classes.into_iter().collect::<Vec<_>>(), pts4);
        assert_eq!(projective_point_count(4, 2), 5);
        assert_eq!(projective_point_count(2, 4), 15);
    }

    #[test]
    fn budgeted_enumeration() {
        let s = simplex_code(&gf(2), 4).unwrap();
        let full = RankProfile::compute(s.generator());
        assert_eq!(RankProfile::compute_budgeted(s.generator(), 1 << 20).unwrap(), full);
        let err = RankProfile::compute_budgeted(s.generator(), 100).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let h = hamming_code(&gf(2), 4).unwrap();
        assert!(independent_subset_counts_budgeted(h.generator(), 11, 50).is_err());
        assert_eq!(
            independent_subset_counts_budgeted(h.generator(), 11, 1 << 20).unwrap(),
            independent_subset_counts(h.generator(), 11)
        );
    }

    #[test]
    fn extended_reed_solomon_is_mds() {
        for (q, n, k) in [(3u64, 4, 2), (4, 5, 2), (4, 5, 3), (5, 6, 3), (7, 8, 4), (3, 3, 2)] {
            let c = extended_reed_solomon(&gf(q), n, k).unwrap();
            assert_eq!((c.n(), c.k()), (n, k));
            // oracle: every k-subset of columns has full rank
            for sub in combinations(n, k) {
                assert_eq!(c.generator().select_columns(&sub).unwrap().rank(), k);
            }
        }
        assert!(extended_reed_solomon(&gf(3), 5, 2).is_err());
        assert_eq!(extended_reed_solomon(&gf(2), 3, 3).unwrap().k(), 3);
    }

    #[test]
    fn simplex_examples() {
        let s = simplex_code(&gf(2), 3).unwrap();
        assert_eq!((s.n(), s.k()), (7, 3));
        let s = simplex_code(&gf(3), 2).unwrap();
        assert_eq!((s.n(), s.k()), (4, 2));
        let s = simplex_code(&gf(2), 4).unwrap();
        assert_eq!((s.n(), s.k()), (15, 4));
        assert_eq!(s.generator().rank(), 4);
        assert!(simplex_code(&gf(2), 1).is_err());
    }

    #[test]
    fn hamming_examples() {
        let h = hamming_code(&gf(2), 3).unwrap();
        assert_eq!((h.n(), h.k()), (7, 4));
        let h = hamming_code(&gf(2), 2).unwrap();
        assert_eq!((h.n(), h.k()), (3, 1));
        let f3 = gf(3);
        let h = hamming_code(&f3, 2).unwrap();
        assert_eq!((h.n(), h.k()), (4, 2));
        let s = simplex_code(&f3, 2).unwrap();
        assert!(s
            .generator()
            .mul(&h.generator().transpose())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn reed_solomon_examples() {
        let rs = reed_solomon(&gf(7), 7, 3).unwrap();
        assert_eq!((rs.n(), rs.k()), (7, 3));
        assert!(rs.is_mds());
        let rs = reed_solomon(&gf(5), 4, 2).unwrap();
        for pair in combinations(4, 2) {
            assert_eq!(rs.generator().select_columns(&pair).unwrap().rank(), 2);
        }
        let rs = reed_solomon(&gf(4), 4, 4).unwrap();
        assert_eq!(rs.generator().rank(), 4);
        assert!(reed_solomon(&gf(4), 5, 2).is_err());
    }

    #[test]
    fn dual_examples() {
        let f2 = gf(2);
        let simplex = simplex_code(&f2, 3).unwrap();
        assert!(dual(&simplex).same_code(&hamming_code(&f2, 3).unwrap()));

        let full = LinearCode::new(Matrix::identity(&f2, 4)).unwrap();
        let d = dual(&full);
        assert_eq!((d.n(), d.k()), (4, 0));
        assert_eq!(dual(&d).k(), 4);

        let f4 = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_code(&f4, 3, 6, &mut rng);
        let h = dual(&c);
        assert_eq!(c.k() + h.k(), 6);
        assert!(c.generator().mul(&h.generator().transpose()).unwrap().is_zero());
        assert!(dual(&h).same_code(&c));
    }

    #[test]
    fn rejects_rank_deficient_generators() {
        let f2 = gf(2);
        assert_eq!(
            LinearCode::from_rows(&f2, &[[1, 1, 0], [1, 1, 0]]).unwrap_err(),
            Error::RankDeficient {
                rank: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn shortened_subcode_examples() {
        let h = hamming_code(&gf(2), 3).unwrap();
        assert_eq!(shortened_subcode_dim(&h, &(0..7).collect::<Vec<_>>()).unwrap(), 4);
        assert_eq!(shortened_subcode_dim(&h, &[]).unwrap(), 0);
        assert!(shortened_subcode_dim(&h, &[7]).is_err());

        // a weight-3 codeword found by listing all 16 codewords
        let g = h.generator();
        let f = h.field();
        let mut support = None;
        for mask in 1u32..16 {
            let mut word = [FieldElement::ZERO; 7];
            for i in 0..4 {
                if mask >> i & 1 == 1 {
                    for (j, w) in word.iter_mut().enumerate() {
                        *w = f.add(*w, g.get(i, j));
                    }
                }
            }
            let supp: Vec<usize> = (0..7).filter(|&j| !word[j].is_zero()).collect();
            if supp.len() == 3 {
                support = Some(supp);
                break;
            }
        }
        let support = support.expect("Hamming code has minimum distance 3");
        assert!(shortened_subcode_dim(&h, &support).unwrap() >= 1);
    }

    #[test]
    fn alpha_examples() {
        let f2 = gf(2);
        let s = simplex_code(&f2, 3).unwrap();
        assert_eq!(alpha(&s, 2).unwrap(), 0);
        assert_eq!(alpha(&s, 3).unwrap(), 28);
        assert_eq!(alpha(&s, 7).unwrap(), 1);

        let rs = reed_solomon(&gf(7), 7, 3).unwrap();
        for s in 3..=7 {
            assert_eq!(alpha(&rs, s).unwrap(), binom(7, s));
        }

        let h = hamming_code(&f2, 3).unwrap();
        assert_eq!(alpha_via_dual(&h, 4).unwrap(), 28);
        assert_eq!(alpha(&h, 4).unwrap(), 28);

        let rs5 = reed_solomon(&gf(5), 5, 2).unwrap();
        assert_eq!(alpha(&rs5, 2).unwrap(), 10);
        assert_eq!(alpha_via_dual(&rs5, 2).unwrap(), 10);
        assert_eq!(alpha_via_dual(&rs5, 5).unwrap(), 1);
        assert!(alpha_via_dual(&rs5, 1).is_err());
    }

    #[test]
    fn beta_examples() {
        let s = simplex_code(&gf(2), 3).unwrap();
        assert_eq!(beta(&s, 3, 0).unwrap(), 1);
        assert_eq!(beta(&s, 0, 3).unwrap(), 28);
        for size in 0..=7 {
            let total: u64 = (0..=3).map(|l| beta(&s, l, size).unwrap()).sum();
            assert_eq!(total, binom(7, size));
        }
        assert!(beta(&s, 4, 1).is_err());
    }

    pub(crate) fn random_code(field: &FieldSpec, k: usize, n: usize, rng: &mut ChaCha8Rng) -> LinearCode {
        loop {
            let g = Matrix::random(field, k, n, rng);
            if let Ok(c) = LinearCode::new(g) {
                return c;
            }
        }
    }

    #[test]
    fn fast_profile_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (q, k, n) in [(2, 3, 7), (3, 2, 5), (4, 3, 6), (2, 4, 10), (3, 3, 9), (2, 5, 16)] {
            let f = gf(q);
            let c = random_code(&f, k, n, &mut rng);
            let fast = RankProfile::compute(c.generator());
            let slow = RankProfile::brute_force(c.generator());
            assert_eq!(fast, slow, "q={q} k={k} n={n}");
            for s in 0..=n {
                if n <= 10 {
                    assert_eq!(fast.alpha(s), alpha(&c, s).unwrap());
                }
            }
        }
        let s = simplex_code(&gf(2), 4).unwrap();
        assert_eq!(RankProfile::compute(s.generator()), RankProfile::brute_force(s.generator()));
    }

    #[test]
    fn independent_counts_match_profile() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, k, n) in [(2, 3, 7), (3, 4, 8), (4, 2, 6), (2, 6, 16)] {
            let c = random_code(&gf(q), k, n, &mut rng);
            let profile = RankProfile::brute_force(c.generator());
            let counts = independent_subset_counts(c.generator(), k);
            for (t, &count) in counts.iter().enumerate() {
                assert_eq!(count, profile.count(t, t), "t={t}");
            }
        }
        // zero columns never appear in an independent set
        let f2 = gf(2);
        let m = Matrix::from_rows(&f2, &[[1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(independent_subset_counts(&m, 2), vec![1, 2, 1]);
    }

    #[test]
    fn duality_identity_on_small_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for (q, k, n) in [(2, 3, 6), (3, 2, 5), (4, 3, 5)] {
            let c = random_code(&gf(q), k, n, &mut rng);
            let d = dual(&c);
            for s in 0..=n {
                for l in 0..=k {
                    let lhs = beta(&c, l, s).unwrap();
                    let rhs = match (l + s).checked_sub(k) {
                        Some(m) if m <= n - k => beta(&d, m, n - s).unwrap(),
                        _ => 0,
                    };
                    assert_eq!(lhs, rhs, "l={l} s={s}");
                }
            }
        }
    }
}
