//! Dense matrices over GF(q): rank, RREF, kernels, span membership and the
//! text format used by the CLI.
//!
//! Indices are 0-based throughout the library.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// A dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|e| e.value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&e| !field.contains(e)) {
            return Err(Error::ElementOutOfRange {
                value: bad.value() as u64,
                q: field.q(),
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of integer encodings.
    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                data.push(field.element(v as u64)?);
            }
        }
        Matrix::new(field.clone(), rows.len(), cols, data)
    }

    /// Builds a `k x n` matrix whose columns are the given length-`k` vectors.
    pub fn from_columns(field: &FieldSpec, k: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        let n = columns.len();
        let mut m = Matrix::zeros(field, k, n);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {k}",
                    col.len()
                )));
            }
            for (i, &x) in col.iter().enumerate() {
                if !field.contains(x) {
                    return Err(Error::ElementOutOfRange {
                        value: x.value() as u64,
                        q: field.q(),
                    });
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Matrix::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Uniformly random entries.
    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.q();
        let data = (0..rows * cols)
            .map(|_| field.element(rng.random_range(0..q) as u64).unwrap())
            .collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// A uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: &FieldSpec, size: usize, rng: &mut R) -> Self {
        loop {
            let m = Matrix::random(field, size, size, rng);
            if m.rank() == size {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// The submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Matrix> {
        let mut out = Matrix::zeros(&self.field, self.rows, indices.len());
        for (j, &c) in indices.iter().enumerate() {
            if c >= self.cols {
                return Err(Error::InvalidIndex {
                    index: c,
                    len: self.cols,
                });
            }
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        Ok(out)
    }

    /// Multiplies column `c` by `scalar`.
    pub fn scale_column(&mut self, c: usize, scalar: FieldElement) {
        for r in 0..self.rows {
            let v = self.field.mul(self.get(r, c), scalar);
            self.set(r, c, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : self * x^T = 0}` as the rows of a matrix with
    /// `cols - rank` rows, one per free column in increasing order.
    pub fn kernel_basis(&self) -> Matrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (row, &fc) in free.iter().enumerate() {
            out.set(row, fc, FieldElement::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(row, pc, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// RREF with zero rows removed: equal for two matrices iff their row
    /// spaces are equal.
    pub fn row_space_canonical(&self) -> Matrix {
        let (r, pivots) = self.rref();
        Matrix {
            field: self.field.clone(),
            rows: pivots.len(),
            cols: self.cols,
            data: r.data[..pivots.len() * self.cols].to_vec(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Parses the text format: a header line `k n q` followed by `k` lines of
    /// `n` element encodings. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let nums = parse_numbers(header)?;
        let [k, n, q] = nums[..] else {
            return Err(Error::Parse(format!("header must be `k n q`, got {header:?}")));
        };
        let field = FieldSpec::with_order(q)?;
        let mut rows = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {k} rows")))?;
            let row = parse_numbers(line)?;
            if row.len() as u64 != n {
                return Err(Error::Parse(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            let row = row
                .into_iter()
                .map(|v| {
                    if v >= q {
                        Err(Error::ElementOutOfRange { value: v, q: field.q() })
                    } else {
                        Ok(v as u32)
                    }
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after matrix rows".into()));
        }
        if k == 0 {
            return Ok(Matrix::zeros(&field, 0, n as usize));
        }
        Matrix::from_rows(&field, &rows)
    }

    /// Renders the text format read by [`Matrix::parse_text`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.field.q());
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

/// An incrementally grown basis in semi-echelon form. Each stored vector has
/// a 1 at its pivot and zeros at the pivots of earlier vectors, so a new
/// vector is reduced by one pass over the basis in insertion order.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    dim: usize,
    pivots: Vec<usize>,
    vectors: Vec<Vec<FieldElement>>,
}

impl EchelonBasis {
    pub fn new(field: &FieldSpec, dim: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            dim,
            pivots: Vec::with_capacity(dim),
            vectors: Vec::with_capacity(dim),
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.dim
    }

    /// Reduces `v` in place against the basis.
    pub fn reduce(&self, v: &mut [FieldElement]) {
        let f = &self.field;
        for (&p, b) in self.pivots.iter().zip(&self.vectors) {
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|e| e.is_zero())
    }

    /// Adds `v` if it lies outside the current span; returns whether it did.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(w[p]).expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.pivots.push(p);
        self.vectors.push(w);
        true
    }

    /// Removes the most recently inserted vector.
    pub fn pop(&mut self) {
        self.pivots.pop();
        self.vectors.pop();
    }

    pub fn clear(&mut self) {
        self.pivots.clear();
        self.vectors.clear();
    }
}

/// True iff `v` lies in the span of `vectors` (all of `v`'s length).
pub fn in_span(field: &FieldSpec, vectors: &[Vec<FieldElement>], v: &[FieldElement]) -> Result<bool> {
    let dim = v.len();
    let mut basis = EchelonBasis::new(field, dim);
    for (i, u) in vectors.iter().enumerate() {
        if u.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "vector {i} has length {}, expected {dim}",
                u.len()
            )));
        }
        basis.insert(u);
    }
    Ok(basis.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn simplex_7_3() -> Matrix {
        Matrix::from_rows(
            &gf(2),
            &[
                [0, 0, 0, 1, 1, 1, 1],
                [0, 1, 1, 0, 0, 1, 1],
                [1, 0, 1, 0, 1, 0, 1],
            ],
        )
        .unwrap()
    }

    /// Naive elimination for cross-checking: forward pass to echelon form,
    /// then back substitution from the last pivot upwards.
    fn naive_rref(m: &Matrix) -> Matrix {
        let f = m.field().clone();
        let mut rows: Vec<Vec<FieldElement>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        let mut lead = 0;
        let mut pivots = vec![];
        for c in 0..m.cols() {
            if lead >= rows.len() {
                break;
            }
            if let Some(i) = (lead..rows.len()).find(|&i| !rows[i][c].is_zero()) {
                rows.swap(i, lead);
                for i in lead + 1..rows.len() {
                    let factor = f.div(rows[i][c], rows[lead][c]).unwrap();
                    for j in 0..m.cols() {
                        rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[lead][j]));
                    }
                }
                pivots.push((lead, c));
                lead += 1;
            }
        }
        for &(r, c) in pivots.iter().rev() {
            let inv = f.inv(rows[r][c]).unwrap();
            for j in 0..m.cols() {
                rows[r][j] = f.mul(rows[r][j], inv);
            }
            for i in 0..r {
                let factor = rows[i][c];
                for j in 0..m.cols() {
                    rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
                }
            }
        }
        let data = rows.into_iter().flatten().collect();
        Matrix::new(f, m.rows(), m.cols(), data).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&gf(2), 3).rank(), 3);
        assert_eq!(Matrix::zeros(&gf(2), 2, 4).rank(), 0);
        assert_eq!(Matrix::zeros(&gf(2), 0, 0).rank(), 0);
        assert_eq!(simplex_7_3().rank(), 3);
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(&gf(5), 4);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2, 3]);

        let f = gf(7);
        let m = Matrix::from_rows(&f, &[[1, 2, 3, 4], [2, 4, 6, 1], [0, 1, 1, 1]]).unwrap();
        let mut scaled = m.clone();
        for c in 0..4 {
            let v = f.mul(scaled.get(1, c), f.element(3).unwrap());
            scaled.set(1, c, v);
        }
        assert_eq!(m.rref().0, scaled.rref().0);
    }

    #[test]
    fn rref_matches_naive_eliminator() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = Matrix::random(&f, 4, 6, &mut rng);
            let (r, pivots) = m.rref();
            assert_eq!(r, naive_rref(&m));
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(&gf(3), 3).kernel_basis().rows(), 0);

        let ones = Matrix::from_rows(&gf(2), &[[1, 1, 1]]).unwrap();
        let k = ones.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert_eq!(k.rank(), 2);
        for r in 0..2 {
            let weight = k.row(r).iter().filter(|e| !e.is_zero()).count();
            assert_eq!(weight % 2, 0);
        }

        let g = simplex_7_3();
        let h = g.kernel_basis();
        assert_eq!(h.rows(), 4);
        assert!(g.mul(&h.transpose()).unwrap().is_zero());
    }

    #[test]
    fn in_span_examples() {
        let f = gf(3);
        let e = |v: &[u32]| v.iter().map(|&x| f.element(x as u64).unwrap()).collect::<Vec<_>>();
        assert!(in_span(&f, &[], &e(&[0, 0])).unwrap());
        assert!(!in_span(&f, &[e(&[1, 0])], &e(&[0, 1])).unwrap());
        assert!(in_span(&f, &[e(&[1, 1, 0]), e(&[0, 1, 1])], &e(&[1, 2, 1])).unwrap());
        assert!(in_span(&f, &[e(&[1, 1])], &e(&[0, 1, 1])).is_err());
    }

    #[test]
    fn canonical_row_space_under_left_multiplication() {
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = Matrix::random(&f, 3, 7, &mut rng);
            let a = Matrix::random_invertible(&f, 3, &mut rng);
            let ag = a.mul(&g).unwrap();
            let c = g.row_space_canonical();
            assert_eq!(c, ag.row_space_canonical());
            assert_eq!(c.row_space_canonical(), c);
        }
        let id = Matrix::identity(&f, 3);
        assert_eq!(id.row_space_canonical(), id);
    }

    #[test]
    fn text_format() {
        let g = simplex_7_3();
        let text = g.to_text();
        assert!(text.starts_with("3 7 2\n"));
        assert_eq!(Matrix::parse_text(&text).unwrap(), g);
        assert!(Matrix::parse_text("2 2 2\n1 0\n").is_err());
        assert!(Matrix::parse_text("1 2 3\n1 3\n").is_err());
        assert!(Matrix::parse_text("1 2 6\n1 1\n").is_err());
        let commented = "# gf4 example\n2 3 4\n1 0 3 # first\n0 1 2\n";
        assert_eq!(Matrix::parse_text(commented).unwrap().get(0, 2).value(), 3);
    }

    #[test]
    fn select_and_scale() {
        let g = simplex_7_3();
        assert_eq!(g.select_columns(&[0, 1, 3]).unwrap().rank(), 3);
        assert_eq!(g.select_columns(&[0, 1, 2]).unwrap().rank(), 2);
        assert!(g.select_columns(&[7]).is_err());
        let f = gf(5);
        let mut m = Matrix::from_rows(&f, &[[1, 2], [3, 4]]).unwrap();
        m.scale_column(1, f.element(2).unwrap());
        assert_eq!(m.column(1), vec![f.element(4).unwrap(), f.element(3).unwrap()]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Matrix> {
            (prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]), 0usize..5, 0usize..7, any::<u64>())
                .prop_map(|(q, r, c, seed)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Matrix::random(&gf(q), r, c, &mut rng)
                })
        }

        proptest! {
            #[test]
            fn rank_of_transpose(m in arb_matrix()) {
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn rank_nullity(m in arb_matrix()) {
                let k = m.kernel_basis();
                prop_assert_eq!(m.rank() + k.rows(), m.cols());
                prop_assert_eq!(k.rank(), k.rows());
                if k.rows() > 0 {
                    prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
                }
            }

            #[test]
            fn in_span_agrees_with_rank(m in arb_matrix(), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v = Matrix::random(m.field(), 1, m.cols(), &mut rng);
                let rows: Vec<Vec<FieldElement>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
                let stacked = m.vstack(&v).unwrap();
                prop_assert_eq!(
                    in_span(m.field(), &rows, v.row(0)).unwrap(),
                    stacked.rank() == m.rank()
                );
            }

            #[test]
            fn canonical_form_is_idempotent(m in arb_matrix()) {
                let c = m.row_space_canonical();
                prop_assert_eq!(c.row_space_canonical(), c.clone());
                prop_assert_eq!(c.rows(), m.rank());
            }
        }
    }
}
