use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::field::Field;

/// Sparse matrix of arbitrary-precision integers. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseIntMatrix({}x{}", self.rows, self.cols)?;
        for ((r, c), v) in &self.entries {
            write!(f, " [{r},{c}]={v}")?;
        }
        write!(f, ")")
    }
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                m.add_to(i, j, &BigInt::from(v));
            }
        }
        m
    }

    /// Builds from a row-major list with explicit shape; checks row lengths.
    pub fn from_rows(rows: usize, cols: usize, data: &[Vec<BigInt>]) -> Result<Self> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!("expected a {rows}x{cols} matrix")));
        }
        let mut m = Self::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.add_to(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    /// Adds `v` to entry `(r, c)`, dropping it if the sum is zero.
    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect();
        SparseIntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.rows];
        for (&(r, c), v) in &rhs.entries {
            by_row[r].push((c, v));
        }
        let mut out = SparseIntMatrix::zeros(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add_to(i, j, &(a * b));
            }
        }
        out
    }

    pub fn scaled(&self, s: &BigInt) -> SparseIntMatrix {
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.add_to(r, c, &(v * s));
        }
        out
    }

    /// Entries mapped through `f`, dropping those that become zero.
    pub fn map_entries(&self, f: impl Fn(&BigInt) -> BigInt) -> SparseIntMatrix {
        let mut out = SparseIntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.add_to(r, c, &f(v));
        }
        out
    }

    /// Selects a submatrix by row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseIntMatrix {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = SparseIntMatrix::zeros(rows.len(), cols.len());
        for (&(r, c), v) in &self.entries {
            if let (Some(&i), Some(&j)) = (row_pos.get(&r), col_pos.get(&c)) {
                out.add_to(i, j, v);
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<(usize, BigInt)> {
        self.entries.iter().filter(|(&(_, cc), _)| cc == c).map(|(&(r, _), v)| (r, v.clone())).collect()
    }

    /// Column-major view: for each column, its nonzero `(row, value)` entries.
    pub fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    /// Dense image over a field.
    pub fn to_field_rows<F: Field>(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut d = vec![vec![field.zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = field.from_int(v);
        }
        d
    }

    /// Stacks blocks vertically; all must have the same column count.
    pub fn vstack(blocks: &[SparseIntMatrix], cols: usize) -> SparseIntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = SparseIntMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            for (&(r, c), v) in &b.entries {
                out.entries.insert((r + offset, c), v.clone());
            }
            offset += b.rows;
        }
        out
    }

    /// Concatenates blocks horizontally; all must have the same row count.
    pub fn hstack(blocks: &[SparseIntMatrix], rows: usize) -> SparseIntMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = SparseIntMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for (&(r, c), v) in &b.entries {
                out.entries.insert((r, c + offset), v.clone());
            }
            offset += b.cols;
        }
        out
    }
}

/// Sparse matrix over a field, column-major.
#[derive(Debug, Clone)]
pub struct FieldMatrix<E> {
    rows: usize,
    cols: Vec<BTreeMap<usize, E>>,
}

impl<E: Clone + PartialEq> FieldMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols: vec![BTreeMap::new(); cols] }
    }

    pub fn from_int<F: Field<Elem = E>>(field: &F, m: &SparseIntMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for (r, c, v) in m.iter() {
            out.add_to(field, r, c, &field.from_int(v));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get<F: Field<Elem = E>>(&self, field: &F, r: usize, c: usize) -> E {
        self.cols[c].get(&r).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, E> {
        &self.cols[c]
    }

    pub fn add_to<F: Field<Elem = E>>(&mut self, field: &F, r: usize, c: usize, v: &E) {
        assert!(r < self.rows, "row {r} out of range {}", self.rows);
        if field.is_zero(v) {
            return;
        }
        let col = &mut self.cols[c];
        let sum = match col.get(&r) {
            Some(old) => field.add(old, v),
            None => v.clone(),
        };
        if field.is_zero(&sum) {
            col.remove(&r);
        } else {
            col.insert(r, sum);
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &FieldMatrix<E>) -> FieldMatrix<E> {
        assert_eq!(self.cols(), rhs.rows, "shape mismatch in product");
        let mut out = FieldMatrix::zeros(self.rows, rhs.cols());
        for (j, col) in rhs.cols.iter().enumerate() {
            for (k, b) in col {
                for (i, a) in &self.cols[*k] {
                    out.add_to(field, *i, j, &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn same_as(&self, other: &FieldMatrix<E>) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}
