//! Dense matrices over `F_q` and exact Gaussian elimination.
//!
//! Elimination always pivots on the leftmost column that still has a
//! nonzero entry, taking the first such row. Reduced echelon forms and
//! kernel bases are therefore canonical, which downstream labelling
//! relies on.

use super::field::{FieldDescriptor, FqValue};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FqValue>,
}

/// Result of row reduction: the reduced matrix and its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: FqMatrix,
    pub pivots: Vec<usize>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            entries: vec![FqValue::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FqValue::ONE);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<FqValue>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        FqMatrix { rows, cols, entries }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<FqValue>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend_from_slice(r);
        }
        FqMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<FqValue>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FqValue] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FqValue {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FqValue) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FqValue] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FqValue> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self, f: &FieldDescriptor) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FqValue], f: &FieldDescriptor) -> Vec<FqValue> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![FqValue::ZERO; self.rows];
        self.mul_vec_into(v, &mut out, f);
        out
    }

    /// `out = self * v`, reusing the caller's buffer.
    pub fn mul_vec_into(&self, v: &[FqValue], out: &mut [FqValue], f: &FieldDescriptor) {
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = FqValue::ZERO;
            for (a, &x) in self.row(r).iter().zip(v) {
                if !a.is_zero() && !x.is_zero() {
                    acc = f.add(acc, f.mul(*a, x));
                }
            }
            *slot = acc;
        }
    }

    pub fn add(&self, other: &Self, f: &FieldDescriptor) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: FqValue, f: &FieldDescriptor) -> Self {
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn echelon(&self, f: &FieldDescriptor) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.entries.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = m.get(row, c);
                m.set(row, c, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self, f: &FieldDescriptor) -> usize {
        self.echelon(f).pivots.len()
    }

    /// Canonical kernel basis: one vector per free column (ascending),
    /// with a 1 in that column and zeros in the other free columns.
    pub fn kernel_basis(&self, f: &FieldDescriptor) -> Vec<Vec<FqValue>> {
        let ech = self.echelon(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FqValue::ZERO; self.cols];
                v[free] = FqValue::ONE;
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(ech.reduced.get(r, free));
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = rhs`, with free variables set to zero.
    pub fn solve(&self, rhs: &[FqValue], f: &FieldDescriptor) -> Result<Vec<FqValue>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, &v) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, v);
        }
        let ech = aug.echelon(f);
        if ech.pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![FqValue::ZERO; self.cols];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.reduced.get(r, self.cols);
        }
        Ok(x)
    }

    pub fn inverse(&self, f: &FieldDescriptor) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, FqValue::ONE);
        }
        let ech = aug.echelon(f);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, ech.reduced.get(r, n + c));
            }
        }
        Ok(inv)
    }
}

/// Canonical basis (reduced echelon rows) of the span of some vectors.
pub fn row_space_basis(dim: usize, vectors: &[Vec<FqValue>], f: &FieldDescriptor) -> Vec<Vec<FqValue>> {
    let ech = FqMatrix::from_rows(dim, vectors).echelon(f);
    (0..ech.pivots.len()).map(|r| ech.reduced.row(r).to_vec()).collect()
}

/// Solves repeatedly against a fixed set of independent column vectors.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    basis: FqMatrix,
    transform: FqMatrix,
    rank: usize,
}

impl ColumnSolver {
    /// `columns` must be linearly independent vectors of length `dim`.
    pub fn new(dim: usize, columns: &[Vec<FqValue>], f: &FieldDescriptor) -> Result<Self> {
        let basis = FqMatrix::from_columns(dim, columns);
        let k = columns.len();
        // row-reduce [B | I] to read off a left inverse of B
        let mut aug = FqMatrix::zeros(dim, k + dim);
        for r in 0..dim {
            for c in 0..k {
                aug.set(r, c, basis.get(r, c));
            }
            aug.set(r, k + r, FqValue::ONE);
        }
        let ech = aug.echelon(f);
        let rank = ech.pivots.iter().filter(|&&p| p < k).count();
        if rank < k {
            return Err(Error::Singular);
        }
        let mut transform = FqMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                transform.set(r, c, ech.reduced.get(r, k + c));
            }
        }
        Ok(ColumnSolver { basis, transform, rank })
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    /// Coordinates of `v` in the column basis, or `NoSolution` when `v`
    /// lies outside their span.
    pub fn coordinates(&self, v: &[FqValue], f: &FieldDescriptor) -> Result<Vec<FqValue>> {
        let t = self.transform.mul_vec(v, f);
        // rows below the rank must vanish for consistency
        if t[self.rank..].iter().any(|x| !x.is_zero()) {
            return Err(Error::NoSolution);
        }
        Ok(t[..self.rank].to_vec())
    }

    pub fn combine(&self, coords: &[FqValue], f: &FieldDescriptor) -> Vec<FqValue> {
        self.basis.mul_vec(coords, f)
    }
}
