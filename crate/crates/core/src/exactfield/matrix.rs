use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldSpec, LinalgError, Subspace};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p());
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from explicit rows. Entries must already lie in `[0, p)`.
    /// `cols` is needed to describe matrices with zero rows.
    pub fn from_rows(
        field: FieldSpec,
        cols: usize,
        rows: &[Vec<u64>],
    ) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            for &v in row {
                if v >= field.p() as u64 {
                    return Err(LinalgError::EntryOutOfRange { value: v, p: field.p() });
                }
                data.push(v as u32);
            }
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor taking signed entries reduced mod p.
    pub fn from_ints(field: FieldSpec, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "wrong number of entries");
        Matrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    /// The matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
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
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&v| f.mul(v, c)).collect(),
            ..self.clone()
        }
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch(self.field.p(), rhs.field.p()));
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = ((*o as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |f, a, b| f.add(a, b))
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |f, a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        rhs: &Matrix,
        op: impl Fn(FieldSpec, u32, u32) -> u32,
    ) -> Result<Matrix, LinalgError> {
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch(self.field.p(), rhs.field.p()));
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let f = self.field;
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| op(f, a, b))
                .collect(),
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hstack(field: FieldSpec, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j));
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(field: FieldSpec, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn block_diag(field: FieldSpec, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let p = f.p() as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]) as u64;
            for j in c..cols {
                let v = &mut self.data[r * cols + j];
                *v = ((*v as u64 * inv) % p) as u32;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c] as u64;
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = (factor * self.data[r * cols + j] as u64) % p;
                    let v = &mut self.data[i * cols + j];
                    *v = ((*v as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space as a subspace of the domain.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut gens = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1 % f.p();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            gens.push(v);
        }
        Subspace::span(f, self.cols, gens)
    }

    /// Column space as a subspace of the codomain.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, (0..self.cols).map(|j| self.column(j)))
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = Matrix::hstack(self.field, n, &[self, &Matrix::identity(self.field, n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        Ok(r.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("matrix product: {e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs)
            .unwrap_or_else(|e| panic!("matrix sum: {e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs)
            .unwrap_or_else(|e| panic!("matrix difference: {e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&v| f.neg(v)).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<GF({})>{}x{}{:?}", self.field.p(), self.rows, self.cols, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn product_and_identity() {
        let f = gf(5);
        let a = Matrix::from_ints(f, 2, 3, &[1, 2, 3, 4, 0, -1]);
        let b = Matrix::from_ints(f, 3, 2, &[1, 0, 0, 1, 1, 1]);
        let ab = &a * &b;
        assert_eq!(ab, Matrix::from_ints(f, 2, 2, &[4, 5, 3, -1]));
        assert_eq!(&Matrix::identity(f, 2) * &a, a);
        assert!(a.checked_mul(&a).is_err());
    }

    #[test]
    fn rank_kernel_image() {
        let f = gf(2);
        let a = Matrix::from_ints(f, 3, 3, &[1, 1, 0, 0, 1, 1, 1, 0, 1]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], vec![1, 1, 1]);
        assert_eq!(a.image().dim(), 2);
        for v in k.basis() {
            assert!(a.apply(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(7);
        let a = Matrix::from_ints(f, 2, 2, &[2, 3, 1, 4]);
        let ai = a.inverse().unwrap();
        assert!((&a * &ai).is_identity());
        let s = Matrix::from_ints(f, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(s.inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn from_rows_validates() {
        let f = gf(3);
        assert!(matches!(
            Matrix::from_rows(f, 2, &[vec![0, 1], vec![1]]),
            Err(LinalgError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            Matrix::from_rows(f, 1, &[vec![3]]),
            Err(LinalgError::EntryOutOfRange { value: 3, p: 3 })
        ));
        let empty = Matrix::from_rows(f, 4, &[]).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 4));
    }
}
