use std::fmt;

use num::BigInt;

use super::field::{FieldSpec, Rational, Scalar};
use super::reduce::{self, Echelon, IntLane, ModLane};
use super::sparse::SparseMatrix;
use super::LinalgError;

/// Density below which [`Matrix::rank`] switches to sparse elimination.
pub const SPARSE_DENSITY_THRESHOLD: f64 = 0.25;

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to shape a matrix with no rows.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::Ragged { expected: cols, found: row.len() });
            }
            for s in row {
                if !field.contains(&s) {
                    return Err(LinalgError::FieldMismatch(field));
                }
                data.push(s);
            }
        }
        Ok(Matrix { rows: nrows, cols, field, data })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, cols, rows).expect("well-formed integer rows")
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

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(self.field.contains(&v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| self.field.is_zero(s))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field, self.rows)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|s| !self.field.is_zero(s)).count()
    }

    pub fn density(&self) -> f64 {
        if self.data.is_empty() {
            0.0
        } else {
            self.nnz() as f64 / self.data.len() as f64
        }
    }

    fn check_same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(other.field));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let f = self.field;
        Matrix { data: self.data.iter().map(|a| f.mul(a, c)).collect(), ..*self }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`, rows and columns ordered `(i, k)` with
    /// the right factor varying fastest.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        let f = self.field;
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = Matrix::zeros(f, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.set(i * r2 + k, j * c2 + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch { left: self.shape(), right: other.shape() });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let columns: Vec<Vec<Scalar>> = cols.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(self.field, self.rows, &columns)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix { rows: rows.len(), cols: self.cols, field: self.field, data }
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_dense(self)
    }

    /// Column-space dimension. Uses sparse elimination when fewer than a
    /// quarter of the entries are nonzero.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.density() < SPARSE_DENSITY_THRESHOLD {
            self.to_sparse().rank()
        } else {
            self.rank_dense()
        }
    }

    pub fn rank_dense(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Columns holding a pivot in the row echelon form; the corresponding
    /// original columns are a basis of the column space.
    pub fn pivot_columns(&self) -> Vec<usize> {
        match self.field {
            FieldSpec::Rationals => {
                let rows = (0..self.rows).map(|r| reduce::integer_row(self.row(r))).collect();
                reduce::echelon_dense(&IntLane, rows).pivots
            }
            FieldSpec::Prime(p) => {
                let rows = (0..self.rows).map(|r| reduce::residue_row(self.row(r))).collect();
                reduce::echelon_dense(&ModLane(p), rows).pivots
            }
        }
    }

    /// Reduced row echelon form with unit pivots: `(nonzero rows, pivot columns)`.
    pub fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let f = self.field;
        match f {
            FieldSpec::Rationals => {
                let rows = (0..self.rows).map(|r| reduce::integer_row(self.row(r))).collect();
                let mut ech: Echelon<BigInt> = reduce::echelon_dense(&IntLane, rows);
                reduce::back_substitute(&IntLane, &mut ech);
                let rows = ech
                    .rows
                    .iter()
                    .zip(&ech.pivots)
                    .map(|(row, &p)| {
                        let lead = row[p].clone();
                        row.iter().map(|e| Scalar::Rational(Rational::new(e.clone(), lead.clone()))).collect()
                    })
                    .collect();
                (rows, ech.pivots)
            }
            FieldSpec::Prime(p) => {
                let lane = ModLane(p);
                let rows = (0..self.rows).map(|r| reduce::residue_row(self.row(r))).collect();
                let mut ech = reduce::echelon_dense(&lane, rows);
                reduce::back_substitute(&lane, &mut ech);
                let rows = ech
                    .rows
                    .iter()
                    .zip(&ech.pivots)
                    .map(|(row, &c)| {
                        let inv = f.inv(&Scalar::Residue(row[c])).expect("pivot nonzero");
                        row.iter().map(|&e| f.mul(&Scalar::Residue(e), &inv)).collect()
                    })
                    .collect();
                (rows, ech.pivots)
            }
        }
    }

    /// Linearly independent columns spanning the column space (original
    /// columns at the pivot positions).
    pub fn image_basis(&self) -> Vec<Vec<Scalar>> {
        self.pivot_columns().into_iter().map(|c| self.column(c)).collect()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (row, &p) in rref.iter().zip(&pivots) {
                    v[p] = f.neg(&row[free]);
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let f = self.field;
        let rhs = Matrix::from_columns(f, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&rhs).expect("same rows");
        let (rref, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in rref.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n))?;
        let (rref, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(LinalgError::NotInvertible);
        }
        let rows = rref.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(self.field, n, rows)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
