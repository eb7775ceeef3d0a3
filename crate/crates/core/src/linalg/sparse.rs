use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use super::reduce::{self, IntLane, ModLane, SparseRow};

/// Row-compressed matrix: per row, the nonzero `(column, value)` entries in
/// increasing column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, field, entries: vec![Vec::new(); rows] }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let f = m.field();
        let entries = (0..m.rows())
            .map(|r| m.row(r).iter().enumerate().filter(|(_, v)| !f.is_zero(v)).map(|(c, v)| (c, v.clone())).collect())
            .collect();
        SparseMatrix { rows: m.rows(), cols: m.cols(), field: f, entries }
    }

    /// Sets an entry; zero values remove it.
    pub fn insert(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(pos) if self.field.is_zero(&v) => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = v,
            Err(_) if self.field.is_zero(&v) => {}
            Err(pos) => row.insert(pos, (c, v)),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Rationals => {
                let rows: Vec<SparseRow<_>> = self
                    .entries
                    .iter()
                    .map(|row| {
                        let values: Vec<Scalar> = row.iter().map(|(_, v)| v.clone()).collect();
                        let ints = reduce::integer_row(&values);
                        row.iter().map(|(c, _)| *c).zip(ints).collect()
                    })
                    .collect();
                reduce::echelon_sparse(&IntLane, rows).len()
            }
            FieldSpec::Prime(p) => {
                let rows: Vec<SparseRow<u64>> = self
                    .entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|(c, v)| match v {
                                Scalar::Residue(r) => (*c, *r),
                                Scalar::Rational(_) => unreachable!(),
                            })
                            .collect()
                    })
                    .collect();
                reduce::echelon_sparse(&ModLane(p), rows).len()
            }
        }
    }
}
