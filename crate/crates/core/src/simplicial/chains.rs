use std::collections::HashMap;

use crate::linalg::{FieldSpec, Matrix};

use super::complex::{Pair, Simplex, SimplicialComplex};
use super::HomologyError;

/// Position lookup for an ordered chain basis.
pub(crate) fn index_of(basis: &[Simplex]) -> HashMap<Simplex, usize> {
    basis.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()
}

/// Relative boundary `∂_k: C_k(X, Y) -> C_{k-1}(X, Y)` in the lexicographic
/// bases of [`Pair::relative_simplices`]. Entry `(face, σ)` is `(-1)^i`
/// where the face omits the `i`-th vertex of `σ`.
pub fn relative_boundary_matrix(pair: &Pair, k: usize, field: FieldSpec) -> Matrix {
    let cols = pair.relative_simplices(k);
    let rows = if k == 0 { Vec::new() } else { pair.relative_simplices(k - 1) };
    let row_index = index_of(&rows);
    let mut m = Matrix::zeros(field, rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (i, face) in s.faces() {
            if let Some(&r) = row_index.get(&face) {
                m.set(r, j, field.from_i64(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    m
}

/// Simplicial boundary `∂_k` of an absolute complex. For `k = 0` this is the
/// zero map to the zero space.
pub fn boundary_matrix(x: &SimplicialComplex, k: usize, field: FieldSpec) -> Matrix {
    relative_boundary_matrix(&Pair::absolute(x.clone()), k, field)
}

/// A bounded chain complex `C_0 <- C_1 <- ...` with `boundaries[k]: C_k -> C_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: FieldSpec,
    dims: Vec<usize>,
    boundaries: Vec<Matrix>,
}

impl ChainComplex {
    /// Validates shapes and `∂_k ∂_{k+1} = 0`. `boundaries[0]` must map to
    /// the zero space.
    pub fn new(field: FieldSpec, dims: Vec<usize>, boundaries: Vec<Matrix>) -> Result<Self, HomologyError> {
        if boundaries.len() != dims.len() {
            return Err(HomologyError::BadChainComplex(format!(
                "{} boundaries for {} degrees",
                boundaries.len(),
                dims.len()
            )));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let expected = (if k == 0 { 0 } else { dims[k - 1] }, dims[k]);
            if d.shape() != expected {
                return Err(HomologyError::BadChainComplex(format!(
                    "boundary {k} has shape {:?}, expected {expected:?}",
                    d.shape()
                )));
            }
        }
        for k in 1..boundaries.len() {
            let composite = boundaries[k - 1].mul(&boundaries[k]).expect("shapes checked");
            if !composite.is_zero() {
                return Err(HomologyError::BoundarySquaredNonzero(k));
            }
        }
        Ok(ChainComplex { field, dims, boundaries })
    }

    /// Simplicial chain complex of `X` over `field`.
    pub fn of_complex(x: &SimplicialComplex, field: FieldSpec) -> Self {
        Self::of_pair(&Pair::absolute(x.clone()), field)
    }

    /// Relative chain complex `C(X) / C(Y)`.
    pub fn of_pair(pair: &Pair, field: FieldSpec) -> Self {
        let top = pair.x().dim().map_or(0, |d| d + 1);
        let dims = (0..top).map(|k| pair.relative_simplices(k).len()).collect();
        let boundaries = (0..top).map(|k| relative_boundary_matrix(pair, k, field)).collect();
        ChainComplex::new(field, dims, boundaries).expect("simplicial boundaries square to zero")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, k: usize) -> Option<&Matrix> {
        self.boundaries.get(k)
    }

    /// `dim ker ∂_k - rank ∂_{k+1}`
    pub fn betti(&self, k: usize) -> usize {
        let Some(&dim) = self.dims.get(k) else {
            return 0;
        };
        let kernel = dim - self.boundaries[k].rank();
        let image = self.boundaries.get(k + 1).map_or(0, Matrix::rank);
        kernel - image
    }
}
