//! Simplicial complexes and pairs, their (relative) homology over a field,
//! and the maps between homology groups: induced, connecting, skeletal.

mod chains;
mod complex;
mod homology;

pub use chains::{boundary_matrix, relative_boundary_matrix, ChainComplex};
pub use complex::{Pair, Simplex, SimplicialComplex};
pub use homology::{
    check_simplicial_pair_map, connecting_between, connecting_map, homology, inclusion_between, induced_map,
    map_between, relative_homology, skeletal_chain_complex, Chain, HomologyBasis, HomologyResult, VertexMap,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("simplex {simplex:?} is missing its face {face:?}")]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("{0:?} is not a simplex of the ambient complex")]
    NotSubcomplex(Simplex),
    #[error("vertex map does not send {0:?} to a simplex")]
    NotSimplicial(Simplex),
    #[error("vertex map sends {0:?} outside the target subcomplex")]
    PairViolation(Simplex),
    #[error("vertex {0} has no image")]
    UnmappedVertex(usize),
    #[error("image of a cycle is not a cycle")]
    NotAChainMap,
    #[error("boundary composite ∂∂ is nonzero at degree {0}")]
    BoundarySquaredNonzero(usize),
    #[error("malformed chain complex: {0}")]
    BadChainComplex(String),
}
