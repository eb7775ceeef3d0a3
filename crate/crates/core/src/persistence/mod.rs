//! Persistence modules over finite posets: homology of filtrations, rank
//! invariants, barcodes, the passage between real and integer indexing, and
//! tensor products.

mod barcode;
mod discrete;
mod filtered;
mod module;

use thiserror::Error;

pub use barcode::{
    barcode_1d, compare_barcodes, filtration_barcode, rank_invariant, Bar, Barcode, BarcodeComparison, Death,
    RankInvariant,
};
pub use discrete::{
    discretize_morphism, discretize_z, discretize_z_on, integer_chain, is_finite_type_and_tame, module_criticals,
    reconstruct_r,
};
pub use filtered::{
    homology_family, is_good_vertex, module_from_filtration, persistent_range, range_coordinates, sample_filtration_z,
    snap_shift, HomologyFamily, ShiftSnap,
};
pub use module::{find_isomorphism, hom_basis, ModuleMorphism, PersistenceModule};

use crate::filtration::FiltrationError;
use crate::simplicial::HomologyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PersistenceError {
    #[error("index poset is not a chain with rational labels in id order")]
    NotAChain,
    #[error("indices {0} and {1} are not ordered")]
    IncomparableIndices(usize, usize),
    #[error("modules are over different index posets")]
    IndexMismatch,
    #[error("modules are over different fields")]
    FieldMismatch,
    #[error("({0}, {1}) is not a cover relation")]
    NotACover(usize, usize),
    #[error("no structure map for cover ({0}, {1})")]
    MissingCoverMap(usize, usize),
    #[error("map at {cover:?} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { cover: (usize, usize), expected: (usize, usize), found: (usize, usize) },
    #[error("cover paths from {from} to {to} give different maps")]
    PathDependence { from: usize, to: usize },
    #[error("naturality fails on cover ({0}, {1})")]
    NotNatural(usize, usize),
    #[error("component is not invertible")]
    NotInvertible,
    #[error("barcode and module disagree: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}
