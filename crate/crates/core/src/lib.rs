pub mod diagram;
pub mod filtration;
pub mod linalg;
pub mod persistence;
pub mod poset;
pub mod semigroup;
pub mod simplicial;
