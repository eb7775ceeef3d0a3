//! Diagrams with identities, their linear representations and commutant
//! rings, the persistence diagram of filtered pairs, spectral-sequence pages
//! and the graded product at module level.

mod endring;
mod graded;
mod persistence;
mod spectral;

use thiserror::Error;

pub use endring::{commutant_poset_rep, end_ring, restrict_end_ring, EndRing, Restriction, Subdiagram};
pub use graded::{graded_product, swap_map, unit_vertex, GradedVertex};
pub use persistence::{
    build_persistence_diagram, evaluate_representation, PairMorphism, PersistenceDiagram, PersistenceVertex, Triple,
};
pub use spectral::{build_spectral_page, validate_spectral_rep, SpectralCheck, SpectralVertex};

use crate::filtration::FiltrationError;
use crate::linalg::{FieldSpec, Matrix};
use crate::persistence::PersistenceError;
use crate::simplicial::{HomologyError, Simplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("edge {0} refers to a missing vertex")]
    DanglingEdge(usize),
    #[error("identity edge {edge} of vertex {vertex} is not a loop")]
    BadIdentity { vertex: usize, edge: usize },
    #[error("expected {expected} {what}, got {found}")]
    Count { what: &'static str, expected: usize, found: usize },
    #[error("edge {edge} has a map of shape {found:?}, expected {expected:?}")]
    ShapeMismatch { edge: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("identity edge {0} is not represented by an identity matrix")]
    IdentityNotPreserved(usize),
    #[error("representation is over {found}, expected {expected}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },
    #[error("subdiagram edge {0} leaves the chosen vertices")]
    SubdiagramViolation(usize),
    #[error("computed endomorphisms are not closed under composition")]
    NotClosed,
    #[error("morphism {morphism} is incompatible with the filtrations at {simplex:?}")]
    IncompatibleMorphism { morphism: usize, simplex: Simplex },
    #[error("triple {0} does not nest: the lower pair must be (Y, Z) for the upper pair (X, Y)")]
    BadTriple(usize),
    #[error("filtered pairs are not indexed by one common labeled chain")]
    GridMismatch,
    #[error("grid position {0} is out of range")]
    BadGridPosition(usize),
    #[error("an edge map leaves the target range at edge {0}")]
    RangeEscape(usize),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// What an edge stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Identity,
    /// Induced by the `n`-th geometric morphism.
    Morphism(usize),
    /// Connecting map of the `n`-th triple.
    Connecting(usize),
    /// Shift comparison `p_{λ,λ'}` between positions in the shift list.
    Shift(usize, usize),
    /// Spectral-sequence differential.
    Differential,
    /// Structure map along a poset cover.
    Cover,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub kind: EdgeKind,
}

/// A directed multigraph with optional identities: exactly one loop per
/// vertex designated as its identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram<V> {
    vertices: Vec<V>,
    edges: Vec<Edge>,
    identities: Option<Vec<usize>>,
}

impl<V> Diagram<V> {
    pub fn new(vertices: Vec<V>, edges: Vec<Edge>) -> Result<Self, DiagramError> {
        if let Some(i) = edges.iter().position(|e| e.source >= vertices.len() || e.target >= vertices.len()) {
            return Err(DiagramError::DanglingEdge(i));
        }
        let identities = None;
        Ok(Diagram { vertices, edges, identities })
    }

    /// Appends an identity loop at every vertex and records it.
    pub fn with_identities(mut self) -> Self {
        let start = self.edges.len();
        for v in 0..self.vertices.len() {
            self.edges.push(Edge { source: v, target: v, kind: EdgeKind::Identity });
        }
        self.identities = Some((start..self.edges.len()).collect());
        self
    }

    /// Uses existing loops as identities, one per vertex.
    pub fn set_identities(&mut self, ids: Vec<usize>) -> Result<(), DiagramError> {
        if ids.len() != self.vertices.len() {
            return Err(DiagramError::Count { what: "identities", expected: self.vertices.len(), found: ids.len() });
        }
        for (v, &e) in ids.iter().enumerate() {
            let edge = self.edges.get(e).ok_or(DiagramError::DanglingEdge(e))?;
            if edge.source != v || edge.target != v {
                return Err(DiagramError::BadIdentity { vertex: v, edge: e });
            }
        }
        self.identities = Some(ids);
        Ok(())
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn identities(&self) -> Option<&[usize]> {
        self.identities.as_deref()
    }

    pub fn is_identity(&self, e: usize) -> bool {
        self.identities.as_ref().is_some_and(|ids| ids.contains(&e))
    }

    pub fn count_edges(&self, pred: impl Fn(&EdgeKind) -> bool) -> usize {
        self.edges.iter().filter(|e| pred(&e.kind)).count()
    }

    /// Same shape with payloads replaced.
    pub fn map_vertices<W>(&self, f: impl Fn(&V) -> W) -> Diagram<W> {
        Diagram {
            vertices: self.vertices.iter().map(f).collect(),
            edges: self.edges.clone(),
            identities: self.identities.clone(),
        }
    }
}

/// Finite-dimensional spaces on vertices and matrices on edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramRep {
    pub spaces: Vec<usize>,
    pub edge_maps: Vec<Matrix>,
    pub field: FieldSpec,
}

impl DiagramRep {
    /// Checks counts, shapes, fields, and that identities go to identity
    /// matrices.
    pub fn new<V>(
        d: &Diagram<V>,
        spaces: Vec<usize>,
        edge_maps: Vec<Matrix>,
        field: FieldSpec,
    ) -> Result<Self, DiagramError> {
        if spaces.len() != d.vertices.len() {
            return Err(DiagramError::Count { what: "spaces", expected: d.vertices.len(), found: spaces.len() });
        }
        if edge_maps.len() != d.edges.len() {
            return Err(DiagramError::Count { what: "edge maps", expected: d.edges.len(), found: edge_maps.len() });
        }
        for (i, (e, m)) in d.edges.iter().zip(&edge_maps).enumerate() {
            if m.field() != field {
                return Err(DiagramError::FieldMismatch { expected: field, found: m.field() });
            }
            let expected = (spaces[e.target], spaces[e.source]);
            if m.shape() != expected {
                return Err(DiagramError::ShapeMismatch { edge: i, expected, found: m.shape() });
            }
            if d.is_identity(i) && !m.is_identity() {
                return Err(DiagramError::IdentityNotPreserved(i));
            }
        }
        Ok(DiagramRep { spaces, edge_maps, field })
    }

    /// The all-zero representation with the given spaces (identities still
    /// map to identity matrices).
    pub fn zero<V>(d: &Diagram<V>, spaces: Vec<usize>, field: FieldSpec) -> Self {
        let edge_maps = d
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if d.is_identity(i) {
                    Matrix::identity(field, spaces[e.source])
                } else {
                    Matrix::zeros(field, spaces[e.target], spaces[e.source])
                }
            })
            .collect();
        DiagramRep { spaces, edge_maps, field }
    }
}
