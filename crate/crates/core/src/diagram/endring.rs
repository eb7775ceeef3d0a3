use rayon::prelude::*;

use crate::linalg::{flatten_blocks, intertwiner_basis, FieldSpec, Intertwining, Matrix, Scalar};
use crate::persistence::{ModuleMorphism, PersistenceError, PersistenceModule};

use super::{Diagram, DiagramError, DiagramRep, Edge, EdgeKind};

/// Endomorphisms of a representation: block tuples `φ_v` with
/// `φ_target T(e) = T(e) φ_source` for every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRing {
    pub basis: Vec<Vec<Matrix>>,
    pub spaces: Vec<usize>,
    pub field: FieldSpec,
}

impl EndRing {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a block tuple in the basis, or `None` outside the span.
    pub fn coordinates(&self, blocks: &[Matrix]) -> Option<Vec<Scalar>> {
        let columns: Vec<Vec<Scalar>> = self.basis.iter().map(|b| flatten_blocks(b)).collect();
        let target = flatten_blocks(blocks);
        if columns.is_empty() {
            return target.iter().all(|x| self.field.is_zero(x)).then(Vec::new);
        }
        Matrix::from_columns(self.field, target.len(), &columns).solve(&target)
    }

    /// Block-wise `a ∘ b`.
    pub fn compose(&self, a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
        a.iter().zip(b).map(|(x, y)| x.mul(y).expect("blocks are square")).collect()
    }

    pub fn identity(&self) -> Vec<Matrix> {
        self.spaces.iter().map(|&n| Matrix::identity(self.field, n)).collect()
    }

    /// Whether a block tuple satisfies the commutation constraint of every
    /// edge of `d` under `rep`.
    pub fn acts_on<V>(&self, d: &Diagram<V>, rep: &DiagramRep, blocks: &[Matrix]) -> bool {
        d.edges().iter().zip(&rep.edge_maps).all(|(e, m)| {
            blocks[e.target].mul(m).expect("shapes match") == m.mul(&blocks[e.source]).expect("shapes match")
        })
    }
}

/// Basis of `End(T)` as the nullspace of the stacked commutation system,
/// with closure under composition verified.
pub fn end_ring<V>(d: &Diagram<V>, rep: &DiagramRep) -> Result<EndRing, DiagramError> {
    let rep = DiagramRep::new(d, rep.spaces.clone(), rep.edge_maps.clone(), rep.field)?;
    let constraints: Vec<Intertwining<'_>> = d
        .edges()
        .iter()
        .zip(&rep.edge_maps)
        .enumerate()
        .filter(|(i, _)| !d.is_identity(*i))
        .map(|(_, (e, m))| Intertwining { from: e.source, to: e.target, source_map: m, target_map: m })
        .collect();
    let basis = intertwiner_basis(rep.field, &rep.spaces, &rep.spaces, &constraints);
    let ring = EndRing { basis, spaces: rep.spaces.clone(), field: rep.field };
    let n = ring.dimension();
    let closed = (0..n * n).into_par_iter().all(|k| {
        let product = ring.compose(&ring.basis[k / n], &ring.basis[k % n]);
        ring.coordinates(&product).is_some()
    });
    if !closed {
        return Err(DiagramError::NotClosed);
    }
    Ok(ring)
}

/// Vertices and edges of a larger diagram, by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdiagram {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Subdiagram {
    pub fn full<V>(d: &Diagram<V>) -> Self {
        Subdiagram { vertices: (0..d.vertices().len()).collect(), edges: (0..d.edges().len()).collect() }
    }

    /// The subdiagram as a diagram in its own right, with the restricted
    /// representation. Identity edges of `d` stay identities.
    pub fn restrict<V: Clone>(
        &self,
        d: &Diagram<V>,
        rep: &DiagramRep,
    ) -> Result<(Diagram<V>, DiagramRep), DiagramError> {
        let local = |v: usize| self.vertices.iter().position(|&w| w == v);
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut ids = vec![None; self.vertices.len()];
        for &e in &self.edges {
            let edge = d.edges().get(e).ok_or(DiagramError::DanglingEdge(e))?;
            let (Some(source), Some(target)) = (local(edge.source), local(edge.target)) else {
                return Err(DiagramError::SubdiagramViolation(e));
            };
            if d.is_identity(e) {
                ids[source] = Some(edges.len());
            }
            edges.push(Edge { source, target, kind: edge.kind.clone() });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|&v| d.vertices().get(v).cloned().ok_or(DiagramError::SubdiagramViolation(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut sub = Diagram::new(vertices, edges)?;
        if let Some(ids) = ids.into_iter().collect::<Option<Vec<_>>>() {
            sub.set_identities(ids)?;
        }
        let spaces = self.vertices.iter().map(|&v| rep.spaces[v]).collect();
        let maps = self.edges.iter().map(|&e| rep.edge_maps[e].clone()).collect();
        let sub_rep = DiagramRep::new(&sub, spaces, maps, rep.field)?;
        Ok((sub, sub_rep))
    }
}

/// The projection `End(T₂) -> End(T₁)` for a subdiagram, as a matrix whose
/// column `j` holds the coordinates of the projected `j`-th basis element of
/// `source = End(T₂)` in the basis of `target = End(T₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub matrix: Matrix,
    pub source: EndRing,
    pub target: EndRing,
}

impl Restriction {
    /// Applies the projection to a block tuple of the larger ring.
    pub fn project(&self, sub: &Subdiagram, blocks: &[Matrix]) -> Vec<Matrix> {
        sub.vertices.iter().map(|&v| blocks[v].clone()).collect()
    }
}

pub fn restrict_end_ring<V: Clone>(
    sub: &Subdiagram,
    d2: &Diagram<V>,
    rep2: &DiagramRep,
) -> Result<Restriction, DiagramError> {
    let (d1, rep1) = sub.restrict(d2, rep2)?;
    let source = end_ring(d2, rep2)?;
    let target = end_ring(&d1, &rep1)?;
    let columns: Vec<Vec<Scalar>> = source
        .basis
        .iter()
        .map(|b| {
            let projected: Vec<Matrix> = sub.vertices.iter().map(|&v| b[v].clone()).collect();
            target.coordinates(&projected).expect("projection of an endomorphism is an endomorphism")
        })
        .collect();
    let matrix = Matrix::from_columns(rep2.field, target.dimension(), &columns);
    Ok(Restriction { matrix, source, target })
}

/// Natural self-transformations of a diagram of persistence modules: the
/// End ring of the diagram with one vertex per (diagram vertex, poset
/// element), edges for the diagram's morphisms at every element and for the
/// modules' cover maps at every vertex.
pub fn commutant_poset_rep<V>(
    d: &Diagram<V>,
    modules: &[PersistenceModule],
    edge_morphisms: &[ModuleMorphism],
) -> Result<EndRing, DiagramError> {
    let nv = d.vertices().len();
    if modules.len() != nv {
        return Err(DiagramError::Count { what: "modules", expected: nv, found: modules.len() });
    }
    if edge_morphisms.len() != d.edges().len() {
        return Err(DiagramError::Count {
            what: "edge morphisms",
            expected: d.edges().len(),
            found: edge_morphisms.len(),
        });
    }
    let Some(first) = modules.first() else {
        return Ok(EndRing { basis: Vec::new(), spaces: Vec::new(), field: FieldSpec::default() });
    };
    let (index, field) = (first.index(), first.field());
    for m in modules {
        if m.index() != index {
            return Err(PersistenceError::IndexMismatch.into());
        }
        if m.field() != field {
            return Err(DiagramError::FieldMismatch { expected: field, found: m.field() });
        }
    }
    for (e, phi) in d.edges().iter().zip(edge_morphisms) {
        phi.check(&modules[e.source], &modules[e.target])?;
    }
    let np = index.len();
    let id = |v: usize, s: usize| v * np + s;
    let mut vertices = Vec::with_capacity(nv * np);
    let mut spaces = Vec::with_capacity(nv * np);
    for m in modules {
        for s in 0..np {
            vertices.push(());
            spaces.push(m.dim(s));
        }
    }
    let mut edges = Vec::new();
    let mut maps = Vec::new();
    for (i, (e, phi)) in d.edges().iter().zip(edge_morphisms).enumerate() {
        if d.is_identity(i) {
            continue;
        }
        for s in 0..np {
            edges.push(Edge { source: id(e.source, s), target: id(e.target, s), kind: e.kind.clone() });
            maps.push(phi.components[s].clone());
        }
    }
    for (v, m) in modules.iter().enumerate() {
        for (&(a, b), map) in m.cover_maps() {
            edges.push(Edge { source: id(v, a), target: id(v, b), kind: EdgeKind::Cover });
            maps.push(map.clone());
        }
    }
    let augmented = Diagram::new(vertices, edges)?;
    let rep = DiagramRep::new(&augmented, spaces, maps, field)?;
    end_ring(&augmented, &rep)
}
