use std::collections::BTreeMap;

use num::Signed;
use rayon::prelude::*;

use crate::filtration::FilteredPair;
use crate::linalg::{FieldSpec, Matrix, Rational, Scalar};
use crate::persistence::{homology_family, snap_shift, HomologyFamily};
use crate::simplicial::{check_simplicial_pair_map, connecting_between, map_between, VertexMap};

use super::{Diagram, DiagramError, DiagramRep, Edge, EdgeKind};

/// `(f: X -> R, Y, i, λ)` with the filtered pair given by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceVertex {
    pub pair: usize,
    pub degree: usize,
    pub shift: Rational,
}

/// A simplicial map of pairs `pairs[source] -> pairs[target]` that respects
/// the filtrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMorphism {
    pub source: usize,
    pub target: usize,
    pub vertex_map: VertexMap,
}

/// `Z ⊆ Y ⊆ X` given as `pairs[top] = (X, Y)` and `pairs[bottom] = (Y, Z)`,
/// with `Y` filtered the same way in both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triple {
    pub top: usize,
    pub bottom: usize,
}

/// The diagram on all `(pair, degree, shift)` combinations with morphism,
/// connecting and shift edges.
#[derive(Clone, Debug)]
pub struct PersistenceDiagram {
    pub pairs: Vec<FilteredPair>,
    pub morphisms: Vec<PairMorphism>,
    pub triples: Vec<Triple>,
    pub degrees: Vec<usize>,
    pub shifts: Vec<Rational>,
    pub labels: Vec<Rational>,
    pub diagram: Diagram<PersistenceVertex>,
}

impl PersistenceDiagram {
    /// Vertex id of `(pair, degrees[d], shifts[l])`.
    pub fn vertex_id(&self, pair: usize, d: usize, l: usize) -> usize {
        (pair * self.degrees.len() + d) * self.shifts.len() + l
    }

    /// Evaluates the representation at every grid position.
    pub fn evaluate_all(&self, field: FieldSpec) -> Result<Vec<DiagramRep>, DiagramError> {
        let families = self.families(field)?;
        (0..self.labels.len()).into_par_iter().map(|t| self.evaluate_with(&families, t)).collect()
    }

    fn families(&self, field: FieldSpec) -> Result<BTreeMap<(usize, usize), HomologyFamily>, DiagramError> {
        let keys: Vec<(usize, usize)> =
            (0..self.pairs.len()).flat_map(|p| self.degrees.iter().map(move |&d| (p, d))).collect();
        let families = keys
            .into_par_iter()
            .map(|(p, d)| Ok(((p, d), homology_family(&self.pairs[p], d, field)?)))
            .collect::<Result<Vec<_>, DiagramError>>()?;
        Ok(families.into_iter().collect())
    }

    fn evaluate_with(
        &self,
        families: &BTreeMap<(usize, usize), HomologyFamily>,
        t: usize,
    ) -> Result<DiagramRep, DiagramError> {
        if t >= self.labels.len() {
            return Err(DiagramError::BadGridPosition(t));
        }
        let field = families.values().next().map_or(FieldSpec::default(), |f| f.module.field());
        let level = |v: &PersistenceVertex| snap_shift(&self.labels, t, &v.shift).position;
        let ranges: Vec<Matrix> = self
            .diagram
            .vertices()
            .iter()
            .map(|v| {
                let family = &families[&(v.pair, v.degree)];
                let m = family.module.structure_map(t, level(v))?;
                Ok(Matrix::from_columns(field, m.rows(), &m.image_basis()))
            })
            .collect::<Result<_, DiagramError>>()?;
        let spaces: Vec<usize> = ranges.iter().map(Matrix::cols).collect();

        let mut edge_maps = Vec::with_capacity(self.diagram.edges().len());
        for (i, e) in self.diagram.edges().iter().enumerate() {
            let (src, tgt) = (&self.diagram.vertices()[e.source], &self.diagram.vertices()[e.target]);
            let (a, b) = (level(src), level(tgt));
            let full = match &e.kind {
                EdgeKind::Identity => {
                    edge_maps.push(Matrix::identity(field, spaces[e.source]));
                    continue;
                }
                EdgeKind::Morphism(n) => {
                    let map = &self.morphisms[*n].vertex_map;
                    let from = &families[&(src.pair, src.degree)].bases[a];
                    let to = &families[&(tgt.pair, tgt.degree)].bases[b];
                    map_between(from, to, &|v| map[&v])?
                }
                EdgeKind::Connecting(_) => {
                    let from = &families[&(src.pair, src.degree)].bases[a];
                    let to = &families[&(tgt.pair, tgt.degree)].bases[b];
                    connecting_between(from, to)?
                }
                EdgeKind::Shift(_, _) => families[&(src.pair, src.degree)].module.structure_map(a, b)?,
                _ => unreachable!("persistence diagrams have no other edge kinds"),
            };
            edge_maps.push(
                restrict_to_ranges(&full, &ranges[e.source], &ranges[e.target]).ok_or(DiagramError::RangeEscape(i))?,
            );
        }
        DiagramRep::new(&self.diagram, spaces, edge_maps, field)
    }
}

/// `X` with `target · X = full · source`, if the image stays in the range.
fn restrict_to_ranges(full: &Matrix, source: &Matrix, target: &Matrix) -> Option<Matrix> {
    let field = full.field();
    let images = full.mul(source).expect("range lives in the source group");
    let columns: Vec<Vec<Scalar>> = (0..images.cols())
        .map(|c| {
            let col = images.column(c);
            if target.cols() == 0 {
                col.iter().all(|x| field.is_zero(x)).then(Vec::new)
            } else {
                target.solve(&col)
            }
        })
        .collect::<Option<_>>()?;
    Some(Matrix::from_columns(field, target.cols(), &columns))
}

fn check_morphism(pairs: &[FilteredPair], n: usize, m: &PairMorphism) -> Result<(), DiagramError> {
    let (src, tgt) = (
        pairs.get(m.source).ok_or(DiagramError::Count { what: "pairs", expected: m.source + 1, found: pairs.len() })?,
        pairs.get(m.target).ok_or(DiagramError::Count { what: "pairs", expected: m.target + 1, found: pairs.len() })?,
    );
    check_simplicial_pair_map(&m.vertex_map, src.pair(), tgt.pair())?;
    for (simplex, gens) in src.entries() {
        let image = simplex.image_set(|v| m.vertex_map[&v]);
        if gens.iter().any(|&g| !tgt.present(&image, g)) {
            return Err(DiagramError::IncompatibleMorphism { morphism: n, simplex: simplex.clone() });
        }
    }
    Ok(())
}

fn check_triple(pairs: &[FilteredPair], n: usize, t: &Triple) -> Result<(), DiagramError> {
    let (Some(top), Some(bottom)) = (pairs.get(t.top), pairs.get(t.bottom)) else {
        return Err(DiagramError::BadTriple(n));
    };
    if bottom.pair().x() != top.pair().y() || bottom.pair().x().iter().any(|s| bottom.entry(s) != top.entry(s)) {
        return Err(DiagramError::BadTriple(n));
    }
    Ok(())
}

/// Builds the persistence diagram. Pairs must share one labeled chain index;
/// shifts must be nonnegative and are sorted with repeats removed.
pub fn build_persistence_diagram(
    pairs: Vec<FilteredPair>,
    morphisms: Vec<PairMorphism>,
    triples: Vec<Triple>,
    mut degrees: Vec<usize>,
    mut shifts: Vec<Rational>,
) -> Result<PersistenceDiagram, DiagramError> {
    let labels = match pairs.first() {
        Some(p) => p.chain_labels().map_err(|_| DiagramError::GridMismatch)?,
        None => Vec::new(),
    };
    if pairs.iter().any(|p| p.index() != pairs[0].index()) {
        return Err(DiagramError::GridMismatch);
    }
    if shifts.iter().any(Signed::is_negative) {
        return Err(DiagramError::GridMismatch);
    }
    degrees.sort_unstable();
    degrees.dedup();
    shifts.sort();
    shifts.dedup();
    for (n, m) in morphisms.iter().enumerate() {
        check_morphism(&pairs, n, m)?;
    }
    for (n, t) in triples.iter().enumerate() {
        check_triple(&pairs, n, t)?;
    }

    let (nd, ns) = (degrees.len(), shifts.len());
    let id = |p: usize, d: usize, l: usize| (p * nd + d) * ns + l;
    let mut vertices = Vec::with_capacity(pairs.len() * nd * ns);
    for p in 0..pairs.len() {
        for &degree in &degrees {
            for shift in &shifts {
                vertices.push(PersistenceVertex { pair: p, degree, shift: shift.clone() });
            }
        }
    }
    let mut edges = Vec::new();
    for (n, m) in morphisms.iter().enumerate() {
        for d in 0..nd {
            for l in 0..ns {
                edges.push(Edge {
                    source: id(m.source, d, l),
                    target: id(m.target, d, l),
                    kind: EdgeKind::Morphism(n),
                });
            }
        }
    }
    for (n, t) in triples.iter().enumerate() {
        for d in 1..nd {
            if degrees[d - 1] + 1 != degrees[d] {
                continue;
            }
            for l in 0..ns {
                edges.push(Edge {
                    source: id(t.top, d, l),
                    target: id(t.bottom, d - 1, l),
                    kind: EdgeKind::Connecting(n),
                });
            }
        }
    }
    for p in 0..pairs.len() {
        for d in 0..nd {
            for l in 0..ns {
                for l2 in l + 1..ns {
                    edges.push(Edge { source: id(p, d, l), target: id(p, d, l2), kind: EdgeKind::Shift(l, l2) });
                }
            }
        }
    }
    let diagram = Diagram::new(vertices, edges)?.with_identities();
    Ok(PersistenceDiagram { pairs, morphisms, triples, degrees, shifts, labels, diagram })
}

/// The representation at grid position `t`: each vertex `(f, Y, i, λ)` gets
/// the range of `H_i(t) -> H_i(t + λ)` (with `t + λ` rounded down to the
/// grid and clamped at the top), and each edge the restriction of its
/// homology map to those ranges.
pub fn evaluate_representation(
    pd: &PersistenceDiagram,
    t: usize,
    field: FieldSpec,
) -> Result<DiagramRep, DiagramError> {
    let families = pd.families(field)?;
    pd.evaluate_with(&families, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{vr_filtration, WeightedPointCloud};
    use crate::linalg::parse_rational;
    use crate::poset::FinitePoset;
    use crate::simplicial::{relative_homology, Pair, SimplicialComplex};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn merge_pair() -> FilteredPair {
        let cloud = WeightedPointCloud::new(vec![vec![r("0")], vec![r("1")]], vec![r("1"); 2]).unwrap();
        vr_filtration(&cloud, 1, None).unwrap()
    }

    fn identity_map(fp: &FilteredPair) -> VertexMap {
        fp.pair().x().vertices().into_iter().map(|v| (v, v)).collect()
    }

    #[test]
    fn small_shapes() {
        let pd = build_persistence_diagram(vec![merge_pair()], vec![], vec![], vec![0], vec![r("0")]).unwrap();
        assert_eq!((pd.diagram.vertices().len(), pd.diagram.edges().len()), (1, 1));
        let pd = build_persistence_diagram(vec![merge_pair()], vec![], vec![], vec![0], vec![r("1"), r("0")]).unwrap();
        assert_eq!(pd.diagram.vertices().len(), 2);
        assert_eq!(pd.diagram.count_edges(|k| matches!(k, EdgeKind::Shift(0, 1))), 1);
        assert_eq!(pd.diagram.count_edges(|k| *k != EdgeKind::Identity), 1);
    }

    #[test]
    fn edge_counts() {
        // X = edge on {0, 1}, Y = {0}, Z = empty; (Y, Z) also maps into (X, Y)
        let labels = FinitePoset::labeled_chain(vec![r("0"), r("1")]).unwrap();
        let x = SimplicialComplex::from_maximal([vec![0, 1]]);
        let y = SimplicialComplex::from_maximal([vec![0]]);
        let top = FilteredPair::constant(Pair::new(x.clone(), y.clone()).unwrap(), labels.clone()).unwrap();
        let bottom = FilteredPair::constant(Pair::absolute(y), labels).unwrap();
        let flip = PairMorphism { source: 0, target: 0, vertex_map: BTreeMap::from([(0, 1), (1, 0)]) };
        let err = build_persistence_diagram(vec![top.clone()], vec![flip], vec![], vec![0], vec![r("0")]).unwrap_err();
        // Y = {0} lands on vertex 1, which is outside Y
        assert!(matches!(err, DiagramError::Homology(_)));

        let morphism = PairMorphism { source: 1, target: 0, vertex_map: BTreeMap::from([(0, 0)]) };
        let (pairs, degrees, shifts) = (2, 2, 2);
        let pd = build_persistence_diagram(
            vec![top, bottom],
            vec![morphism],
            vec![Triple { top: 0, bottom: 1 }],
            vec![0, 1],
            vec![r("0"), r("1")],
        )
        .unwrap();
        let d = &pd.diagram;
        assert_eq!(d.vertices().len(), pairs * degrees * shifts);
        assert_eq!(d.count_edges(|k| matches!(k, EdgeKind::Morphism(_))), degrees * shifts);
        assert_eq!(d.count_edges(|k| matches!(k, EdgeKind::Connecting(_))), (degrees - 1) * shifts);
        assert_eq!(d.count_edges(|k| matches!(k, EdgeKind::Shift(..))), pairs * degrees * shifts * (shifts - 1) / 2);
        assert_eq!(d.count_edges(|k| *k == EdgeKind::Identity), d.vertices().len());
        for rep in pd.evaluate_all(Q).unwrap() {
            assert_eq!(rep.edge_maps.len(), d.edges().len());
        }
    }

    #[test]
    fn zero_shift_spaces_are_full_homology() {
        let fp = merge_pair();
        let pd = build_persistence_diagram(vec![fp.clone()], vec![], vec![], vec![0, 1], vec![r("0")]).unwrap();
        for t in 0..pd.labels.len() {
            let rep = evaluate_representation(&pd, t, Q).unwrap();
            for (v, &dim) in pd.diagram.vertices().iter().zip(&rep.spaces) {
                assert_eq!(dim, relative_homology(&fp.sub_pair(t).unwrap(), v.degree, Q).rank);
            }
        }
    }

    #[test]
    fn merge_range_and_identity_morphism() {
        let fp = merge_pair();
        let step = &pd_labels(&fp)[1] - &pd_labels(&fp)[0];
        let morphism = PairMorphism { source: 0, target: 0, vertex_map: identity_map(&fp) };
        let pd = build_persistence_diagram(vec![fp], vec![morphism], vec![], vec![0], vec![r("0"), step]).unwrap();
        let rep = evaluate_representation(&pd, 0, Q).unwrap();
        assert_eq!(rep.spaces, vec![2, 1]);
        for (i, e) in pd.diagram.edges().iter().enumerate() {
            match e.kind {
                EdgeKind::Morphism(_) => assert!(rep.edge_maps[i].is_identity()),
                EdgeKind::Shift(..) => assert_eq!(rep.edge_maps[i].rank(), 1),
                _ => {}
            }
        }
        assert_eq!(evaluate_representation(&pd, 9, Q).unwrap_err(), DiagramError::BadGridPosition(9));
    }

    fn pd_labels(fp: &FilteredPair) -> Vec<Rational> {
        fp.chain_labels().unwrap()
    }

    #[test]
    fn incompatible_morphism_is_rejected() {
        // swapping the endpoints is simplicial, but vertex 1 enters late
        let labels = FinitePoset::labeled_chain(vec![r("0"), r("1")]).unwrap();
        let x = SimplicialComplex::from_maximal([vec![0, 1]]);
        let entries = x.iter().map(|s| (s.clone(), if s.vertices() == [0] { 0 } else { 1 }));
        let fp = FilteredPair::from_entries(Pair::absolute(x.clone()), labels, entries.collect::<Vec<_>>()).unwrap();
        let swap = PairMorphism { source: 0, target: 0, vertex_map: BTreeMap::from([(0, 1), (1, 0)]) };
        let err = build_persistence_diagram(vec![fp], vec![swap], vec![], vec![0], vec![r("0")]).unwrap_err();
        assert!(matches!(err, DiagramError::IncompatibleMorphism { morphism: 0, .. }));
    }

    #[test]
    fn connecting_edges_evaluate() {
        // (edge, endpoints) -> (endpoints, {0}) sends the edge class to ±[1]
        let labels = FinitePoset::labeled_chain(vec![r("0")]).unwrap();
        let x = SimplicialComplex::from_maximal([vec![0, 1]]);
        let y = SimplicialComplex::from_maximal([vec![0], vec![1]]);
        let z = SimplicialComplex::from_maximal([vec![0]]);
        let top = FilteredPair::constant(Pair::new(x, y.clone()).unwrap(), labels.clone()).unwrap();
        let bottom = FilteredPair::constant(Pair::new(y, z).unwrap(), labels).unwrap();
        let pd = build_persistence_diagram(
            vec![top, bottom],
            vec![],
            vec![Triple { top: 0, bottom: 1 }],
            vec![0, 1],
            vec![r("0")],
        )
        .unwrap();
        let rep = evaluate_representation(&pd, 0, Q).unwrap();
        let e = pd.diagram.edges().iter().position(|e| matches!(e.kind, EdgeKind::Connecting(_))).unwrap();
        assert_eq!(rep.edge_maps[e].rank(), 1);
        assert!(build_persistence_diagram(
            pd.pairs.clone(),
            vec![],
            vec![Triple { top: 1, bottom: 0 }],
            vec![0],
            vec![r("0")]
        )
        .is_err());
    }
}
