//! Poset-filtered simplicial pairs: sublevel filtrations, the weighted
//! Vietoris–Rips bifiltration and directed-graph families.

mod graph;
mod vr;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use graph::{graph_sublevel_family, DiGraph, GraphFamily};
pub use vr::{
    induced_vr_map, naturality_square, vr_bifiltration, vr_complex, vr_filtration, DatasetMorphism, InducedVrMap,
    LambdaMode, VrBifiltration, WeightedPointCloud,
};

use crate::linalg::Rational;
use crate::poset::{FinitePoset, PosetError};
use crate::simplicial::{HomologyError, Pair, Simplex, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("unknown index element {0}")]
    UnknownIndex(usize),
    #[error("vertex {0} has no filtration value")]
    UnmappedVertex(usize),
    #[error("simplex {0:?} has no entry")]
    MissingEntry(Simplex),
    #[error("entry of face {face:?} is not below the entry of {simplex:?}")]
    NotMonotone { face: Simplex, simplex: Simplex },
    #[error("index poset is not a chain with rational labels")]
    NotAChain,
    #[error("invalid point cloud: {0}")]
    BadCloud(String),
    #[error("invalid dataset morphism: {0}")]
    BadMorphism(String),
    #[error("pushforward fails at target point {target}: expected {expected}, found {found}")]
    Pushforward { target: usize, expected: String, found: String },
    #[error("Lipschitz bound fails on source pair ({0}, {1})")]
    Lipschitz(usize, usize),
    #[error("point {source_point} (prob {prob}) maps to {target_point} with prob {target_prob} below {threshold}")]
    LambdaEscape { source_point: usize, target_point: usize, prob: String, target_prob: String, threshold: String },
    #[error("naturality square fails at simplex {0:?}")]
    Naturality(Simplex),
    #[error("base graph has a directed cycle through {0:?}")]
    CyclicBase(Vec<usize>),
    #[error("graph vertex {0} out of range")]
    UnknownVertex(usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A simplicial pair with a filtration by a finite poset. Each simplex carries
/// the minimal index elements at which it is present, so it belongs to the
/// sub-pair at `s` iff one of its generators is `<= s`. Over a chain or a
/// lattice grid this list has exactly one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPair {
    pair: Pair,
    index: FinitePoset,
    entry: BTreeMap<Simplex, Vec<usize>>,
}

impl FilteredPair {
    /// Validates that every simplex of `X` has a nonempty entry and that
    /// faces enter no later than their cofaces.
    pub fn new(pair: Pair, index: FinitePoset, entry: BTreeMap<Simplex, Vec<usize>>) -> Result<Self, FiltrationError> {
        for (s, gens) in &entry {
            if let Some(&g) = gens.iter().find(|&&g| g >= index.len()) {
                return Err(FiltrationError::UnknownIndex(g));
            }
            if gens.is_empty() || !pair.x().contains(s) {
                return Err(FiltrationError::MissingEntry(s.clone()));
            }
        }
        for s in pair.x().iter() {
            let Some(gens) = entry.get(s) else {
                return Err(FiltrationError::MissingEntry(s.clone()));
            };
            for (_, face) in s.faces() {
                let face_gens = &entry[&face];
                if !gens.iter().all(|&g| face_gens.iter().any(|&h| index.leq(h, g))) {
                    return Err(FiltrationError::NotMonotone { face, simplex: s.clone() });
                }
            }
        }
        Ok(FilteredPair { pair, index, entry })
    }

    /// Single-critical filtration: one index element per simplex.
    pub fn from_entries(
        pair: Pair,
        index: FinitePoset,
        entry: impl IntoIterator<Item = (Simplex, usize)>,
    ) -> Result<Self, FiltrationError> {
        Self::new(pair, index, entry.into_iter().map(|(s, g)| (s, vec![g])).collect())
    }

    /// Every simplex present at the least element `0` of `index`.
    pub fn constant(pair: Pair, index: FinitePoset) -> Result<Self, FiltrationError> {
        let entry: Vec<(Simplex, usize)> = pair.x().iter().map(|s| (s.clone(), 0)).collect();
        if (0..index.len()).any(|s| !index.leq(0, s)) {
            return Err(FiltrationError::UnknownIndex(0));
        }
        Self::from_entries(pair, index, entry)
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn index(&self) -> &FinitePoset {
        &self.index
    }

    pub fn entry(&self, s: &Simplex) -> Option<&[usize]> {
        self.entry.get(s).map(Vec::as_slice)
    }

    pub fn entries(&self) -> &BTreeMap<Simplex, Vec<usize>> {
        &self.entry
    }

    pub fn present(&self, simplex: &Simplex, s: usize) -> bool {
        self.entry.get(simplex).is_some_and(|gens| gens.iter().any(|&g| self.index.leq(g, s)))
    }

    /// `(X_s, Y_s)`: simplices whose entry is `<= s`.
    pub fn sub_pair(&self, s: usize) -> Result<Pair, FiltrationError> {
        if s >= self.index.len() {
            return Err(FiltrationError::UnknownIndex(s));
        }
        let x = self.pair.x().filter(|t| self.present(t, s));
        let y = self.pair.y().filter(|t| self.present(t, s));
        Ok(Pair::new(x, y)?)
    }

    /// Same pair with `Y` replaced; entries are inherited from `X`.
    pub fn with_subcomplex(&self, y: SimplicialComplex) -> Result<Self, FiltrationError> {
        let pair = Pair::new(self.pair.x().clone(), y)?;
        Ok(FilteredPair { pair, index: self.index.clone(), entry: self.entry.clone() })
    }

    /// Rational labels of a chain index in increasing order.
    pub fn chain_labels(&self) -> Result<Vec<Rational>, FiltrationError> {
        chain_labels(&self.index)
    }
}

pub(crate) fn chain_labels(index: &FinitePoset) -> Result<Vec<Rational>, FiltrationError> {
    let order = index.chain_order().map_err(|_| FiltrationError::NotAChain)?;
    if order.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(FiltrationError::NotAChain);
    }
    index.rational_labels().ok_or(FiltrationError::NotAChain)
}

fn check_vertex_values(
    x: &SimplicialComplex,
    f: &BTreeMap<usize, usize>,
    index: &FinitePoset,
) -> Result<(), FiltrationError> {
    for v in x.vertices() {
        match f.get(&v) {
            None => return Err(FiltrationError::UnmappedVertex(v)),
            Some(&s) if s >= index.len() => return Err(FiltrationError::UnknownIndex(s)),
            Some(_) => {}
        }
    }
    Ok(())
}

/// Full subcomplex of `x` on the vertices with `f(v) <= s`.
pub fn sublevel_complex(
    x: &SimplicialComplex,
    f: &BTreeMap<usize, usize>,
    index: &FinitePoset,
    s: usize,
) -> Result<SimplicialComplex, FiltrationError> {
    if s >= index.len() {
        return Err(FiltrationError::UnknownIndex(s));
    }
    check_vertex_values(x, f, index)?;
    let keep: BTreeSet<usize> = x.vertices().into_iter().filter(|v| index.leq(f[v], s)).collect();
    Ok(x.induced(&keep))
}

/// Minimal elements of `∩ upset(f(v))` over the vertices of `simplex`.
fn joint_entry(simplex: &Simplex, f: impl Fn(usize) -> usize, index: &FinitePoset) -> Vec<usize> {
    let common: BTreeSet<usize> =
        (0..index.len()).filter(|&s| simplex.vertices().iter().all(|&v| index.leq(f(v), s))).collect();
    index.minimal_elements(&common)
}

/// The sublevel filtration of `(x, y)` by a vertex function: each simplex
/// enters once all of its vertices have.
pub fn sublevel_filtration(
    pair: Pair,
    f: &BTreeMap<usize, usize>,
    index: FinitePoset,
) -> Result<FilteredPair, FiltrationError> {
    check_vertex_values(pair.x(), f, &index)?;
    let mut entry = BTreeMap::new();
    for s in pair.x().iter() {
        let gens = joint_entry(s, |v| f[&v], &index);
        if gens.is_empty() {
            // never present: no index element dominates all its vertices
            continue;
        }
        entry.insert(s.clone(), gens);
    }
    let x = pair.x().filter(|s| entry.contains_key(s));
    let y = pair.y().filter(|s| entry.contains_key(s));
    FilteredPair::new(Pair::new(x, y)?, index, entry)
}

/// Labels at which the sub-pair of a chain-indexed filtration changes, always
/// including the least label.
pub fn critical_values(fp: &FilteredPair) -> Result<Vec<Rational>, FiltrationError> {
    let labels = fp.chain_labels()?;
    let mut positions: BTreeSet<usize> = fp.entry.values().flatten().copied().collect();
    if !labels.is_empty() {
        positions.insert(0);
    }
    Ok(positions.into_iter().map(|p| labels[p].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_maximal([vec![0, 1]])
    }

    #[test]
    fn sublevel_examples() {
        let chain = FinitePoset::chain(2);
        let f = BTreeMap::from([(0, 0), (1, 1)]);
        assert_eq!(sublevel_complex(&edge(), &f, &chain, 1).unwrap(), edge());
        let low = sublevel_complex(&edge(), &f, &chain, 0).unwrap();
        assert_eq!(low, SimplicialComplex::from_maximal([vec![0]]));

        let anti = FinitePoset::antichain(2);
        let constant = BTreeMap::from([(0, 0), (1, 0)]);
        assert!(sublevel_complex(&edge(), &constant, &anti, 1).unwrap().is_empty());
        assert_eq!(sublevel_complex(&edge(), &constant, &anti, 2), Err(FiltrationError::UnknownIndex(2)));
    }

    #[test]
    fn sublevel_filtration_matches_sublevel_complex() {
        let x = SimplicialComplex::from_maximal([vec![0, 1, 2], vec![2, 3]]);
        // a 2x2 grid; vertex values at the four corners
        let index = FinitePoset::chain(2).product(&FinitePoset::chain(2));
        let f = BTreeMap::from([(0, 0), (1, 1), (2, 2), (3, 3)]);
        let fp = sublevel_filtration(Pair::absolute(x.clone()), &f, index.clone()).unwrap();
        for s in 0..4 {
            assert_eq!(fp.sub_pair(s).unwrap().x(), &sublevel_complex(&x, &f, &index, s).unwrap());
        }
        assert_eq!(fp.entry(&Simplex::new(vec![1, 2])), Some(&[3][..]));
    }

    #[test]
    fn multi_critical_entries_on_non_lattice() {
        // two incomparable minima below two incomparable maxima
        let index = FinitePoset::from_generators(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let f = BTreeMap::from([(0, 0), (1, 1)]);
        let fp = sublevel_filtration(Pair::absolute(edge()), &f, index).unwrap();
        assert_eq!(fp.entry(&Simplex::new(vec![0, 1])), Some(&[2, 3][..]));
        assert_eq!(fp.sub_pair(2).unwrap().x(), &edge());
        assert_eq!(fp.sub_pair(3).unwrap().x(), &edge());
    }

    #[test]
    fn rejects_non_monotone() {
        let index = FinitePoset::chain(2);
        let entry = [(Simplex::vertex(0), 1), (Simplex::vertex(1), 0), (Simplex::new(vec![0, 1]), 0)];
        let err = FilteredPair::from_entries(Pair::absolute(edge()), index, entry).unwrap_err();
        assert!(matches!(err, FiltrationError::NotMonotone { .. }));
    }

    #[test]
    fn critical_values_of_constant_filtration() {
        let index = FinitePoset::labeled_chain(vec![q(0), q(1), q(2)]).unwrap();
        let fp = FilteredPair::constant(Pair::absolute(edge()), index).unwrap();
        assert_eq!(critical_values(&fp).unwrap(), vec![q(0)]);
    }
}
