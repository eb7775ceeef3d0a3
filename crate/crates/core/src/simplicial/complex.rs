use std::collections::BTreeSet;
use std::fmt;

use super::HomologyError;

/// A simplex as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts and deduplicates the vertices.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        assert!(!vertices.is_empty(), "a simplex needs at least one vertex");
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with the index of the omitted vertex.
    pub fn faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (i, Simplex(v))
        })
    }

    /// Image under a vertex map as `(sorted simplex, sign of the sorting
    /// permutation)`, or `None` when two vertices collide.
    pub fn image(&self, map: impl Fn(usize) -> usize) -> Option<(Simplex, bool)> {
        let mut image: Vec<usize> = self.0.iter().map(|&v| map(v)).collect();
        let mut inversions = 0usize;
        for i in 0..image.len() {
            for j in i + 1..image.len() {
                match image[i].cmp(&image[j]) {
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        image.sort_unstable();
        Some((Simplex(image), inversions.is_multiple_of(2)))
    }

    /// Vertex set of the image, with collisions merged.
    pub fn image_set(&self, map: impl Fn(usize) -> usize) -> Simplex {
        Simplex::new(self.0.iter().map(|&v| map(v)).collect())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&[usize]> for Simplex {
    fn from(v: &[usize]) -> Self {
        Simplex::new(v.to_vec())
    }
}

impl From<Vec<usize>> for Simplex {
    fn from(v: Vec<usize>) -> Self {
        Simplex::new(v)
    }
}

/// Finite abstract simplicial complex, stored per dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<BTreeSet<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    /// Downward closure of the given simplices.
    pub fn from_maximal<I, S>(simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Vec<usize>>,
    {
        let mut c = SimplicialComplex::empty();
        for s in simplices {
            c.insert_closed(Simplex::new(s.into()));
        }
        c
    }

    /// Exactly the listed simplices; fails if some face is missing.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self, HomologyError> {
        let mut c = SimplicialComplex::empty();
        for s in simplices {
            c.insert_raw(s);
        }
        for s in c.iter() {
            for (_, face) in s.faces() {
                if !c.contains(&face) {
                    return Err(HomologyError::MissingFace { simplex: s.clone(), face });
                }
            }
        }
        Ok(c)
    }

    fn insert_raw(&mut self, s: Simplex) -> bool {
        let d = s.dim();
        if self.by_dim.len() <= d {
            self.by_dim.resize(d + 1, BTreeSet::new());
        }
        self.by_dim[d].insert(s)
    }

    /// Inserts a simplex together with all of its faces.
    pub fn insert_closed(&mut self, s: Simplex) {
        if self.contains(&s) {
            return;
        }
        let faces: Vec<Simplex> = s.faces().map(|(_, f)| f).collect();
        self.insert_raw(s);
        for f in faces {
            self.insert_closed(f);
        }
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.by_dim.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.iter().rposition(|set| !set.is_empty())
    }

    pub fn simplices(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(k).into_iter().flatten()
    }

    pub fn count(&self, k: usize) -> usize {
        self.by_dim.get(k).map_or(0, BTreeSet::len)
    }

    /// All simplices, by dimension then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).map(|s| s.vertices()[0]).collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// First simplex of `self` that is not in `other`.
    pub fn first_missing_from(&self, other: &SimplicialComplex) -> Option<Simplex> {
        self.iter().find(|s| !other.contains(s)).cloned()
    }

    /// Simplices satisfying `keep`; the predicate must be closed under faces.
    pub fn filter(&self, keep: impl Fn(&Simplex) -> bool) -> SimplicialComplex {
        let by_dim: Vec<BTreeSet<Simplex>> =
            self.by_dim.iter().map(|set| set.iter().filter(|s| keep(s)).cloned().collect()).collect();
        let mut c = SimplicialComplex { by_dim };
        c.trim();
        c
    }

    fn trim(&mut self) {
        while self.by_dim.last().is_some_and(BTreeSet::is_empty) {
            self.by_dim.pop();
        }
    }

    /// Full subcomplex on a vertex subset.
    pub fn induced(&self, vertices: &BTreeSet<usize>) -> SimplicialComplex {
        self.filter(|s| s.vertices().iter().all(|v| vertices.contains(v)))
    }

    /// Simplices of dimension at most `j`; `None` gives the empty complex.
    pub fn skeleton(&self, j: Option<usize>) -> SimplicialComplex {
        match j {
            None => SimplicialComplex::empty(),
            Some(j) => self.filter(|s| s.dim() <= j),
        }
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut c = self.clone();
        for s in other.iter() {
            c.insert_raw(s.clone());
        }
        c
    }
}

/// A simplicial pair `(X, Y)` with `Y` a subcomplex of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    x: SimplicialComplex,
    y: SimplicialComplex,
}

impl Pair {
    pub fn new(x: SimplicialComplex, y: SimplicialComplex) -> Result<Self, HomologyError> {
        if let Some(s) = y.first_missing_from(&x) {
            return Err(HomologyError::NotSubcomplex(s));
        }
        Ok(Pair { x, y })
    }

    /// `(X, ∅)`
    pub fn absolute(x: SimplicialComplex) -> Self {
        Pair { x, y: SimplicialComplex::empty() }
    }

    pub fn x(&self) -> &SimplicialComplex {
        &self.x
    }

    pub fn y(&self) -> &SimplicialComplex {
        &self.y
    }

    /// Simplices of `X` outside `Y` in degree `k`: the relative chain basis.
    pub fn relative_simplices(&self, k: usize) -> Vec<Simplex> {
        self.x.simplices(k).filter(|s| !self.y.contains(s)).cloned().collect()
    }

    pub fn is_subpair_of(&self, other: &Pair) -> bool {
        self.x.is_subcomplex_of(&other.x) && self.y.is_subcomplex_of(&other.y)
    }
}
