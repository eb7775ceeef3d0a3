use std::collections::{BTreeMap, VecDeque};

use super::{sublevel_filtration, FilteredPair, FiltrationError};
use crate::poset::FinitePoset;
use crate::simplicial::{Pair, SimplicialComplex};

/// Directed graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DiGraph {
    fn check(&self) -> Result<(), FiltrationError> {
        match self.edges.iter().flat_map(|&(a, b)| [a, b]).find(|&v| v >= self.n) {
            Some(v) => Err(FiltrationError::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            out[a].push(b);
        }
        out
    }

    /// `parent[v]` on a BFS tree from `root`; `usize::MAX` when unreachable.
    fn bfs_tree(&self, succ: &[Vec<usize>], root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &succ[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    /// Reachability order, or a directed cycle witnessing its failure.
    pub fn reachability(&self) -> Result<FinitePoset, FiltrationError> {
        self.check()?;
        let succ = self.successors();
        let trees: Vec<Vec<usize>> = (0..self.n).map(|r| self.bfs_tree(&succ, r)).collect();
        let path = |from: usize, to: usize| {
            let mut p = vec![to];
            let mut cur = to;
            while cur != from {
                cur = trees[from][cur];
                p.push(cur);
            }
            p.reverse();
            p
        };
        for u in 0..self.n {
            for v in u + 1..self.n {
                if trees[u][v] != usize::MAX && trees[v][u] != usize::MAX {
                    let mut cycle = path(u, v);
                    cycle.extend(&path(v, u)[1..]);
                    return Err(FiltrationError::CyclicBase(cycle));
                }
            }
        }
        Ok(FinitePoset::validate(self.n, |a, b| trees[a][b] != usize::MAX)?)
    }
}

/// A graph `g` over a base graph `h` via a vertex labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFamily {
    pub g: DiGraph,
    pub h: DiGraph,
    pub label: Vec<usize>,
}

/// Filtration of `g`, as a 1-complex, over the reachability poset of `h`: at
/// `v` it keeps the vertices `w` with `label(w) <= v` and the edges between
/// them. Edge directions, loops and parallel edges do not affect the complex.
pub fn graph_sublevel_family(fam: &GraphFamily) -> Result<FilteredPair, FiltrationError> {
    fam.g.check()?;
    if fam.label.len() != fam.g.n {
        return Err(FiltrationError::UnmappedVertex(fam.label.len().min(fam.g.n)));
    }
    if let Some(&v) = fam.label.iter().find(|&&v| v >= fam.h.n) {
        return Err(FiltrationError::UnknownVertex(v));
    }
    let index = fam.h.reachability()?;
    let mut x = SimplicialComplex::from_maximal((0..fam.g.n).map(|v| vec![v]));
    for &(a, b) in fam.g.edges.iter().filter(|(a, b)| a != b) {
        x.insert_closed(vec![a, b].into());
    }
    let f: BTreeMap<usize, usize> = fam.label.iter().copied().enumerate().collect();
    sublevel_filtration(Pair::absolute(x), &f, index)
}
