use std::collections::{BTreeMap, HashMap};

use crate::linalg::{FieldSpec, Matrix, Scalar};

use super::chains::{index_of, relative_boundary_matrix, ChainComplex};
use super::complex::{Pair, Simplex, SimplicialComplex};
use super::HomologyError;

/// A chain as sparse `(simplex, coefficient)` terms.
pub type Chain = Vec<(Simplex, Scalar)>;

/// Vertex map of a simplicial map.
pub type VertexMap = BTreeMap<usize, usize>;

/// Rank of a homology group with representative cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub degree: usize,
    pub rank: usize,
    pub cycle_basis: Vec<Chain>,
}

/// A chosen basis of `H_k(X, Y)`: representative relative cycles together
/// with a coordinate solver for arbitrary relative cycles.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    degree: usize,
    field: FieldSpec,
    chains: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    boundaries: Vec<Vec<Scalar>>,
    reps: Vec<Vec<Scalar>>,
    // rows of [B | reps] forming an invertible square block, and its inverse
    solver_rows: Vec<usize>,
    solver: Matrix,
}

impl HomologyBasis {
    pub fn compute(pair: &Pair, k: usize, field: FieldSpec) -> Self {
        let chains = pair.relative_simplices(k);
        let n = chains.len();
        let dk = relative_boundary_matrix(pair, k, field);
        let dk1 = relative_boundary_matrix(pair, k + 1, field);
        let cycles = dk.nullspace_basis();
        let boundaries = dk1.image_basis();
        // extend the boundary basis to a cycle basis, keeping the first
        // independent cycles in nullspace order
        let mut columns = boundaries.clone();
        columns.extend(cycles.iter().cloned());
        let pivots = Matrix::from_columns(field, n, &columns).pivot_columns();
        let b = boundaries.len();
        let reps: Vec<Vec<Scalar>> = pivots.iter().filter(|&&p| p >= b).map(|&p| columns[p].clone()).collect();

        let mut basis = boundaries.clone();
        basis.extend(reps.iter().cloned());
        let full = Matrix::from_columns(field, n, &basis);
        let solver_rows = full.transpose().pivot_columns();
        let solver = full.select_rows(&solver_rows).inverse().expect("independent columns give an invertible block");
        HomologyBasis { degree: k, field, index: index_of(&chains), chains, boundaries, reps, solver_rows, solver }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// The relative chain basis (simplices of `X \ Y` in degree `k`).
    pub fn chain_basis(&self) -> &[Simplex] {
        &self.chains
    }

    pub fn chain_index(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Representative cycles as coefficient vectors over [`Self::chain_basis`].
    pub fn representatives(&self) -> &[Vec<Scalar>] {
        &self.reps
    }

    pub fn representative_chains(&self) -> Vec<Chain> {
        self.reps
            .iter()
            .map(|v| {
                self.chains
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !self.field.is_zero(c))
                    .map(|(s, c)| (s.clone(), c.clone()))
                    .collect()
            })
            .collect()
    }

    /// Homology coordinates of a relative cycle, or `None` if the vector is
    /// not a cycle.
    pub fn coordinates(&self, cycle: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = self.field;
        let picked: Vec<Scalar> = self.solver_rows.iter().map(|&r| cycle[r].clone()).collect();
        let all = self.solver.apply(&picked);
        // verify: B * all[..b] + reps * all[b..] == cycle
        let mut check = vec![f.zero(); cycle.len()];
        for (col, c) in self.boundaries.iter().chain(&self.reps).zip(&all) {
            if f.is_zero(c) {
                continue;
            }
            for (acc, v) in check.iter_mut().zip(col) {
                *acc = f.add(acc, &f.mul(v, c));
            }
        }
        if check.as_slice() != cycle {
            return None;
        }
        Some(all[self.boundaries.len()..].to_vec())
    }

    fn result(&self) -> HomologyResult {
        HomologyResult { degree: self.degree, rank: self.rank(), cycle_basis: self.representative_chains() }
    }
}

/// Pushes a relative chain of `source` along a vertex map into the chain
/// coordinates of `target`; degenerate images and images in the target's
/// subcomplex vanish.
fn push_chain(
    source: &HomologyBasis,
    chain: &[Scalar],
    target: &HomologyBasis,
    map: &dyn Fn(usize) -> usize,
) -> Result<Vec<Scalar>, HomologyError> {
    let f = source.field;
    let mut out = vec![f.zero(); target.chains.len()];
    for (s, c) in source.chains.iter().zip(chain) {
        if f.is_zero(c) {
            continue;
        }
        let Some((image, positive)) = s.image(map) else {
            continue;
        };
        if let Some(j) = target.chain_index(&image) {
            let term = if positive { c.clone() } else { f.neg(c) };
            out[j] = f.add(&out[j], &term);
        }
    }
    Ok(out)
}

/// Matrix of the map on homology induced by `map` between two precomputed
/// bases. The caller guarantees the map is simplicial on pairs.
pub fn map_between(
    source: &HomologyBasis,
    target: &HomologyBasis,
    map: &dyn Fn(usize) -> usize,
) -> Result<Matrix, HomologyError> {
    let columns: Vec<Vec<Scalar>> = source
        .reps
        .iter()
        .map(|z| {
            let pushed = push_chain(source, z, target, map)?;
            target.coordinates(&pushed).ok_or(HomologyError::NotAChainMap)
        })
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_columns(source.field, target.rank(), &columns))
}

/// Matrix of the map induced by an inclusion of pairs.
pub fn inclusion_between(source: &HomologyBasis, target: &HomologyBasis) -> Matrix {
    map_between(source, target, &|v| v).expect("inclusions are chain maps")
}

pub fn homology(x: &SimplicialComplex, k: usize, field: FieldSpec) -> HomologyResult {
    relative_homology(&Pair::absolute(x.clone()), k, field)
}

/// Homology of the quotient complex `C(X) / C(Y)`.
pub fn relative_homology(pair: &Pair, k: usize, field: FieldSpec) -> HomologyResult {
    HomologyBasis::compute(pair, k, field).result()
}

/// Checks that `map` is simplicial `X -> X'` and sends `Y` into `Y'`.
pub fn check_simplicial_pair_map(map: &VertexMap, source: &Pair, target: &Pair) -> Result<(), HomologyError> {
    for v in source.x().vertices() {
        if !map.contains_key(&v) {
            return Err(HomologyError::UnmappedVertex(v));
        }
    }
    for s in source.x().iter() {
        if !target.x().contains(&s.image_set(|v| map[&v])) {
            return Err(HomologyError::NotSimplicial(s.clone()));
        }
    }
    for s in source.y().iter() {
        if !target.y().contains(&s.image_set(|v| map[&v])) {
            return Err(HomologyError::PairViolation(s.clone()));
        }
    }
    Ok(())
}

/// Matrix of `φ_*: H_k(X, Y) -> H_k(X', Y')` in the bases chosen by
/// [`HomologyBasis::compute`].
pub fn induced_map(
    map: &VertexMap,
    source: &Pair,
    target: &Pair,
    k: usize,
    field: FieldSpec,
) -> Result<Matrix, HomologyError> {
    check_simplicial_pair_map(map, source, target)?;
    let sb = HomologyBasis::compute(source, k, field);
    let tb = HomologyBasis::compute(target, k, field);
    map_between(&sb, &tb, &|v| map[&v])
}

/// Connecting map between precomputed bases of `H_k(X, Y)` and
/// `H_{k-1}(Y, Z)`: lift, take the boundary in `X`, project to `C(Y)/C(Z)`.
pub fn connecting_between(source: &HomologyBasis, target: &HomologyBasis) -> Result<Matrix, HomologyError> {
    let f = source.field;
    let mut columns = Vec::with_capacity(source.rank());
    for z in &source.reps {
        let mut image = vec![f.zero(); target.chains.len()];
        let mut boundary: BTreeMap<Simplex, Scalar> = BTreeMap::new();
        for (s, c) in source.chains.iter().zip(z) {
            if f.is_zero(c) {
                continue;
            }
            for (i, face) in s.faces() {
                let signed = if i % 2 == 0 { c.clone() } else { f.neg(c) };
                let entry = boundary.entry(face).or_insert_with(|| f.zero());
                *entry = f.add(entry, &signed);
            }
        }
        for (face, c) in boundary {
            if let Some(j) = target.chain_index(&face) {
                image[j] = f.add(&image[j], &c);
            }
        }
        columns.push(target.coordinates(&image).ok_or(HomologyError::NotAChainMap)?);
    }
    Ok(Matrix::from_columns(f, target.rank(), &columns))
}

/// Connecting homomorphism `H_k(X, Y) -> H_{k-1}(Y, Z)` of a triple
/// `Z ⊆ Y ⊆ X`. For `k = 0` the target is zero.
pub fn connecting_map(
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    z: &SimplicialComplex,
    k: usize,
    field: FieldSpec,
) -> Result<Matrix, HomologyError> {
    let top = Pair::new(x.clone(), y.clone())?;
    let bottom = Pair::new(y.clone(), z.clone())?;
    let sb = HomologyBasis::compute(&top, k, field);
    if k == 0 {
        return Ok(Matrix::zeros(field, 0, sb.rank()));
    }
    let tb = HomologyBasis::compute(&bottom, k - 1, field);
    connecting_between(&sb, &tb)
}

/// The cellular complex `H_j(X^(j), X^(j-1))` with connecting maps of the
/// skeleton triples as differentials.
pub fn skeletal_chain_complex(x: &SimplicialComplex, field: FieldSpec) -> ChainComplex {
    let top = x.dim().map_or(0, |d| d + 1);
    let skeleton = |j: isize| {
        if j < 0 {
            SimplicialComplex::empty()
        } else {
            x.skeleton(Some(j as usize))
        }
    };
    let bases: Vec<HomologyBasis> = (0..top)
        .map(|j| {
            let pair = Pair::new(skeleton(j as isize), skeleton(j as isize - 1)).expect("skeleta are nested");
            HomologyBasis::compute(&pair, j, field)
        })
        .collect();
    let dims = bases.iter().map(HomologyBasis::rank).collect();
    let boundaries = (0..top)
        .map(|j| {
            if j == 0 {
                Matrix::zeros(field, 0, bases[0].rank())
            } else {
                connecting_between(&bases[j], &bases[j - 1]).expect("skeleton triples have connecting maps")
            }
        })
        .collect();
    ChainComplex::new(field, dims, boundaries).expect("connecting maps square to zero")
}
