use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::filtration::{critical_values, FilteredPair};
use crate::linalg::{FieldSpec, Matrix, Rational, Scalar};
use crate::simplicial::{inclusion_between, HomologyBasis, HomologyResult};

use super::discrete::integer_chain;
use super::{PersistenceError, PersistenceModule};

/// Degree-`k` homology of every sub-pair of a filtration, with the chosen
/// bases kept so that ranges and connecting maps can be expressed in them.
#[derive(Clone, Debug)]
pub struct HomologyFamily {
    pub degree: usize,
    pub bases: Vec<HomologyBasis>,
    pub module: PersistenceModule,
}

pub fn homology_family(fp: &FilteredPair, k: usize, field: FieldSpec) -> Result<HomologyFamily, PersistenceError> {
    let index = fp.index();
    let bases: Vec<HomologyBasis> = (0..index.len())
        .into_par_iter()
        .map(|s| fp.sub_pair(s).map(|pair| HomologyBasis::compute(&pair, k, field)))
        .collect::<Result<_, _>>()?;
    let maps: BTreeMap<(usize, usize), Matrix> =
        index.covers().into_par_iter().map(|(a, b)| ((a, b), inclusion_between(&bases[a], &bases[b]))).collect();
    let dims = bases.iter().map(HomologyBasis::rank).collect();
    // inclusions compose, so path independence holds without re-checking
    let module = PersistenceModule::new_unchecked(index.clone(), dims, maps, field);
    Ok(HomologyFamily { degree: k, bases, module })
}

/// `s -> H_k(X_s, Y_s)` with the maps induced by the sublevel inclusions.
pub fn module_from_filtration(
    fp: &FilteredPair,
    k: usize,
    field: FieldSpec,
) -> Result<PersistenceModule, PersistenceError> {
    Ok(homology_family(fp, k, field)?.module)
}

/// Basis of the image of `H(s) -> H(s')` as coordinate columns in the
/// homology basis at `s'`.
pub fn range_coordinates(family: &HomologyFamily, s: usize, s2: usize) -> Result<Matrix, PersistenceError> {
    let m = family.module.structure_map(s, s2)?;
    let image = m.image_basis();
    Ok(Matrix::from_columns(m.field(), m.rows(), &image))
}

/// Rank and representative cycles of the image of
/// `H_k(X_s, Y_s) -> H_k(X_s', Y_s')`.
pub fn persistent_range(
    fp: &FilteredPair,
    k: usize,
    s: usize,
    s2: usize,
    field: FieldSpec,
) -> Result<HomologyResult, PersistenceError> {
    let index = fp.index();
    if s >= index.len() || s2 >= index.len() || !index.leq(s, s2) {
        return Err(PersistenceError::IncomparableIndices(s, s2));
    }
    let source = HomologyBasis::compute(&fp.sub_pair(s)?, k, field);
    let target = HomologyBasis::compute(&fp.sub_pair(s2)?, k, field);
    let inclusion = inclusion_between(&source, &target);
    let reps = target.representatives();
    let chains = target.chain_basis();
    let cycle_basis = inclusion
        .image_basis()
        .into_iter()
        .map(|coords| {
            let mut v = vec![field.zero(); chains.len()];
            for (c, rep) in coords.iter().zip(reps) {
                for (acc, x) in v.iter_mut().zip(rep) {
                    *acc = field.add(acc, &field.mul(c, x));
                }
            }
            chains
                .iter()
                .zip(v)
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(s, c)| (s.clone(), c))
                .collect::<Vec<(_, Scalar)>>()
        })
        .collect::<Vec<_>>();
    Ok(HomologyResult { degree: k, rank: cycle_basis.len(), cycle_basis })
}

/// Where a shift `λ` from grid position `pos` lands on a labeled chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSnap {
    pub position: usize,
    /// `labels[position] - labels[pos]`, the realized shift.
    pub realized: Rational,
    pub exact: bool,
}

/// Largest label not above `labels[pos] + λ`, clamped to the last label.
pub fn snap_shift(labels: &[Rational], pos: usize, lambda: &Rational) -> ShiftSnap {
    let goal = &labels[pos] + lambda;
    let position = labels.iter().rposition(|l| l <= &goal).unwrap_or(pos).max(pos);
    let realized = &labels[position] - &labels[pos];
    ShiftSnap { exact: &realized == lambda, position, realized }
}

/// True iff for every grid position `t` and every degree `j != k`, the range
/// of `H_j(t) -> H_j(t + λ)` vanishes. `steps` is the shift in grid steps;
/// targets past the last label are clamped.
pub fn is_good_vertex(fp: &FilteredPair, k: usize, steps: usize, field: FieldSpec) -> Result<bool, PersistenceError> {
    let n = fp.chain_labels()?.len();
    let top = fp.pair().x().dim().unwrap_or(0);
    for j in (0..=top).filter(|&j| j != k) {
        let family = homology_family(fp, j, field)?;
        for t in 0..n {
            if family.module.structure_map(t, (t + steps).min(n - 1))?.rank() > 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The integer-indexed module built directly from the filtration: homology
/// at each critical value, inclusions between consecutive ones, and zero at
/// index `-1`.
pub fn sample_filtration_z(
    fp: &FilteredPair,
    k: usize,
    field: FieldSpec,
) -> Result<PersistenceModule, PersistenceError> {
    let labels = fp.chain_labels()?;
    let criticals = critical_values(fp)?;
    let positions: Vec<usize> =
        criticals.iter().map(|c| labels.iter().position(|l| l == c).expect("criticals are labels")).collect();
    let bases: Vec<HomologyBasis> = positions
        .par_iter()
        .map(|&p| fp.sub_pair(p).map(|pair| HomologyBasis::compute(&pair, k, field)))
        .collect::<Result<_, _>>()?;
    let mut dims = vec![0];
    dims.extend(bases.iter().map(HomologyBasis::rank));
    let mut maps = BTreeMap::new();
    maps.insert((0, 1), Matrix::zeros(field, dims[1], 0));
    for n in 1..bases.len() {
        maps.insert((n, n + 1), inclusion_between(&bases[n - 1], &bases[n]));
    }
    let index = integer_chain(bases.len());
    if bases.is_empty() {
        maps.clear();
    }
    Ok(PersistenceModule::new_unchecked(index, dims, maps, field))
}
