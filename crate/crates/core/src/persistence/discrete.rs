use std::collections::BTreeMap;

use num::BigInt;

use crate::linalg::{Matrix, Rational};
use crate::poset::FinitePoset;

use super::barcode::{barcode_1d, rank_invariant, Barcode};
use super::{ModuleMorphism, PersistenceError, PersistenceModule};

/// The chain `-1 < 0 < ... < count - 1` labeled by those integers.
pub fn integer_chain(count: usize) -> FinitePoset {
    let labels = (-1..count as i64).map(|n| Rational::from_integer(BigInt::from(n))).collect();
    FinitePoset::labeled_chain(labels).expect("integers increase")
}

fn chain_labels(m: &PersistenceModule) -> Result<Vec<Rational>, PersistenceError> {
    crate::filtration::chain_labels(m.index()).map_err(|_| PersistenceError::NotAChain)
}

/// Positions where the module changes: the first label when it is nonzero
/// there, and every label entered by a non-invertible cover map.
pub fn module_criticals(m: &PersistenceModule) -> Result<Vec<usize>, PersistenceError> {
    let n = chain_labels(m)?.len();
    let mut out = Vec::new();
    if n > 0 && m.dim(0) > 0 {
        out.push(0);
    }
    for i in 1..n {
        let map = &m.cover_maps()[&(i - 1, i)];
        if m.dim(i - 1) != m.dim(i) || map.rank() < m.dim(i) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Finite-type check over a labeled chain together with the critical labels.
/// The check confirms that the barcode read off the rank invariant
/// reproduces every rank, i.e. the module is a sum of its interval modules.
pub fn is_finite_type_and_tame(m: &PersistenceModule) -> Result<(bool, Vec<Rational>), PersistenceError> {
    let labels = chain_labels(m)?;
    let barcode = barcode_1d(m, 0, true)?;
    let ranks = rank_invariant(m);
    let decomposes = ranks.ranks.iter().all(|(&(a, b), &r)| barcode.count_containing(&labels[a], &labels[b]) == r);
    let criticals = module_criticals(m)?.into_iter().map(|p| labels[p].clone()).collect();
    Ok((decomposes, criticals))
}

/// Integer-indexed module sampled at the module's own critical labels.
pub fn discretize_z(m: &PersistenceModule) -> Result<PersistenceModule, PersistenceError> {
    let positions = module_criticals(m)?;
    discretize_z_on(m, &positions)
}

/// Integer-indexed module sampled at `positions` `p_0 < ... < p_M`, which must
/// include every critical position: index `n` carries `M(p_n)`, index `-1`
/// is zero, and the module is constant beyond both ends.
pub fn discretize_z_on(m: &PersistenceModule, positions: &[usize]) -> Result<PersistenceModule, PersistenceError> {
    let n = chain_labels(m)?.len();
    if positions.windows(2).any(|w| w[0] >= w[1]) || positions.iter().any(|&p| p >= n) {
        return Err(PersistenceError::Inconsistent("sample positions must increase within the chain".into()));
    }
    if let Some(c) = module_criticals(m)?.into_iter().find(|c| !positions.contains(c)) {
        return Err(PersistenceError::Inconsistent(format!("critical position {c} is not sampled")));
    }
    let f = m.field();
    let mut dims = vec![0];
    dims.extend(positions.iter().map(|&p| m.dim(p)));
    let mut maps = BTreeMap::new();
    if let Some(&first) = positions.first() {
        maps.insert((0, 1), Matrix::zeros(f, m.dim(first), 0));
    }
    for (i, w) in positions.windows(2).enumerate() {
        maps.insert((i + 1, i + 2), m.structure_map(w[0], w[1])?);
    }
    Ok(PersistenceModule::new_unchecked(integer_chain(positions.len()), dims, maps, f))
}

/// Components of a morphism at the sampled positions, zero at `-1`.
pub fn discretize_morphism(f: &ModuleMorphism, positions: &[usize]) -> ModuleMorphism {
    let field = f.components.first().map(Matrix::field).unwrap_or_default();
    let mut components = vec![Matrix::zeros(field, 0, 0)];
    components.extend(positions.iter().map(|&p| f.components[p].clone()));
    ModuleMorphism { components }
}

/// Real-indexed module on the barcode's endpoints carrying the spaces and
/// maps of `fz`, after checking that `fz` has the barcode's ranks.
pub fn reconstruct_r(fz: &PersistenceModule, barcode: &Barcode) -> Result<PersistenceModule, PersistenceError> {
    let criticals = barcode.endpoints();
    let m = criticals.len();
    if fz.index().len() != m + 1 {
        return Err(PersistenceError::Inconsistent(format!(
            "{} integer indices for {m} critical values",
            fz.index().len()
        )));
    }
    if fz.dim(0) != 0 {
        return Err(PersistenceError::Inconsistent("module is nonzero below the first critical value".into()));
    }
    let ranks = rank_invariant(fz);
    for a in 0..m {
        for b in a..m {
            let expected = barcode.count_containing(&criticals[a], &criticals[b]);
            if ranks.get(a + 1, b + 1) != Some(expected) {
                return Err(PersistenceError::Inconsistent(format!(
                    "rank from index {a} to {b} is {:?}, barcode gives {expected}",
                    ranks.get(a + 1, b + 1)
                )));
            }
        }
    }
    let index = FinitePoset::labeled_chain(criticals).expect("endpoints are sorted and distinct");
    let dims = fz.dims()[1..].to_vec();
    let maps = (1..m).map(|i| ((i - 1, i), fz.cover_maps()[&(i, i + 1)].clone())).collect();
    PersistenceModule::new(index, dims, maps, fz.field())
}
