use super::field::FieldSpec;
use super::matrix::Matrix;
use super::sparse::SparseMatrix;

/// A linear constraint `φ[to] · source_map = target_map · φ[from]` on a tuple
/// of blocks `φ[v]: S_v -> T_v`.
#[derive(Clone, Copy, Debug)]
pub struct Intertwining<'a> {
    pub from: usize,
    pub to: usize,
    /// `S_from -> S_to`
    pub source_map: &'a Matrix,
    /// `T_from -> T_to`
    pub target_map: &'a Matrix,
}

/// Basis of the space of block tuples `φ[v]` (each `target_dims[v] x
/// source_dims[v]`) satisfying every constraint. Unknowns are ordered block by
/// block, row-major inside a block, so the basis is deterministic.
pub fn intertwiner_basis(
    field: FieldSpec,
    source_dims: &[usize],
    target_dims: &[usize],
    constraints: &[Intertwining<'_>],
) -> Vec<Vec<Matrix>> {
    assert_eq!(source_dims.len(), target_dims.len(), "one source and target space per block");
    let mut offsets = Vec::with_capacity(source_dims.len() + 1);
    let mut total = 0;
    for (s, t) in source_dims.iter().zip(target_dims) {
        offsets.push(total);
        total += s * t;
    }
    let var = |v: usize, i: usize, j: usize| offsets[v] + i * source_dims[v] + j;

    let equations: usize = constraints.iter().map(|c| target_dims[c.to] * source_dims[c.from]).sum();
    let mut system = SparseMatrix::new(field, equations, total);
    let mut row = 0;
    for c in constraints {
        let (s_from, s_to, t_from, t_to) =
            (source_dims[c.from], source_dims[c.to], target_dims[c.from], target_dims[c.to]);
        assert_eq!(c.source_map.shape(), (s_to, s_from), "source map shape");
        assert_eq!(c.target_map.shape(), (t_to, t_from), "target map shape");
        for i in 0..t_to {
            for j in 0..s_from {
                // (φ_to A)_{ij} - (B φ_from)_{ij}
                let mut terms: Vec<(usize, super::Scalar)> = Vec::new();
                for k in 0..s_to {
                    let a = c.source_map.get(k, j);
                    if !field.is_zero(a) {
                        terms.push((var(c.to, i, k), a.clone()));
                    }
                }
                for k in 0..t_from {
                    let b = c.target_map.get(i, k);
                    if !field.is_zero(b) {
                        terms.push((var(c.from, k, j), field.neg(b)));
                    }
                }
                terms.sort_by_key(|(v, _)| *v);
                let mut merged: Vec<(usize, super::Scalar)> = Vec::new();
                for (v, x) in terms {
                    match merged.last_mut() {
                        Some((w, y)) if *w == v => *y = field.add(y, &x),
                        _ => merged.push((v, x)),
                    }
                }
                for (v, x) in merged {
                    system.insert(row, v, x);
                }
                row += 1;
            }
        }
    }
    system
        .to_dense()
        .nullspace_basis()
        .into_iter()
        .map(|sol| {
            (0..source_dims.len())
                .map(|v| {
                    let (t, s) = (target_dims[v], source_dims[v]);
                    let entries = (0..t).map(|i| (0..s).map(|j| sol[var(v, i, j)].clone()).collect()).collect();
                    Matrix::from_rows(field, s, entries).expect("block shape")
                })
                .collect()
        })
        .collect()
}

/// Flattens a block tuple into one coordinate vector in the unknown order
/// used by [`intertwiner_basis`].
pub fn flatten_blocks(blocks: &[Matrix]) -> Vec<super::Scalar> {
    blocks.iter().flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).to_vec())).collect()
}
