//! Row reduction kernels.
//!
//! Over the rationals rows are scaled to primitive integer vectors and
//! eliminated fraction-free (`t <- a*t - b*p`, then divided by the row
//! content). Over `Z/p` plain elimination is used. Pivot rows are chosen per
//! column by fewest nonzeros, ties broken by original row order, so dense and
//! sparse storage walk the same pivot sequence.

use num::integer::Integer;
use num::{BigInt, One, Zero};

use super::field::{FieldSpec, Scalar};

pub(crate) trait Lane {
    type E: Clone;

    fn is_zero(&self, e: &Self::E) -> bool;
    /// Returns `(a, b)` with `a * target_lead - b * pivot_lead == 0`.
    fn coefficients(&self, pivot_lead: &Self::E, target_lead: &Self::E) -> (Self::E, Self::E);
    /// `a * t - b * p`
    fn combine(&self, a: &Self::E, t: &Self::E, b: &Self::E, p: &Self::E) -> Self::E;
    fn zero(&self) -> Self::E;
    /// Optional rescaling of a row to keep entries small.
    fn normalize<'a, I: Iterator<Item = &'a mut Self::E>>(&self, _row: I)
    where
        Self::E: 'a,
    {
    }
}

pub(crate) struct IntLane;

pub(crate) struct ModLane(pub u64);

impl Lane for IntLane {
    type E = BigInt;

    fn is_zero(&self, e: &BigInt) -> bool {
        e.is_zero()
    }

    fn coefficients(&self, pivot_lead: &BigInt, target_lead: &BigInt) -> (BigInt, BigInt) {
        let g = pivot_lead.gcd(target_lead);
        (pivot_lead / &g, target_lead / &g)
    }

    fn combine(&self, a: &BigInt, t: &BigInt, b: &BigInt, p: &BigInt) -> BigInt {
        a * t - b * p
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn normalize<'a, I: Iterator<Item = &'a mut BigInt>>(&self, row: I) {
        let entries: Vec<&mut BigInt> = row.collect();
        let mut g = BigInt::zero();
        for e in entries.iter() {
            g = g.gcd(e);
            if g.is_one() {
                return;
            }
        }
        if g.is_zero() || g.is_one() {
            return;
        }
        for e in entries {
            *e = &*e / &g;
        }
    }
}

impl Lane for ModLane {
    type E = u64;

    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }

    fn coefficients(&self, pivot_lead: &u64, target_lead: &u64) -> (u64, u64) {
        let f = FieldSpec::Prime(self.0);
        let b = f.div(&Scalar::Residue(*target_lead), &Scalar::Residue(*pivot_lead)).expect("pivot is nonzero");
        match b {
            Scalar::Residue(b) => (1, b),
            Scalar::Rational(_) => unreachable!(),
        }
    }

    fn combine(&self, a: &u64, t: &u64, b: &u64, p: &u64) -> u64 {
        let m = self.0 as u128;
        let at = (*a as u128 * *t as u128) % m;
        let bp = (*b as u128 * *p as u128) % m;
        ((at + m - bp) % m) as u64
    }

    fn zero(&self) -> u64 {
        0
    }
}

/// Integer row with the same span as the given rational row.
pub(crate) fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for s in row {
        if let Scalar::Rational(q) = s {
            lcm = lcm.lcm(q.denom());
        }
    }
    row.iter()
        .map(|s| match s {
            Scalar::Rational(q) => q.numer() * (&lcm / q.denom()),
            Scalar::Residue(_) => unreachable!("rational lane fed a residue"),
        })
        .collect()
}

pub(crate) fn residue_row(row: &[Scalar]) -> Vec<u64> {
    row.iter()
        .map(|s| match s {
            Scalar::Residue(r) => *r,
            Scalar::Rational(_) => unreachable!("modular lane fed a rational"),
        })
        .collect()
}

/// Echelon form: `rows[i]` has its leading nonzero at `pivots[i]`, pivots
/// strictly increasing.
pub(crate) struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
}

fn leading<L: Lane>(lane: &L, row: &[L::E]) -> Option<usize> {
    row.iter().position(|e| !lane.is_zero(e))
}

fn nnz<L: Lane>(lane: &L, row: &[L::E]) -> usize {
    row.iter().filter(|e| !lane.is_zero(e)).count()
}

fn eliminate_dense<L: Lane>(lane: &L, pivot: &[L::E], target: &mut [L::E], col: usize) {
    let (a, b) = lane.coefficients(&pivot[col], &target[col]);
    for (t, p) in target.iter_mut().zip(pivot.iter()) {
        if lane.is_zero(p) {
            if !lane.is_zero(t) {
                *t = lane.combine(&a, t, &b, &lane.zero());
            }
        } else {
            *t = lane.combine(&a, t, &b, p);
        }
    }
    lane.normalize(target.iter_mut());
}

/// Forward elimination on dense rows.
pub(crate) fn echelon_dense<L: Lane>(lane: &L, mut rows: Vec<Vec<L::E>>) -> Echelon<L::E> {
    let mut remaining: Vec<usize> = (0..rows.len()).filter(|&i| leading(lane, &rows[i]).is_some()).collect();
    let mut out = Echelon { rows: Vec::new(), pivots: Vec::new() };
    while !remaining.is_empty() {
        let col = remaining.iter().filter_map(|&i| leading(lane, &rows[i])).min().expect("remaining rows are nonzero");
        let candidates: Vec<usize> =
            remaining.iter().copied().filter(|&i| leading(lane, &rows[i]) == Some(col)).collect();
        let pivot_idx = *candidates.iter().min_by_key(|&&i| (nnz(lane, &rows[i]), i)).expect("at least one candidate");
        let pivot = std::mem::take(&mut rows[pivot_idx]);
        for &i in &candidates {
            if i != pivot_idx {
                eliminate_dense(lane, &pivot, &mut rows[i], col);
            }
        }
        remaining.retain(|&i| i != pivot_idx && leading(lane, &rows[i]).is_some());
        out.rows.push(pivot);
        out.pivots.push(col);
    }
    out
}

/// Clears every pivot column above its pivot, giving a reduced echelon form
/// up to per-row scaling.
pub(crate) fn back_substitute<L: Lane>(lane: &L, ech: &mut Echelon<L::E>) {
    for i in (0..ech.rows.len()).rev() {
        let col = ech.pivots[i];
        let (upper, lower) = ech.rows.split_at_mut(i);
        let pivot = &lower[0];
        for row in upper.iter_mut() {
            if !lane.is_zero(&row[col]) {
                eliminate_dense(lane, pivot, row, col);
            }
        }
    }
}

pub(crate) type SparseRow<E> = Vec<(usize, E)>;

fn eliminate_sparse<L: Lane>(lane: &L, pivot: &SparseRow<L::E>, target: &SparseRow<L::E>) -> SparseRow<L::E> {
    let (a, b) = lane.coefficients(&pivot[0].1, &target[0].1);
    let zero = lane.zero();
    let mut out = Vec::with_capacity(pivot.len() + target.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let (col, value) = match (target.get(i), pivot.get(j)) {
            (Some((ct, t)), Some((cp, p))) if ct == cp => {
                i += 1;
                j += 1;
                (*ct, lane.combine(&a, t, &b, p))
            }
            (Some((ct, t)), Some((cp, _))) if ct < cp => {
                i += 1;
                (*ct, lane.combine(&a, t, &b, &zero))
            }
            (Some((ct, t)), None) => {
                i += 1;
                (*ct, lane.combine(&a, t, &b, &zero))
            }
            (_, Some((cp, p))) => {
                j += 1;
                (*cp, lane.combine(&a, &zero, &b, p))
            }
            (None, None) => unreachable!(),
        };
        if !lane.is_zero(&value) {
            out.push((col, value));
        }
    }
    lane.normalize(out.iter_mut().map(|(_, e)| e));
    out
}

/// Forward elimination on sparse rows; returns the pivot columns.
pub(crate) fn echelon_sparse<L: Lane>(lane: &L, rows: Vec<SparseRow<L::E>>) -> Vec<usize> {
    let mut rows: Vec<SparseRow<L::E>> = rows;
    let mut remaining: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut pivots = Vec::new();
    while !remaining.is_empty() {
        let col = remaining.iter().map(|&i| rows[i][0].0).min().expect("nonempty");
        let candidates: Vec<usize> = remaining.iter().copied().filter(|&i| rows[i][0].0 == col).collect();
        let pivot_idx = *candidates.iter().min_by_key(|&&i| (rows[i].len(), i)).expect("candidate");
        let pivot = std::mem::take(&mut rows[pivot_idx]);
        for &i in &candidates {
            if i != pivot_idx {
                rows[i] = eliminate_sparse(lane, &pivot, &rows[i]);
            }
        }
        remaining.retain(|&i| i != pivot_idx && !rows[i].is_empty());
        pivots.push(col);
    }
    pivots
}
