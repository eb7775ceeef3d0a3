use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use rayon::prelude::*;

use crate::filtration::FilteredPair;
use crate::linalg::{format_rational, FieldSpec, Rational, Scalar};
use crate::simplicial::Simplex;

use super::{PersistenceError, PersistenceModule};

/// Right endpoint of a bar; finite deaths sort before `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(q) => write!(f, "{}", format_rational(q)),
            Death::Infinite => write!(f, "inf"),
        }
    }
}

/// Half-open interval `[birth, death)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub birth: Rational,
    pub death: Death,
}

impl Bar {
    pub fn new(birth: Rational, death: Death) -> Self {
        Bar { birth, death }
    }

    pub fn finite(birth: Rational, death: Rational) -> Self {
        Bar { birth, death: Death::Finite(death) }
    }

    pub fn infinite(birth: Rational) -> Self {
        Bar { birth, death: Death::Infinite }
    }

    /// Whether `[s, s2] ⊆ [birth, death)`.
    pub fn contains(&self, s: &Rational, s2: &Rational) -> bool {
        &self.birth <= s
            && match &self.death {
                Death::Finite(d) => s2 < d,
                Death::Infinite => true,
            }
    }
}

/// Multiset of bars in one degree, kept sorted by `(birth, death)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Barcode {
    pub degree: usize,
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(degree: usize, mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { degree, bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars containing `[s, s2]`.
    pub fn count_containing(&self, s: &Rational, s2: &Rational) -> usize {
        self.bars.iter().filter(|b| b.contains(s, s2)).count()
    }

    /// Finite endpoints, sorted and without repeats.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .bars
            .iter()
            .flat_map(|b| {
                let death = match &b.death {
                    Death::Finite(d) => Some(d.clone()),
                    Death::Infinite => None,
                };
                std::iter::once(b.birth.clone()).chain(death)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Ranks of all structure maps `M(a) -> M(b)`, `a <= b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankInvariant {
    pub ranks: BTreeMap<(usize, usize), usize>,
}

impl RankInvariant {
    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.ranks.get(&(a, b)).copied()
    }
}

pub fn rank_invariant(m: &PersistenceModule) -> RankInvariant {
    let ranks = (0..m.index().len())
        .into_par_iter()
        .flat_map_iter(|a| m.maps_from(a).into_iter().map(move |(b, map)| ((a, b), map.rank())))
        .collect();
    RankInvariant { ranks }
}

fn chain_labels(m: &PersistenceModule) -> Result<Vec<Rational>, PersistenceError> {
    crate::filtration::chain_labels(m.index()).map_err(|_| PersistenceError::NotAChain)
}

/// Interval decomposition of a module over a labeled chain, read off the
/// rank invariant by inclusion-exclusion. Classes alive at the last label
/// die at infinity when `unbounded_above` holds, and at the last label
/// otherwise.
pub fn barcode_1d(m: &PersistenceModule, degree: usize, unbounded_above: bool) -> Result<Barcode, PersistenceError> {
    let labels = chain_labels(m)?;
    let n = labels.len();
    let ri = rank_invariant(m);
    // r(i, j) with i in -1..n and j in 0..=n, zero off the chain
    let r = |i: isize, j: usize| -> isize {
        if i < 0 || j >= n || i as usize > j {
            0
        } else {
            ri.get(i as usize, j).expect("comparable pair") as isize
        }
    };
    let mut bars = Vec::new();
    for i in 0..n {
        for j in i + 1..=n {
            let count = r(i as isize, j - 1) - r(i as isize - 1, j - 1) - r(i as isize, j) + r(i as isize - 1, j);
            debug_assert!(count >= 0, "inclusion-exclusion is nonnegative");
            let death = if j < n {
                Death::Finite(labels[j].clone())
            } else if unbounded_above {
                Death::Infinite
            } else if i + 1 < n {
                Death::Finite(labels[n - 1].clone())
            } else {
                continue;
            };
            for _ in 0..count {
                bars.push(Bar::new(labels[i].clone(), death.clone()));
            }
        }
    }
    Ok(Barcode::new(degree, bars))
}

/// Barcode of a chain-indexed filtration by column reduction of the relative
/// boundary matrix, simplices ordered by entry, dimension, then
/// lexicographically.
pub fn filtration_barcode(
    fp: &FilteredPair,
    k: usize,
    field: FieldSpec,
    unbounded_above: bool,
) -> Result<Barcode, PersistenceError> {
    let labels = fp.chain_labels()?;
    let entry_of = |s: &Simplex| fp.entry(s).expect("every simplex has an entry")[0];
    let mut order: Vec<&Simplex> = fp.pair().x().iter().filter(|s| !fp.pair().y().contains(s)).collect();
    order.sort_by(|a, b| (entry_of(a), a.dim(), *a).cmp(&(entry_of(b), b.dim(), *b)));
    let position: BTreeMap<&Simplex, usize> = order.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    let mut columns: Vec<BTreeMap<usize, Scalar>> = order
        .iter()
        .map(|s| {
            s.faces()
                .filter_map(|(i, face)| {
                    let row = *position.get(&face)?;
                    Some((row, field.from_i64(if i % 2 == 0 { 1 } else { -1 })))
                })
                .collect()
        })
        .collect();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut killed = vec![false; order.len()];
    let mut bars = Vec::new();
    for j in 0..columns.len() {
        while let Some((&low, coeff)) = columns[j].iter().next_back() {
            let Some(&other) = owner.get(&low) else { break };
            let factor = field.div(coeff, &columns[other][&low]).expect("pivot is nonzero");
            let pivot_col = columns[other].clone();
            let col = &mut columns[j];
            for (row, v) in pivot_col {
                let updated = field.sub(col.get(&row).unwrap_or(&field.zero()), &field.mul(&factor, &v));
                if field.is_zero(&updated) {
                    col.remove(&row);
                } else {
                    col.insert(row, updated);
                }
            }
        }
        if let Some((&low, _)) = columns[j].iter().next_back() {
            owner.insert(low, j);
            killed[low] = true;
            if order[low].dim() == k && entry_of(order[low]) != entry_of(order[j]) {
                bars.push(Bar::finite(labels[entry_of(order[low])].clone(), labels[entry_of(order[j])].clone()));
            }
        }
    }
    for (i, s) in order.iter().enumerate() {
        if s.dim() == k && columns[i].is_empty() && !killed[i] {
            let death = if unbounded_above { Death::Infinite } else { Death::Finite(labels[labels.len() - 1].clone()) };
            if death != Death::Finite(labels[entry_of(s)].clone()) {
                bars.push(Bar::new(labels[entry_of(s)].clone(), death));
            }
        }
    }
    Ok(Barcode::new(k, bars))
}

/// Result of [`compare_barcodes`]; `bottleneck` is `None` for infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarcodeComparison {
    pub equal: bool,
    pub bottleneck: Option<Rational>,
}

enum Cost {
    Finite(Rational),
    Infinite,
}

fn bar_cost(a: &Bar, b: &Bar) -> Cost {
    let births = (&a.birth - &b.birth).abs();
    match (&a.death, &b.death) {
        (Death::Infinite, Death::Infinite) => Cost::Finite(births),
        (Death::Finite(x), Death::Finite(y)) => Cost::Finite(births.max((x - y).abs())),
        _ => Cost::Infinite,
    }
}

fn diagonal_cost(a: &Bar) -> Cost {
    match &a.death {
        Death::Finite(d) => Cost::Finite((d - &a.birth) / Rational::from_integer(2.into())),
        Death::Infinite => Cost::Infinite,
    }
}

fn within(c: &Cost, delta: &Rational) -> bool {
    matches!(c, Cost::Finite(x) if x <= delta)
}

/// Kuhn's augmenting-path matching; true when every left vertex is matched.
fn has_perfect_matching(adjacency: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], matched: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if matched[v].is_none_or(|w| augment(w, adj, seen, matched)) {
                    matched[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut matched = vec![None; right];
    (0..adjacency.len()).all(|u| augment(u, adjacency, &mut vec![false; right], &mut matched))
}

/// Multiset equality and exact bottleneck distance with diagonal padding.
pub fn compare_barcodes(a: &Barcode, b: &Barcode) -> BarcodeComparison {
    let equal = a.bars == b.bars;
    let (x, y) = (&a.bars, &b.bars);
    let (n, m) = (x.len(), y.len());
    let mut candidates = vec![Rational::zero()];
    for p in x {
        for q in y {
            if let Cost::Finite(c) = bar_cost(p, q) {
                candidates.push(c);
            }
        }
    }
    for p in x.iter().chain(y) {
        if let Cost::Finite(c) = diagonal_cost(p) {
            candidates.push(c);
        }
    }
    candidates.sort();
    candidates.dedup();
    // left: bars of a, then diagonal copies of b; right: bars of b, then diagonal copies of a
    let feasible = |delta: &Rational| {
        let mut adj = vec![Vec::new(); n + m];
        for (i, p) in x.iter().enumerate() {
            for (j, q) in y.iter().enumerate() {
                if within(&bar_cost(p, q), delta) {
                    adj[i].push(j);
                }
            }
            if within(&diagonal_cost(p), delta) {
                adj[i].push(m + i);
            }
        }
        for (j, q) in y.iter().enumerate() {
            if within(&diagonal_cost(q), delta) {
                adj[n + j].push(j);
            }
            adj[n + j].extend((0..n).map(|i| m + i));
        }
        has_perfect_matching(&adj, n + m)
    };
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    BarcodeComparison { equal, bottleneck: candidates.get(lo).cloned() }
}
