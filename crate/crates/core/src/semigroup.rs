//! Finite semigroups given by multiplication tables, their idempotents, and
//! the Mitsch and Nambooripad natural partial orders.
//!
//! The Mitsch order is defined on any semigroup through the unitization
//! `Ŝ`: `s <= t` iff `s = x t = t y` and `x s = s` for some `x, y` in `Ŝ`.
//! The Nambooripad order uses idempotent witnesses only,
//! `s <= t` iff `s = e t = t f` with `e, f` idempotent, and is only a
//! partial order under extra hypotheses, so it is validated before use.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::poset::{FinitePoset, Label, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("product {i}*{j} = {value} is outside 0..{n}")]
    OutOfRange { i: usize, j: usize, value: usize, n: usize },
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("semigroup has no idempotents")]
    NoIdempotents,
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(PosetError),
    #[error("unknown element {0}")]
    UnknownElement(usize),
    #[error("sublevel of {elem}: downset {downset:?} differs from E*s ∩ s*E = {formula:?}")]
    SublevelMismatch { elem: usize, downset: Vec<usize>, formula: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    table: Vec<Vec<usize>>,
    unit: Option<usize>,
}

/// Element of the unitization `Ŝ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HatElement {
    Element(usize),
    /// The unit adjoined when the semigroup has none of its own.
    AdjoinedUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Mitsch,
    Nambooripad,
}

/// A natural order together with, for each related pair `(s, t)`, the first
/// witnesses found.
#[derive(Clone, Debug)]
pub struct NaturalOrder {
    pub kind: OrderKind,
    pub poset: FinitePoset,
    pub witnesses: BTreeMap<(usize, usize), (HatElement, HatElement)>,
}

impl FiniteSemigroup {
    /// Validates shape, range and associativity (exhaustively).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, SemigroupError> {
        let n = table.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::Ragged { row: i, expected: n, found: row.len() });
            }
            for (j, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(SemigroupError::OutOfRange { i, j, value, n });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = table[i][j];
                for k in 0..n {
                    if table[ij][k] != table[i][table[j][k]] {
                        return Err(SemigroupError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        let unit = (0..n).find(|&u| (0..n).all(|x| table[u][x] == x && table[x][u] == x));
        Ok(FiniteSemigroup { table, unit })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    fn hat_mul(&self, a: HatElement, b: HatElement) -> HatElement {
        match (a, b) {
            (HatElement::AdjoinedUnit, x) | (x, HatElement::AdjoinedUnit) => x,
            (HatElement::Element(a), HatElement::Element(b)) => HatElement::Element(self.mul(a, b)),
        }
    }

    fn hat_elements(&self) -> Vec<HatElement> {
        let mut out: Vec<HatElement> = (0..self.len()).map(HatElement::Element).collect();
        if self.unit.is_none() {
            out.push(HatElement::AdjoinedUnit);
        }
        out
    }

    /// `{e : e*e = e}`
    pub fn idempotents(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&e| self.mul(e, e) == e).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Every element has some `x` with `s x s = s`.
    pub fn is_regular(&self) -> bool {
        (0..self.len()).all(|s| (0..self.len()).any(|x| self.mul(self.mul(s, x), s) == s))
    }

    pub fn idempotents_form_subsemigroup(&self) -> bool {
        let e = self.idempotents();
        e.iter().all(|&a| e.iter().all(|&b| e.contains(&self.mul(a, b))))
    }

    /// The semigroup itself when it already has a unit; otherwise a copy with
    /// a new two-sided identity appended as element `len()`.
    pub fn adjoin_unit(&self) -> FiniteSemigroup {
        if self.unit.is_some() {
            return self.clone();
        }
        let n = self.len();
        let mut table: Vec<Vec<usize>> = self
            .table
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.push(i);
                r
            })
            .collect();
        table.push((0..=n).collect());
        FiniteSemigroup { table, unit: Some(n) }
    }

    fn labels(&self) -> Vec<Label> {
        (0..self.len()).map(|i| Label::Int(i as i64)).collect()
    }

    fn build_order(
        &self,
        kind: OrderKind,
        witnesses: BTreeMap<(usize, usize), (HatElement, HatElement)>,
    ) -> Result<NaturalOrder, SemigroupError> {
        let poset = FinitePoset::validate(self.len(), |a, b| witnesses.contains_key(&(a, b)))
            .map_err(SemigroupError::NotAPartialOrder)?
            .with_labels(self.labels())
            .expect("one label per element");
        Ok(NaturalOrder { kind, poset, witnesses })
    }

    /// The Mitsch natural partial order. Always a partial order; the
    /// validation error path is kept as an internal consistency check.
    pub fn mitsch_order(&self) -> Result<NaturalOrder, SemigroupError> {
        let hat = self.hat_elements();
        let mut witnesses = BTreeMap::new();
        for s in 0..self.len() {
            let hs = HatElement::Element(s);
            for t in 0..self.len() {
                let ht = HatElement::Element(t);
                // the x and y conditions are independent existentials
                let x = hat.iter().copied().find(|&x| self.hat_mul(x, ht) == hs && self.hat_mul(x, hs) == hs);
                let y = hat.iter().copied().find(|&y| self.hat_mul(ht, y) == hs);
                if let (Some(x), Some(y)) = (x, y) {
                    witnesses.insert((s, t), (x, y));
                }
            }
        }
        self.build_order(OrderKind::Mitsch, witnesses)
    }

    /// The Nambooripad order with idempotent witnesses from `E_S`, rejected
    /// with [`SemigroupError::NotAPartialOrder`] when the relation fails an
    /// order axiom.
    pub fn nambooripad_order(&self) -> Result<NaturalOrder, SemigroupError> {
        let idem = self.idempotents();
        if idem.is_empty() {
            return Err(SemigroupError::NoIdempotents);
        }
        let mut witnesses = BTreeMap::new();
        for s in 0..self.len() {
            for t in 0..self.len() {
                let e = idem.iter().copied().find(|&e| self.mul(e, t) == s);
                let f = idem.iter().copied().find(|&f| self.mul(t, f) == s);
                if let (Some(e), Some(f)) = (e, f) {
                    witnesses.insert((s, t), (HatElement::Element(e), HatElement::Element(f)));
                }
            }
        }
        self.build_order(OrderKind::Nambooripad, witnesses)
    }

    /// `E_S * s ∩ s * E_S`
    pub fn idempotent_sandwich(&self, s: usize) -> BTreeSet<usize> {
        let idem = self.idempotents();
        let left: BTreeSet<usize> = idem.iter().map(|&e| self.mul(e, s)).collect();
        let right: BTreeSet<usize> = idem.iter().map(|&e| self.mul(s, e)).collect();
        left.intersection(&right).copied().collect()
    }

    /// Sublevel `{a : a <= elem}` in `order`; for the Nambooripad order it is
    /// cross-checked against `E_S * elem ∩ elem * E_S`.
    pub fn sublevel(&self, elem: usize, order: &NaturalOrder) -> Result<BTreeSet<usize>, SemigroupError> {
        if elem >= self.len() {
            return Err(SemigroupError::UnknownElement(elem));
        }
        let down = order.poset.downset(elem).map_err(SemigroupError::NotAPartialOrder)?;
        if order.kind == OrderKind::Nambooripad {
            let formula = self.idempotent_sandwich(elem);
            if formula != down {
                return Err(SemigroupError::SublevelMismatch {
                    elem,
                    downset: down.into_iter().collect(),
                    formula: formula.into_iter().collect(),
                });
            }
        }
        Ok(down)
    }

    /// `{e * elem : e ∈ E_S} ∪ {elem}`, the finite set bounding a sublevel in
    /// the commutative case.
    pub fn idempotent_translates(&self, elem: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.idempotents().iter().map(|&e| self.mul(e, elem)).collect();
        out.insert(elem);
        out
    }
}

/// Preimage `{x : f(x) <= elem}` of a map `f: X -> S` given as a value list.
pub fn sublevel_preimage(
    semigroup: &FiniteSemigroup,
    f: &[usize],
    elem: usize,
    order: &NaturalOrder,
) -> Result<BTreeSet<usize>, SemigroupError> {
    let level = semigroup.sublevel(elem, order)?;
    Ok((0..f.len()).filter(|&x| level.contains(&f[x])).collect())
}

/// Union of the fibers `f^{-1}(a)` over `a` in `values`.
pub fn union_of_fibers(f: &[usize], values: &BTreeSet<usize>) -> BTreeSet<usize> {
    values.iter().flat_map(|&a| (0..f.len()).filter(move |&x| f[x] == a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_table((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()).unwrap()
    }

    fn min_semilattice(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_table((0..n).map(|i| (0..n).map(|j| i.min(j)).collect()).collect()).unwrap()
    }

    fn left_zero(n: usize) -> FiniteSemigroup {
        FiniteSemigroup::from_table((0..n).map(|i| vec![i; n]).collect()).unwrap()
    }

    /// Full transformation monoid on two points. Maps are encoded as
    /// `f(0) + 2 f(1)`; the product `a*b` is "apply b, then a".
    fn t2() -> FiniteSemigroup {
        let apply = |m: usize, x: usize| if x == 0 { m % 2 } else { m / 2 };
        let table =
            (0..4).map(|a| (0..4).map(|b| apply(a, apply(b, 0)) + 2 * apply(a, apply(b, 1))).collect()).collect();
        FiniteSemigroup::from_table(table).unwrap()
    }

    #[test]
    fn rejects_non_associative_tables() {
        // x*y = y+1 mod 2 on two elements: (0*0)*0 = 1, 0*(0*0) = 0
        let err = FiniteSemigroup::from_table(vec![vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, SemigroupError::NotAssociative(..)));
        assert!(matches!(
            FiniteSemigroup::from_table(vec![vec![0, 2], vec![0, 0]]),
            Err(SemigroupError::OutOfRange { .. })
        ));
    }

    #[test]
    fn idempotent_examples() {
        assert_eq!(cyclic(3).idempotents(), BTreeSet::from([0]));
        assert_eq!(min_semilattice(2).idempotents(), BTreeSet::from([0, 1]));
        let t = t2();
        // identity is 0 + 2*1 = 2, constants are 0 and 3, the swap 1 is not idempotent
        assert_eq!(t.unit(), Some(2));
        assert_eq!(t.idempotents(), BTreeSet::from([0, 2, 3]));
    }

    #[test]
    fn adjoin_unit_examples() {
        let m = min_semilattice(2);
        assert_eq!(m.unit(), Some(1));
        assert_eq!(m.adjoin_unit(), m);
        let lz = left_zero(2).adjoin_unit();
        assert_eq!(lz.len(), 3);
        assert_eq!(lz.unit(), Some(2));
        assert!(FiniteSemigroup::from_table(lz.table().to_vec()).is_ok());
    }

    #[test]
    fn mitsch_examples() {
        for g in [cyclic(1), cyclic(3), cyclic(4)] {
            let order = g.mitsch_order().unwrap();
            assert_eq!(order.witnesses.len(), g.len(), "groups are discretely ordered");
        }
        let order = min_semilattice(2).mitsch_order().unwrap();
        assert!(order.poset.leq(0, 1));
        assert!(!order.poset.leq(1, 0));
        let lz = left_zero(2).mitsch_order().unwrap();
        assert_eq!(lz.witnesses.len(), 2);
    }

    #[test]
    fn nambooripad_examples() {
        let m = min_semilattice(3);
        let nb = m.nambooripad_order().unwrap();
        let mi = m.mitsch_order().unwrap();
        assert_eq!(nb.poset, mi.poset);
        let g = cyclic(3).nambooripad_order().unwrap();
        assert_eq!(g.witnesses.len(), 3);

        // band {0, a=1, b=2}: 0 is a zero, a and b multiply as a left-zero band
        let band = FiniteSemigroup::from_table(vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 2, 2]]).unwrap();
        assert_eq!(band.idempotents().len(), 3);
        let order = band.nambooripad_order().unwrap();
        assert!(order.poset.leq(0, 1) && order.poset.leq(0, 2));
        assert!(!order.poset.comparable(1, 2));
    }

    #[test]
    fn nambooripad_rejects_when_not_reflexive() {
        // null semigroup {0, a}: a*x = 0, only idempotent is 0, so a <= a fails
        let null = FiniteSemigroup::from_table(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let err = null.nambooripad_order().unwrap_err();
        assert_eq!(err, SemigroupError::NotAPartialOrder(PosetError::Reflexivity(1)));
    }

    #[test]
    fn sublevel_examples() {
        let g = cyclic(3);
        let order = g.nambooripad_order().unwrap();
        for s in 0..3 {
            assert_eq!(g.sublevel(s, &order).unwrap(), BTreeSet::from([s]));
        }
        let m = min_semilattice(2);
        let order = m.nambooripad_order().unwrap();
        assert_eq!(m.sublevel(1, &order).unwrap(), BTreeSet::from([0, 1]));
        let m3 = min_semilattice(3);
        let order = m3.nambooripad_order().unwrap();
        assert_eq!(m3.sublevel(1, &order).unwrap(), BTreeSet::from([0, 1]));
        assert!(m3.sublevel(5, &order).is_err());
    }

    #[test]
    fn preimages_are_unions_of_fibers() {
        let m = min_semilattice(3);
        let order = m.nambooripad_order().unwrap();
        let f = [2, 0, 1, 1, 2, 0];
        let pre = sublevel_preimage(&m, &f, 1, &order).unwrap();
        assert_eq!(pre, BTreeSet::from([1, 2, 3, 5]));
        assert_eq!(pre, union_of_fibers(&f, &m.sublevel(1, &order).unwrap()));
    }
}
