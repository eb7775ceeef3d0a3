//! Finite posets viewed as thin categories.
//!
//! Elements are the ids `0..len()`. Every poset handed out by this module has
//! passed the reflexivity, antisymmetry and transitivity checks of
//! [`FinitePoset::validate`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::linalg::{format_rational, Rational};

/// Display value attached to a poset element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Int(i64),
    Rational(Rational),
    Name(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Label::Rational(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Rational(q) => write!(f, "{}", format_rational(q)),
            Label::Name(s) => write!(f, "{s}"),
            Label::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("reflexivity fails at {0}")]
    Reflexivity(usize),
    #[error("antisymmetry fails: {0} <= {1} and {1} <= {0}")]
    Antisymmetry(usize, usize),
    #[error("transitivity fails: {0} <= {1} <= {2} but not {0} <= {2}")]
    Transitivity(usize, usize, usize),
    #[error("unknown element {0}")]
    UnknownElement(usize),
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("poset is not a chain")]
    NotAChain,
    #[error("axis values must be strictly increasing")]
    UnsortedAxis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
    labels: Option<Vec<Label>>,
}

impl FinitePoset {
    /// Checks the order axioms on `relation` over `0..n` and reports the first
    /// violation found in lexicographic order of the witness.
    pub fn validate(n: usize, relation: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| relation(a, b)).collect()).collect();
        Self::from_matrix(leq)
    }

    pub fn from_matrix(leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = leq.len();
        assert!(leq.iter().all(|row| row.len() == n), "relation matrix must be square");
        for (s, row) in leq.iter().enumerate() {
            if !row[s] {
                return Err(PosetError::Reflexivity(s));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(PosetError::Antisymmetry(a, b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !leq[a][b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b][c] && !leq[a][c] {
                        return Err(PosetError::Transitivity(a, b, c));
                    }
                }
            }
        }
        Ok(FinitePoset { leq, labels: None })
    }

    /// Reflexive-transitive closure of the given strict relations, validated.
    pub fn from_generators(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n {
                return Err(PosetError::UnknownElement(a));
            }
            if b >= n {
                return Err(PosetError::UnknownElement(b));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(leq)
    }

    /// `0 < 1 < ... < n-1`
    pub fn chain(n: usize) -> Self {
        FinitePoset { leq: (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect(), labels: None }
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset { leq: (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect(), labels: None }
    }

    /// Chain on strictly increasing rational labels.
    pub fn labeled_chain(values: Vec<Rational>) -> Result<Self, PosetError> {
        GridAxis::new(values, false).map(|axis| axis.to_poset())
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self, PosetError> {
        if labels.len() != self.len() {
            return Err(PosetError::LabelCount { expected: self.len(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn label(&self, s: usize) -> Option<&Label> {
        self.labels.as_ref().map(|l| &l[s])
    }

    pub fn find_label(&self, label: &Label) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Rational labels of a labeled poset, if every label is rational.
    pub fn rational_labels(&self) -> Option<Vec<Rational>> {
        self.labels.as_ref()?.iter().map(|l| l.as_rational().cloned()).collect()
    }

    fn check(&self, s: usize) -> Result<(), PosetError> {
        if s < self.len() {
            Ok(())
        } else {
            Err(PosetError::UnknownElement(s))
        }
    }

    /// `{a : a <= s}`
    pub fn downset(&self, s: usize) -> Result<BTreeSet<usize>, PosetError> {
        self.check(s)?;
        Ok((0..self.len()).filter(|&a| self.leq[a][s]).collect())
    }

    /// `{a : s <= a}`
    pub fn upset(&self, s: usize) -> Result<BTreeSet<usize>, PosetError> {
        self.check(s)?;
        Ok((0..self.len()).filter(|&a| self.leq[s][a]).collect())
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements of `set` with nothing of `set` strictly below them.
    pub fn minimal_elements(&self, set: &BTreeSet<usize>) -> Vec<usize> {
        set.iter().copied().filter(|&a| !set.iter().any(|&b| self.lt(b, a))).collect()
    }

    /// Deterministic topological order: repeatedly take the smallest id
    /// whose predecessors are all placed.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|b| (0..n).filter(|&a| self.lt(a, b)).count()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&a| indegree[a] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(&a) = ready.iter().next() {
            ready.remove(&a);
            out.push(a);
            for b in 0..n {
                if self.lt(a, b) {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        ready.insert(b);
                    }
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.comparable(a, b)))
    }

    /// Elements listed from bottom to top, or an error when not totally ordered.
    pub fn chain_order(&self) -> Result<Vec<usize>, PosetError> {
        if !self.is_chain() {
            return Err(PosetError::NotAChain);
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (0..self.len()).filter(|&b| self.leq[b][a]).count());
        Ok(order)
    }

    /// The opposite order, same labels.
    pub fn dual(&self) -> Self {
        let n = self.len();
        FinitePoset {
            leq: (0..n).map(|a| (0..n).map(|b| self.leq[b][a]).collect()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Product order; element `(a, b)` has id `a * other.len() + b`. Labels,
    /// when both sides have them, become tuples.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let (n, m) = (self.len(), other.len());
        let leq = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.leq[x / m][y / m] && other.leq[x % m][y % m]).collect())
            .collect();
        let labels = match (&self.labels, &other.labels) {
            (Some(l1), Some(l2)) => {
                Some((0..n * m).map(|x| Label::Tuple(vec![l1[x / m].clone(), l2[x % m].clone()])).collect())
            }
            _ => None,
        };
        FinitePoset { leq, labels }
    }

    /// Shortest cover path from `a` to `b` (inclusive), if `a <= b`.
    pub fn cover_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.leq[a][b] {
            return None;
        }
        let covers = self.covers();
        let mut prev = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(c, d) in &covers {
                if c == x && prev[d] == usize::MAX && self.leq[d][b] {
                    prev[d] = x;
                    queue.push_back(d);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// One axis of a parameter grid: strictly increasing rationals, optionally
/// ordered in reverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridAxis {
    values: Vec<Rational>,
    reversed: bool,
}

impl GridAxis {
    pub fn new(values: Vec<Rational>, reversed: bool) -> Result<Self, PosetError> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PosetError::UnsortedAxis);
        }
        Ok(GridAxis { values, reversed })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    pub fn position(&self, v: &Rational) -> Option<usize> {
        self.values.binary_search(v).ok()
    }

    pub fn to_poset(&self) -> FinitePoset {
        let chain = FinitePoset::chain(self.values.len());
        let chain = if self.reversed { chain.dual() } else { chain };
        let labels = self.values.iter().cloned().map(Label::Rational).collect();
        chain.with_labels(labels).expect("label count matches")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn validate_reports_first_violation() {
        assert!(FinitePoset::validate(3, |a, b| a <= b).is_ok());
        let anti = FinitePoset::validate(2, |_, _| true);
        assert_eq!(anti.unwrap_err(), PosetError::Antisymmetry(0, 1));
        let trans = FinitePoset::validate(3, |a, b| a == b || (a, b) == (0, 1) || (a, b) == (1, 2));
        assert_eq!(trans.unwrap_err(), PosetError::Transitivity(0, 1, 2));
        let refl = FinitePoset::validate(2, |a, b| a < b);
        assert_eq!(refl.unwrap_err(), PosetError::Reflexivity(0));
    }

    #[test]
    fn product_examples() {
        let d = FinitePoset::chain(2).product(&FinitePoset::chain(2));
        assert_eq!(d.len(), 4);
        // (0,1) is id 1 and (1,0) is id 2
        assert!(!d.comparable(1, 2));
        assert!(FinitePoset::from_matrix((0..4).map(|a| (0..4).map(|b| d.leq(a, b)).collect()).collect()).is_ok());

        let p = FinitePoset::chain(3);
        let single = p.product(&FinitePoset::chain(1));
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(single.leq(a, b), p.leq(a, b));
            }
        }
    }

    #[test]
    fn reversed_axis_grid() {
        let t = GridAxis::new(vec![q(0), q(1), q(2)], false).unwrap().to_poset();
        let lam = GridAxis::new(vec![q(0), q(1)], true).unwrap().to_poset();
        let grid = t.product(&lam);
        let id = |ti: usize, li: usize| ti * 2 + li;
        // exhaustive: (t, L) <= (t', L') iff t <= t' and L >= L'
        for a in 0..3 {
            for b in 0..2 {
                for c in 0..3 {
                    for d in 0..2 {
                        assert_eq!(grid.leq(id(a, b), id(c, d)), a <= c && b >= d);
                    }
                }
            }
        }
        assert!(grid.leq(id(1, 1), id(2, 0)));
        assert!(!grid.leq(id(1, 0), id(2, 1)));
        assert_eq!(grid.label(id(1, 1)).unwrap().to_string(), "(1, 1)");
    }

    #[test]
    fn downset_examples() {
        let c = FinitePoset::chain(3);
        assert_eq!(c.downset(1).unwrap(), BTreeSet::from([0, 1]));
        let a = FinitePoset::antichain(3);
        assert_eq!(a.downset(2).unwrap(), BTreeSet::from([2]));
        let d = FinitePoset::chain(2).product(&FinitePoset::chain(2));
        assert_eq!(d.downset(3).unwrap().len(), 4);
        assert!(c.downset(7).is_err());
    }

    #[test]
    fn cover_examples() {
        assert_eq!(FinitePoset::chain(3).covers(), vec![(0, 1), (1, 2)]);
        assert!(FinitePoset::antichain(4).covers().is_empty());
        let d = FinitePoset::chain(2).product(&FinitePoset::chain(2));
        assert_eq!(d.covers().len(), 4);
    }

    #[test]
    fn unsorted_axis_rejected() {
        assert_eq!(GridAxis::new(vec![q(1), q(1)], false).unwrap_err(), PosetError::UnsortedAxis);
    }

    #[test]
    fn chain_order_and_paths() {
        let c = FinitePoset::chain(4).dual();
        assert_eq!(c.chain_order().unwrap(), vec![3, 2, 1, 0]);
        assert_eq!(c.cover_path(3, 0).unwrap(), vec![3, 2, 1, 0]);
        assert!(c.cover_path(0, 3).is_none());
        let d = FinitePoset::chain(2).product(&FinitePoset::chain(2));
        assert_eq!(d.chain_order().unwrap_err(), PosetError::NotAChain);
        assert_eq!(d.linear_extension(), vec![0, 1, 2, 3]);
    }
}
