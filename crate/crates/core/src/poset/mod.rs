//! Finite partial orders and the item taxonomy built on them.
//!
//! [`Order`] stores a partial order over dense element indices `0..n` as
//! reflexive ancestor and descendant bitsets plus the covering relation.
//! [`Poset`] pairs an order with element payloads, and [`Taxonomy`] is a
//! poset of labelled items with external ids.
//!
//! Direction convention: `a <= b` means `b` is more specific than `a`, so
//! `a` is an *ancestor* of `b` and `b` a *descendant* of `a`. Parents are
//! the covering ancestors.

mod antichains;
mod chains;
mod taxonomy;

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chains::maximum_bipartite_matching;
pub use taxonomy::{Item, Taxonomy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("the relation contains a directed cycle")]
    CycleDetected,
    #[error("item id {0} appears more than once")]
    DuplicateItem(u64),
    #[error("unknown item id {0}")]
    UnknownItem(u64),
    #[error("element index {0} is out of range")]
    UnknownElement(usize),
    #[error("the given elements are not pairwise incomparable")]
    NotAnAntichain,
    #[error("the given elements are not closed under ancestors")]
    NotAnIdeal,
    #[error("the relation is not a partial order")]
    NotAPartialOrder,
    #[error("more than {cap} objects would be produced")]
    CapExceeded { cap: u64 },
    #[error("({lower}, {upper}) is not a covering edge")]
    NotACoverEdge { lower: usize, upper: usize },
    #[error("predicate is not monotone: {upper} holds but its ancestor {lower} does not")]
    NotMonotone { lower: usize, upper: usize },
}

/// A set of pairwise-incomparable elements, kept sorted and duplicate-free.
///
/// The type does not remember which order it belongs to; constructors on
/// [`Order`] validate against a specific order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Antichain(Vec<usize>);

impl Antichain {
    pub fn empty() -> Self {
        Antichain(Vec::new())
    }

    /// Wraps an already sorted, validated member list.
    pub(crate) fn from_sorted(items: Vec<usize>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Antichain(items)
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A down-closed set of elements: every ancestor of a member is a member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    members: FixedBitSet,
}

impl OrderIdeal {
    pub fn contains(&self, item: usize) -> bool {
        self.members.contains(item)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Members in ascending order.
    pub fn items(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subset(&self, other: &OrderIdeal) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A partial order over the element indices `0..len()`.
#[derive(Debug, Clone)]
pub struct Order {
    ancestors: Vec<FixedBitSet>,
    descendants: Vec<FixedBitSet>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
    width: OnceLock<usize>,
}

impl Order {
    /// Builds the order generated by `edges`, where `(a, b)` means `a <= b`.
    ///
    /// Redundant edges are allowed and dropped; the stored cover relation is
    /// the transitive reduction of the generated order.
    pub fn from_edges(len: usize, edges: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut succ = vec![Vec::new(); len];
        let mut indegree = vec![0usize; len];
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= len {
                    return Err(PosetError::UnknownElement(x));
                }
            }
            if a == b {
                return Err(PosetError::CycleDetected);
            }
            succ[a].push(b);
            indegree[b] += 1;
        }

        // Kahn's algorithm doubles as the cycle check.
        let mut queue: VecDeque<usize> = (0..len).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(len);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() != len {
            return Err(PosetError::CycleDetected);
        }

        let mut ancestors: Vec<FixedBitSet> = (0..len)
            .map(|v| {
                let mut s = FixedBitSet::with_capacity(len);
                s.insert(v);
                s
            })
            .collect();
        for &v in &topo {
            let own = ancestors[v].clone();
            for &w in &succ[v] {
                ancestors[w].union_with(&own);
            }
        }
        Ok(Self::from_closure(ancestors))
    }

    /// Builds an order from reflexive ancestor sets, validating the partial
    /// order axioms.
    pub fn from_ancestor_sets(ancestors: Vec<FixedBitSet>) -> Result<Self, PosetError> {
        let len = ancestors.len();
        for (b, anc) in ancestors.iter().enumerate() {
            if anc.len() != len || !anc.contains(b) {
                return Err(PosetError::NotAPartialOrder);
            }
            for a in anc.ones() {
                if a != b && ancestors[a].contains(b) {
                    return Err(PosetError::CycleDetected);
                }
                if !ancestors[a].is_subset(anc) {
                    return Err(PosetError::NotAPartialOrder);
                }
            }
        }
        Ok(Self::from_closure(ancestors))
    }

    /// Builds an order from a `leq(a, b)` predicate evaluated on all pairs.
    pub fn from_leq<F>(len: usize, leq: F) -> Result<Self, PosetError>
    where
        F: Fn(usize, usize) -> bool,
    {
        let ancestors = (0..len)
            .map(|b| {
                let mut s = FixedBitSet::with_capacity(len);
                s.extend((0..len).filter(|&a| a == b || leq(a, b)));
                s
            })
            .collect();
        Self::from_ancestor_sets(ancestors)
    }

    /// Assumes `ancestors` is already a valid reflexive-transitive closure.
    fn from_closure(ancestors: Vec<FixedBitSet>) -> Self {
        let len = ancestors.len();
        let mut descendants = vec![FixedBitSet::with_capacity(len); len];
        for (b, anc) in ancestors.iter().enumerate() {
            for a in anc.ones() {
                descendants[a].insert(b);
            }
        }
        let parents = transitive_reduction(&ancestors, &descendants);
        let mut children = vec![Vec::new(); len];
        for (b, ps) in parents.iter().enumerate() {
            for &a in ps {
                children[a].push(b);
            }
        }
        // Strict ancestors have strictly smaller ancestor sets.
        let mut topo: Vec<usize> = (0..len).collect();
        topo.sort_by_key(|&v| (ancestors[v].count_ones(..), v));
        Order {
            ancestors,
            descendants,
            parents,
            children,
            topo,
            width: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ancestors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ancestors.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.ancestors[b].contains(a)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Reflexive ancestor set of `v`.
    pub fn ancestors(&self, v: usize) -> &FixedBitSet {
        &self.ancestors[v]
    }

    /// Reflexive descendant set of `v`.
    pub fn descendants(&self, v: usize) -> &FixedBitSet {
        &self.descendants[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// A linear extension: every element appears after all its ancestors.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// Covering pairs `(parent, child)`, sorted.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(b, ps)| ps.iter().map(move |&a| (a, b)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Number of strict comparabilities `a < b`.
    pub fn comparability_count(&self) -> usize {
        self.ancestors.iter().map(|s| s.count_ones(..) - 1).sum()
    }

    /// Rebuilds the order from its closure, recomputing the cover relation.
    pub fn transitive_reduction(&self) -> Order {
        Self::from_closure(self.ancestors.clone())
    }

    /// Elements with no ancestor other than themselves.
    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parents[v].is_empty()).collect()
    }

    /// Elements with no descendant other than themselves.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.children[v].is_empty()).collect()
    }

    pub fn check_element(&self, v: usize) -> Result<(), PosetError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(PosetError::UnknownElement(v))
        }
    }

    /// `(ancestors, descendants)` of `v`, both including `v`.
    pub fn reachability(&self, v: usize) -> Result<(Vec<usize>, Vec<usize>), PosetError> {
        self.check_element(v)?;
        Ok((self.ancestors[v].ones().collect(), self.descendants[v].ones().collect()))
    }

    fn mask_of<I: IntoIterator<Item = usize>>(&self, items: I) -> Result<FixedBitSet, PosetError> {
        let mut mask = FixedBitSet::with_capacity(self.len());
        for v in items {
            self.check_element(v)?;
            mask.insert(v);
        }
        Ok(mask)
    }

    /// Elements of `mask` with no strict descendant in `mask`.
    pub fn maximal_in(&self, mask: &FixedBitSet) -> Antichain {
        let items = mask
            .ones()
            .filter(|&v| self.descendants[v].intersection_count(mask) == 1)
            .collect();
        Antichain::from_sorted(items)
    }

    /// Elements of `mask` with no strict ancestor in `mask`.
    pub fn minimal_in(&self, mask: &FixedBitSet) -> Antichain {
        let items = mask
            .ones()
            .filter(|&v| self.ancestors[v].intersection_count(mask) == 1)
            .collect();
        Antichain::from_sorted(items)
    }

    /// Drops every member implied by another member, keeping the maximal
    /// elements. The result has the same order ideal as `raw`.
    pub fn normalize_antichain<I>(&self, raw: I) -> Result<Antichain, PosetError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mask = self.mask_of(raw)?;
        Ok(self.maximal_in(&mask))
    }

    /// Validates that `items` are pairwise incomparable.
    pub fn antichain<I>(&self, items: I) -> Result<Antichain, PosetError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for &x in &v {
            self.check_element(x)?;
        }
        let a = Antichain(v);
        self.check_antichain(&a)?;
        Ok(a)
    }

    pub fn is_antichain(&self, a: &Antichain) -> bool {
        a.iter().all(|x| x < self.len())
            && a.iter()
                .all(|x| a.iter().all(|y| x == y || (!self.leq(x, y) && !self.leq(y, x))))
    }

    pub fn check_antichain(&self, a: &Antichain) -> Result<(), PosetError> {
        if let Some(&bad) = a.items().iter().find(|&&x| x >= self.len()) {
            return Err(PosetError::UnknownElement(bad));
        }
        if self.is_antichain(a) {
            Ok(())
        } else {
            Err(PosetError::NotAnAntichain)
        }
    }

    /// Validates that `items` are closed under ancestors.
    pub fn order_ideal<I>(&self, items: I) -> Result<OrderIdeal, PosetError>
    where
        I: IntoIterator<Item = usize>,
    {
        let members = self.mask_of(items)?;
        if members.ones().all(|v| self.ancestors[v].is_subset(&members)) {
            Ok(OrderIdeal { members })
        } else {
            Err(PosetError::NotAnIdeal)
        }
    }

    /// All ancestors of members of `a`, members included.
    pub fn ideal_of(&self, a: &Antichain) -> OrderIdeal {
        OrderIdeal {
            members: self.down_closure(a.iter()),
        }
    }

    pub(crate) fn down_closure<I: IntoIterator<Item = usize>>(&self, items: I) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.len());
        for v in items {
            members.union_with(&self.ancestors[v]);
        }
        members
    }

    /// Maximal elements of an ideal; inverse of [`Order::ideal_of`].
    pub fn antichain_of(&self, ideal: &OrderIdeal) -> Antichain {
        self.maximal_in(&ideal.members)
    }

    /// Set-level order: every member of `a` is below some member of `b`.
    pub fn set_leq(&self, a: &Antichain, b: &Antichain) -> bool {
        a.iter().all(|i| b.iter().any(|j| self.leq(i, j)))
    }
}

/// Parents of every element, i.e. the transitive reduction of the closure.
///
/// `a` covers-below `b` iff `a < b` and the only elements of
/// `desc(a) ∩ anc(b)` are `a` and `b`; checking this against the strict
/// ancestors of `b` alone is enough.
fn transitive_reduction(ancestors: &[FixedBitSet], descendants: &[FixedBitSet]) -> Vec<Vec<usize>> {
    ancestors
        .iter()
        .enumerate()
        .map(|(b, anc)| {
            let mut strict = anc.clone();
            strict.set(b, false);
            strict
                .ones()
                .filter(|&a| descendants[a].intersection_count(&strict) == 1)
                .collect()
        })
        .collect()
}

/// An [`Order`] together with per-element payloads.
#[derive(Debug, Clone)]
pub struct Poset<T> {
    elements: Vec<T>,
    order: Order,
}

impl<T> Poset<T> {
    pub fn new(elements: Vec<T>, order: Order) -> Result<Self, PosetError> {
        if elements.len() != order.len() {
            return Err(PosetError::NotAPartialOrder);
        }
        Ok(Poset { elements, order })
    }

    pub fn from_edges(elements: Vec<T>, edges: &[(usize, usize)]) -> Result<Self, PosetError> {
        let order = Order::from_edges(elements.len(), edges)?;
        Ok(Poset { elements, order })
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn element(&self, v: usize) -> &T {
        &self.elements[v]
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn into_parts(self) -> (Vec<T>, Order) {
        (self.elements, self.order)
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Poset<U> {
        Poset {
            elements: self.elements.iter().map(f).collect(),
            order: self.order.clone(),
        }
    }

    pub fn transitive_reduction(&self) -> Poset<T>
    where
        T: Clone,
    {
        Poset {
            elements: self.elements.clone(),
            order: self.order.transitive_reduction(),
        }
    }
}

impl<T> Deref for Poset<T> {
    type Target = Order;

    fn deref(&self) -> &Order {
        &self.order
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Order {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Order::from_edges(n, &edges).unwrap()
    }

    // 0 cycling, 1 sport, 2 bicycle touring, 3 indoor cycling
    fn psi1() -> Order {
        Order::from_edges(4, &[(0, 2), (0, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn redundant_edges_are_reduced() {
        let o = Order::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(o.cover_edges(), vec![(0, 1), (1, 2)]);
        assert!(o.leq(0, 2));
    }

    #[test]
    fn diamond_shortcut_is_removed() {
        // a=0, b=1, c=2, d=3
        let o = Order::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)]).unwrap();
        assert_eq!(o.cover_edges(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn cover_edges_match_brute_force_definition() {
        let o = Order::from_edges(6, &[(0, 1), (1, 2), (0, 3), (3, 2), (2, 4), (0, 4), (5, 4)]).unwrap();
        let n = o.len();
        let mut brute = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if o.lt(a, b) && !(0..n).any(|c| o.lt(a, c) && o.lt(c, b)) {
                    brute.push((a, b));
                }
            }
        }
        assert_eq!(o.cover_edges(), brute);
    }

    #[test]
    fn flat_order_has_no_edges() {
        let o = Order::from_edges(5, &[]).unwrap();
        assert!(o.cover_edges().is_empty());
        assert_eq!(o.minimal_elements().len(), 5);
    }

    #[test]
    fn cycles_and_unknown_elements_are_rejected() {
        assert_eq!(
            Order::from_edges(2, &[(0, 1), (1, 0)]).unwrap_err(),
            PosetError::CycleDetected
        );
        assert_eq!(Order::from_edges(1, &[(0, 0)]).unwrap_err(), PosetError::CycleDetected);
        assert_eq!(
            Order::from_edges(2, &[(0, 2)]).unwrap_err(),
            PosetError::UnknownElement(2)
        );
    }

    #[test]
    fn from_leq_rejects_non_orders() {
        // 0 <= 1 and 1 <= 0
        assert!(Order::from_leq(2, |_, _| true).is_err());
        // 0 <= 1 <= 2 without 0 <= 2
        let err = Order::from_leq(3, |a, b| (a, b) == (0, 1) || (a, b) == (1, 2)).unwrap_err();
        assert_eq!(err, PosetError::NotAPartialOrder);
    }

    #[test]
    fn reachability_on_running_example() {
        let o = psi1();
        let (anc, desc) = o.reachability(3).unwrap();
        assert_eq!(anc, vec![0, 1, 3]);
        assert_eq!(desc, vec![3]);
        let (anc, desc) = o.reachability(0).unwrap();
        assert_eq!(anc, vec![0]);
        assert_eq!(desc, vec![0, 2, 3]);
        assert!(o.reachability(4).is_err());
    }

    #[test]
    fn normalize_keeps_maximal_members() {
        let o = psi1();
        assert_eq!(o.normalize_antichain([0, 2]).unwrap().items(), &[2]);
        assert_eq!(o.normalize_antichain([1, 2]).unwrap().items(), &[1, 2]);
        assert!(o.normalize_antichain([]).unwrap().is_empty());
        assert!(o.normalize_antichain([9]).is_err());
    }

    #[test]
    fn ideal_and_antichain_round_trip() {
        let o = psi1();
        let a = o.antichain([3]).unwrap();
        let ideal = o.ideal_of(&a);
        assert_eq!(ideal.items(), vec![0, 1, 3]);
        assert_eq!(o.antichain_of(&ideal), a);
        assert!(o.ideal_of(&Antichain::empty()).is_empty());
        assert!(o.order_ideal([3]).is_err());
        assert_eq!(o.order_ideal([0, 1, 3]).unwrap(), ideal);
    }

    #[test]
    fn antichain_constructor_validates() {
        let o = psi1();
        assert_eq!(o.antichain([0, 2]).unwrap_err(), PosetError::NotAnAntichain);
        assert_eq!(o.antichain([2, 1, 2]).unwrap().items(), &[1, 2]);
    }

    #[test]
    fn set_leq_examples() {
        let o = psi1();
        let ac = |v: &[usize]| o.antichain(v.iter().copied()).unwrap();
        assert!(o.set_leq(&ac(&[0]), &ac(&[3])));
        assert!(!o.set_leq(&ac(&[1, 2]), &ac(&[2])));
        assert!(o.set_leq(&Antichain::empty(), &ac(&[2])));
        assert!(!o.set_leq(&ac(&[2]), &Antichain::empty()));
    }

    #[test]
    fn topo_order_respects_order() {
        let o = chain(6).transitive_reduction();
        let pos: Vec<usize> = {
            let mut p = vec![0; 6];
            for (k, &v) in o.topo_order().iter().enumerate() {
                p[v] = k;
            }
            p
        };
        for (a, b) in o.cover_edges() {
            assert!(pos[a] < pos[b]);
        }
    }
}
