//! Itemset taxonomies built from an item order.
//!
//! The itemset taxonomy has one node per antichain of the item order,
//! ordered by "every item of `A` is implied by some item of `B`", which is
//! the same as inclusion of the order ideals. Applying the construction to
//! the itemset taxonomy itself gives the solution taxonomy, whose nodes are
//! the possible sets of maximal frequent itemsets.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::poset::{Antichain, Order, OrderIdeal, Poset, PosetError};

/// Monotonicity of externally supplied predicates is only checked on
/// posets up to this size.
pub const MONOTONICITY_CHECK_LIMIT: usize = 4096;

/// How a covering edge `A -> B` of the itemset taxonomy changes `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// `B = A ∪ {i}`.
    Addition,
    /// `B = (A − parents(i)) ∪ {i}` with at least one parent removed.
    Specialization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverEdge {
    pub lower: usize,
    pub upper: usize,
    pub kind: EdgeKind,
}

/// The full itemset taxonomy of an item order, with both representations
/// of every node: the antichain and its order ideal.
#[derive(Debug, Clone)]
pub struct ItemsetTaxonomy {
    base: Order,
    ideals: Vec<FixedBitSet>,
    by_itemset: HashMap<Antichain, usize>,
    by_ideal: HashMap<FixedBitSet, usize>,
    edges: Vec<CoverEdge>,
    poset: Poset<Antichain>,
}

impl ItemsetTaxonomy {
    /// Breadth-first construction from the empty itemset.
    ///
    /// From a node `A` with ideal `O_A`, every item `i ∉ O_A` whose parents
    /// all lie in `O_A` yields the cover `B` with `O_B = O_A ∪ {i}` and
    /// `E_B = (E_A − parents(i)) ∪ {i}`. Node ids come out in breadth-first
    /// order, so they form a linear extension with the empty itemset at 0.
    pub fn build(base: &Order, node_cap: usize) -> Result<Self, PosetError> {
        let n = base.len();
        let mut itemsets = vec![Antichain::empty()];
        let mut ideals = vec![FixedBitSet::with_capacity(n)];
        let mut by_itemset = HashMap::from([(Antichain::empty(), 0usize)]);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);

        while let Some(a) = queue.pop_front() {
            for i in 0..n {
                let parents = base.parents(i);
                if ideals[a].contains(i) || !parents.iter().all(|&p| ideals[a].contains(p)) {
                    continue;
                }
                let mut removed = false;
                let mut members: Vec<usize> = itemsets[a]
                    .iter()
                    .filter(|x| {
                        let hit = parents.contains(x);
                        removed |= hit;
                        !hit
                    })
                    .collect();
                let pos = members.partition_point(|&x| x < i);
                members.insert(pos, i);
                let e_b = Antichain::from_sorted(members);

                let b = match by_itemset.get(&e_b) {
                    Some(&b) => b,
                    None => {
                        if itemsets.len() >= node_cap {
                            return Err(PosetError::CapExceeded { cap: node_cap as u64 });
                        }
                        let mut o_b = ideals[a].clone();
                        o_b.insert(i);
                        let b = itemsets.len();
                        by_itemset.insert(e_b.clone(), b);
                        itemsets.push(e_b);
                        ideals.push(o_b);
                        queue.push_back(b);
                        b
                    }
                };
                let kind = if removed {
                    EdgeKind::Specialization
                } else {
                    EdgeKind::Addition
                };
                edges.push(CoverEdge {
                    lower: a,
                    upper: b,
                    kind,
                });
            }
        }

        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.lower, e.upper)).collect();
        let poset = Poset::from_edges(itemsets, &pairs)?;
        let by_ideal = ideals.iter().cloned().enumerate().map(|(k, o)| (o, k)).collect();
        Ok(ItemsetTaxonomy {
            base: base.clone(),
            ideals,
            by_itemset,
            by_ideal,
            edges,
            poset,
        })
    }

    /// The item order this taxonomy was built from.
    pub fn base(&self) -> &Order {
        &self.base
    }

    pub fn poset(&self) -> &Poset<Antichain> {
        &self.poset
    }

    pub fn order(&self) -> &Order {
        self.poset.order()
    }

    pub fn into_poset(self) -> Poset<Antichain> {
        self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// The node of the empty itemset.
    pub fn root(&self) -> usize {
        0
    }

    pub fn itemset(&self, node: usize) -> &Antichain {
        self.poset.element(node)
    }

    pub fn ideal(&self, node: usize) -> &FixedBitSet {
        &self.ideals[node]
    }

    pub fn node_of(&self, itemset: &Antichain) -> Option<usize> {
        self.by_itemset.get(itemset).copied()
    }

    pub fn node_of_ideal(&self, ideal: &FixedBitSet) -> Option<usize> {
        self.by_ideal.get(ideal).copied()
    }

    /// Covering edges in the order the construction discovered them.
    pub fn cover_edges(&self) -> &[CoverEdge] {
        &self.edges
    }

    /// Types the covering edge `lower -> upper` from the two itemsets alone.
    pub fn classify_covering_edge(&self, lower: usize, upper: usize) -> Result<EdgeKind, PosetError> {
        let not_cover = PosetError::NotACoverEdge { lower, upper };
        if lower >= self.len() || upper >= self.len() || !self.order().parents(upper).contains(&lower) {
            return Err(not_cover);
        }
        let mut added = self.ideals[upper].clone();
        added.difference_with(&self.ideals[lower]);
        let mut witness = added.ones();
        let (Some(i), None) = (witness.next(), witness.next()) else {
            return Err(not_cover);
        };
        let a = self.itemset(lower);
        let b = self.itemset(upper);
        if b.len() == a.len() + 1 && b.contains(i) && a.iter().all(|x| b.contains(x)) {
            Ok(EdgeKind::Addition)
        } else {
            Ok(EdgeKind::Specialization)
        }
    }

    pub fn width(&self) -> usize {
        self.poset.width()
    }
}

/// The itemset taxonomy restricted to itemsets of at most `k` items.
#[derive(Debug, Clone)]
pub struct KItemsetTaxonomy {
    k: usize,
    ideals: Vec<OrderIdeal>,
    poset: Poset<Antichain>,
}

impl KItemsetTaxonomy {
    /// Enumerates the `<= k`-subsets, keeps the antichains and orders them
    /// by ideal containment. Nodes are sorted by size, then
    /// lexicographically; `k = 0` gives the single empty itemset.
    pub fn build(base: &Order, k: usize) -> Result<Self, PosetError> {
        let n = base.len();
        let mut itemsets = Vec::new();
        for size in 0..=k.min(n) {
            for combo in (0..n).combinations(size) {
                let a = Antichain::from_sorted(combo);
                if base.is_antichain(&a) {
                    itemsets.push(a);
                }
            }
        }
        let ideals: Vec<OrderIdeal> = itemsets.iter().map(|a| base.ideal_of(a)).collect();
        let len = itemsets.len();
        let ancestors = (0..len)
            .map(|b| {
                let mut s = FixedBitSet::with_capacity(len);
                s.extend((0..len).filter(|&a| ideals[a].is_subset(&ideals[b])));
                s
            })
            .collect();
        let order = Order::from_ancestor_sets(ancestors)?;
        let poset = Poset::new(itemsets, order)?;
        Ok(KItemsetTaxonomy { k, ideals, poset })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn poset(&self) -> &Poset<Antichain> {
        &self.poset
    }

    pub fn order(&self) -> &Order {
        self.poset.order()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn ideal(&self, node: usize) -> &OrderIdeal {
        &self.ideals[node]
    }
}

/// The solution taxonomy: the itemset taxonomy of the itemset taxonomy.
/// Each node is an antichain of itemset-taxonomy node ids.
///
/// Memory is quadratic in the number of solutions; use [`solution_count`]
/// when only the size is needed.
pub fn solution_taxonomy(base: &Order, node_cap: usize) -> Result<Poset<Antichain>, PosetError> {
    let itemsets = ItemsetTaxonomy::build(base, node_cap)?;
    let solutions = ItemsetTaxonomy::build(itemsets.order(), node_cap)?;
    Ok(solutions.into_poset())
}

/// Number of solution-taxonomy nodes, i.e. antichains of the itemset
/// taxonomy, without materializing them.
pub fn solution_count(itemset_order: &Order, cap: u64) -> Result<u64, PosetError> {
    itemset_order.count_antichains(cap)
}

/// Log2 of the product of `(chain length + 1)` over a minimum chain
/// partition of `order`. Each chain admits that many cut points for a
/// monotone predicate, so this bounds the log2 of the solution count.
pub fn chain_product_log2(order: &Order) -> f64 {
    order
        .chain_partition()
        .iter()
        .map(|c| ((c.len() + 1) as f64).log2())
        .sum()
}

/// The monotone predicate whose maximal true elements are `mfis`:
/// `x` holds iff `x <= m` for some `m` in `mfis`.
pub fn predicate_from_mfis(order: &Order, mfis: &Antichain) -> Result<FixedBitSet, PosetError> {
    order.check_antichain(mfis)?;
    Ok(order.down_closure(mfis.iter()))
}

/// Maximal true elements of a monotone predicate.
pub fn mfis_from_predicate(order: &Order, truth: &FixedBitSet) -> Result<Antichain, PosetError> {
    check_monotone(order, truth)?;
    Ok(order.maximal_in(truth))
}

/// Minimal false elements of a monotone predicate.
pub fn miis_from_predicate(order: &Order, truth: &FixedBitSet) -> Result<Antichain, PosetError> {
    check_monotone(order, truth)?;
    let mut falses = FixedBitSet::with_capacity(order.len());
    falses.insert_range(..);
    falses.difference_with(truth);
    Ok(order.minimal_in(&falses))
}

fn check_monotone(order: &Order, truth: &FixedBitSet) -> Result<(), PosetError> {
    if truth.len() != order.len() {
        return Err(PosetError::NotAPartialOrder);
    }
    if order.len() > MONOTONICITY_CHECK_LIMIT {
        return Ok(());
    }
    for upper in truth.ones() {
        if let Some(lower) = order.ancestors(upper).ones().find(|&a| !truth.contains(a)) {
            return Err(PosetError::NotMonotone { lower, upper });
        }
    }
    Ok(())
}
