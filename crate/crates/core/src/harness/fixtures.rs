//! Named fixtures: the running example, the gadget behind best-split
//! hardness, and the anytime-mining example.

use super::generators::{concat, gen_gamma};
use crate::poset::{Antichain, Item, Order, Poset, Taxonomy};

/// The four-item running example: cycling (1), sport (2),
/// bicycle_touring (3) and indoor_cycling (4), where indoor cycling is both
/// a kind of cycling and a sport.
pub fn psi1() -> Taxonomy {
    Taxonomy::build(
        vec![
            Item::labelled(1, "cycling"),
            Item::labelled(2, "sport"),
            Item::labelled(3, "bicycle_touring"),
            Item::labelled(4, "indoor_cycling"),
        ],
        &[(1, 3), (1, 4), (2, 4)],
    )
    .expect("static fixture")
}

/// The four-element poset with antichains {}, {1}, {2}, {3}, {2,3}, {4}:
/// a diamond 1 < 2, 3 < 4 (0-based here).
pub fn diamond() -> Order {
    Order::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).expect("static fixture")
}

/// `Γ₂ₙ ∘ P∅ ∘ P∅ ∘ P∅ ∘ P ∘ P` with the five elements created by the
/// compositions tagged.
#[derive(Debug, Clone)]
pub struct SplitComparisonFixture {
    /// Items carry ids `1..`; the tagged elements are labelled `e-1` … `e3`.
    pub taxonomy: Taxonomy,
    /// Dense indices of `e₋₁, e₀, e₁, e₂, e₃`.
    pub markers: [usize; 5],
}

impl SplitComparisonFixture {
    pub fn e(&self, k: i32) -> usize {
        self.markers[(k + 1) as usize]
    }
}

pub fn split_comparison_fixture(p: &Order, n: u64) -> SplitComparisonFixture {
    let empty = Order::from_edges(0, &[]).expect("empty");
    let mut order = gen_gamma(2 * n);
    let mut markers = [0; 5];
    for (k, part) in [&empty, &empty, &empty, p, p].into_iter().enumerate() {
        markers[k] = order.len();
        order = concat(&order, part);
    }
    let items = (0..order.len())
        .map(|v| match markers.iter().position(|&m| m == v) {
            Some(k) => Item::labelled(v as u64 + 1, format!("e{}", k as i32 - 1)),
            None => Item::new(v as u64 + 1),
        })
        .collect();
    let poset = Poset::new(items, order).expect("sizes match");
    SplitComparisonFixture {
        taxonomy: Taxonomy::from_poset(poset).expect("ids are distinct"),
        markers,
    }
}

/// An unclassified region made of a chain of length `2n` (so `2n + 1`
/// singleton itemsets) and one incomparable singleton. Returns the item
/// taxonomy and the poset of singleton itemsets to mine; the incomparable
/// itemset is the last node.
pub fn chain_plus_incomparable(n: usize) -> (Taxonomy, Poset<Antichain>) {
    chain_of(2 * n + 1)
}

/// As [`chain_plus_incomparable`] with an explicit number of chain elements.
pub fn chain_of(elements: usize) -> (Taxonomy, Poset<Antichain>) {
    let ids: Vec<u64> = (1..=elements as u64 + 1).collect();
    let edges: Vec<(u64, u64)> = (1..elements as u64).map(|i| (i, i + 1)).collect();
    let taxonomy = Taxonomy::from_ids(&ids, &edges).expect("acyclic");
    let singletons = (0..taxonomy.len())
        .map(|v| taxonomy.order().antichain([v]).expect("singleton"))
        .collect();
    let poset = Poset::new(singletons, taxonomy.order().clone()).expect("sizes match");
    (taxonomy, poset)
}
