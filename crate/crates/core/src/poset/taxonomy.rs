use std::collections::HashMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::{Antichain, Order, Poset, PosetError};

/// An item of a taxonomy: an external id plus an optional display label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Item {
    pub fn new(id: u64) -> Self {
        Item { id, label: None }
    }

    pub fn labelled(id: u64, label: impl Into<String>) -> Self {
        Item {
            id,
            label: Some(label.into()),
        }
    }
}

/// An item taxonomy: a poset of items, where `i <= j` means `j` is a more
/// specific concept than `i`.
///
/// Items carry arbitrary external ids; every algorithm works on the dense
/// index of an item in [`Taxonomy::items`].
#[derive(Debug, Clone)]
pub struct Taxonomy {
    poset: Poset<Item>,
    index: HashMap<u64, usize>,
}

impl Taxonomy {
    /// Builds a taxonomy from items and `(parent_id, child_id)` edges. The
    /// edges may be any DAG generating the order.
    pub fn build(items: Vec<Item>, edges: &[(u64, u64)]) -> Result<Self, PosetError> {
        let index = index_items(&items)?;
        let dense = edges
            .iter()
            .map(|&(p, c)| Ok((lookup(&index, p)?, lookup(&index, c)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        let poset = Poset::from_edges(items, &dense)?;
        Ok(Taxonomy { poset, index })
    }

    /// Unlabelled items with the given ids.
    pub fn from_ids(ids: &[u64], edges: &[(u64, u64)]) -> Result<Self, PosetError> {
        Self::build(ids.iter().map(|&id| Item::new(id)).collect(), edges)
    }

    pub fn from_poset(poset: Poset<Item>) -> Result<Self, PosetError> {
        let index = index_items(poset.elements())?;
        Ok(Taxonomy { poset, index })
    }

    pub fn poset(&self) -> &Poset<Item> {
        &self.poset
    }

    pub fn order(&self) -> &Order {
        self.poset.order()
    }

    pub fn items(&self) -> &[Item] {
        self.poset.elements()
    }

    /// Dense index of the item with external id `id`.
    pub fn index_of(&self, id: u64) -> Result<usize, PosetError> {
        lookup(&self.index, id)
    }

    pub fn id_of(&self, item: usize) -> u64 {
        self.items()[item].id
    }

    /// Label if present, otherwise the id.
    pub fn display_name(&self, item: usize) -> String {
        let it = &self.items()[item];
        it.label.clone().unwrap_or_else(|| it.id.to_string())
    }

    /// A validated antichain given by external ids.
    pub fn itemset(&self, ids: &[u64]) -> Result<Antichain, PosetError> {
        let dense = self.indices(ids)?;
        self.poset.antichain(dense)
    }

    /// Normalizes an arbitrary set of external ids to its antichain.
    pub fn normalize_ids(&self, ids: &[u64]) -> Result<Antichain, PosetError> {
        let dense = self.indices(ids)?;
        self.poset.normalize_antichain(dense)
    }

    pub fn indices(&self, ids: &[u64]) -> Result<Vec<usize>, PosetError> {
        ids.iter().map(|&id| self.index_of(id)).collect()
    }

    /// External ids of the members of `a`, in ascending id order.
    pub fn ids_of(&self, a: &Antichain) -> Vec<u64> {
        let mut ids: Vec<u64> = a.iter().map(|i| self.id_of(i)).collect();
        ids.sort_unstable();
        ids
    }

    /// Covering edges as `(parent_id, child_id)` pairs.
    pub fn cover_edge_ids(&self) -> Vec<(u64, u64)> {
        self.poset
            .cover_edges()
            .into_iter()
            .map(|(a, b)| (self.id_of(a), self.id_of(b)))
            .collect()
    }
}

impl Deref for Taxonomy {
    type Target = Order;

    fn deref(&self) -> &Order {
        self.poset.order()
    }
}

fn index_items(items: &[Item]) -> Result<HashMap<u64, usize>, PosetError> {
    let mut index = HashMap::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        if index.insert(item.id, k).is_some() {
            return Err(PosetError::DuplicateItem(item.id));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<u64, usize>, id: u64) -> Result<usize, PosetError> {
    index.get(&id).copied().ok_or(PosetError::UnknownItem(id))
}
