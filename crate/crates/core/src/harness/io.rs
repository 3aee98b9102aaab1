//! JSON documents exchanged with files and the CLI. Items always appear by
//! their external ids.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::itemset::ItemsetTaxonomy;
use crate::miners::MiningResult;
use crate::oracle::{Threshold, TransactionDatabase};
use crate::poset::{Antichain, Item, Poset, PosetError, Taxonomy};

/// `{"items": [{"id": 1, "label": "…"}], "edges": [[parent, child]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyDoc {
    pub items: Vec<Item>,
    #[serde(default)]
    pub edges: Vec<(u64, u64)>,
}

impl TaxonomyDoc {
    /// Written with the covering edges only.
    pub fn from_taxonomy(t: &Taxonomy) -> Self {
        TaxonomyDoc {
            items: t.items().to_vec(),
            edges: t.cover_edge_ids(),
        }
    }

    pub fn to_taxonomy(&self) -> Result<Taxonomy, PosetError> {
        Taxonomy::build(self.items.clone(), &self.edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetStats {
    pub items: usize,
    pub nodes: usize,
    pub cover_edges: usize,
    pub width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<u64>,
}

/// A materialized poset: node payloads, covering edges between node
/// indices, and summary statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc<T> {
    pub kind: String,
    pub nodes: Vec<T>,
    pub edges: Vec<(usize, usize)>,
    pub stats: PosetStats,
}

/// Document for an itemset taxonomy (full or k-bounded); node payloads are
/// item-id lists.
pub fn itemset_poset_doc(
    kind: &str,
    t: &Taxonomy,
    poset: &Poset<Antichain>,
    solutions: Option<u64>,
) -> PosetDoc<Vec<u64>> {
    let edges = poset.cover_edges();
    PosetDoc {
        kind: kind.to_string(),
        nodes: poset.elements().iter().map(|a| t.ids_of(a)).collect(),
        stats: PosetStats {
            items: t.len(),
            nodes: poset.len(),
            cover_edges: edges.len(),
            width: poset.width(),
            solutions,
        },
        edges,
    }
}

/// Document for the solution taxonomy; each node is a set of itemsets.
pub fn solution_poset_doc(t: &Taxonomy, it: &ItemsetTaxonomy, s: &Poset<Antichain>) -> PosetDoc<Vec<Vec<u64>>> {
    let edges = s.cover_edges();
    PosetDoc {
        kind: "solution-taxonomy".to_string(),
        nodes: s
            .elements()
            .iter()
            .map(|m| m.iter().map(|v| t.ids_of(it.itemset(v))).collect())
            .collect(),
        stats: PosetStats {
            items: t.len(),
            nodes: s.len(),
            cover_edges: edges.len(),
            width: s.width(),
            solutions: None,
        },
        edges,
    }
}

/// A transaction file: the taxonomy file it refers to, Θ as `"p/q"`, and
/// the transactions as item-id lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatabaseDoc {
    pub taxonomy: String,
    pub theta: Threshold,
    pub transactions: Vec<Vec<u64>>,
}

impl DatabaseDoc {
    pub fn from_database(taxonomy: &str, t: &Taxonomy, theta: Threshold, db: &TransactionDatabase) -> Self {
        DatabaseDoc {
            taxonomy: taxonomy.to_string(),
            theta,
            transactions: db
                .transactions()
                .iter()
                .map(|tr| tr.iter().map(|&i| t.id_of(i)).collect())
                .collect(),
        }
    }

    pub fn to_database(&self, t: &Taxonomy) -> Result<TransactionDatabase, PosetError> {
        let transactions = self
            .transactions
            .iter()
            .map(|tr| t.indices(tr))
            .collect::<Result<_, _>>()?;
        Ok(TransactionDatabase::new(transactions))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryDoc {
    pub itemset: Vec<u64>,
    pub frequent: bool,
}

/// A complexity bound a run was checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundDoc {
    pub name: String,
    pub value: u64,
    pub satisfied: bool,
}

/// A mining result with item ids instead of dense indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub strategy: String,
    pub mfis: Vec<Vec<u64>>,
    pub miis: Vec<Vec<u64>>,
    pub crowd_queries: usize,
    pub transcript: Vec<QueryDoc>,
    pub completed: bool,
    #[serde(default)]
    pub bounds: Vec<BoundDoc>,
}

impl ResultDoc {
    pub fn from_result(t: &Taxonomy, r: &MiningResult, bounds: Vec<BoundDoc>) -> Self {
        let ids = |sets: &[Antichain]| sets.iter().map(|a| t.ids_of(a)).collect();
        ResultDoc {
            strategy: r.strategy.clone(),
            mfis: ids(&r.mfis),
            miis: ids(&r.miis),
            crowd_queries: r.crowd_queries,
            transcript: r
                .transcript
                .iter()
                .map(|q| QueryDoc {
                    itemset: t.ids_of(&q.itemset),
                    frequent: q.frequent,
                })
                .collect(),
            completed: r.completed,
            bounds,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| HarnessError::Json {
        path: path.display().to_string(),
        source,
    })?;
    fs::write(path, text + "\n").map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_taxonomy(path: &Path) -> Result<Taxonomy, HarnessError> {
    let doc: TaxonomyDoc = read_json(path)?;
    Ok(doc.to_taxonomy()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures::psi1;

    #[test]
    fn taxonomy_document_shape() {
        let doc = TaxonomyDoc::from_taxonomy(&psi1());
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["items"][0], serde_json::json!({"id": 1, "label": "cycling"}));
        assert_eq!(json["edges"], serde_json::json!([[1, 3], [1, 4], [2, 4]]));
        let back: TaxonomyDoc = serde_json::from_value(json).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn unlabelled_items_and_missing_edges_parse() {
        let doc: TaxonomyDoc = serde_json::from_str(r#"{"items": [{"id": 5}]}"#).unwrap();
        let t = doc.to_taxonomy().unwrap();
        assert_eq!(t.display_name(0), "5");
    }

    #[test]
    fn itemset_taxonomy_document() {
        let t = psi1();
        let it = ItemsetTaxonomy::build(t.order(), 100).unwrap();
        let doc = itemset_poset_doc("itemset-taxonomy", &t, it.poset(), Some(14));
        assert_eq!(doc.stats.nodes, 8);
        assert_eq!(doc.nodes[0], Vec::<u64>::new());
        assert!(doc.nodes.contains(&vec![3, 4]));
    }

    #[test]
    fn database_document_uses_ids() {
        let t = psi1();
        let db = TransactionDatabase::new(vec![vec![3], vec![0, 1]]);
        let doc = DatabaseDoc::from_database("psi1.json", &t, Threshold::new(1, 2).unwrap(), &db);
        assert_eq!(doc.transactions, vec![vec![4], vec![1, 2]]);
        assert_eq!(doc.to_database(&t).unwrap(), db);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"theta\":\"1/2\""));
    }
}
