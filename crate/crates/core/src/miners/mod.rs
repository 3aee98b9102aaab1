//! Mining strategies over an itemset taxonomy (or any poset of itemsets)
//! against a frequency oracle.
//!
//! Every miner keeps a [`ClassificationState`] of tri-state marks. An
//! answer for a node is looked up in the marks first, then in the
//! instrumented oracle's cache, and only then sent to the crowd. Every
//! answer is propagated at once: frequent to all ancestors, infrequent to
//! all descendants.

mod alg1;
mod chains;
mod split;

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::itemset::{ItemsetTaxonomy, KItemsetTaxonomy};
use crate::oracle::{FrequencyOracle, InstrumentedOracle, OracleError, QueryRecord};
use crate::par::Execution;
use crate::poset::{Antichain, Order, Poset, PosetError};
use crate::DEFAULT_ANTICHAIN_CAP;

pub use alg1::{mine_alg1, Strategy};
pub use chains::mine_chain_partition;
pub use split::{best_split_element, greedy_best_split_itemset, mine_greedy_anytime, mine_halving, split_sizes};

#[derive(Debug, Error)]
pub enum MiningError {
    #[error("the oracle is not monotone: node {node} contradicts an earlier answer")]
    NonMonotoneOracle { node: usize },
    #[error("the classification is incomplete: {unclassified} nodes are unclassified")]
    IncompleteState { unclassified: usize },
    #[error("{0}")]
    UnsupportedTaxonomy(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("mining aborted: {reason}")]
    Aborted { reason: String, partial: Box<MiningResult> },
}

/// Classification of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Unclassified,
    Frequent,
    Infrequent,
}

/// Tri-state marks over the nodes of an order. Frequent marks are closed
/// under ancestors and infrequent marks under descendants.
#[derive(Debug, Clone)]
pub struct ClassificationState<'o> {
    order: &'o Order,
    frequent: FixedBitSet,
    infrequent: FixedBitSet,
}

impl<'o> ClassificationState<'o> {
    pub fn new(order: &'o Order) -> Self {
        ClassificationState {
            order,
            frequent: FixedBitSet::with_capacity(order.len()),
            infrequent: FixedBitSet::with_capacity(order.len()),
        }
    }

    pub fn order(&self) -> &'o Order {
        self.order
    }

    pub fn mark(&self, node: usize) -> Mark {
        if self.frequent.contains(node) {
            Mark::Frequent
        } else if self.infrequent.contains(node) {
            Mark::Infrequent
        } else {
            Mark::Unclassified
        }
    }

    pub fn marks(&self) -> Vec<Mark> {
        (0..self.order.len()).map(|v| self.mark(v)).collect()
    }

    /// Marks `node` and its ancestors frequent; returns how many nodes
    /// became newly classified.
    pub fn mark_frequent(&mut self, node: usize) -> Result<usize, MiningError> {
        let up = self.order.ancestors(node);
        if !up.is_disjoint(&self.infrequent) {
            return Err(MiningError::NonMonotoneOracle { node });
        }
        let before = self.frequent.count_ones(..);
        self.frequent.union_with(up);
        Ok(self.frequent.count_ones(..) - before)
    }

    /// Marks `node` and its descendants infrequent; returns how many nodes
    /// became newly classified.
    pub fn mark_infrequent(&mut self, node: usize) -> Result<usize, MiningError> {
        let down = self.order.descendants(node);
        if !down.is_disjoint(&self.frequent) {
            return Err(MiningError::NonMonotoneOracle { node });
        }
        let before = self.infrequent.count_ones(..);
        self.infrequent.union_with(down);
        Ok(self.infrequent.count_ones(..) - before)
    }

    pub fn record(&mut self, node: usize, frequent: bool) -> Result<usize, MiningError> {
        if frequent {
            self.mark_frequent(node)
        } else {
            self.mark_infrequent(node)
        }
    }

    pub fn frequent(&self) -> &FixedBitSet {
        &self.frequent
    }

    pub fn infrequent(&self) -> &FixedBitSet {
        &self.infrequent
    }

    pub fn classified_count(&self) -> usize {
        self.frequent.count_ones(..) + self.infrequent.count_ones(..)
    }

    pub fn unclassified_count(&self) -> usize {
        self.order.len() - self.classified_count()
    }

    pub fn is_complete(&self) -> bool {
        self.unclassified_count() == 0
    }

    pub fn unclassified(&self) -> FixedBitSet {
        let mut u = FixedBitSet::with_capacity(self.order.len());
        u.insert_range(..);
        u.difference_with(&self.frequent);
        u.difference_with(&self.infrequent);
        u
    }

    /// MFIs and MIIs of a fully classified state.
    pub fn derive_borders(&self) -> Result<(Antichain, Antichain), MiningError> {
        if !self.is_complete() {
            return Err(MiningError::IncompleteState {
                unclassified: self.unclassified_count(),
            });
        }
        Ok(self.certified_borders())
    }

    /// Border elements already certified by the marks: frequent nodes
    /// whose covers are all infrequent, and infrequent nodes whose lower
    /// covers are all frequent. On a complete state these are exactly the
    /// MFIs and MIIs.
    pub fn certified_borders(&self) -> (Antichain, Antichain) {
        let mfis = self
            .order
            .antichain(
                self.frequent
                    .ones()
                    .filter(|&v| self.order.children(v).iter().all(|&c| self.infrequent.contains(c))),
            )
            .expect("maximal frequent nodes are pairwise incomparable");
        let miis = self
            .order
            .antichain(
                self.infrequent
                    .ones()
                    .filter(|&v| self.order.parents(v).iter().all(|&p| self.frequent.contains(p))),
            )
            .expect("minimal infrequent nodes are pairwise incomparable");
        (mfis, miis)
    }
}

/// Outcome of one mining run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MiningResult {
    pub strategy: String,
    /// Maximal frequent itemsets as item-index antichains, ordered by node.
    pub mfis: Vec<Antichain>,
    pub miis: Vec<Antichain>,
    pub mfi_nodes: Vec<usize>,
    pub mii_nodes: Vec<usize>,
    /// Distinct itemsets sent to the oracle during this run.
    pub crowd_queries: usize,
    pub transcript: Vec<QueryRecord>,
    /// False when the run stopped early (budget or aborted session); the
    /// borders then only list certified elements.
    pub completed: bool,
    pub classified: usize,
    #[serde(skip)]
    pub marks: Vec<Mark>,
}

/// Knobs shared by the miners that need them.
#[derive(Debug, Clone, Copy)]
pub struct MinerOptions {
    /// Cap on antichain counts in best-split selection.
    pub antichain_cap: u64,
    /// Maximum number of crowd queries for the anytime miner.
    pub budget: Option<usize>,
    pub exec: Execution,
}

impl Default for MinerOptions {
    fn default() -> Self {
        MinerOptions {
            antichain_cap: DEFAULT_ANTICHAIN_CAP,
            budget: None,
            exec: Execution::default(),
        }
    }
}

/// A miner run in progress: the poset, its marks and the oracle.
pub(crate) struct Session<'p, 'q, O> {
    pub poset: &'p Poset<Antichain>,
    pub state: ClassificationState<'p>,
    pub oracle: &'q mut InstrumentedOracle<O>,
    start: usize,
}

impl<'p, 'q, O: FrequencyOracle> Session<'p, 'q, O> {
    pub fn new(poset: &'p Poset<Antichain>, oracle: &'q mut InstrumentedOracle<O>) -> Self {
        let start = oracle.query_count();
        Session {
            poset,
            state: ClassificationState::new(poset.order()),
            oracle,
            start,
        }
    }

    pub fn queries(&self) -> usize {
        self.oracle.query_count() - self.start
    }

    /// The answer for `node` from the marks, the cache or the oracle; new
    /// answers are marked immediately.
    pub fn answer(&mut self, node: usize) -> Result<bool, MiningError> {
        match self.state.mark(node) {
            Mark::Frequent => Ok(true),
            Mark::Infrequent => Ok(false),
            Mark::Unclassified => {
                let frequent = self.oracle.is_frequent(self.poset.element(node))?;
                self.state.record(node, frequent)?;
                Ok(frequent)
            }
        }
    }

    /// Turns the run outcome into a result, wrapping oracle failures into
    /// an abort that carries the partial state.
    pub fn conclude(self, strategy: &str, outcome: Result<(), MiningError>) -> Result<MiningResult, MiningError> {
        match outcome {
            Ok(()) => Ok(build_result(strategy, self.poset, &self.state, self.oracle, self.start)),
            Err(MiningError::Oracle(e)) => Err(MiningError::Aborted {
                reason: e.to_string(),
                partial: Box::new(build_result(strategy, self.poset, &self.state, self.oracle, self.start)),
            }),
            Err(e) => Err(e),
        }
    }
}

pub(crate) fn build_result<O>(
    strategy: &str,
    poset: &Poset<Antichain>,
    state: &ClassificationState<'_>,
    oracle: &InstrumentedOracle<O>,
    start: usize,
) -> MiningResult
where
    O: FrequencyOracle,
{
    let (mfis, miis) = state.certified_borders();
    let transcript = oracle.transcript()[start..].to_vec();
    MiningResult {
        strategy: strategy.to_string(),
        mfis: mfis.iter().map(|v| poset.element(v).clone()).collect(),
        miis: miis.iter().map(|v| poset.element(v).clone()).collect(),
        mfi_nodes: mfis.into_vec(),
        mii_nodes: miis.into_vec(),
        crowd_queries: transcript.len(),
        transcript,
        completed: state.is_complete(),
        classified: state.classified_count(),
        marks: state.marks(),
    }
}

/// Queries every node once.
pub fn mine_exhaustive<O: FrequencyOracle>(
    poset: &Poset<Antichain>,
    oracle: &mut InstrumentedOracle<O>,
) -> Result<MiningResult, MiningError> {
    let mut s = Session::new(poset, oracle);
    let outcome = (|| {
        for v in 0..poset.len() {
            let frequent = s.oracle.is_frequent(poset.element(v))?;
            s.state.record(v, frequent)?;
        }
        Ok(())
    })();
    s.conclude("exhaustive", outcome)
}

/// Every mining strategy, for uniform dispatch from the harness and CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Miner {
    Alg1(Strategy),
    Exhaustive,
    Halving,
    ChainPartition,
    Greedy,
}

impl Miner {
    pub const ALL: [Miner; 8] = [
        Miner::Alg1(Strategy::Any),
        Miner::Alg1(Strategy::Minimal),
        Miner::Alg1(Strategy::Maximal),
        Miner::Alg1(Strategy::Dual),
        Miner::Exhaustive,
        Miner::Halving,
        Miner::ChainPartition,
        Miner::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Miner::Alg1(s) => s.miner_name(),
            Miner::Exhaustive => "exhaustive",
            Miner::Halving => "halving",
            Miner::ChainPartition => "chain-partition",
            Miner::Greedy => "greedy",
        }
    }

    /// Runs on a full itemset taxonomy.
    pub fn mine<O: FrequencyOracle>(
        self,
        it: &ItemsetTaxonomy,
        oracle: &mut InstrumentedOracle<O>,
        opts: &MinerOptions,
    ) -> Result<MiningResult, MiningError> {
        match self {
            Miner::Alg1(s) => mine_alg1(it, oracle, s),
            other => other.mine_poset(it.poset(), oracle, opts),
        }
    }

    /// Runs on a k-itemset taxonomy, where the alg1 miners are not available.
    pub fn mine_k<O: FrequencyOracle>(
        self,
        kt: &KItemsetTaxonomy,
        oracle: &mut InstrumentedOracle<O>,
        opts: &MinerOptions,
    ) -> Result<MiningResult, MiningError> {
        self.mine_poset(kt.poset(), oracle, opts)
    }

    fn mine_poset<O: FrequencyOracle>(
        self,
        poset: &Poset<Antichain>,
        oracle: &mut InstrumentedOracle<O>,
        opts: &MinerOptions,
    ) -> Result<MiningResult, MiningError> {
        match self {
            Miner::Alg1(_) => Err(MiningError::UnsupportedTaxonomy(
                "The alg1 miners need the full itemset taxonomy".to_string(),
            )),
            Miner::Exhaustive => mine_exhaustive(poset, oracle),
            Miner::Halving => mine_halving(poset, oracle, opts),
            Miner::ChainPartition => mine_chain_partition(poset, oracle),
            Miner::Greedy => mine_greedy_anytime(poset, oracle, opts.budget),
        }
    }
}

impl fmt::Display for Miner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Miner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let m = match s {
            "alg1" | "alg1-any" => Miner::Alg1(Strategy::Any),
            "alg1-minimal" => Miner::Alg1(Strategy::Minimal),
            "alg1-maximal" => Miner::Alg1(Strategy::Maximal),
            "alg1-dual" => Miner::Alg1(Strategy::Dual),
            "exhaustive" => Miner::Exhaustive,
            "halving" => Miner::Halving,
            "chain-partition" => Miner::ChainPartition,
            "greedy" => Miner::Greedy,
            _ => {
                let names: Vec<_> = Miner::ALL.iter().map(|m| m.name()).collect();
                return Err(format!("unknown miner {s:?}; expected one of {}", names.join(", ")));
            }
        };
        Ok(m)
    }
}

impl Serialize for Miner {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Miner {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::oracle::PredicateOracle;

    pub fn psi1() -> Order {
        Order::from_edges(4, &[(0, 2), (0, 3), (1, 3)]).unwrap()
    }

    pub fn chain(n: usize) -> Order {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Order::from_edges(n, &edges).unwrap()
    }

    pub fn flat(n: usize) -> Order {
        Order::from_edges(n, &[]).unwrap()
    }

    pub fn node(it: &ItemsetTaxonomy, items: &[usize]) -> usize {
        it.node_of(&it.base().antichain(items.iter().copied()).unwrap())
            .unwrap()
    }

    /// Predicate oracle with the given item-level MFIs.
    pub fn oracle(it: &ItemsetTaxonomy, mfis: &[&[usize]]) -> InstrumentedOracle<PredicateOracle> {
        let nodes: Vec<usize> = mfis.iter().map(|m| node(it, m)).collect();
        let m = it.order().antichain(nodes).unwrap();
        InstrumentedOracle::new(PredicateOracle::new(it, &m).unwrap())
    }

    pub fn items(result: &[Antichain]) -> Vec<Vec<usize>> {
        result.iter().map(|a| a.items().to_vec()).collect()
    }
}
