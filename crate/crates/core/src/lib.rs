//! Taxonomy-guided frequent itemset mining against a frequency oracle.
//!
//! The crate materializes itemset taxonomies from an item taxonomy, runs
//! several mining strategies against pluggable oracles (a transaction
//! database, an explicit set of maximal frequent itemsets, or a human), and
//! measures the number of distinct oracle calls each strategy needs.
//!
//! Module map:
//!
//! * [`poset`]: item taxonomies, generic finite posets, antichains, order
//!   ideals, antichain enumeration and Dilworth chain partitions.
//! * [`itemset`]: the itemset taxonomy, its size-bounded variant, the
//!   solution taxonomy and the antichain/monotone-predicate bijection.
//! * [`oracle`]: frequency oracles and query instrumentation.
//! * [`miners`]: the mining strategies and their classification state.
//! * [`harness`]: generators, fixtures, file formats and the experiment
//!   runner used by the `taxmine` binary.

pub mod harness;
pub mod itemset;
pub mod miners;
pub mod oracle;
pub mod par;
pub mod poset;

pub use itemset::{EdgeKind, ItemsetTaxonomy, KItemsetTaxonomy};
pub use miners::{ClassificationState, Mark, Miner, MiningError, MiningResult};
pub use oracle::{FrequencyOracle, InstrumentedOracle, OracleError, Threshold};
pub use poset::{Antichain, Item, Order, OrderIdeal, Poset, PosetError, Taxonomy};

/// Default upper bound on the number of antichains any enumeration or count
/// may visit before giving up.
pub const DEFAULT_ANTICHAIN_CAP: u64 = 1 << 20;

/// Default upper bound on the number of nodes a materialized itemset
/// taxonomy may have.
pub const DEFAULT_NODE_CAP: usize = 1 << 16;
