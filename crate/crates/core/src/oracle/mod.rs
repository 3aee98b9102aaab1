//! Frequency oracles: the "crowd" that answers whether an itemset is
//! frequent.
//!
//! Oracles receive item-level antichains. Database and predicate oracles
//! are pure; [`InstrumentedOracle`] adds the answer cache and the query
//! count that every miner is measured by.

mod database;
mod interactive;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poset::{Antichain, Order, PosetError};

pub use database::{
    realize_database, realize_itemsets, DatabaseOracle, PredicateOracle, Realization, TransactionDatabase,
};
pub use interactive::{InteractiveOracle, InteractiveRecord};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the oracle session closed before an answer was given")]
    SessionClosed,
    #[error("invalid threshold {0:?}: expected a fraction p/q strictly between 0 and 1")]
    InvalidThreshold(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("i/o error while talking to the oracle: {0}")]
    Io(#[from] std::io::Error),
}

/// Answers crowd queries "is this itemset frequent?".
pub trait FrequencyOracle {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError>;
}

impl<O: FrequencyOracle + ?Sized> FrequencyOracle for &mut O {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        (**self).is_frequent(itemset)
    }
}

impl<O: FrequencyOracle + ?Sized> FrequencyOracle for Box<O> {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        (**self).is_frequent(itemset)
    }
}

/// Support threshold Θ, an exact fraction with `0 < Θ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold(Ratio<u64>);

impl Threshold {
    pub fn new(numer: u64, denom: u64) -> Result<Self, OracleError> {
        if denom == 0 || numer == 0 || numer >= denom {
            return Err(OracleError::InvalidThreshold(format!("{numer}/{denom}")));
        }
        Ok(Threshold(Ratio::new(numer, denom)))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn numer(self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(self) -> u64 {
        *self.0.denom()
    }

    /// Whether `count / total` strictly exceeds the threshold. An empty
    /// total has support 0 and never does.
    pub fn exceeded_by(self, count: u64, total: u64) -> bool {
        count as u128 * self.denom() as u128 > self.numer() as u128 * total as u128
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Threshold {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OracleError::InvalidThreshold(s.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Threshold::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One forwarded query and its answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub itemset: Antichain,
    pub frequent: bool,
}

/// Wraps an oracle with an answer cache, so that no itemset is ever
/// forwarded twice, and records every forwarded query.
#[derive(Debug)]
pub struct InstrumentedOracle<O> {
    inner: O,
    cache: HashMap<Antichain, bool>,
    transcript: Vec<QueryRecord>,
}

impl<O: FrequencyOracle> InstrumentedOracle<O> {
    pub fn new(inner: O) -> Self {
        InstrumentedOracle {
            inner,
            cache: HashMap::new(),
            transcript: Vec::new(),
        }
    }

    /// Number of distinct itemsets sent to the inner oracle.
    pub fn query_count(&self) -> usize {
        self.transcript.len()
    }

    pub fn transcript(&self) -> &[QueryRecord] {
        &self.transcript
    }

    /// The cached answer for `itemset`, without querying.
    pub fn cached(&self, itemset: &Antichain) -> Option<bool> {
        self.cache.get(itemset).copied()
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut O {
        &mut self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    /// Queries an arbitrary item set, normalized to its antichain first so
    /// that equivalent sets share a cache entry.
    pub fn query_items<I>(&mut self, order: &Order, raw: I) -> Result<bool, OracleError>
    where
        I: IntoIterator<Item = usize>,
    {
        let a = order.normalize_antichain(raw)?;
        self.is_frequent(&a)
    }
}

impl<O: FrequencyOracle> FrequencyOracle for InstrumentedOracle<O> {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        if let Some(answer) = self.cached(itemset) {
            return Ok(answer);
        }
        let answer = self.inner.is_frequent(itemset)?;
        self.cache.insert(itemset.clone(), answer);
        self.transcript.push(QueryRecord {
            itemset: itemset.clone(),
            frequent: answer,
        });
        Ok(answer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Counting {
        calls: usize,
    }

    impl FrequencyOracle for Counting {
        fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
            self.calls += 1;
            Ok(itemset.len() < 2)
        }
    }

    fn psi1() -> Order {
        Order::from_edges(4, &[(0, 2), (0, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn threshold_parsing() {
        let t: Threshold = "1/2".parse().unwrap();
        assert_eq!((t.numer(), t.denom()), (1, 2));
        assert_eq!("2/4".parse::<Threshold>().unwrap(), t);
        assert_eq!(t.to_string(), "1/2");
        for bad in ["0/3", "3/3", "4/3", "1/0", "0.5", "a/b", ""] {
            assert!(bad.parse::<Threshold>().is_err(), "{bad}");
        }
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, "\"1/2\"");
        assert_eq!(serde_json::from_str::<Threshold>(&json).unwrap(), t);
    }

    #[test]
    fn threshold_comparison_is_strict() {
        let t = Threshold::new(1, 2).unwrap();
        assert!(!t.exceeded_by(1, 2));
        assert!(t.exceeded_by(2, 3));
        assert!(!t.exceeded_by(0, 0));
    }

    #[test]
    fn cache_hits_are_not_forwarded() {
        let o = psi1();
        let mut oracle = InstrumentedOracle::new(Counting { calls: 0 });
        oracle.query_items(&o, [2]).unwrap();
        oracle.query_items(&o, [2]).unwrap();
        assert_eq!(oracle.query_count(), 1);
        oracle.query_items(&o, [3]).unwrap();
        assert_eq!(oracle.query_count(), 2);
        // {1,3} in 1-based ids normalizes to {3}
        oracle.query_items(&o, [0, 2]).unwrap();
        assert_eq!(oracle.query_count(), 2);
        assert_eq!(oracle.inner().calls, 2);
        assert_eq!(oracle.transcript().len(), 2);
        assert_eq!(oracle.cached(&o.antichain([2]).unwrap()), Some(true));
    }
}
