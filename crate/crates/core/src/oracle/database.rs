use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{FrequencyOracle, OracleError, Threshold};
use crate::itemset::ItemsetTaxonomy;
use crate::par::{count_range, Execution};
use crate::poset::{Antichain, Order, PosetError};

/// A bag of transactions over dense item indices. Transactions are kept as
/// given; they need not be antichains.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionDatabase {
    transactions: Vec<Vec<usize>>,
}

impl TransactionDatabase {
    pub fn new(transactions: Vec<Vec<usize>>) -> Self {
        TransactionDatabase { transactions }
    }

    pub fn transactions(&self) -> &[Vec<usize>] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Checks that every transaction only mentions items of `order`.
    pub fn validate(&self, order: &Order) -> Result<(), PosetError> {
        self.transactions
            .iter()
            .flatten()
            .try_for_each(|&i| order.check_element(i))
    }

    /// Number of transactions that imply every item of `a`.
    pub fn support_count(&self, order: &Order, a: &Antichain) -> usize {
        self.transactions
            .iter()
            .filter(|t| implies(&order.down_closure(t.iter().copied()), a))
            .count()
    }

    /// Fraction of transactions implying `a`; 0 for an empty database.
    pub fn support(&self, order: &Order, a: &Antichain) -> Ratio<u64> {
        if self.is_empty() {
            return Ratio::from_integer(0);
        }
        Ratio::new(self.support_count(order, a) as u64, self.len() as u64)
    }
}

fn implies(ideal: &FixedBitSet, a: &Antichain) -> bool {
    a.iter().all(|i| ideal.contains(i))
}

/// Answers true iff the support in a database strictly exceeds Θ.
///
/// The order ideal of every transaction is computed once up front, so a
/// query is one bitset probe per transaction and member.
#[derive(Debug, Clone)]
pub struct DatabaseOracle {
    ideals: Vec<FixedBitSet>,
    threshold: Threshold,
    exec: Execution,
}

impl DatabaseOracle {
    pub fn new(order: &Order, db: &TransactionDatabase, threshold: Threshold) -> Result<Self, PosetError> {
        db.validate(order)?;
        let ideals = db
            .transactions()
            .iter()
            .map(|t| order.down_closure(t.iter().copied()))
            .collect();
        Ok(DatabaseOracle {
            ideals,
            threshold,
            exec: Execution::default(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn support_count(&self, a: &Antichain) -> usize {
        count_range(self.exec, 0..self.ideals.len(), |t| implies(&self.ideals[t], a))
    }
}

impl FrequencyOracle for DatabaseOracle {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        let count = self.support_count(itemset) as u64;
        Ok(self.threshold.exceeded_by(count, self.ideals.len() as u64))
    }
}

/// Answers true iff the itemset is implied by one of a fixed set of
/// maximal frequent itemsets.
#[derive(Debug, Clone)]
pub struct PredicateOracle {
    mfis: Vec<Antichain>,
    ideals: Vec<FixedBitSet>,
}

impl PredicateOracle {
    /// `m` is an antichain of nodes of `it`.
    pub fn new(it: &ItemsetTaxonomy, m: &Antichain) -> Result<Self, PosetError> {
        it.order().check_antichain(m)?;
        let mfis = m.iter().map(|v| it.itemset(v).clone()).collect();
        Ok(Self::from_itemsets(it.base(), mfis))
    }

    /// Trusts that `mfis` are antichains of `order` that are pairwise
    /// incomparable as itemsets.
    pub fn from_itemsets(order: &Order, mfis: Vec<Antichain>) -> Self {
        let ideals = mfis.iter().map(|m| order.ideal_of(m).as_bitset().clone()).collect();
        PredicateOracle { mfis, ideals }
    }

    pub fn mfis(&self) -> &[Antichain] {
        &self.mfis
    }

    pub fn holds(&self, itemset: &Antichain) -> bool {
        self.ideals.iter().any(|ideal| implies(ideal, itemset))
    }
}

impl FrequencyOracle for PredicateOracle {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        Ok(self.holds(itemset))
    }
}

/// A database whose frequency oracle equals a given predicate, together
/// with the parameters used to build it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub database: TransactionDatabase,
    /// Number of transactions.
    pub d: usize,
    /// Number of copies of the full item set.
    pub n: usize,
}

/// Builds a database realizing the predicate with maximal frequent itemsets
/// `m` (nodes of `it`) at threshold Θ.
///
/// With `d` transactions and `n = floor(Θd)`, a database made of `n` full
/// transactions, one transaction per member of `m` and `d - n - |m|` empty
/// ones gives support at least `(n+1)/d > Θ` to everything below a member
/// of `m` and at most `n/d < Θ` to everything else. `d` is the smallest
/// value from 2 upward for which `Θd` is not an integer and the
/// transactions fit. An empty `m` is realized by the empty database.
pub fn realize_database(it: &ItemsetTaxonomy, m: &Antichain, threshold: Threshold) -> Result<Realization, PosetError> {
    it.order().check_antichain(m)?;
    let mfis: Vec<Antichain> = m.iter().map(|v| it.itemset(v).clone()).collect();
    Ok(realize_itemsets(it.base().len(), &mfis, threshold))
}

/// [`realize_database`] for item-level MFIs over `item_count` items.
pub fn realize_itemsets(item_count: usize, mfis: &[Antichain], threshold: Threshold) -> Realization {
    if mfis.is_empty() {
        return Realization {
            database: TransactionDatabase::default(),
            d: 0,
            n: 0,
        };
    }
    let (p, q) = (threshold.numer() as usize, threshold.denom() as usize);
    let (d, n) = (2usize..)
        .filter(|d| (p * d) % q != 0)
        .map(|d| (d, p * d / q))
        .find(|&(d, n)| n + mfis.len() <= d)
        .expect("Θ < 1 makes d - floor(Θd) unbounded");

    let full: Vec<usize> = (0..item_count).collect();
    let mut transactions = vec![full; n];
    transactions.extend(mfis.iter().map(|m| m.items().to_vec()));
    transactions.resize(d, Vec::new());
    Realization {
        database: TransactionDatabase::new(transactions),
        d,
        n,
    }
}
