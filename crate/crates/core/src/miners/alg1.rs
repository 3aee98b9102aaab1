//! The alg1 miner: find one new border element per round.
//!
//! Each round picks an unclassified itemset `A` and asks about it. If it is
//! frequent, a single pass over the items tries to grow `A` by each item
//! (with its ancestors) and keeps every frequent growth; the result is a
//! maximal frequent itemset. An infrequent `A` is shrunk symmetrically,
//! dropping an item with its descendants, into a minimal infrequent one.
//!
//! The miner is a resumable state machine so that the dual strategy can
//! interleave a minimal-choosing and a maximal-choosing instance one fresh
//! crowd query at a time.

use serde::{Deserialize, Serialize};

use super::{build_result, ClassificationState, Mark, MiningError, MiningResult};
use crate::itemset::ItemsetTaxonomy;
use crate::oracle::{FrequencyOracle, InstrumentedOracle};

/// Which unclassified itemset starts each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Lowest node id.
    Any,
    /// A minimal unclassified itemset; its answer is a border element when
    /// infrequent, so MIIs cost one query each.
    Minimal,
    /// A maximal unclassified itemset; MFIs cost one query each.
    Maximal,
    /// Minimal and maximal instances interleaved over a shared oracle,
    /// stopping as soon as either one finishes.
    Dual,
}

impl Strategy {
    pub fn miner_name(self) -> &'static str {
        match self {
            Strategy::Any => "alg1-any",
            Strategy::Minimal => "alg1-minimal",
            Strategy::Maximal => "alg1-maximal",
            Strategy::Dual => "alg1-dual",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    Pick,
    Walk { cur: usize, up: bool, item: usize },
    Done,
}

enum Step {
    /// Stopped before a second fresh crowd query.
    Yielded,
    Finished,
}

struct Instance<'t> {
    it: &'t ItemsetTaxonomy,
    strategy: Strategy,
    state: ClassificationState<'t>,
    phase: Phase,
}

impl<'t> Instance<'t> {
    fn new(it: &'t ItemsetTaxonomy, strategy: Strategy) -> Self {
        Instance {
            it,
            strategy,
            state: ClassificationState::new(it.order()),
            phase: Phase::Pick,
        }
    }

    fn choose(&self) -> Option<usize> {
        let order = self.it.order();
        let open = |v: &usize| self.state.mark(*v) == Mark::Unclassified;
        match self.strategy {
            Strategy::Any => (0..order.len()).find(open),
            Strategy::Minimal | Strategy::Dual => order.topo_order().iter().copied().find(open),
            Strategy::Maximal => order.topo_order().iter().rev().copied().find(open),
        }
    }

    /// The neighbour of `cur` reached through `item`: grow by the item and
    /// its ancestors, or shrink by the item and its descendants.
    fn neighbour(&self, cur: usize, up: bool, item: usize) -> Option<usize> {
        let base = self.it.base();
        let mut ideal = self.it.ideal(cur).clone();
        if ideal.contains(item) == up {
            return None;
        }
        if up {
            ideal.union_with(base.ancestors(item));
        } else {
            ideal.difference_with(base.descendants(item));
        }
        Some(
            self.it
                .node_of_ideal(&ideal)
                .expect("ideals of the base order are nodes"),
        )
    }

    /// The answer for `node`, or `None` when it would be a second fresh
    /// query in a step limited to one.
    fn lookup<O: FrequencyOracle>(
        &mut self,
        node: usize,
        oracle: &mut InstrumentedOracle<O>,
        limited: bool,
        fresh_used: &mut bool,
    ) -> Result<Option<bool>, MiningError> {
        match self.state.mark(node) {
            Mark::Frequent => Ok(Some(true)),
            Mark::Infrequent => Ok(Some(false)),
            Mark::Unclassified => {
                let itemset = self.it.itemset(node);
                if oracle.cached(itemset).is_none() {
                    if limited && *fresh_used {
                        return Ok(None);
                    }
                    *fresh_used = true;
                }
                let frequent = oracle.is_frequent(itemset)?;
                self.state.record(node, frequent)?;
                Ok(Some(frequent))
            }
        }
    }

    /// Runs until done or, when `limited`, until a second fresh query
    /// would be needed.
    fn run<O: FrequencyOracle>(
        &mut self,
        oracle: &mut InstrumentedOracle<O>,
        limited: bool,
    ) -> Result<Step, MiningError> {
        let items = self.it.base().len();
        let mut fresh_used = false;
        loop {
            match self.phase {
                Phase::Done => return Ok(Step::Finished),
                Phase::Pick => {
                    let Some(a) = self.choose() else {
                        self.phase = Phase::Done;
                        continue;
                    };
                    let Some(up) = self.lookup(a, oracle, limited, &mut fresh_used)? else {
                        return Ok(Step::Yielded);
                    };
                    self.phase = Phase::Walk { cur: a, up, item: 0 };
                }
                Phase::Walk { item, .. } if item == items => self.phase = Phase::Pick,
                Phase::Walk { cur, up, item } => {
                    let mut next = cur;
                    if let Some(b) = self.neighbour(cur, up, item) {
                        let Some(frequent) = self.lookup(b, oracle, limited, &mut fresh_used)? else {
                            return Ok(Step::Yielded);
                        };
                        if frequent == up {
                            next = b;
                        }
                    }
                    self.phase = Phase::Walk {
                        cur: next,
                        up,
                        item: item + 1,
                    };
                }
            }
        }
    }
}

/// Runs the alg1 miner with the given strategy on the full itemset taxonomy.
pub fn mine_alg1<O: FrequencyOracle>(
    it: &ItemsetTaxonomy,
    oracle: &mut InstrumentedOracle<O>,
    strategy: Strategy,
) -> Result<MiningResult, MiningError> {
    let start = oracle.query_count();
    let name = strategy.miner_name();
    let poset = it.poset();

    if strategy != Strategy::Dual {
        let mut run = Instance::new(it, strategy);
        let outcome = run.run(oracle, false).map(|_| ());
        return conclude(name, poset, &run.state, oracle, start, outcome);
    }

    let mut low = Instance::new(it, Strategy::Minimal);
    let mut high = Instance::new(it, Strategy::Maximal);
    let mut low_turn = true;
    let outcome = loop {
        let current = if low_turn { &mut low } else { &mut high };
        match current.run(oracle, true) {
            Ok(Step::Finished) => break Ok(()),
            Ok(Step::Yielded) => low_turn = !low_turn,
            Err(e) => break Err(e),
        }
    };
    let finished = if low_turn { &low } else { &high };
    // On an abort, report the further-along instance.
    let best = if outcome.is_err() && high.state.classified_count() > low.state.classified_count() {
        &high
    } else {
        finished
    };
    conclude(name, poset, &best.state, oracle, start, outcome)
}

fn conclude<O: FrequencyOracle>(
    name: &str,
    poset: &crate::poset::Poset<crate::poset::Antichain>,
    state: &ClassificationState<'_>,
    oracle: &InstrumentedOracle<O>,
    start: usize,
    outcome: Result<(), MiningError>,
) -> Result<MiningResult, MiningError> {
    match outcome {
        Ok(()) => Ok(build_result(name, poset, state, oracle, start)),
        Err(MiningError::Oracle(e)) => Err(MiningError::Aborted {
            reason: e.to_string(),
            partial: Box::new(build_result(name, poset, state, oracle, start)),
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::oracle::{FrequencyOracle, OracleError};
    use crate::poset::Antichain;

    const STRATEGIES: [Strategy; 4] = [Strategy::Any, Strategy::Minimal, Strategy::Maximal, Strategy::Dual];

    #[test]
    fn running_example_every_strategy() {
        let it = ItemsetTaxonomy::build(&psi1(), 100).unwrap();
        for s in STRATEGIES {
            let mut o = oracle(&it, &[&[2], &[3]]);
            let r = mine_alg1(&it, &mut o, s).unwrap();
            assert!(r.completed, "{s:?}");
            assert_eq!(items(&r.mfis), vec![vec![2], vec![3]], "{s:?}");
            assert_eq!(items(&r.miis), vec![vec![1, 2]], "{s:?}");
            assert!(r.crowd_queries <= 12, "{s:?}: {}", r.crowd_queries);
            assert_eq!(r.crowd_queries, o.query_count());
        }
    }

    #[test]
    fn all_false_oracle() {
        let it = ItemsetTaxonomy::build(&psi1(), 100).unwrap();
        for s in STRATEGIES {
            let mut o = oracle(&it, &[]);
            let r = mine_alg1(&it, &mut o, s).unwrap();
            assert!(r.mfis.is_empty());
            assert_eq!(r.miis, vec![Antichain::empty()]);
            assert!(r.crowd_queries <= 1 + 4, "{s:?}");
        }
    }

    #[test]
    fn all_true_oracle_on_flat() {
        let it = ItemsetTaxonomy::build(&flat(3), 100).unwrap();
        for s in STRATEGIES {
            let mut o = oracle(&it, &[&[0, 1, 2]]);
            let r = mine_alg1(&it, &mut o, s).unwrap();
            assert_eq!(items(&r.mfis), vec![vec![0, 1, 2]]);
            assert!(r.miis.is_empty());
            assert!(r.crowd_queries <= 6, "{s:?}: {}", r.crowd_queries);
        }
    }

    struct Flaky;

    impl FrequencyOracle for Flaky {
        fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
            Ok(itemset.len() != 1)
        }
    }

    #[test]
    fn non_monotone_answers() {
        let it = ItemsetTaxonomy::build(&flat(2), 100).unwrap();
        // Marks are consulted before querying, so alg1 never asks
        // about {0,1} and cannot notice the violation.
        let mut o = InstrumentedOracle::new(Flaky);
        assert!(mine_alg1(&it, &mut o, Strategy::Any).unwrap().completed);
        let mut o = InstrumentedOracle::new(Flaky);
        assert!(matches!(
            super::super::mine_exhaustive(it.poset(), &mut o),
            Err(MiningError::NonMonotoneOracle { .. })
        ));
    }

    struct Closing(usize);

    impl FrequencyOracle for Closing {
        fn is_frequent(&mut self, _: &Antichain) -> Result<bool, OracleError> {
            if self.0 == 0 {
                return Err(OracleError::SessionClosed);
            }
            self.0 -= 1;
            Ok(true)
        }
    }

    #[test]
    fn closed_session_keeps_partial_state() {
        let it = ItemsetTaxonomy::build(&psi1(), 100).unwrap();
        let mut o = InstrumentedOracle::new(Closing(2));
        match mine_alg1(&it, &mut o, Strategy::Minimal) {
            Err(MiningError::Aborted { partial, .. }) => {
                assert!(!partial.completed);
                assert_eq!(partial.crowd_queries, 2);
                assert!(partial.classified >= 2);
            }
            other => panic!("expected an abort, got {other:?}"),
        }
    }
}
