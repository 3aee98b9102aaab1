//! Split-based miners: the best-split (solution-halving) search and the
//! anytime greedy miner.

use fixedbitset::FixedBitSet;

use super::{ClassificationState, MinerOptions, MiningError, MiningResult, Session};
use crate::oracle::{FrequencyOracle, InstrumentedOracle};
use crate::par::map_range;
use crate::poset::{Antichain, Poset, PosetError};

/// For each unclassified node `A`, the pair `(s, t)` where `s` counts
/// antichains of the unclassified subposet `U` that meet `desc(A)` (the
/// solutions eliminated if `A` is infrequent) and `t` the remaining ones
/// (eliminated if `A` is frequent). Nodes outside `U` get `None`.
pub fn split_sizes(
    state: &ClassificationState<'_>,
    opts: &MinerOptions,
) -> Result<Vec<Option<(u64, u64)>>, PosetError> {
    let order = state.order();
    let unclassified = state.unclassified();
    let total = order.count_antichains_within(&unclassified, opts.antichain_cap)?;
    let sizes = map_range(opts.exec, 0..order.len(), |a| {
        if !unclassified.contains(a) {
            return Ok(None);
        }
        let mut rest = unclassified.clone();
        rest.difference_with(order.descendants(a));
        let t = order.count_antichains_within(&rest, opts.antichain_cap)?;
        Ok(Some((total - t, t)))
    });
    sizes.into_iter().collect()
}

/// The unclassified node maximizing `min(s, t)` from [`split_sizes`],
/// smallest id on ties; `None` when everything is classified.
pub fn best_split_element(state: &ClassificationState<'_>, opts: &MinerOptions) -> Result<Option<usize>, PosetError> {
    let sizes = split_sizes(state, opts)?;
    Ok(argmax_min(sizes.iter().map(|s| s.map(|(s, t)| s.min(t)))))
}

/// Index of the largest value, first one on ties.
fn argmax_min<I: Iterator<Item = Option<u64>>>(scores: I) -> Option<usize> {
    let mut best: Option<(usize, u64)> = None;
    for (v, score) in scores.enumerate() {
        if let Some(score) = score {
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((v, score));
            }
        }
    }
    best.map(|(v, _)| v)
}

/// Queries the best-split element until everything is classified.
pub fn mine_halving<O: FrequencyOracle>(
    poset: &Poset<Antichain>,
    oracle: &mut InstrumentedOracle<O>,
    opts: &MinerOptions,
) -> Result<MiningResult, MiningError> {
    let mut s = Session::new(poset, oracle);
    let outcome = (|| {
        while let Some(v) = best_split_element(&s.state, opts)? {
            s.answer(v)?;
        }
        Ok(())
    })();
    s.conclude("halving", outcome)
}

/// Unclassified ancestors and descendants of `node`, both counting the node.
pub fn up_down(state: &ClassificationState<'_>, unclassified: &FixedBitSet, node: usize) -> (usize, usize) {
    let order = state.order();
    (
        order.ancestors(node).intersection_count(unclassified),
        order.descendants(node).intersection_count(unclassified),
    )
}

/// The unclassified node maximizing `min(up, down)`, the number of nodes
/// its answer is guaranteed to classify; smallest id on ties.
pub fn greedy_best_split_itemset(state: &ClassificationState<'_>) -> Option<usize> {
    let unclassified = state.unclassified();
    argmax_min((0..state.order().len()).map(|v| {
        unclassified.contains(v).then(|| {
            let (up, down) = up_down(state, &unclassified, v);
            up.min(down) as u64
        })
    }))
}

/// Queries the greedy best-split itemset until everything is classified or
/// `budget` crowd queries have been made.
pub fn mine_greedy_anytime<O: FrequencyOracle>(
    poset: &Poset<Antichain>,
    oracle: &mut InstrumentedOracle<O>,
    budget: Option<usize>,
) -> Result<MiningResult, MiningError> {
    let mut s = Session::new(poset, oracle);
    let outcome = (|| {
        while budget.is_none_or(|b| s.queries() < b) {
            let Some(v) = greedy_best_split_itemset(&s.state) else {
                break;
            };
            s.answer(v)?;
        }
        Ok(())
    })();
    s.conclude("greedy", outcome)
}
