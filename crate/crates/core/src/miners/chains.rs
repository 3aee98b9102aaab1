//! Binary search along a minimum chain partition.
//!
//! On a chain the frequent nodes form a prefix, so the frontier is one
//! cut point found by binary search. Marks propagated from other chains
//! narrow each search interval before any query is made.

use super::{Mark, MiningError, MiningResult, Session};
use crate::oracle::{FrequencyOracle, InstrumentedOracle};
use crate::poset::{Antichain, Poset};

pub fn mine_chain_partition<O: FrequencyOracle>(
    poset: &Poset<Antichain>,
    oracle: &mut InstrumentedOracle<O>,
) -> Result<MiningResult, MiningError> {
    let chains = poset.chain_partition();
    let mut s = Session::new(poset, oracle);
    let outcome = (|| {
        for chain in &chains {
            search_chain(&mut s, chain)?;
        }
        Ok(())
    })();
    s.conclude("chain-partition", outcome)
}

/// Classifies every node of `chain` (listed bottom to top).
fn search_chain<O: FrequencyOracle>(s: &mut Session<'_, '_, O>, chain: &[usize]) -> Result<(), MiningError> {
    // Invariant: chain[..=lo] frequent (lo = -1 for none), chain[hi..] infrequent.
    let mut lo: isize = -1;
    let mut hi = chain.len() as isize;
    for (k, &v) in chain.iter().enumerate() {
        match s.state.mark(v) {
            Mark::Frequent => lo = k as isize,
            Mark::Infrequent if hi == chain.len() as isize => hi = k as isize,
            _ => {}
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if s.answer(chain[mid as usize])? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::itemset::ItemsetTaxonomy;

    #[test]
    fn chain_taxonomy_is_one_binary_search() {
        let it = ItemsetTaxonomy::build(&chain(6), 100).unwrap();
        for top in 0..6 {
            let mut o = oracle(&it, &[&[top]]);
            let r = mine_chain_partition(it.poset(), &mut o).unwrap();
            assert_eq!(items(&r.mfis), vec![vec![top]]);
            // ceil(log2(6 + 2)) = 3
            assert!(r.crowd_queries <= 3);
        }
    }

    #[test]
    fn flat3_all_true() {
        let it = ItemsetTaxonomy::build(&flat(3), 100).unwrap();
        let mut o = oracle(&it, &[&[0, 1, 2]]);
        let r = mine_chain_partition(it.poset(), &mut o).unwrap();
        assert_eq!(it.width(), 3);
        let longest = it.order().chain_partition().iter().map(Vec::len).max().unwrap();
        let bound = 3 * (usize::BITS - longest.leading_zeros()) as usize;
        assert!(r.crowd_queries <= bound);
        assert_eq!(items(&r.mfis), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn running_example_agrees_with_other_miners() {
        let it = ItemsetTaxonomy::build(&psi1(), 100).unwrap();
        let mut o = oracle(&it, &[&[2], &[3]]);
        let r = mine_chain_partition(it.poset(), &mut o).unwrap();
        assert!(r.completed);
        assert_eq!(items(&r.mfis), vec![vec![2], vec![3]]);
        assert_eq!(items(&r.miis), vec![vec![1, 2]]);
    }
}
