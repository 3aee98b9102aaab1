//! Brute-force reference implementations used as test oracles. Nothing
//! here calls into the library's order machinery: reachability, antichains
//! and the itemset order are recomputed from raw edge lists.

#![allow(dead_code)]

use taxmine_core::oracle::OracleError;
use taxmine_core::{Antichain, FrequencyOracle, Order};

/// A DAG on `0..n` with its reflexive-transitive closure computed by
/// Floyd-Warshall.
#[derive(Debug, Clone)]
pub struct Dag {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    reach: Vec<Vec<bool>>,
}

impl Dag {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &edges {
            reach[a][b] = true;
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (cell, &r) in row.iter_mut().zip(&via) {
                    *cell |= r;
                }
            }
        }
        Dag { n, edges, reach }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn order(&self) -> Order {
        Order::from_edges(self.n, &self.edges).unwrap()
    }

    /// Every subset of pairwise incomparable elements, each sorted, in
    /// subset-bitmask order.
    pub fn antichains(&self) -> Vec<Vec<usize>> {
        subsets(self.n)
            .filter(|s| is_antichain(s, |a, b| self.leq(a, b)))
            .collect()
    }

    /// `A <= B` for itemsets: every item of `A` lies below an item of `B`.
    pub fn itemset_leq(&self, a: &[usize], b: &[usize]) -> bool {
        a.iter().all(|&x| b.iter().any(|&y| self.leq(x, y)))
    }

    pub fn width(&self) -> usize {
        self.antichains().iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect())
}

pub fn is_antichain(s: &[usize], leq: impl Fn(usize, usize) -> bool) -> bool {
    s.iter().all(|&a| s.iter().all(|&b| a == b || !leq(a, b)))
}

/// All DAGs on `n` elements whose edges go from lower to higher index.
/// Every finite poset is isomorphic to one of their closures.
pub fn forward_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len())
        .map(|code| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| code >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Dag::new(n, edges)
        })
        .collect()
}

/// The itemset taxonomy computed from scratch: the antichains of the item
/// DAG and their pairwise order.
pub struct BruteItemsets {
    pub dag: Dag,
    pub nodes: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

impl BruteItemsets {
    pub fn new(dag: &Dag) -> Self {
        let nodes = dag.antichains();
        let leq = nodes
            .iter()
            .map(|a| nodes.iter().map(|b| dag.itemset_leq(a, b)).collect())
            .collect();
        BruteItemsets {
            dag: dag.clone(),
            nodes,
            leq,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Covering pairs `a ⋖ b`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Antichains of the itemset taxonomy: every possible set of MFIs.
    pub fn solutions(&self) -> Vec<Vec<usize>> {
        assert!(self.len() <= 20, "too many subsets");
        subsets(self.len())
            .filter(|s| is_antichain(s, |a, b| self.leq[a][b]))
            .collect()
    }

    /// Truth of the predicate with maximal true elements `mfis` (node
    /// indices into `nodes`).
    pub fn truth(&self, mfis: &[usize]) -> Vec<bool> {
        (0..self.len()).map(|a| mfis.iter().any(|&m| self.leq[a][m])).collect()
    }

    pub fn maximal_true(&self, truth: &[bool]) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out: Vec<Vec<usize>> = (0..n)
            .filter(|&a| truth[a] && !(0..n).any(|b| truth[b] && self.lt(a, b)))
            .map(|a| self.nodes[a].clone())
            .collect();
        out.sort();
        out
    }

    pub fn minimal_false(&self, truth: &[bool]) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out: Vec<Vec<usize>> = (0..n)
            .filter(|&a| !truth[a] && !(0..n).any(|b| !truth[b] && self.lt(b, a)))
            .map(|a| self.nodes[a].clone())
            .collect();
        out.sort();
        out
    }
}

/// A monotone predicate given by explicit maximal itemsets, evaluated with
/// the brute-force itemset order.
pub struct BruteOracle<'a> {
    pub dag: &'a Dag,
    pub mfis: Vec<Vec<usize>>,
}

impl BruteOracle<'_> {
    pub fn holds(&self, itemset: &[usize]) -> bool {
        self.mfis.iter().any(|m| self.dag.itemset_leq(itemset, m))
    }
}

impl FrequencyOracle for BruteOracle<'_> {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        Ok(self.holds(itemset.items()))
    }
}

pub fn sorted_items(sets: &[Antichain]) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = sets.iter().map(|a| a.items().to_vec()).collect();
    v.sort();
    v
}

/// `ceil(log2(x))` by repeated doubling.
pub fn ceil_log2(x: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < x {
        k += 1;
    }
    k
}
