//! Seeded generators for taxonomies, gadget posets and ground-truth
//! predicates. All randomness goes through `ChaCha8Rng::seed_from_u64`, so a
//! seed pins the output on every platform.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poset::{Antichain, Order, Taxonomy};

/// Above this many nodes, random predicates come from random linear
/// extensions instead of rejection sampling.
pub const REJECTION_SAMPLING_LIMIT: usize = 20;

/// Items `1..=n` with `i` covered by `i + 1`.
pub fn gen_chain(n: usize) -> Taxonomy {
    let ids: Vec<u64> = (1..=n as u64).collect();
    let edges: Vec<(u64, u64)> = ids.windows(2).map(|w| (w[0], w[1])).collect();
    Taxonomy::from_ids(&ids, &edges).expect("a chain is acyclic")
}

/// Items `1..=n`, pairwise incomparable.
pub fn gen_flat(n: usize) -> Taxonomy {
    let ids: Vec<u64> = (1..=n as u64).collect();
    Taxonomy::from_ids(&ids, &[]).expect("no edges")
}

/// Items `1..=n`; every pair `i < j` becomes an edge with probability
/// `edge_prob`, which is acyclic by construction. The stored order is the
/// transitive reduction.
pub fn gen_random_dag(n: usize, edge_prob: f64, seed: u64) -> Taxonomy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = edge_prob.clamp(0.0, 1.0);
    let ids: Vec<u64> = (1..=n as u64).collect();
    let mut edges = Vec::new();
    for i in 1..=n as u64 {
        for j in i + 1..=n as u64 {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Taxonomy::from_ids(&ids, &edges).expect("forward edges are acyclic")
}

/// Series composition `P ∘ Q`: the elements of `p`, then a fresh element
/// `e = p.len()` above all of them, then the elements of `q` shifted by
/// `p.len() + 1` and placed above `e`.
pub fn concat(p: &Order, q: &Order) -> Order {
    let e = p.len();
    let shift = e + 1;
    let mut edges = p.cover_edges();
    edges.extend(p.maximal_elements().into_iter().map(|x| (x, e)));
    edges.extend(q.minimal_elements().into_iter().map(|y| (e, y + shift)));
    edges.extend(q.cover_edges().into_iter().map(|(a, b)| (a + shift, b + shift)));
    Order::from_edges(p.len() + q.len() + 1, &edges).expect("series composition is acyclic")
}

/// A poset with exactly `n >= 1` antichains: for `n = 2^m₁ + … + 2^m_p`
/// with ascending exponents, the composition of flat posets of sizes
/// `m₁, …, m_p`.
pub fn gen_gamma(n: u64) -> Order {
    assert!(n >= 1, "gen_gamma needs n >= 1");
    (0..64)
        .filter(|m| n >> m & 1 == 1)
        .map(|m| Order::from_edges(m, &[]).expect("flat"))
        .reduce(|acc, part| concat(&acc, &part))
        .expect("n >= 1 has a set bit")
}

/// A random antichain of `order`, standing for a random monotone predicate
/// through its maximal true elements.
///
/// Small orders are sampled uniformly by rejection over random subsets.
/// Larger ones take a random prefix of a random linear extension, which is
/// an order ideal, and return its maximal elements.
pub fn gen_random_predicate(order: &Order, seed: u64) -> Antichain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = order.len();
    if n <= REJECTION_SAMPLING_LIMIT {
        loop {
            let pick: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if let Ok(a) = order.antichain(pick) {
                return a;
            }
        }
    }
    let mut indegree: Vec<usize> = (0..n).map(|v| order.parents(v).len()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let prefix = rng.gen_range(0..=n);
    let mut ideal = FixedBitSet::with_capacity(n);
    for _ in 0..prefix {
        let v = ready.swap_remove(rng.gen_range(0..ready.len()));
        ideal.insert(v);
        for &c in order.children(v) {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.push(c);
            }
        }
    }
    order.maximal_in(&ideal)
}
