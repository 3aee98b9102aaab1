//! Minimum chain partitions via bipartite matching (Dilworth / Fulkerson).
//!
//! Every strict comparability `a < b` becomes an edge from the left copy of
//! `a` to the right copy of `b`. A maximum matching of size `m` yields
//! `n - m` chains by following matched edges, and that count is the width.

use std::collections::VecDeque;

use super::Order;

const FREE: usize = usize::MAX;

/// Hopcroft-Karp on a bipartite graph given as left-to-right adjacency
/// lists. Returns the right partner of every left vertex.
pub fn maximum_bipartite_matching(adj: &[Vec<usize>], right_len: usize) -> Vec<Option<usize>> {
    let left_len = adj.len();
    let mut match_left = vec![FREE; left_len];
    let mut match_right = vec![FREE; right_len];
    let mut dist = vec![0usize; left_len];

    loop {
        // BFS layers from every free left vertex.
        let mut queue = VecDeque::new();
        for u in 0..left_len {
            if match_left[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = FREE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == FREE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for u in 0..left_len {
            if match_left[u] == FREE {
                augment(u, adj, &mut match_left, &mut match_right, &mut dist);
            }
        }
    }

    match_left.into_iter().map(|v| (v != FREE).then_some(v)).collect()
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_right[v];
        let ok = w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, match_left, match_right, dist));
        if ok {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    dist[u] = FREE;
    false
}

impl Order {
    /// Partition into the minimum number of chains, each listed from its
    /// least to its greatest element. Chains are sorted by first element.
    pub fn chain_partition(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|a| self.descendants[a].ones().filter(|&b| b != a).collect())
            .collect();
        let next = maximum_bipartite_matching(&adj, n);

        let mut has_pred = vec![false; n];
        for b in next.iter().flatten() {
            has_pred[*b] = true;
        }
        let chains: Vec<Vec<usize>> = (0..n)
            .filter(|&v| !has_pred[v])
            .map(|start| {
                let mut chain = vec![start];
                let mut cur = start;
                while let Some(b) = next[cur] {
                    chain.push(b);
                    cur = b;
                }
                chain
            })
            .collect();
        let _ = self.width.set(chains.len());
        chains
    }

    /// Size of the largest antichain, computed through the chain partition.
    pub fn width(&self) -> usize {
        if let Some(&w) = self.width.get() {
            return w;
        }
        self.chain_partition().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid_partition(o: &Order, chains: &[Vec<usize>]) {
        let mut seen = vec![false; o.len()];
        for chain in chains {
            for w in chain.windows(2) {
                assert!(o.lt(w[0], w[1]), "chain {chain:?} is not increasing");
            }
            for &v in chain {
                assert!(!seen[v], "element {v} appears twice");
                seen[v] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn chain_is_one_chain() {
        let o = Order::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let chains = o.chain_partition();
        assert_eq!(chains, vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(o.width(), 1);
    }

    #[test]
    fn flat_is_singletons() {
        let o = Order::from_edges(4, &[]).unwrap();
        assert_eq!(o.chain_partition().len(), 4);
        assert_eq!(o.width(), 4);
    }

    #[test]
    fn width_equals_largest_antichain() {
        let o = Order::from_edges(7, &[(0, 2), (1, 2), (2, 3), (2, 4), (4, 5), (3, 6), (1, 6)]).unwrap();
        let chains = o.chain_partition();
        assert_valid_partition(&o, &chains);
        let largest = o
            .enumerate_antichains(1 << 10)
            .unwrap()
            .iter()
            .map(|a| a.len())
            .max()
            .unwrap();
        assert_eq!(chains.len(), largest);
        assert_eq!(o.width(), largest);
    }

    #[test]
    fn matching_on_a_small_bipartite_graph() {
        // 0-{0,1}, 1-{0}, 2-{1,2}
        let m = maximum_bipartite_matching(&[vec![0, 1], vec![0], vec![1, 2]], 3);
        assert_eq!(m.iter().flatten().count(), 3);
        assert_eq!(m[1], Some(0));
    }
}
