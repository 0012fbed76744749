use std::collections::VecDeque;

use super::Graph;
use crate::vertex_set::VertexSet;

/// Every connected vertex set of size at most `max_size`, each exactly once,
/// in nondecreasing size order (lexicographic within a size).
///
/// The number of connected sets grows exponentially with `max_size`; the
/// iterator materializes one size level at a time.
pub fn enumerate_connected_sets(g: &Graph, max_size: usize) -> ConnectedSets<'_> {
    ConnectedSets {
        g,
        max_size: max_size.max(1),
        next_size: 1,
        level: VecDeque::new(),
    }
}

pub struct ConnectedSets<'g> {
    g: &'g Graph,
    max_size: usize,
    next_size: usize,
    level: VecDeque<VertexSet>,
}

impl Iterator for ConnectedSets<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        while self.level.is_empty() {
            if self.next_size > self.max_size || self.next_size > self.g.n() {
                return None;
            }
            let mut sets = connected_sets_of_size(self.g, self.next_size);
            sets.sort();
            self.level = sets.into();
            self.next_size += 1;
        }
        self.level.pop_front()
    }
}

/// ESU enumeration: each connected `k`-set is generated once from its
/// smallest vertex.
fn connected_sets_of_size(g: &Graph, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let sub = g.vertex_set([v]);
        let mut closed = sub.clone();
        for &w in g.neighbors(v) {
            closed.insert(w);
        }
        let ext: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        extend(g, k, v, &sub, &closed, ext, &mut out);
    }
    out
}

fn extend(
    g: &Graph,
    k: usize,
    root: usize,
    sub: &VertexSet,
    closed: &VertexSet,
    mut ext: Vec<usize>,
    out: &mut Vec<VertexSet>,
) {
    if sub.len() == k {
        out.push(sub.clone());
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next_ext = ext.clone();
        for &u in g.neighbors(w) {
            if u > root && !closed.contains(u) {
                next_ext.push(u);
            }
        }
        let mut next_sub = sub.clone();
        next_sub.insert(w);
        let mut next_closed = closed.clone();
        for &u in g.neighbors(w) {
            next_closed.insert(u);
        }
        extend(g, k, root, &next_sub, &next_closed, next_ext, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected_set;
    use proptest::prelude::*;

    fn cycle(m: usize) -> Graph {
        let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
        Graph::from_edges(m, &edges).unwrap()
    }

    #[test]
    fn triangle_up_to_pairs() {
        let g = cycle(3);
        let sets: Vec<Vec<usize>> = enumerate_connected_sets(&g, 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            sets,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
    }

    #[test]
    fn edgeless_graph_only_singletons() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert_eq!(enumerate_connected_sets(&g, 3).count(), 3);
    }

    #[test]
    fn c6_has_31_connected_sets() {
        // arcs of each length 1..5 (6 each) plus the whole cycle
        let g = cycle(6);
        assert_eq!(enumerate_connected_sets(&g, 6).count(), 31);
    }

    #[test]
    fn sizes_are_nondecreasing() {
        let g = cycle(7);
        let sizes: Vec<usize> = enumerate_connected_sets(&g, 7).map(|s| s.len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    fn brute_force_count(g: &Graph, max_size: usize) -> usize {
        let n = g.n();
        (1u32..(1 << n))
            .filter(|mask| mask.count_ones() as usize <= max_size)
            .filter(|mask| {
                let set = g.vertex_set((0..n).filter(|&v| mask & (1 << v) != 0));
                is_connected_set(g, &set)
            })
            .count()
    }

    proptest! {
        #[test]
        fn agrees_with_subset_filtering(
            n in 1usize..=8,
            edges in proptest::collection::vec((0usize..8, 0usize..8), 0..20),
            max_size in 1usize..=8,
        ) {
            let edges: Vec<_> = edges.into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let sets: Vec<VertexSet> = enumerate_connected_sets(&g, max_size).collect();
            let unique: std::collections::HashSet<_> = sets.iter().cloned().collect();
            prop_assert_eq!(unique.len(), sets.len());
            prop_assert_eq!(sets.len(), brute_force_count(&g, max_size));
        }
    }
}
