use std::collections::VecDeque;

use super::{Graph, Path};
use crate::vertex_set::VertexSet;

/// Hop distances; `None` marks unreachable pairs.
pub type DistanceMatrix = Vec<Vec<Option<usize>>>;

/// Connected components of `g[within]`, each as a vertex set, ordered by
/// their smallest vertex.
pub fn components(g: &Graph, within: &VertexSet) -> Vec<VertexSet> {
    let mut seen = g.empty_set();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in within.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = g.empty_set();
        seen.insert(start);
        comp.insert(start);
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if within.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    comp.insert(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// True when `set` is non-empty and induces a connected subgraph.
pub fn is_connected_set(g: &Graph, set: &VertexSet) -> bool {
    let Some(start) = set.first() else {
        return false;
    };
    let mut seen = g.empty_set();
    seen.insert(start);
    let mut count = 1;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if set.contains(y) && !seen.contains(y) {
                seen.insert(y);
                count += 1;
                stack.push(y);
            }
        }
    }
    count == set.len()
}

pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    bfs_distances_within(g, source, &g.all_vertices())
}

/// BFS from `source` inside `g[allowed]`.
pub fn bfs_distances_within(g: &Graph, source: usize, allowed: &VertexSet) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    if !allowed.contains(source) {
        return dist;
    }
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &y in g.neighbors(x) {
            if allowed.contains(y) && dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    g.vertices().map(|v| bfs_distances(g, v)).collect()
}

/// Shortest path inside `g[allowed]` whose ends lie in two distinct `blocks`
/// and whose internal vertices avoid every block.
///
/// Among all such shortest paths the lexicographically smallest vertex
/// sequence is returned (over both orientations, so the path starts at its
/// smaller end). Blocks must be pairwise disjoint subsets of `allowed`.
pub fn shortest_path_between_components(
    g: &Graph,
    allowed: &VertexSet,
    blocks: &[VertexSet],
) -> Option<Path> {
    let n = g.n();
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for v in b.iter() {
            block_of[v] = i;
        }
    }
    let free = |v: usize| allowed.contains(v) && block_of[v] == usize::MAX;

    // Per source block: hop distance from each free vertex to the nearest
    // vertex of another block, moving through free vertices only.
    let target_distances = |source: usize| -> Vec<Option<usize>> {
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if block_of[v] != usize::MAX && block_of[v] != source {
                dist[v] = Some(0);
                queue.push_back(v);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in g.neighbors(x) {
                if free(y) && dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    };

    let mut best: Option<(usize, usize, Vec<Option<usize>>)> = None;
    for (i, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            continue;
        }
        let dist = target_distances(i);
        for s in block.iter() {
            let len = g
                .neighbors(s)
                .iter()
                .filter(|&&w| (block_of[w] != usize::MAX && block_of[w] != i) || free(w))
                .filter_map(|&w| dist[w])
                .min()
                .map(|d| d + 1);
            let Some(len) = len else { continue };
            let better = match &best {
                None => true,
                Some((bl, bs, _)) => (len, s) < (*bl, *bs),
            };
            if better {
                best = Some((len, s, dist.clone()));
            }
        }
    }

    let (len, start, dist) = best?;
    let source_block = block_of[start];
    let mut seq = vec![start];
    let mut cur = start;
    for remaining in (1..=len).rev() {
        let next = g.neighbors(cur).iter().copied().find(|&w| {
            if remaining == 1 {
                block_of[w] != usize::MAX && block_of[w] != source_block
            } else {
                free(w) && dist[w] == Some(remaining - 1)
            }
        })?;
        seq.push(next);
        cur = next;
    }
    Some(Path::from_vertices_unchecked(seq))
}
