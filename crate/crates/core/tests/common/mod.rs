#![allow(dead_code)]

use ctw_core::families::random_connected;
use ctw_core::graph::is_connected_set;
use ctw_core::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fixed-seed corpus of random connected graphs with `n ≤ max_n` and varied
/// edge density.
pub fn random_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let densities = [0.05, 0.15, 0.3, 0.5];
    (0..count)
        .map(|i| {
            let n = 3 + i % (max_n - 2);
            random_connected(n, densities[i % densities.len()], &mut rng)
        })
        .collect()
}

/// Maximal cliques of `h` if it is chordal: repeatedly strip a simplicial
/// vertex and record its closed neighborhood among the remaining vertices.
fn chordal_cliques(n: usize, adj: &[u32]) -> Option<Vec<u32>> {
    let mut alive: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut cliques = Vec::new();
    while alive != 0 {
        let v = (0..n).find(|&v| {
            alive & (1 << v) != 0 && {
                let nb = adj[v] & alive;
                (0..n).all(|u| nb & (1 << u) == 0 || (adj[u] | (1 << u)) & nb == nb)
            }
        })?;
        cliques.push((adj[v] & alive) | (1 << v));
        alive &= !(1 << v);
    }
    let maximal = cliques
        .iter()
        .copied()
        .filter(|&c| !cliques.iter().any(|&d| d != c && d & c == c))
        .collect();
    Some(maximal)
}

/// Exact connected tree-width by brute force over chordal supergraphs whose
/// maximal cliques are all connected in `g`. Only for tiny graphs.
pub fn brute_force_ctw(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 12);
    let mut non_edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                non_edges.push((u, v));
            }
        }
    }
    assert!(non_edges.len() <= 16, "too many non-edges for brute force");
    let base: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | (1 << u)))
        .collect();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << non_edges.len()) {
        let mut adj = base.clone();
        for (i, &(u, v)) in non_edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let Some(cliques) = chordal_cliques(n, &adj) else { continue };
        let connected = cliques.iter().all(|&c| {
            is_connected_set(g, &g.vertex_set((0..n).filter(|&v| c & (1 << v) != 0)))
        });
        if connected {
            let w = cliques.iter().map(|c| c.count_ones() as usize).max().unwrap_or(1) - 1;
            best = best.min(w);
        }
    }
    best
}
