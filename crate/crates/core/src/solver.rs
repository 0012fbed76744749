//! Tree-width: exact search for small kernels, a min-fill heuristic, and a
//! stabilization pass that makes every side of every tree edge connected
//! without increasing the width.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::decomp::{simplify, stability_violation, validate, Decomposition};
use crate::error::{Error, Result};
use crate::graph::{components, Graph};
use crate::vertex_set::VertexSet;

pub const DEFAULT_EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    /// Largest kernel, after safe reductions, the subset search accepts.
    pub max_kernel_vertices: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_kernel_vertices: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Elimination graph used by the heuristics and reductions.
#[derive(Clone)]
struct EliminationGraph {
    adj: Vec<BTreeSet<usize>>,
    alive: BTreeSet<usize>,
}

impl EliminationGraph {
    fn new(g: &Graph) -> Self {
        EliminationGraph {
            adj: g
                .vertices()
                .map(|v| g.neighbors(v).iter().copied().collect())
                .collect(),
            alive: g.vertices().collect(),
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn fill_in(&self, v: usize) -> usize {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !self.adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    }

    /// Removes `v` after turning its neighborhood into a clique; returns the
    /// former neighborhood.
    fn eliminate(&mut self, v: usize) -> Vec<usize> {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            self.adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                self.adj[a].insert(b);
                self.adj[b].insert(a);
            }
        }
        self.adj[v].clear();
        self.alive.remove(&v);
        nb
    }

    fn is_clique_without(&self, nb: &[usize], skip: Option<usize>) -> bool {
        for (i, &a) in nb.iter().enumerate() {
            if Some(a) == skip {
                continue;
            }
            for &b in &nb[i + 1..] {
                if Some(b) != skip && !self.adj[a].contains(&b) {
                    return false;
                }
            }
        }
        true
    }

    fn first_non_edge(&self, nb: &[usize]) -> Option<(usize, usize)> {
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !self.adj[a].contains(&b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn is_simplicial(&self, v: usize) -> bool {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        self.first_non_edge(&nb).is_none()
    }

    fn is_almost_simplicial(&self, v: usize) -> bool {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        match self.first_non_edge(&nb) {
            None => true,
            Some((a, b)) => {
                self.is_clique_without(&nb, Some(a)) || self.is_clique_without(&nb, Some(b))
            }
        }
    }
}

/// Minor-min-width: a lower bound on tree-width obtained by repeatedly
/// contracting a minimum-degree vertex into its minimum-degree neighbor.
pub fn treewidth_lower_bound(g: &Graph) -> usize {
    let mut h = EliminationGraph::new(g);
    let mut lb = 0;
    while let Some(&v) = h.alive.iter().min_by_key(|&&v| (h.degree(v), v)) {
        lb = lb.max(h.degree(v));
        let target = h.adj[v].iter().copied().min_by_key(|&u| (h.degree(u), u));
        let nb: Vec<usize> = h.adj[v].iter().copied().collect();
        for &a in &nb {
            h.adj[a].remove(&v);
        }
        if let Some(u) = target {
            for &a in &nb {
                if a != u {
                    h.adj[a].insert(u);
                    h.adj[u].insert(a);
                }
            }
        }
        h.adj[v].clear();
        h.alive.remove(&v);
    }
    lb
}

/// Elimination ordering chosen greedily by minimum fill-in, breaking ties by
/// degree and then by vertex id.
pub fn minfill_ordering(g: &Graph) -> Vec<usize> {
    let mut h = EliminationGraph::new(g);
    let mut order = Vec::with_capacity(g.n());
    while let Some(&v) = h
        .alive
        .iter()
        .min_by_key(|&&v| (h.fill_in(v), h.degree(v), v))
    {
        order.push(v);
        h.eliminate(v);
    }
    order
}

/// Width of the decomposition induced by an elimination ordering.
pub fn ordering_width(g: &Graph, order: &[usize]) -> usize {
    let mut h = EliminationGraph::new(g);
    let mut w = 0;
    for &v in order {
        w = w.max(h.degree(v));
        h.eliminate(v);
    }
    w
}

/// Tree-decomposition whose bags are `{v} ∪ N⁺(v)` in the filled graph.
/// The resulting forest is joined into a tree and simplified.
pub fn decomposition_from_ordering(g: &Graph, order: &[usize]) -> Result<Decomposition> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::Precondition(format!(
            "ordering has {} vertices, graph has {n}",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::Precondition("ordering is not a permutation".into()));
        }
        pos[v] = i;
    }
    if n == 0 {
        return Ok(Decomposition::single_bag(g, g.empty_set()));
    }
    let mut h = EliminationGraph::new(g);
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let higher = h.eliminate(v);
        let mut bag = VertexSet::from_iter(n, higher.iter().copied());
        bag.insert(v);
        bags.push(bag);
        match higher.iter().map(|&u| pos[u]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    Ok(simplify(&Decomposition::new(g, bags, &edges)?))
}

pub fn minfill_decomposition(g: &Graph) -> Decomposition {
    decomposition_from_ordering(g, &minfill_ordering(g)).expect("min-fill yields a permutation")
}

pub fn exact_treewidth(g: &Graph) -> Result<(usize, Decomposition)> {
    exact_treewidth_with(g, &ExactConfig::default())
}

pub fn exact_treewidth_with(g: &Graph, config: &ExactConfig) -> Result<(usize, Decomposition)> {
    let (k, order) = exact_ordering(g, config)?;
    let d = decomposition_from_ordering(g, &order)?;
    if d.width() != k {
        return Err(Error::InternalInvariant(format!(
            "exact ordering has width {} but search reported {k}",
            d.width()
        )));
    }
    Ok((k, d))
}

/// Optimal elimination ordering and its width.
///
/// Safe reductions (simplicial vertices, and almost simplicial vertices of
/// degree at most the running lower bound) are applied first; the remaining
/// kernel is solved by a memoized search over eliminated-vertex subsets.
pub fn exact_ordering(g: &Graph, config: &ExactConfig) -> Result<(usize, Vec<usize>)> {
    let limit = config.max_kernel_vertices.min(63);
    let mut low = treewidth_lower_bound(g);
    let mut h = EliminationGraph::new(g);
    let mut prefix = Vec::new();
    let mut queue: VecDeque<usize> = h.alive.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        if !h.alive.contains(&v) {
            continue;
        }
        let deg = h.degree(v);
        let reducible = if h.is_simplicial(v) {
            if deg > low {
                low = deg;
                queue.extend(h.alive.iter().copied());
            }
            true
        } else {
            deg <= low && h.is_almost_simplicial(v)
        };
        if reducible {
            prefix.push(v);
            let nb = h.eliminate(v);
            queue.extend(nb);
        }
    }

    let kernel: Vec<usize> = h.alive.iter().copied().collect();
    if kernel.len() > limit {
        return Err(Error::SizeLimit {
            what: "tree-width kernel vertices",
            size: kernel.len(),
            limit,
        });
    }
    let mut local = HashMap::new();
    for (i, &v) in kernel.iter().enumerate() {
        local.insert(v, i);
    }
    let masks: Vec<u64> = kernel
        .iter()
        .map(|&v| h.adj[v].iter().fold(0u64, |m, u| m | (1u64 << local[u])))
        .collect();

    let kernel_graph = {
        let mut edges = Vec::new();
        for (i, &m) in masks.iter().enumerate() {
            for j in (i + 1)..kernel.len() {
                if m & (1 << j) != 0 {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(kernel.len(), &edges)?
    };
    let fallback = minfill_ordering(&kernel_graph);
    let upper = ordering_width(&kernel_graph, &fallback);
    let mut k = low.max(treewidth_lower_bound(&kernel_graph));
    let kernel_order = loop {
        if k >= upper {
            k = k.max(upper);
            break fallback;
        }
        if let Some(order) = eliminate_within(&masks, k) {
            break order;
        }
        k += 1;
    };
    let mut order = prefix;
    order.extend(kernel_order.into_iter().map(|i| kernel[i]));
    Ok((k, order))
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through
/// eliminated vertices: the higher neighborhood of `v` when it is
/// eliminated after exactly the set `eliminated`.
fn higher_neighbors(masks: &[u64], eliminated: u64, v: usize) -> u64 {
    let mut comp = 1u64 << v;
    let mut reach = masks[v];
    loop {
        let grow = reach & eliminated & !comp;
        if grow == 0 {
            break;
        }
        comp |= grow;
        let mut bits = grow;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= masks[u];
        }
    }
    reach & !eliminated & !(1u64 << v)
}

/// Decides whether an elimination ordering of width at most `k` exists and
/// returns one.
fn eliminate_within(masks: &[u64], k: usize) -> Option<Vec<usize>> {
    let m = masks.len();
    if m <= k + 1 {
        return Some((0..m).collect());
    }
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut stack = vec![0u64];
    parent.insert(0, (0, usize::MAX));
    while let Some(set) = stack.pop() {
        for v in 0..m {
            if set & (1 << v) != 0 {
                continue;
            }
            if higher_neighbors(masks, set, v).count_ones() as usize > k {
                continue;
            }
            let next = set | (1 << v);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, (set, v));
            if m - next.count_ones() as usize <= k + 1 {
                let mut order = Vec::new();
                let mut cur = next;
                while cur != 0 {
                    let (prev, u) = parent[&cur];
                    order.push(u);
                    cur = prev;
                }
                order.reverse();
                order.extend((0..m).filter(|&u| next & (1 << u) == 0));
                return Some(order);
            }
            stack.push(next);
        }
    }
    None
}

/// Σ over oriented tree edges of (components of the far-side union − 1).
pub fn disconnection_defect(g: &Graph, d: &Decomposition) -> usize {
    let mut total = 0;
    for (a, b) in d.tree_edges() {
        for (t, s) in [(a, b), (b, a)] {
            total += components(g, &d.side_union(t, s)).len().saturating_sub(1);
        }
    }
    total
}

/// Turns a valid decomposition of a connected graph into a stable one of at
/// most the same width.
///
/// While some tree edge `ts` has a disconnected `s`-side union, the subtree
/// on that side is replaced by one copy per component of the union, each copy
/// keeping only that component's vertices and hanging off `t`. The result is
/// simplified after every split and returned unrooted.
pub fn stabilize(g: &Graph, d: &Decomposition) -> Result<Decomposition> {
    d.check_graph(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !validate(g, d)?.is_valid() {
        return Err(Error::Precondition("input decomposition is invalid".into()));
    }
    let cap = g.n().max(1) * d.len().max(2);
    let mut cur = simplify(&d.unrooted());
    for _ in 0..=cap {
        let Some(violation) = stability_violation(g, &cur)? else {
            return Ok(cur);
        };
        let (a, b) = violation.edge;
        let s = violation.side;
        let t = if s == a { b } else { a };
        cur = simplify(&split_side(g, &cur, t, s)?);
    }
    Err(Error::InternalInvariant(format!(
        "stabilize did not converge within {cap} splits"
    )))
}

/// One stabilization step on the oriented edge `(t, s)`.
pub fn split_side(g: &Graph, d: &Decomposition, t: usize, s: usize) -> Result<Decomposition> {
    let side = d.side_nodes(t, s);
    let mut in_side = vec![false; d.len()];
    for &u in &side {
        in_side[u] = true;
    }
    let union = d.side_union(t, s);
    let comps = components(g, &union);

    let mut new_id = vec![usize::MAX; d.len()];
    let mut bags = Vec::new();
    for u in d.nodes() {
        if !in_side[u] {
            new_id[u] = bags.len();
            bags.push(d.bag(u).clone());
        }
    }
    let mut edges = Vec::new();
    for (x, y) in d.tree_edges() {
        if !in_side[x] && !in_side[y] {
            edges.push((new_id[x], new_id[y]));
        }
    }
    for comp in &comps {
        let mut copy_id = vec![usize::MAX; d.len()];
        for &u in &side {
            copy_id[u] = bags.len();
            bags.push(d.bag(u).intersection(comp));
        }
        for (x, y) in d.tree_edges() {
            if in_side[x] && in_side[y] {
                edges.push((copy_id[x], copy_id[y]));
            }
        }
        edges.push((new_id[t], copy_id[s]));
    }
    Decomposition::new(g, bags, &edges)
}
