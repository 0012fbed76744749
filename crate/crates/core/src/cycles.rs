//! Cycle space over GF(2): enumeration of short cycles, `ℓ(G)`, minimum
//! cycle bases and geodesic cycles.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, components, Cycle, Graph};
use crate::solver::{exact_treewidth_with, ExactConfig};

/// `|E| − |V| + c`, the dimension of the cycle space.
pub fn cyclomatic_number(g: &Graph) -> usize {
    let c = components(g, &g.all_vertices()).len();
    g.m() + c - g.n()
}

/// Edge-incidence vector of a cycle, indexed by edge id.
pub fn edge_vector(g: &Graph, c: &Cycle) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(g.m());
    for (a, b) in c.edges() {
        let e = g.edge_id(a, b).expect("cycle edges belong to the graph");
        bits.toggle(e);
    }
    bits
}

/// True when every vertex meets an even number of edges of `vector`.
pub fn has_even_degrees(g: &Graph, vector: &FixedBitSet) -> bool {
    let mut parity = vec![false; g.n()];
    for e in vector.ones() {
        let (a, b) = g.edges()[e];
        parity[a] ^= true;
        parity[b] ^= true;
    }
    parity.iter().all(|&p| !p)
}

/// Incremental Gaussian elimination over GF(2); each stored row is reduced
/// against earlier pivots and keyed by its lowest set bit.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, FixedBitSet>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the stored rows.
    pub fn insert(&mut self, mut v: FixedBitSet) -> bool {
        while let Some(p) = v.ones().next() {
            match self.rows.get(&p) {
                Some(row) => v.symmetric_difference_with(row),
                None => {
                    self.rows.insert(p, v);
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, v: &FixedBitSet) -> bool {
        let mut v = v.clone();
        while let Some(p) = v.ones().next() {
            match self.rows.get(&p) {
                Some(row) => v.symmetric_difference_with(row),
                None => return false,
            }
        }
        true
    }
}

/// Independent cycles together with the echelon form certifying their rank.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub cycles: Vec<Cycle>,
    pub echelon: Echelon,
}

impl CycleBasis {
    fn new() -> Self {
        CycleBasis {
            cycles: Vec::new(),
            echelon: Echelon::new(),
        }
    }

    fn offer(&mut self, g: &Graph, c: Cycle) -> bool {
        if self.echelon.insert(edge_vector(g, &c)) {
            self.cycles.push(c);
            true
        } else {
            false
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn max_len(&self) -> usize {
        self.cycles.iter().map(Cycle::len).max().unwrap_or(0)
    }
}

/// Every simple cycle of length at most `max_len`, each once in canonical
/// form. The search starts at each vertex `s` and only visits larger
/// vertices, closing a cycle when the second vertex is below the last.
pub fn enumerate_cycles_upto(g: &Graph, max_len: usize) -> CycleIter<'_> {
    CycleIter {
        g,
        max_len,
        start: 0,
        path: Vec::new(),
        next_idx: Vec::new(),
        on_path: vec![false; g.n()],
    }
}

pub struct CycleIter<'g> {
    g: &'g Graph,
    max_len: usize,
    start: usize,
    path: Vec<usize>,
    next_idx: Vec<usize>,
    on_path: Vec<bool>,
}

impl Iterator for CycleIter<'_> {
    type Item = Cycle;

    fn next(&mut self) -> Option<Cycle> {
        if self.max_len < 3 {
            return None;
        }
        loop {
            if self.path.is_empty() {
                if self.start >= self.g.n() {
                    return None;
                }
                self.path.push(self.start);
                self.next_idx.push(0);
                self.on_path[self.start] = true;
            }
            let depth = self.path.len();
            let v = self.path[depth - 1];
            let i = self.next_idx[depth - 1];
            let nb = self.g.neighbors(v);
            if i >= nb.len() {
                self.on_path[v] = false;
                self.path.pop();
                self.next_idx.pop();
                if self.path.is_empty() {
                    self.start += 1;
                }
                continue;
            }
            self.next_idx[depth - 1] += 1;
            let w = nb[i];
            if w == self.start && depth >= 3 && self.path[1] < self.path[depth - 1] {
                return Some(Cycle::canonical(self.path.clone()));
            }
            if w > self.start && !self.on_path[w] && depth < self.max_len {
                self.path.push(w);
                self.next_idx.push(0);
                self.on_path[w] = true;
            }
        }
    }
}

/// Length of a shortest cycle, if any.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in g.vertices() {
        let mut dist = vec![usize::MAX; g.n()];
        let mut parent = vec![usize::MAX; g.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// `ℓ` together with the evidence for it.
#[derive(Clone, Debug)]
pub struct EllCertificate {
    pub ell: usize,
    pub cyclomatic: usize,
    /// Rank of the cycles of length at most `ell − 1`.
    pub rank_below: usize,
    /// Independent cycles of length at most `ell` spanning the cycle space.
    pub basis: CycleBasis,
}

/// Smallest `l` such that the cycles of length at most `l` generate the
/// cycle space. Cycles are enumerated by increasing length; the echelon form
/// is kept across lengths.
pub fn ell(g: &Graph) -> Result<usize> {
    Ok(ell_with_certificate(g)?.ell)
}

pub fn ell_with_certificate(g: &Graph) -> Result<EllCertificate> {
    let dim = cyclomatic_number(g);
    if dim == 0 {
        return Err(Error::NoCycle);
    }
    let mut basis = CycleBasis::new();
    let start = girth(g).expect("a graph with cycles has a girth");
    for l in start..=g.n() {
        let rank_below = basis.rank();
        for c in enumerate_cycles_upto(g, l).filter(|c| c.len() == l) {
            basis.offer(g, c);
            if basis.rank() == dim {
                return Ok(EllCertificate {
                    ell: l,
                    cyclomatic: dim,
                    rank_below,
                    basis,
                });
            }
        }
    }
    Err(Error::InternalInvariant(
        "cycles of every length failed to span the cycle space".into(),
    ))
}

/// BFS tree with smallest-id parents.
fn bfs_tree(g: &Graph, root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut dist = vec![usize::MAX; g.n()];
    let mut parent = vec![usize::MAX; g.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    (dist, parent)
}

fn tree_path(parent: &[usize], root: usize, mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while v != root {
        v = parent[v];
        out.push(v);
    }
    out.reverse();
    out
}

/// Candidate cycles `P(v,x) + xy + P(y,v)` from shortest-path trees; this set
/// contains a minimum cycle basis.
pub fn horton_candidates(g: &Graph) -> Vec<Cycle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in g.vertices() {
        let (dist, parent) = bfs_tree(g, v);
        for &(x, y) in g.edges() {
            if dist[x] == usize::MAX || parent[x] == y || parent[y] == x {
                continue;
            }
            let px = tree_path(&parent, v, x);
            let py = tree_path(&parent, v, y);
            let on_px: HashSet<usize> = px.iter().copied().collect();
            if py[1..].iter().any(|u| on_px.contains(u)) {
                continue;
            }
            let mut seq = px;
            seq.extend(py[1..].iter().rev());
            if seq.len() < 3 {
                continue;
            }
            let c = Cycle::canonical(seq);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Greedy minimum cycle basis over the Horton candidates.
pub fn minimum_cycle_basis(g: &Graph) -> Result<CycleBasis> {
    let dim = cyclomatic_number(g);
    if dim == 0 {
        return Err(Error::NoCycle);
    }
    let mut basis = CycleBasis::new();
    for c in horton_candidates(g) {
        basis.offer(g, c);
        if basis.rank() == dim {
            return Ok(basis);
        }
    }
    Err(Error::InternalInvariant(
        "candidate cycles do not span the cycle space".into(),
    ))
}

/// `ℓ` as the longest cycle in a minimum cycle basis: the greedy basis
/// minimizes the sorted length sequence, so its maximum is the least `l`
/// whose short cycles span.
pub fn ell_via_min_basis(g: &Graph) -> Result<usize> {
    Ok(minimum_cycle_basis(g)?.max_len())
}

/// True when the cycle contains a shortest path between any two of its
/// vertices.
pub fn is_geodesic_cycle(g: &Graph, c: &Cycle) -> bool {
    let vs = c.vertices();
    for (i, &u) in vs.iter().enumerate() {
        let dist = bfs_distances(g, u);
        for (j, &v) in vs.iter().enumerate().skip(i + 1) {
            if dist[v] != Some(c.cyclic_distance(i, j)) {
                return false;
            }
        }
    }
    true
}

/// Outcome of the check `tw(G) ≥ k / ℓ(G)` for a geodesic cycle of length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeodesicBoundReport {
    pub k: usize,
    pub ell: usize,
    pub tw: usize,
    pub holds: bool,
}

pub fn check_geodesic_bound(g: &Graph, c: &Cycle) -> Result<GeodesicBoundReport> {
    check_geodesic_bound_with(g, c, &ExactConfig::default())
}

pub fn check_geodesic_bound_with(
    g: &Graph,
    c: &Cycle,
    config: &ExactConfig,
) -> Result<GeodesicBoundReport> {
    if !is_geodesic_cycle(g, c) {
        return Err(Error::NotGeodesic);
    }
    let ell = ell(g)?;
    let (tw, _) = exact_treewidth_with(g, config)?;
    Ok(GeodesicBoundReport {
        k: c.len(),
        ell,
        tw,
        holds: tw * ell >= c.len(),
    })
}
