//! Turning a rooted stable tree-decomposition into a connected one.
//!
//! Nodes are processed parents-first. While the bag `W_t` of the current node
//! is disconnected, a shortest path inside `W_{T_t}` joining two of its
//! components is added, and every `u` in `T_t` receives the part of the path
//! lying in `W_{T_u}`. Per node, a bookkeeping forest `Q_u` records the path
//! segments that entered `W_u`; it stays acyclic and its component count only
//! drops, which bounds how often `W_u` can grow.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::decomp::{
    is_connected_decomposition, is_stable, subtree_bag_union, validate, Decomposition, RootedTree,
};
use crate::error::{Error, Result};
use crate::graph::{components, shortest_path_between_components, Graph, Path};
use crate::vertex_set::VertexSet;

/// One admissible path added while processing `node`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathAddition {
    pub node: usize,
    pub path: Vec<usize>,
    /// The child whose subtree contains the internal vertices; `None` when
    /// the path is a single edge.
    pub child: Option<usize>,
    pub components_before: usize,
    pub components_after: usize,
}

impl PathAddition {
    /// Path length in edges.
    pub fn len(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.path.len() <= 1
    }
}

/// The forest `Q_u` on `W_u`.
#[derive(Clone, Debug)]
struct Bookkeeping {
    local: HashMap<usize, usize>,
    classes: UnionFind<usize>,
    vertices: VertexSet,
    edges: Vec<(usize, usize)>,
    has_cycle: bool,
}

impl Bookkeeping {
    fn new(bag: &VertexSet, scope: &VertexSet) -> Self {
        let local: HashMap<usize, usize> = scope.iter().enumerate().map(|(i, v)| (v, i)).collect();
        Bookkeeping {
            classes: UnionFind::new(local.len()),
            local,
            vertices: bag.clone(),
            edges: Vec::new(),
            has_cycle: false,
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.push((a, b));
        if !self.classes.union(self.local[&a], self.local[&b]) {
            self.has_cycle = true;
        }
    }

    fn components(&self) -> usize {
        let mut roots: Vec<usize> = self
            .vertices
            .iter()
            .map(|v| self.classes.find(self.local[&v]))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

/// Working state of a construction run.
#[derive(Clone, Debug)]
pub struct ConstructionState<'g> {
    g: &'g Graph,
    working: Decomposition,
    original: Vec<VertexSet>,
    tree: RootedTree,
    /// `V_{T_u}`; rule (*) never changes subtree unions.
    scope: Vec<VertexSet>,
    q: Vec<Bookkeeping>,
    additions: Vec<usize>,
    processed: Vec<bool>,
    trace: Vec<PathAddition>,
}

/// Frozen view used to compare consecutive states.
#[derive(Clone, Debug)]
pub struct Snapshot {
    bags: Vec<VertexSet>,
    q_components: Vec<usize>,
    processed: Vec<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct InvariantReport {
    pub failures: Vec<String>,
}

impl InvariantReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<'g> ConstructionState<'g> {
    pub fn new(g: &'g Graph, d: &Decomposition) -> Result<Self> {
        d.check_graph(g)?;
        let tree = d.rooted_tree()?;
        let scope: Vec<VertexSet> = d
            .nodes()
            .map(|t| subtree_bag_union(d, t))
            .collect::<Result<_>>()?;
        let q = d
            .nodes()
            .map(|t| Bookkeeping::new(d.bag(t), &scope[t]))
            .collect();
        Ok(ConstructionState {
            g,
            working: d.clone(),
            original: d.bags().to_vec(),
            tree,
            scope,
            q,
            additions: vec![0; d.len()],
            processed: vec![false; d.len()],
            trace: Vec::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn working(&self) -> &Decomposition {
        &self.working
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn original_bag(&self, t: usize) -> &VertexSet {
        &self.original[t]
    }

    pub fn trace(&self) -> &[PathAddition] {
        &self.trace
    }

    pub fn additions_at(&self, t: usize) -> usize {
        self.additions[t]
    }

    pub fn q_components(&self, u: usize) -> usize {
        self.q[u].components()
    }

    pub fn q_edges(&self, u: usize) -> &[(usize, usize)] {
        &self.q[u].edges
    }

    /// Processing order: parents before children, children ascending.
    pub fn order(&self) -> &[usize] {
        &self.tree.preorder
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            bags: self.working.bags().to_vec(),
            q_components: self.q.iter().map(Bookkeeping::components).collect(),
            processed: self.processed.clone(),
        }
    }

    /// Test hook: records an edge in `Q_u` regardless of the rules.
    #[doc(hidden)]
    pub fn inject_q_edge(&mut self, u: usize, a: usize, b: usize) {
        self.q[u].add_edge(a, b);
    }

    /// The shortest path inside `W_{T_t}` joining two components of `W_t`,
    /// lexicographically smallest among equals.
    pub fn find_admissible_path(&self, t: usize) -> Result<Path> {
        let comps = components(self.g, self.working.bag(t));
        if comps.len() <= 1 {
            return Err(Error::Precondition(format!("bag of node {t} is already connected")));
        }
        shortest_path_between_components(self.g, &self.scope[t], &comps).ok_or_else(|| {
            Error::InternalInvariant(format!(
                "no admissible path at node {t}; the working decomposition is not stable"
            ))
        })
    }

    /// Applies rule (*) for a path admissible at `t`.
    pub fn apply_update(&mut self, t: usize, p: &Path) -> Result<PathAddition> {
        let bag_t = self.working.bag(t).clone();
        let before = components(self.g, &bag_t).len();
        let (a, b) = p.ends();
        if !bag_t.contains(a) || !bag_t.contains(b) || p.internal().iter().any(|&v| bag_t.contains(v)) {
            return Err(Error::Precondition(
                "path must meet the bag exactly in its ends".into(),
            ));
        }
        let child = if p.internal().is_empty() {
            None
        } else {
            let found = self.tree.children[t]
                .iter()
                .copied()
                .find(|&s| p.internal().iter().all(|&v| self.scope[s].contains(v)));
            Some(found.ok_or_else(|| {
                Error::InternalInvariant(format!(
                    "internal vertices of the path at node {t} span several child subtrees"
                ))
            })?)
        };

        for u in self.tree.subtree(t) {
            let scope = &self.scope[u];
            let mut bag = self.working.bag(u).clone();
            for &v in p.vertices() {
                if scope.contains(v) {
                    bag.insert(v);
                }
            }
            for (x, y) in p.edges() {
                if scope.contains(x) && scope.contains(y) {
                    self.q[u].add_edge(x, y);
                }
            }
            self.working.set_bag(u, bag);
        }

        let after = components(self.g, self.working.bag(t)).len();
        let record = PathAddition {
            node: t,
            path: p.vertices().to_vec(),
            child,
            components_before: before,
            components_after: after,
        };
        self.additions[t] += 1;
        self.trace.push(record.clone());
        Ok(record)
    }

    /// Performs one addition at `t`, or returns `None` once `W_t` is connected.
    pub fn step(&mut self, t: usize) -> Result<Option<PathAddition>> {
        if components(self.g, self.working.bag(t)).len() <= 1 {
            self.processed[t] = true;
            return Ok(None);
        }
        let p = self.find_admissible_path(t)?;
        self.apply_update(t, &p).map(Some)
    }

    pub fn process_node(&mut self, t: usize) -> Result<()> {
        while self.step(t)?.is_some() {}
        Ok(())
    }

    /// Checks the bookkeeping invariants of the current state and, given the
    /// previous snapshot, the monotonicity ones.
    pub fn check_invariants(&self, prev: Option<&Snapshot>) -> InvariantReport {
        let mut failures = Vec::new();
        for u in self.working.nodes() {
            let q = &self.q[u];
            let bag = self.working.bag(u);
            if q.has_cycle {
                failures.push(format!("Q_{u} contains a cycle"));
            }
            if q.vertices != *bag {
                failures.push(format!("Q_{u} vertex set differs from W_{u}"));
            }
            if !self.original[u].is_subset(bag) {
                failures.push(format!("W_{u} lost a vertex of V_{u}"));
            }
            let extra = components(self.g, bag)
                .into_iter()
                .filter(|c| !c.meets(&self.original[u]))
                .count();
            if extra > 0 {
                failures.push(format!("a component of W_{u} misses V_{u}"));
            }
            if self.additions[u] + 1 > self.original[u].len().max(1) {
                failures.push(format!(
                    "{} additions at node {u} exceed |V_u| - 1",
                    self.additions[u]
                ));
            }
            if let Some(prev) = prev {
                let now = q.components();
                let then = prev.q_components[u];
                let grew = prev.bags[u] != *bag;
                if now > then {
                    failures.push(format!("Q_{u} components increased {then} -> {now}"));
                }
                if grew && now >= then {
                    failures.push(format!("W_{u} grew but Q_{u} components stayed at {now}"));
                }
                if prev.processed[u] && grew {
                    failures.push(format!("W_{u} changed after node {u} was processed"));
                }
            }
        }
        // an internal path vertex may also touch a third component, so the
        // count of W_t can drop by more than one; Q_t drops by exactly one
        for r in &self.trace {
            if r.components_after >= r.components_before {
                failures.push(format!(
                    "addition at node {} took components {} -> {}",
                    r.node, r.components_before, r.components_after
                ));
            }
        }
        InvariantReport { failures }
    }

    pub fn finish(self) -> ConstructionOutput {
        let stats = node_stats(&self);
        ConstructionOutput {
            decomposition: self.working,
            trace: self.trace,
            stats,
        }
    }
}

/// Per-node figures for the size bound `|U_t| ≤ m_t(|V_t| − 1) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeStats {
    pub node: usize,
    pub original_size: usize,
    pub final_size: usize,
    pub additions: usize,
    /// Longest path (in edges) added at `t` or any ancestor; at least 1.
    pub m: usize,
}

impl NodeStats {
    pub fn bound(&self) -> usize {
        self.m * self.original_size.saturating_sub(1) + 1
    }

    pub fn within_bound(&self) -> bool {
        self.final_size <= self.bound()
    }
}

fn node_stats(state: &ConstructionState<'_>) -> Vec<NodeStats> {
    let mut longest = vec![0usize; state.working.len()];
    for r in &state.trace {
        longest[r.node] = longest[r.node].max(r.len());
    }
    state
        .working
        .nodes()
        .map(|t| NodeStats {
            node: t,
            original_size: state.original[t].len(),
            final_size: state.working.bag(t).len(),
            additions: state.additions[t],
            m: state
                .tree
                .ancestors(t)
                .into_iter()
                .map(|a| longest[a])
                .max()
                .unwrap_or(0)
                .max(1),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ConstructionOutput {
    pub decomposition: Decomposition,
    pub trace: Vec<PathAddition>,
    pub stats: Vec<NodeStats>,
}

fn check_preconditions(g: &Graph, d: &Decomposition) -> Result<()> {
    d.check_graph(g)?;
    if d.root().is_none() {
        return Err(Error::NotRooted);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !validate(g, d)?.is_valid() {
        return Err(Error::Precondition("input decomposition is invalid".into()));
    }
    if !is_stable(g, d)? {
        return Err(Error::Precondition("input decomposition is not stable".into()));
    }
    Ok(())
}

/// Runs the construction on a rooted stable decomposition of a connected
/// graph and returns a connected decomposition on the same tree.
pub fn run_construction(g: &Graph, d: &Decomposition) -> Result<ConstructionOutput> {
    check_preconditions(g, d)?;
    let mut state = ConstructionState::new(g, d)?;
    for t in state.order().to_vec() {
        state.process_node(t)?;
    }
    finalize(state)
}

/// Like [`run_construction`], but re-validates the whole state after every
/// single addition: validity, stability and the bookkeeping invariants.
pub fn run_construction_checked(g: &Graph, d: &Decomposition) -> Result<ConstructionOutput> {
    check_preconditions(g, d)?;
    let mut state = ConstructionState::new(g, d)?;
    let initial = state.check_invariants(None);
    if !initial.is_ok() {
        return Err(Error::InternalInvariant(initial.failures.join("; ")));
    }
    for t in state.order().to_vec() {
        loop {
            let prev = state.snapshot();
            if state.step(t)?.is_none() {
                break;
            }
            let mut failures = state.check_invariants(Some(&prev)).failures;
            if !validate(g, &state.working)?.is_valid() {
                failures.push("working decomposition became invalid".into());
            }
            if !is_stable(g, &state.working)? {
                failures.push("working decomposition became unstable".into());
            }
            if !failures.is_empty() {
                return Err(Error::InternalInvariant(format!(
                    "{}; trace: {:?}",
                    failures.join("; "),
                    state.trace
                )));
            }
        }
    }
    finalize(state)
}

fn finalize(state: ConstructionState<'_>) -> Result<ConstructionOutput> {
    let g = state.g;
    if !is_connected_decomposition(g, &state.working)? {
        return Err(Error::InternalInvariant(
            "construction finished with a disconnected bag".into(),
        ));
    }
    Ok(state.finish())
}

/// Output width of the construction for every choice of root.
pub fn widths_across_roots(g: &Graph, d: &Decomposition) -> Result<Vec<(usize, usize)>> {
    d.nodes()
        .map(|r| {
            let out = run_construction(g, &d.rerooted(r)?)?;
            Ok((r, out.decomposition.width()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::solver::{decomposition_from_ordering, stabilize};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c6() -> Graph {
        parse_edge_list("1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n").unwrap()
    }

    fn c6_fixture(g: &Graph) -> Decomposition {
        let bags = [&["1", "2", "6"][..], &["2", "5", "6"], &["2", "3", "5"], &["3", "4", "5"]]
            .iter()
            .map(|b| g.labelled_set(b).unwrap())
            .collect();
        Decomposition::new(g, bags, &[(0, 1), (1, 2), (2, 3)])
            .unwrap()
            .rerooted(0)
            .unwrap()
    }

    fn labels(g: &Graph, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| g.label(v).to_string()).collect()
    }

    #[test]
    fn one_addition_can_merge_three_components() {
        let g = parse_edge_list("x a\nx b\nx c\ny a\ny b\ny c\n").unwrap();
        let bags = [&["a", "b", "c"][..], &["a", "b", "c", "x"], &["a", "b", "c", "y"]]
            .iter()
            .map(|b| g.labelled_set(b).unwrap())
            .collect();
        let d = Decomposition::new(&g, bags, &[(0, 1), (0, 2)]).unwrap().rerooted(0).unwrap();
        let mut state = ConstructionState::new(&g, &d).unwrap();
        let before = state.snapshot();
        let r = state.step(0).unwrap().unwrap();
        assert_eq!((r.components_before, r.components_after), (3, 1));
        assert_eq!(state.q_components(0), 2);
        assert!(state.check_invariants(Some(&before)).is_ok());
        assert!(state.step(0).unwrap().is_none());
    }

    #[test]
    fn c6_admissible_path_at_t2() {
        let g = c6();
        let state = ConstructionState::new(&g, &c6_fixture(&g)).unwrap();
        let p = state.find_admissible_path(1).unwrap();
        assert_eq!(labels(&g, p.vertices()), ["2", "3", "4", "5"]);
        assert!(matches!(state.find_admissible_path(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn c6_golden_update() {
        let g = c6();
        let mut state = ConstructionState::new(&g, &c6_fixture(&g)).unwrap();
        let before: Vec<usize> = (0..4).map(|u| state.q_components(u)).collect();
        assert_eq!(before, [3, 3, 3, 3]);
        let prev = state.snapshot();
        let p = state.find_admissible_path(1).unwrap();
        let rec = state.apply_update(1, &p).unwrap();
        assert_eq!(rec.child, Some(2));
        assert_eq!((rec.components_before, rec.components_after), (2, 1));
        let bags: Vec<Vec<String>> = state
            .working()
            .bags()
            .iter()
            .map(|b| g.set_labels(b))
            .collect();
        assert_eq!(
            bags,
            [
                vec!["1", "2", "6"],
                vec!["2", "3", "4", "5", "6"],
                vec!["2", "3", "4", "5"],
                vec!["3", "4", "5"],
            ]
        );
        let after: Vec<usize> = (0..4).map(|u| state.q_components(u)).collect();
        assert_eq!(after, [3, 2, 1, 1]);
        assert_eq!(state.q_edges(1).len(), 3);
        assert!(state.check_invariants(Some(&prev)).is_ok());
    }

    #[test]
    fn c6_full_run() {
        let g = c6();
        let out = run_construction_checked(&g, &c6_fixture(&g)).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.decomposition.width(), 4);
        assert!(out.stats.iter().all(NodeStats::within_bound));
    }

    #[test]
    fn connected_input_is_identity() {
        let g = c6();
        let d = Decomposition::single_bag(&g, g.all_vertices()).rerooted(0).unwrap();
        let out = run_construction(&g, &d).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.decomposition.bags(), d.bags());
    }

    #[test]
    fn requires_root() {
        let g = c6();
        let d = c6_fixture(&g).unrooted();
        assert!(matches!(run_construction(&g, &d), Err(Error::NotRooted)));
    }

    #[test]
    fn injected_cycle_is_reported() {
        let g = c6();
        let mut state = ConstructionState::new(&g, &c6_fixture(&g)).unwrap();
        assert!(state.check_invariants(None).is_ok());
        let (a, b, c) = (g.vertex("3").unwrap(), g.vertex("4").unwrap(), g.vertex("5").unwrap());
        state.inject_q_edge(3, a, b);
        state.inject_q_edge(3, b, c);
        state.inject_q_edge(3, c, a);
        let report = state.check_invariants(None);
        assert!(report.failures.iter().any(|f| f.contains("cycle")));
    }

    #[test]
    fn random_runs_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for round in 0..40 {
            let n = 4 + round % 8;
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.2) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let mut order: Vec<usize> = g.vertices().collect();
            for i in (1..n).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let d = stabilize(&g, &decomposition_from_ordering(&g, &order).unwrap()).unwrap();
            let root = rng.gen_range(0..d.len());
            let out = run_construction_checked(&g, &d.rerooted(root).unwrap()).unwrap();
            assert!(out.stats.iter().all(NodeStats::within_bound));
        }
    }
}
