//! Tree-decompositions and the predicates defined on them: validity, width,
//! connectedness of parts, stability, and subtree bag unions.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{components, is_connected_set, Graph};
use crate::vertex_set::VertexSet;

/// A tree with one bag per node, bound to the graph it decomposes by the
/// graph's fingerprint. Node ids are dense `0..len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    graph: String,
    bags: Vec<VertexSet>,
    adj: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl Decomposition {
    pub fn new(g: &Graph, bags: Vec<VertexSet>, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_fingerprint(g.fingerprint(), g.n(), bags, edges)
    }

    pub(crate) fn with_fingerprint(
        graph: String,
        n: usize,
        bags: Vec<VertexSet>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if bags.is_empty() {
            return Err(Error::EmptyDecomposition);
        }
        for bag in &bags {
            if let Some(v) = bag.iter().find(|&v| v >= n) {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        let m = bags.len();
        if edges.len() != m - 1 {
            return Err(Error::NotATree(format!(
                "{} nodes need {} edges, found {}",
                m,
                m - 1,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in edges {
            if a >= m || b >= m {
                return Err(Error::UnknownNode(a.max(b)));
            }
            if a == b || adj[a].contains(&b) {
                return Err(Error::NotATree(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    count += 1;
                    stack.push(s);
                }
            }
        }
        if count != m {
            return Err(Error::NotATree("tree is disconnected".into()));
        }
        let bags = bags
            .into_iter()
            .map(|b| {
                let mut sized = VertexSet::new(n);
                sized.union_with(&b);
                sized
            })
            .collect();
        Ok(Decomposition {
            graph,
            bags,
            adj,
            root: None,
        })
    }

    pub fn single_bag(g: &Graph, bag: VertexSet) -> Self {
        Self::new(g, vec![bag], &[]).expect("one node is a tree")
    }

    pub fn graph_fingerprint(&self) -> &str {
        &self.graph
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        let found = g.fingerprint();
        if found != self.graph {
            return Err(Error::GraphMismatch {
                expected: self.graph.clone(),
                found,
            });
        }
        Ok(())
    }

    /// Number of tree nodes.
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.bags.len()
    }

    pub fn bag(&self, t: usize) -> &VertexSet {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub(crate) fn set_bag(&mut self, t: usize, bag: VertexSet) {
        self.bags[t] = bag;
    }

    pub fn tree_neighbors(&self, t: usize) -> &[usize] {
        &self.adj[t]
    }

    /// Tree edges as `(a, b)` with `a < b`, sorted.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Same tree and bags, rooted at `r`.
    pub fn rerooted(&self, r: usize) -> Result<Decomposition> {
        if r >= self.len() {
            return Err(Error::UnknownNode(r));
        }
        let mut d = self.clone();
        d.root = Some(r);
        Ok(d)
    }

    pub fn unrooted(&self) -> Decomposition {
        let mut d = self.clone();
        d.root = None;
        d
    }

    pub fn rooted_tree(&self) -> Result<RootedTree> {
        let root = self.root.ok_or(Error::NotRooted)?;
        Ok(RootedTree::new(&self.adj, root))
    }

    /// Union of the bags on `s`'s side of the tree edge `ts`.
    pub fn side_union(&self, t: usize, s: usize) -> VertexSet {
        let mut out = VertexSet::new(self.bags[0].universe());
        for u in self.side_nodes(t, s) {
            out.union_with(&self.bags[u]);
        }
        out
    }

    /// Nodes of the component of `T - ts` containing `s`.
    pub fn side_nodes(&self, t: usize, s: usize) -> Vec<usize> {
        let mut out = vec![s];
        let mut stack = vec![(s, t)];
        while let Some((u, from)) = stack.pop() {
            for &w in &self.adj[u] {
                if w != from {
                    out.push(w);
                    stack.push((w, u));
                }
            }
        }
        out
    }
}

/// Parent/children view of a rooted tree. Children are kept in ascending id
/// order and `preorder` lists every node after its parent.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub preorder: Vec<usize>,
}

impl RootedTree {
    fn new(adj: &[Vec<usize>], root: usize) -> Self {
        let m = adj.len();
        let mut parent = vec![None; m];
        let mut children = vec![Vec::new(); m];
        let mut preorder = Vec::with_capacity(m);
        let mut stack = vec![root];
        let mut seen = vec![false; m];
        seen[root] = true;
        while let Some(t) = stack.pop() {
            preorder.push(t);
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some(t);
                    children[t].push(s);
                }
            }
            // reversed so the smallest child is processed first
            for &s in children[t].iter().rev() {
                stack.push(s);
            }
        }
        RootedTree {
            root,
            parent,
            children,
            preorder,
        }
    }

    /// `t` and all its descendants, `t` first.
    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }

    /// `t` and its ancestors up to the root.
    pub fn ancestors(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut cur = t;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn is_ancestor(&self, a: usize, t: usize) -> bool {
        let mut cur = Some(t);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub t1_ok: bool,
    pub t2_ok: bool,
    pub t3_ok: bool,
    /// Vertices in no bag.
    pub uncovered_vertices: Vec<usize>,
    /// Edges in no bag.
    pub uncovered_edges: Vec<(usize, usize)>,
    /// Vertices whose bag occurrences split into several subtrees, with the
    /// node sets of those pieces.
    pub split_vertices: Vec<(usize, Vec<Vec<usize>>)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.t1_ok && self.t2_ok && self.t3_ok
    }
}

/// Checks vertex coverage, edge coverage and the subtree property.
pub fn validate(g: &Graph, d: &Decomposition) -> Result<ValidationReport> {
    d.check_graph(g)?;
    let mut covered = g.empty_set();
    for bag in d.bags() {
        covered.union_with(bag);
    }
    let uncovered_vertices: Vec<usize> = g.vertices().filter(|&v| !covered.contains(v)).collect();

    let uncovered_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| !d.bags().iter().any(|b| b.contains(u) && b.contains(v)))
        .collect();

    let mut split_vertices = Vec::new();
    for x in g.vertices() {
        let holders: Vec<usize> = d.nodes().filter(|&t| d.bag(t).contains(x)).collect();
        if holders.len() <= 1 {
            continue;
        }
        let pieces = tree_components(d, &holders);
        if pieces.len() > 1 {
            split_vertices.push((x, pieces));
        }
    }

    Ok(ValidationReport {
        t1_ok: uncovered_vertices.is_empty(),
        t2_ok: uncovered_edges.is_empty(),
        t3_ok: split_vertices.is_empty(),
        uncovered_vertices,
        uncovered_edges,
        split_vertices,
    })
}

fn tree_components(d: &Decomposition, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut member = vec![false; d.len()];
    for &t in nodes {
        member[t] = true;
    }
    let mut seen = vec![false; d.len()];
    let mut out = Vec::new();
    for &start in nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut piece = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &s in d.tree_neighbors(t) {
                if member[s] && !seen[s] {
                    seen[s] = true;
                    piece.push(s);
                    queue.push_back(s);
                }
            }
        }
        piece.sort_unstable();
        out.push(piece);
    }
    out
}

pub fn width(d: &Decomposition) -> usize {
    d.width()
}

/// First node (by id) whose bag does not induce a connected subgraph.
/// Empty bags count as disconnected.
pub fn disconnected_bag(g: &Graph, d: &Decomposition) -> Result<Option<usize>> {
    d.check_graph(g)?;
    Ok(d.nodes().find(|&t| !is_connected_set(g, d.bag(t))))
}

pub fn is_connected_decomposition(g: &Graph, d: &Decomposition) -> Result<bool> {
    Ok(disconnected_bag(g, d)?.is_none())
}

/// A tree edge `(t, s)` whose `s`-side bag union is disconnected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityViolation {
    pub edge: (usize, usize),
    pub side: usize,
}

/// First violation of stability, scanning tree edges in order and checking
/// the larger-id side before the smaller-id side.
pub fn stability_violation(g: &Graph, d: &Decomposition) -> Result<Option<StabilityViolation>> {
    d.check_graph(g)?;
    for (a, b) in d.tree_edges() {
        for (t, s) in [(a, b), (b, a)] {
            if !is_connected_set(g, &d.side_union(t, s)) {
                return Ok(Some(StabilityViolation { edge: (a, b), side: s }));
            }
        }
    }
    Ok(None)
}

pub fn is_stable(g: &Graph, d: &Decomposition) -> Result<bool> {
    Ok(stability_violation(g, d)?.is_none())
}

/// Union of the bags of `t` and all its descendants.
pub fn subtree_bag_union(d: &Decomposition, t: usize) -> Result<VertexSet> {
    if t >= d.len() {
        return Err(Error::UnknownNode(t));
    }
    let tree = d.rooted_tree()?;
    let mut out = VertexSet::new(d.bag(0).universe());
    for u in tree.subtree(t) {
        out.union_with(d.bag(u));
    }
    Ok(out)
}

pub fn reroot(d: &Decomposition, r: usize) -> Result<Decomposition> {
    d.rerooted(r)
}

/// Repeatedly contracts a tree edge whose one bag is contained in the
/// other, keeping the larger bag. Removes empty bags as a special case.
/// Surviving nodes keep their relative order; the root follows its bag.
pub fn simplify(d: &Decomposition) -> Decomposition {
    let m = d.len();
    let mut alive = vec![true; m];
    let mut adj: Vec<Vec<usize>> = d.adj.clone();
    let mut root = d.root;
    loop {
        let mut contraction = None;
        'scan: for a in 0..m {
            if !alive[a] {
                continue;
            }
            for &b in &adj[a] {
                if a < b {
                    if d.bags[a].is_subset(&d.bags[b]) && d.bags[a] != d.bags[b] {
                        contraction = Some((a, b));
                    } else if d.bags[b].is_subset(&d.bags[a]) {
                        contraction = Some((b, a));
                    }
                    if contraction.is_some() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((gone, keep)) = contraction else { break };
        alive[gone] = false;
        let moved: Vec<usize> = adj[gone].iter().copied().filter(|&w| w != keep).collect();
        adj[gone].clear();
        adj[keep].retain(|&w| w != gone);
        for w in moved {
            adj[w].retain(|&x| x != gone);
            adj[w].push(keep);
            adj[keep].push(w);
        }
        if root == Some(gone) {
            root = Some(keep);
        }
    }
    let mut new_id = vec![usize::MAX; m];
    let mut bags = Vec::new();
    for t in 0..m {
        if alive[t] {
            new_id[t] = bags.len();
            bags.push(d.bags[t].clone());
        }
    }
    let mut edges = Vec::new();
    for t in 0..m {
        for &s in &adj[t] {
            if alive[t] && t < s {
                edges.push((new_id[t], new_id[s]));
            }
        }
    }
    let n = d.bags[0].universe();
    let mut out = Decomposition::with_fingerprint(d.graph.clone(), n, bags, &edges)
        .expect("contraction keeps a tree");
    out.root = root.map(|r| new_id[r]);
    out
}

/// Components of the bag `t`.
pub fn bag_components(g: &Graph, d: &Decomposition, t: usize) -> Vec<VertexSet> {
    components(g, d.bag(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    pub(crate) fn c6() -> Graph {
        parse_edge_list("1 2\n2 3\n3 4\n4 5\n5 6\n6 1\n").unwrap()
    }

    fn bags(g: &Graph, spec: &[&[&str]]) -> Vec<VertexSet> {
        spec.iter().map(|b| g.labelled_set(b).unwrap()).collect()
    }

    fn c6_fixture(g: &Graph) -> Decomposition {
        let b = bags(g, &[&["1", "2", "6"], &["2", "5", "6"], &["2", "3", "5"], &["3", "4", "5"]]);
        Decomposition::new(g, b, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn c6_fixture_is_valid_width_two() {
        let g = c6();
        let d = c6_fixture(&g);
        assert!(validate(&g, &d).unwrap().is_valid());
        assert_eq!(width(&d), 2);
    }

    #[test]
    fn triangle_single_bag() {
        let g = parse_edge_list("1 2\n2 3\n3 1\n").unwrap();
        let d = Decomposition::single_bag(&g, g.all_vertices());
        assert!(validate(&g, &d).unwrap().is_valid());
        assert_eq!(width(&d), 2);
        assert!(is_connected_decomposition(&g, &d).unwrap());
        assert!(is_stable(&g, &d).unwrap());
    }

    #[test]
    fn triangle_missing_edge_witness() {
        let g = parse_edge_list("1 2\n2 3\n3 1\n").unwrap();
        let d = Decomposition::new(&g, bags(&g, &[&["1", "2"], &["2", "3"]]), &[(0, 1)]).unwrap();
        let report = validate(&g, &d).unwrap();
        assert!(report.t1_ok && report.t3_ok && !report.t2_ok);
        let (u, v) = report.uncovered_edges[0];
        assert_eq!((g.label(u), g.label(v)), ("1", "3"));
    }

    #[test]
    fn subtree_property_witness() {
        let g = parse_edge_list("a b\nb c\n").unwrap();
        let d = Decomposition::new(
            &g,
            bags(&g, &[&["a", "b"], &["b", "c"], &["a"]]),
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        let report = validate(&g, &d).unwrap();
        assert!(!report.t3_ok);
        assert_eq!(report.split_vertices, vec![(0, vec![vec![0], vec![2]])]);
    }

    #[test]
    fn c6_fixture_connectedness() {
        let g = c6();
        let d = c6_fixture(&g);
        assert_eq!(disconnected_bag(&g, &d).unwrap(), Some(1));
        let out = bags(
            &g,
            &[&["1", "2", "6"], &["2", "3", "4", "5", "6"], &["2", "3", "4", "5"], &["3", "4", "5"]],
        );
        let d2 = Decomposition::new(&g, out, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(is_connected_decomposition(&g, &d2).unwrap());
        assert_eq!(width(&d2), 4);
    }

    #[test]
    fn c6_fixture_is_stable() {
        let g = c6();
        assert!(is_stable(&g, &c6_fixture(&g)).unwrap());
    }

    #[test]
    fn p4_unstable_side() {
        let g = parse_edge_list("a b\nb c\nc d\n").unwrap();
        let bad = Decomposition::new(&g, bags(&g, &[&["a", "b"], &["c", "d"]]), &[(0, 1)]).unwrap();
        assert!(!validate(&g, &bad).unwrap().t2_ok);
        let d = Decomposition::new(&g, bags(&g, &[&["a", "d"], &["a", "b", "c", "d"]]), &[(0, 1)])
            .unwrap();
        assert!(validate(&g, &d).unwrap().is_valid());
        let v = stability_violation(&g, &d).unwrap().unwrap();
        assert_eq!(v, StabilityViolation { edge: (0, 1), side: 0 });
    }

    #[test]
    fn subtree_unions() {
        let g = c6();
        let d = c6_fixture(&g).rerooted(0).unwrap();
        assert_eq!(subtree_bag_union(&d, 2).unwrap(), g.labelled_set(&["2", "3", "4", "5"]).unwrap());
        assert_eq!(subtree_bag_union(&d, 3).unwrap(), *d.bag(3));
        assert_eq!(subtree_bag_union(&d, 0).unwrap(), g.all_vertices());
        assert!(matches!(subtree_bag_union(&d, 9), Err(Error::UnknownNode(9))));
        assert!(matches!(subtree_bag_union(&c6_fixture(&g), 0), Err(Error::NotRooted)));
    }

    #[test]
    fn rerooting() {
        let g = c6();
        let d = c6_fixture(&g);
        let at0 = reroot(&d, 0).unwrap();
        let at3 = reroot(&at0, 3).unwrap();
        let t0 = at0.rooted_tree().unwrap();
        let t3 = at3.rooted_tree().unwrap();
        assert_eq!(t0.parent, vec![None, Some(0), Some(1), Some(2)]);
        assert_eq!(t3.parent, vec![Some(1), Some(2), Some(3), None]);
        assert_eq!(reroot(&at0, 0).unwrap(), at0);
        let single = Decomposition::single_bag(&g, g.all_vertices());
        assert_eq!(reroot(&single, 0).unwrap().root(), Some(0));
    }

    #[test]
    fn simplify_contracts_subsets() {
        let g = parse_edge_list("1 2\n2 3\n1 3\n").unwrap();
        let d = Decomposition::new(&g, bags(&g, &[&["1", "2"], &["1", "2", "3"]]), &[(0, 1)]).unwrap();
        let s = simplify(&d);
        assert_eq!(s.bags(), &bags(&g, &[&["1", "2", "3"]])[..]);

        let chain = Decomposition::new(
            &g,
            bags(&g, &[&["1"], &["1", "2"], &["1", "2", "3"]]),
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(simplify(&chain).len(), 1);

        let c = c6();
        let fixture = c6_fixture(&c);
        assert_eq!(simplify(&fixture), fixture);
    }

    #[test]
    fn simplify_keeps_root_and_removes_empty_bags() {
        let g = c6();
        let mut b = bags(&g, &[&["1", "2", "6"], &["2", "5", "6"], &["2", "3", "5"], &["3", "4", "5"]]);
        b.push(g.empty_set());
        let d = Decomposition::new(&g, b, &[(0, 1), (1, 2), (2, 3), (4, 2)])
            .unwrap()
            .rerooted(4)
            .unwrap();
        let s = simplify(&d);
        assert_eq!(s.len(), 4);
        assert_eq!(s.root(), Some(2));
        assert!(validate(&g, &s).unwrap().is_valid());
    }

    #[test]
    fn rejects_non_trees_and_wrong_graph() {
        let g = c6();
        let b = bags(&g, &[&["1"], &["2"], &["3"]]);
        assert!(matches!(
            Decomposition::new(&g, b.clone(), &[(0, 1)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            Decomposition::new(&g, b, &[(0, 1), (1, 0)]),
            Err(Error::NotATree(_))
        ));
        assert!(matches!(
            Decomposition::new(&g, vec![], &[]),
            Err(Error::EmptyDecomposition)
        ));
        let tri = parse_edge_list("1 2\n2 3\n3 1\n").unwrap();
        let d = Decomposition::single_bag(&tri, tri.all_vertices());
        assert!(matches!(validate(&g, &d), Err(Error::GraphMismatch { .. })));
    }
}
