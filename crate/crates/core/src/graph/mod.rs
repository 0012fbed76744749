//! Finite simple undirected graphs with stable vertex labels.
//!
//! Vertices are dense ids `0..n`. Every vertex carries a unique string label;
//! parsed graphs use the tokens of the input file, generated families use
//! structured names such as `x0_3` or `y_12`.

mod enumerate;
mod search;
mod walk;

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub use enumerate::{enumerate_connected_sets, ConnectedSets};
pub use search::{
    all_pairs_distances, bfs_distances, bfs_distances_within, components, is_connected_set,
    shortest_path_between_components, DistanceMatrix,
};
pub use walk::{Cycle, Path};

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_ids: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Graph {
    /// Builds a graph on `0..n` with labels equal to the decimal ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for v in 0..n {
            b.add_vertex(&v.to_string());
        }
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of edge `uv` in [`Graph::edges`].
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let pos = self.adj.get(u)?.binary_search(&v).ok()?;
        Some(self.edge_ids[u][pos])
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn vertex_or_err(&self, label: &str) -> Result<usize> {
        self.vertex(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn vertex_set<I: IntoIterator<Item = usize>>(&self, items: I) -> VertexSet {
        VertexSet::from_iter(self.n(), items)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Vertex set from labels.
    pub fn labelled_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet> {
        let mut set = self.empty_set();
        for l in labels {
            set.insert(self.vertex_or_err(l.as_ref())?);
        }
        Ok(set)
    }

    pub fn set_labels(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || components(self, &self.all_vertices()).len() == 1
    }

    /// Induced subgraph on `keep`; returns the subgraph and the old-to-new id map.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n()];
        let mut b = GraphBuilder::new();
        for v in keep.iter() {
            map[v] = Some(b.add_vertex(&self.labels[v]));
        }
        for &(u, v) in &self.edges {
            if let (Some(a), Some(c)) = (map[u], map[v]) {
                b.add_edge(a, c).expect("induced edges are simple");
            }
        }
        (b.build(), map)
    }

    /// Content hash over the labelled vertex and edge sets, used to bind
    /// decompositions to a graph. Independent of the id assignment.
    pub fn fingerprint(&self) -> String {
        let mut labels: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        labels.sort_unstable();
        let mut edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.labels[u].as_str(), self.labels[v].as_str());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort_unstable();
        let mut hasher = Sha256::new();
        for l in labels {
            hasher.update(l.as_bytes());
            hasher.update([0u8]);
        }
        hasher.update([1u8]);
        for (a, b) in edges {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
            hasher.update(b.as_bytes());
            hasher.update([0u8]);
        }
        let digest = hasher.finalize();
        let mut out = String::from("sha256:");
        for byte in &digest[..8] {
            write!(out, "{byte:02x}").unwrap();
        }
        out
    }

    /// Serializes in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", self.labels[u], self.labels[v]).unwrap();
        }
        out
    }
}

#[derive(Default)]
pub struct GraphBuilder {
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `label`, creating the vertex on first use.
    pub fn add_vertex(&mut self, label: &str) -> usize {
        if let Some(&v) = self.index.get(label) {
            return v;
        }
        let v = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), v);
        self.adj.push(Vec::new());
        v
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Adds `uv`; duplicate edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n {
            return Err(Error::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(Error::VertexOutOfRange(v));
        }
        if u == v {
            return Err(Error::SelfLoop {
                line: 0,
                label: self.labels[u].clone(),
            });
        }
        if !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
        Ok(())
    }

    pub fn add_labelled_edge(&mut self, a: &str, b: &str) -> Result<()> {
        let u = self.add_vertex(a);
        let v = self.add_vertex(b);
        self.add_edge(u, v)
    }

    /// Adds a path through the given vertices.
    pub fn add_path(&mut self, vertices: &[usize]) -> Result<()> {
        for w in vertices.windows(2) {
            self.add_edge(w[0], w[1])?;
        }
        Ok(())
    }

    pub fn build(self) -> Graph {
        let mut adj = self.adj;
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let mut edges = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        let mut edge_ids: Vec<Vec<usize>> = adj.iter().map(|l| vec![0; l.len()]).collect();
        for (id, &(u, v)) in edges.iter().enumerate() {
            let pu = adj[u].binary_search(&v).unwrap();
            let pv = adj[v].binary_search(&u).unwrap();
            edge_ids[u][pu] = id;
            edge_ids[v][pv] = id;
        }
        Graph {
            adj,
            edge_ids,
            edges,
            labels: self.labels,
            index: self.index,
        }
    }
}

/// Parses the edge-list format: one edge per line as two whitespace-separated
/// labels, `#` starts a comment line, blank lines are skipped. Labels get dense
/// ids in order of first appearance. Repeated edges are merged.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut b = GraphBuilder::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two vertex tokens, found {}", tokens.len()),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(Error::SelfLoop {
                line: line_no,
                label: tokens[0].to_string(),
            });
        }
        b.add_labelled_edge(tokens[0], tokens[1])?;
    }
    Ok(b.build())
}

pub fn parse_edge_list_bytes(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;
    parse_edge_list(text)
}
