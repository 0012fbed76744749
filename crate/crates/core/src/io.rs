//! JSON and DOT serialization for decompositions, traces and brambles.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::brambles::Bramble;
use crate::connectify::PathAddition;
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub bag: Vec<String>,
}

/// On-disk decomposition. `graph` is either a fingerprint (`sha256:…`),
/// checked on load, or a free-form name, which is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub graph: String,
    pub root: Option<usize>,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<[usize; 2]>,
}

impl DecompositionJson {
    pub fn from_decomposition(g: &Graph, d: &Decomposition) -> Self {
        DecompositionJson {
            graph: d.graph_fingerprint().to_string(),
            root: d.root(),
            nodes: d
                .nodes()
                .map(|t| NodeJson {
                    id: t,
                    bag: g.set_labels(d.bag(t)),
                })
                .collect(),
            edges: d.tree_edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_decomposition(&self, g: &Graph) -> Result<Decomposition> {
        if self.graph.starts_with("sha256:") && self.graph != g.fingerprint() {
            return Err(Error::GraphMismatch {
                expected: self.graph.clone(),
                found: g.fingerprint(),
            });
        }
        let mut index = HashMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if index.insert(node.id, i).is_some() {
                return Err(Error::InvalidDecomposition(format!("duplicate node id {}", node.id)));
            }
        }
        let lookup = |id: usize| index.get(&id).copied().ok_or(Error::UnknownNode(id));
        let bags = self
            .nodes
            .iter()
            .map(|node| g.labelled_set(&node.bag))
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|&[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let d = Decomposition::new(g, bags, &edges)?;
        match self.root {
            Some(r) => d.rerooted(lookup(r)?),
            None => Ok(d),
        }
    }
}

pub fn decomposition_to_json(g: &Graph, d: &Decomposition) -> String {
    serde_json::to_string_pretty(&DecompositionJson::from_decomposition(g, d))
        .expect("decomposition serializes")
}

pub fn decomposition_from_json(g: &Graph, text: &str) -> Result<Decomposition> {
    serde_json::from_str::<DecompositionJson>(text)?.to_decomposition(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntryJson {
    pub node: usize,
    pub path: Vec<String>,
    pub child: Option<usize>,
    pub components_before: usize,
    pub components_after: usize,
}

pub fn trace_to_json(g: &Graph, trace: &[PathAddition]) -> String {
    let entries: Vec<TraceEntryJson> = trace
        .iter()
        .map(|r| TraceEntryJson {
            node: r.node,
            path: r.path.iter().map(|&v| g.label(v).to_string()).collect(),
            child: r.child,
            components_before: r.components_before,
            components_after: r.components_after,
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("trace serializes")
}

pub fn trace_from_json(g: &Graph, text: &str) -> Result<Vec<PathAddition>> {
    let entries: Vec<TraceEntryJson> = serde_json::from_str(text)?;
    entries
        .into_iter()
        .map(|e| {
            Ok(PathAddition {
                node: e.node,
                path: e
                    .path
                    .iter()
                    .map(|l| g.vertex_or_err(l))
                    .collect::<Result<_>>()?,
                child: e.child,
                components_before: e.components_before,
                components_after: e.components_after,
            })
        })
        .collect()
}

pub fn bramble_to_json(g: &Graph, b: &Bramble) -> String {
    let sets: Vec<Vec<String>> = b.elements().iter().map(|e| g.set_labels(e)).collect();
    serde_json::to_string_pretty(&sets).expect("bramble serializes")
}

pub fn bramble_from_json(g: &Graph, text: &str) -> Result<Bramble> {
    let sets: Vec<Vec<String>> = serde_json::from_str(text)?;
    Bramble::from_labels(g, &sets)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Tree nodes labelled with their bags. With a trace, vertices that entered
/// a bag through an added path are drawn in red and touched nodes shaded.
pub fn decomposition_to_dot(g: &Graph, d: &Decomposition, trace: Option<&[PathAddition]>) -> String {
    let mut added = vec![g.empty_set(); d.len()];
    if let Some(trace) = trace {
        let tree = d.rooted_tree().ok();
        for r in trace {
            let subtree = match &tree {
                Some(t) if r.node < d.len() => t.subtree(r.node),
                _ => vec![],
            };
            for u in subtree {
                for &v in &r.path {
                    if d.bag(u).contains(v) {
                        added[u].insert(v);
                    }
                }
            }
        }
    }
    let mut out = String::from("graph decomposition {\n  node [shape=box];\n");
    for t in d.nodes() {
        let items: Vec<String> = d
            .bag(t)
            .iter()
            .map(|v| {
                let l = escape(g.label(v));
                if added[t].contains(v) {
                    format!("<font color=\"red\">{l}</font>")
                } else {
                    l
                }
            })
            .collect();
        let mut attrs = format!("label=<{}: {}>", t, items.join(", "));
        if !added[t].is_empty() {
            attrs.push_str(", style=filled, fillcolor=\"#fde0dd\"");
        }
        if d.root() == Some(t) {
            attrs.push_str(", peripheries=2");
        }
        let _ = writeln!(out, "  n{t} [{attrs}];");
    }
    for (a, b) in d.tree_edges() {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    out.push_str("}\n");
    out
}
