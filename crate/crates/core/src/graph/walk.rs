use std::collections::HashSet;

use super::Graph;
use crate::error::{Error, Result};

/// A simple path, stored as its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex sequence".into()));
        }
        let mut seen = HashSet::new();
        for &v in &vertices {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("vertex {} repeats", g.label(v))));
            }
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::InvalidPath(format!(
                    "{} and {} are not adjacent",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        Ok(Path { vertices })
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<usize>) -> Path {
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn internal(&self) -> &[usize] {
        let k = self.vertices.len();
        if k <= 2 {
            &[]
        } else {
            &self.vertices[1..k - 1]
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// A cycle in canonical form: it starts at its smallest vertex and runs in
/// the direction whose second vertex is smaller.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Cycle> {
        if vertices.len() < 3 {
            return Err(Error::InvalidCycle(format!(
                "length {} is below 3",
                vertices.len()
            )));
        }
        let mut seen = HashSet::new();
        for &v in &vertices {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidCycle(format!("vertex {} repeats", g.label(v))));
            }
        }
        let k = vertices.len();
        for i in 0..k {
            let (a, b) = (vertices[i], vertices[(i + 1) % k]);
            if !g.has_edge(a, b) {
                return Err(Error::InvalidCycle(format!(
                    "{} and {} are not adjacent",
                    g.label(a),
                    g.label(b)
                )));
            }
        }
        Ok(Cycle::canonical(vertices))
    }

    pub(crate) fn canonical(mut vertices: Vec<usize>) -> Cycle {
        let k = vertices.len();
        let pos = (0..k).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(pos);
        if vertices[k - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        Cycle { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges, equal to the number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Distance between positions `i` and `j` along the cycle.
    pub fn cyclic_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.len() - d)
    }
}
