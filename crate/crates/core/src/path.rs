use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// A simple path with its hop length and the hop distance between its ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRecord {
    pub vertices: Vec<usize>,
    /// Number of edges.
    pub length: usize,
    pub endpoint_distance: usize,
    /// Set when some step of the descent that produced this path had a
    /// near-tie among the minimising neighbours.
    pub tie: bool,
}

impl PathRecord {
    /// Validates adjacency and simplicity, and measures the endpoint
    /// distance by BFS on `g`.
    pub fn new(g: &WeightedGraph, vertices: Vec<usize>) -> Result<Self> {
        let (&first, &last) = match (vertices.first(), vertices.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidPath("empty".into())),
        };
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        for w in vertices.windows(2) {
            if !g.is_adjacent(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        let mut seen = vec![false; g.n()];
        for &v in &vertices {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPath(format!("vertex {v} repeats")));
            }
        }
        let endpoint_distance = g.hop_distance(first, last)?.ok_or(Error::DisconnectedGraph)?;
        Ok(Self { length: vertices.len() - 1, vertices, endpoint_distance, tie: false })
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    /// `length / endpoint_distance`; `None` when the endpoints coincide.
    pub fn stretch(&self) -> Option<Ratio<usize>> {
        (self.endpoint_distance > 0).then(|| Ratio::new(self.length, self.endpoint_distance))
    }

    pub fn stretch_f64(&self) -> Option<f64> {
        (self.endpoint_distance > 0).then(|| self.length as f64 / self.endpoint_distance as f64)
    }

    pub fn labels(&self, g: &WeightedGraph) -> Vec<String> {
        self.vertices.iter().map(|&v| g.label(v)).collect()
    }
}
