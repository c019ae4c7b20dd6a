//! Weighted undirected graphs on dense vertex indices.
//!
//! Weights only ever enter the eigenproblems. Every distance in this crate is
//! a hop count over the full edge set, zero-weight edges included.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// An undirected graph with nonnegative edge weights `w_E` and vertex
/// weights `w_V`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    // (neighbour, edge index), in edge insertion order
    adjacency: Vec<Vec<(usize, usize)>>,
    vertex_weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeWeight(w))
    }
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Each unordered pair may appear
    /// at most once; edges are stored with `u < v`.
    pub fn build(n: usize, weighted_edges: &[(usize, usize, f64)], vertex_weights: &[f64]) -> Result<Self> {
        if vertex_weights.len() != n {
            return Err(Error::VertexWeightCount { expected: n, got: vertex_weights.len() });
        }
        for &w in vertex_weights {
            check_weight(w)?;
        }
        if !vertex_weights.iter().any(|&w| w > 0.0) {
            return Err(Error::AllVertexWeightsZero);
        }
        let mut seen = HashSet::with_capacity(weighted_edges.len());
        let mut edges = Vec::with_capacity(weighted_edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b, w) in weighted_edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            check_weight(w)?;
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            let idx = edges.len();
            edges.push(Edge { u, v, weight: w });
            adjacency[u].push((v, idx));
            adjacency[v].push((u, idx));
        }
        Ok(Self { edges, adjacency, vertex_weights: vertex_weights.to_vec(), labels: None })
    }

    /// All edge and vertex weights equal to one.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::build(n, &weighted, &vec![1.0; n])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::BadParams(format!("{} labels for {} vertices", labels.len(), self.n())));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::BadParams(format!("invalid label {l:?}")));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::BadParams(format!("duplicate label {l:?}")));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_weight(&self, v: usize) -> f64 {
        self.vertex_weights[v]
    }

    pub fn vertex_weights(&self) -> &[f64] {
        &self.vertex_weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The vertex label, or its index when the graph is unlabelled.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Resolves a vertex by label, falling back to a decimal index.
    pub fn find_vertex(&self, name: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(pos) = labels.iter().position(|l| l == name) {
                return Ok(pos);
            }
        }
        match name.parse::<usize>() {
            Ok(v) if v < self.n() => Ok(v),
            _ => Err(Error::UnknownLabel(name.to_string())),
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: v, n: self.n() })
        }
    }

    /// Neighbours of `v` with the weight of the connecting edge.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[v].iter().map(move |&(x, e)| (x, self.edges[e].weight))
    }

    pub fn neighbor_count(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Weighted degree `d(v) = sum_j w_E(v, j)`.
    pub fn degree(&self, v: usize) -> f64 {
        self.neighbors(v).map(|(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> f64 {
        (0..self.n()).map(|v| self.degree(v)).fold(0.0, f64::max)
    }

    /// `w_E(a, b)`, zero for non-adjacent pairs.
    pub fn edge_weight(&self, a: usize, b: usize) -> f64 {
        let (x, y) = if self.adjacency[a].len() <= self.adjacency[b].len() { (a, b) } else { (b, a) };
        self.adjacency[x]
            .iter()
            .find(|&&(z, _)| z == y)
            .map_or(0.0, |&(_, e)| self.edges[e].weight)
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.adjacency[a].len() <= self.adjacency[b].len() { (a, b) } else { (b, a) };
        self.adjacency[x].iter().any(|&(z, _)| z == y)
    }

    /// BFS hop counts from `source` over all edges; `None` for unreachable vertices.
    pub fn hop_distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap_or(0);
            for &(y, _) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Hop distance between `a` and `b`; `None` means infinite.
    pub fn hop_distance(&self, a: usize, b: usize) -> Result<Option<usize>> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        Ok(self.hop_distances_from(a)[b])
    }

    // Vertices reachable from `start` through edges accepted by `keep`,
    // never entering `removed`.
    fn reach(&self, start: usize, removed: Option<usize>, keep: impl Fn(&Edge) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if Some(start) == removed {
            return seen;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, e) in &self.adjacency[x] {
                if !seen[y] && Some(y) != removed && keep(&self.edges[e]) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Connected through any edges, zero-weight ones included.
    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.reach(0, None, |_| true).into_iter().all(|s| s)
    }

    /// Connected using only strictly positive edges.
    pub fn is_positively_connected(&self) -> bool {
        self.n() == 0 || self.reach(0, None, |e| e.weight > 0.0).into_iter().all(|s| s)
    }

    /// Whether `G - i` is positively connected.
    pub fn is_positively_connected_without(&self, i: usize) -> bool {
        if self.n() <= 1 {
            return true;
        }
        let start = if i == 0 { 1 } else { 0 };
        let seen = self.reach(start, Some(i), |e| e.weight > 0.0);
        seen.iter().enumerate().all(|(v, &s)| s || v == i)
    }

    /// Vertices of the positive component of `G - i` that contains `j`.
    pub fn positive_component_without(&self, i: usize, j: usize) -> Vec<usize> {
        let seen = self.reach(j, Some(i), |e| e.weight > 0.0);
        (0..self.n()).filter(|&v| seen[v]).collect()
    }

    /// Induced subgraph on `keep` (in the given order). Returns the subgraph
    /// and the old-to-new index map.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(Self, Vec<Option<usize>>)> {
        let mut map = vec![None; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            self.check_vertex(old)?;
            map[old] = Some(new);
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter_map(|e| Some((map[e.u]?, map[e.v]?, e.weight)))
            .collect();
        let weights: Vec<_> = keep.iter().map(|&v| self.vertex_weights[v]).collect();
        let mut g = Self::build(keep.len(), &edges, &weights)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(keep.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok((g, map))
    }

    /// `G - v`: indices above `v` shift down by one, labels follow their vertices.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        self.check_vertex(v)?;
        let keep: Vec<_> = (0..self.n()).filter(|&x| x != v).collect();
        let mut map = vec![None; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut g = Self {
            edges: Vec::new(),
            adjacency: vec![Vec::new(); keep.len()],
            vertex_weights: keep.iter().map(|&x| self.vertex_weights[x]).collect(),
            labels: self.labels.as_ref().map(|l| keep.iter().map(|&x| l[x].clone()).collect()),
        };
        // vertex deletion may leave every remaining weight at zero; the
        // result is still a valid graph for hop-count purposes
        for e in &self.edges {
            if let (Some(u), Some(w)) = (map[e.u], map[e.v]) {
                let idx = g.edges.len();
                g.edges.push(Edge { u, v: w, weight: e.weight });
                g.adjacency[u].push((w, idx));
                g.adjacency[w].push((u, idx));
            }
        }
        Ok(g)
    }

    /// Same vertices, only positive-weight edges.
    pub fn strip_zero_edges(&self) -> Self {
        let mut g = Self {
            edges: Vec::new(),
            adjacency: vec![Vec::new(); self.n()],
            vertex_weights: self.vertex_weights.clone(),
            labels: self.labels.clone(),
        };
        for e in self.edges.iter().filter(|e| e.weight > 0.0) {
            let idx = g.edges.len();
            g.edges.push(*e);
            g.adjacency[e.u].push((e.v, idx));
            g.adjacency[e.v].push((e.u, idx));
        }
        g
    }

    /// Largest hop distance over all pairs.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for a in 0..self.n() {
            for d in self.hop_distances_from(a) {
                best = best.max(d.ok_or(Error::DisconnectedGraph)?);
            }
        }
        Ok(best)
    }

    /// Number of connected components (all edges).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            for (v, r) in self.reach(s, None, |_| true).into_iter().enumerate() {
                seen[v] |= r;
            }
        }
        count
    }
}
