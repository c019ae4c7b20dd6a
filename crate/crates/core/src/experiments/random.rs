//! Seeded random graphs for property checks and stretch histograms.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::spectral::spectral_path;

/// Random spanning tree (each vertex attaches to an earlier one) plus
/// every other pair independently with probability `p`. Unit weights.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> WeightedGraph {
    let edges = random_edges(n, p, rng);
    WeightedGraph::unweighted(n, &edges).expect("generated edges are simple")
}

fn random_edges(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut adjacent = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v));
        adjacent.insert((u, v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !adjacent.contains(&(a, b)) && rng.random_bool(p.clamp(0.0, 1.0)) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Like [`random_connected_graph`] with edge weights in `[0.1, 2)` and
/// vertex weights in `[0.1, 2)`, except that each vertex is zero-weight
/// with probability `zero_frac` (at least one vertex stays positive).
pub fn random_weighted_graph(n: usize, p: f64, zero_frac: f64, rng: &mut impl Rng) -> WeightedGraph {
    let edges: Vec<_> = random_edges(n, p, rng)
        .into_iter()
        .map(|(a, b)| (a, b, rng.random_range(0.1..2.0)))
        .collect();
    let mut weights: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(zero_frac.clamp(0.0, 1.0)) { 0.0 } else { rng.random_range(0.1..2.0) })
        .collect();
    if weights.iter().all(|&w| w == 0.0) {
        weights[rng.random_range(0..n)] = 1.0;
    }
    WeightedGraph::build(n, &edges, &weights).expect("generated graph is valid")
}

/// A random weighted graph with up to `twins` extra vertices, each a copy
/// of an existing vertex (same neighbours, edge and vertex weights, not
/// adjacent to its original). Copied vertices are pairwise non-adjacent so
/// twins stay twins. Returns the graph and the `(original, twin)` pairs.
/// Vertex 0 is never copied.
pub fn planted_twins_graph(n: usize, p: f64, twins: usize, rng: &mut impl Rng) -> (WeightedGraph, Vec<(usize, usize)>) {
    let base = random_weighted_graph(n, p, 0.0, rng);
    let candidates: Vec<usize> = (1..n).collect();
    let mut originals: Vec<usize> = Vec::new();
    for &c in candidates.choose_multiple(rng, n.saturating_sub(1)) {
        if originals.len() < twins && originals.iter().all(|&o| !base.is_adjacent(o, c)) {
            originals.push(c);
        }
    }
    let mut edges: Vec<_> = base.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
    let mut weights = base.vertex_weights().to_vec();
    let mut pairs = Vec::new();
    for &o in &originals {
        let t = weights.len();
        weights.push(base.vertex_weight(o));
        for (y, w) in base.neighbors(o) {
            edges.push((y, t, w));
        }
        pairs.push((o, t));
    }
    let g = WeightedGraph::build(weights.len(), &edges, &weights).expect("twin construction is valid");
    (g, pairs)
}

/// Counts of spectral-path stretch `length / distance` over all ordered
/// pairs of each graph, keyed by the reduced fraction. Pairs whose solve
/// fails are counted under `"error"`.
pub fn stretch_histogram(graphs: &[WeightedGraph]) -> Result<BTreeMap<String, usize>> {
    let mut hist = BTreeMap::new();
    for g in graphs {
        for to in 0..g.n() {
            for from in (0..g.n()).filter(|&v| v != to) {
                let key = match spectral_path(g, from, to) {
                    Ok(p) => p.stretch().map_or("0".into(), |s| s.to_string()),
                    Err(_) => "error".into(),
                };
                *hist.entry(key).or_insert(0) += 1;
            }
        }
    }
    Ok(hist)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramSummary {
    pub graphs: usize,
    pub pairs: usize,
    pub histogram: BTreeMap<String, usize>,
}
