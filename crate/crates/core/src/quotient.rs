//! Symmetry quotients.
//!
//! Instead of automorphism orbits we use the coarsest equitable partition
//! that isolates the special vertex (colour refinement). Every vertex of a
//! cell sees the same weighted neighbourhood profile into every other cell,
//! which is all the lift needs: a positive eigenfunction of the quotient,
//! composed with the cell map, is a positive eigenfunction of the original
//! problem and hence the grounded eigenfunction itself.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::path::PathRecord;
use crate::spectral::{grounded_eigenfunction, spectral_tree, PotentialFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Cells ordered by smallest member; members ascending.
    pub cells: Vec<Vec<usize>>,
    pub cell_of: Vec<usize>,
    pub special_cell: usize,
}

impl Partition {
    fn from_colors(colors: &[usize], special: usize) -> Self {
        // renumber by first appearance so cell order follows the smallest member
        let mut renumber = HashMap::new();
        let cell_of: Vec<usize> = colors
            .iter()
            .map(|c| {
                let next = renumber.len();
                *renumber.entry(*c).or_insert(next)
            })
            .collect();
        let mut cells = vec![Vec::new(); renumber.len()];
        for (v, &c) in cell_of.iter().enumerate() {
            cells[c].push(v);
        }
        let special_cell = cell_of[special];
        Self { cells, cell_of, special_cell }
    }

    /// Every vertex in its own cell.
    pub fn discrete(n: usize, special: usize) -> Self {
        Self::from_colors(&(0..n).collect::<Vec<_>>(), special)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether every vertex of a cell has the same weighted neighbour
    /// profile into every cell.
    pub fn is_equitable(&self, g: &WeightedGraph) -> bool {
        self.cells.iter().all(|cell| {
            let profile = |v: usize| {
                let mut p: Vec<(usize, u64)> =
                    g.neighbors(v).map(|(y, w)| (self.cell_of[y], w.to_bits())).collect();
                p.sort_unstable();
                p
            };
            let first = profile(cell[0]);
            cell.iter().all(|&v| profile(v) == first)
        })
    }
}

/// Coarsest equitable partition refining `{i}` versus the rest (vertices
/// are also separated by weight).
pub fn refine_partition(g: &WeightedGraph, i: usize) -> Partition {
    let n = g.n();
    let mut colors: Vec<usize> = {
        let mut by_weight = HashMap::new();
        (0..n)
            .map(|v| {
                if v == i {
                    0
                } else {
                    let next = by_weight.len() + 1;
                    *by_weight.entry(g.vertex_weight(v).to_bits()).or_insert(next)
                }
            })
            .collect()
    };
    let mut count = colors.iter().collect::<std::collections::HashSet<_>>().len();
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, u64)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|v| {
                let mut profile: Vec<(usize, u64)> = g.neighbors(v).map(|(y, w)| (colors[y], w.to_bits())).collect();
                profile.sort_unstable();
                let fresh = ids.len();
                *ids.entry((colors[v], profile)).or_insert(fresh)
            })
            .collect();
        let next_count = ids.len();
        colors = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    Partition::from_colors(&colors, i)
}

/// A weighted graph on the cells of a partition, with the cell map `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph {
    pub graph: WeightedGraph,
    /// Original vertex -> quotient vertex.
    pub phi: Vec<usize>,
    /// The special vertex in the original graph.
    pub special: usize,
    pub special_cell: usize,
}

impl QuotientGraph {
    /// Members of each quotient vertex.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.graph.n()];
        for (v, &c) in self.phi.iter().enumerate() {
            cells[c].push(v);
        }
        cells
    }
}

/// Quotient with `w_V(C) = sum of member weights` and `w_E(C, C')` the
/// total weight of edges between the two preimages. For unweighted input
/// these are the cell sizes and edge counts.
pub fn quotient_graph(g: &WeightedGraph, i: usize, p: &Partition) -> Result<QuotientGraph> {
    g.check_vertex(i)?;
    let mut cross: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (p.cell_of[e.u], p.cell_of[e.v]);
        if a == b {
            return Err(Error::InternalEdgeInCell(a));
        }
        *cross.entry((a.min(b), a.max(b))).or_insert(0.0) += e.weight;
    }
    let mut weights = vec![0.0; p.len()];
    for v in 0..g.n() {
        weights[p.cell_of[v]] += g.vertex_weight(v);
    }
    let edges: Vec<_> = cross.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    let mut graph = WeightedGraph::build(p.len(), &edges, &weights)?;
    if let Some(labels) = g.labels() {
        let names = p
            .cells
            .iter()
            .map(|cell| {
                if cell.len() == 1 {
                    labels[cell[0]].clone()
                } else {
                    format!("[{}]", labels[cell[0]])
                }
            })
            .collect();
        graph = graph.with_labels(names)?;
    }
    Ok(QuotientGraph { graph, phi: p.cell_of.clone(), special: i, special_cell: p.cell_of[i] })
}

/// `f(j) = f_hat(phi(j))`, renormalised to unit w-norm on `g`.
pub fn lift(g: &WeightedGraph, q: &QuotientGraph, qf: &PotentialFunction) -> PotentialFunction {
    let mut values: Vec<f64> = q.phi.iter().map(|&c| qf.values[c]).collect();
    let norm = (0..g.n()).map(|v| g.vertex_weight(v) * values[v].powi(2)).sum::<f64>().sqrt();
    if norm > 0.0 {
        values.iter_mut().for_each(|x| *x /= norm);
    }
    PotentialFunction { special: q.special, values, eigenvalue: qf.eigenvalue, gap: qf.gap, kind: qf.kind }
}

/// Carries a quotient path (a cell sequence) back to `g`, starting at
/// `start` and stepping to the smallest-index neighbour in the next cell.
pub fn lift_path(g: &WeightedGraph, q: &QuotientGraph, cells: &[usize], start: usize) -> Result<PathRecord> {
    g.check_vertex(start)?;
    if cells.first() != Some(&q.phi[start]) {
        return Err(Error::InvalidPath(format!("vertex {start} is not in the first cell")));
    }
    let mut verts = vec![start];
    let mut cur = start;
    for &next in &cells[1..] {
        cur = g
            .neighbors(cur)
            .map(|(y, _)| y)
            .filter(|&y| q.phi[y] == next)
            .min()
            .ok_or_else(|| Error::InvalidPath(format!("vertex {cur} has no neighbour in cell {next}")))?;
        verts.push(cur);
    }
    PathRecord::new(g, verts)
}

/// Result of solving on a quotient and lifting back.
#[derive(Debug, Clone)]
pub struct QuotientSolve {
    pub quotient: QuotientGraph,
    pub quotient_function: PotentialFunction,
    /// Quotient path from `phi(from)` to the special cell.
    pub quotient_path: PathRecord,
    /// Lifted path in the original graph.
    pub path: PathRecord,
}

/// Spectral path from `from` to `to` computed on the refinement quotient at `to`.
pub fn quotient_spectral_path(g: &WeightedGraph, from: usize, to: usize) -> Result<QuotientSolve> {
    g.check_vertex(from)?;
    let p = refine_partition(g, to);
    let quotient = quotient_graph(g, to, &p)?;
    solve_on_quotient(g, quotient, from)
}

/// Grounded eigenfunction, descent and lift on a prepared quotient.
pub fn solve_on_quotient(g: &WeightedGraph, quotient: QuotientGraph, from: usize) -> Result<QuotientSolve> {
    let qf = grounded_eigenfunction(&quotient.graph, quotient.special_cell)?;
    let quotient_path = spectral_tree(&quotient.graph, &qf).path_from(&quotient.graph, quotient.phi[from])?;
    let mut path = lift_path(g, &quotient, &quotient_path.vertices, from)?;
    path.tie = quotient_path.tie;
    Ok(QuotientSolve { quotient, quotient_function: qf, quotient_path, path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_from_centre() {
        let g = WeightedGraph::unweighted(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = refine_partition(&g, 0);
        assert_eq!(p.cells, vec![vec![0], vec![1, 2, 3, 4]]);
        assert_eq!(p.special_cell, 0);
        assert!(p.is_equitable(&g));
        let q = quotient_graph(&g, 0, &p).unwrap();
        assert_eq!(q.graph.n(), 2);
        assert_eq!(q.graph.vertex_weight(1), 4.0);
        assert_eq!(q.graph.edge_weight(0, 1), 4.0);
    }

    #[test]
    fn trivial_partition_is_identity() {
        let g = WeightedGraph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let p = Partition::discrete(4, 0);
        let q = quotient_graph(&g, 0, &p).unwrap();
        assert_eq!(q.graph.vertex_weights(), g.vertex_weights());
        assert_eq!(q.graph.edge_count(), g.edge_count());
        for e in g.edges() {
            assert_eq!(q.graph.edge_weight(e.u, e.v), e.weight);
        }
        let f = grounded_eigenfunction(&q.graph, 0).unwrap();
        let lifted = lift(&g, &q, &f);
        assert_eq!(lifted.values, f.values);
    }

    #[test]
    fn internal_edge_rejected() {
        let tri = WeightedGraph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = refine_partition(&tri, 0);
        assert_eq!(p.cells, vec![vec![0], vec![1, 2]]);
        assert!(matches!(quotient_graph(&tri, 0, &p), Err(Error::InternalEdgeInCell(1))));
    }

    #[test]
    fn lift_matches_direct_solve_on_twins() {
        // 0 is special; 2 and 3 are twins hanging between 1 and 4
        let g = WeightedGraph::unweighted(5, &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (0, 4)]).unwrap();
        let sol = quotient_spectral_path(&g, 2, 0).unwrap();
        assert!(sol.quotient.graph.n() < g.n());
        let direct = grounded_eigenfunction(&g, 0).unwrap();
        let lifted = lift(&g, &sol.quotient, &sol.quotient_function);
        for v in 0..5 {
            assert!((direct.values[v] - lifted.values[v]).abs() < 1e-10);
        }
        let direct_path = crate::spectral::spectral_path(&g, 2, 0).unwrap();
        assert_eq!(sol.path.length, direct_path.length);
    }
}
