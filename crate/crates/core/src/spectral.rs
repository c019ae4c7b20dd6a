//! Grounded eigenfunctions and the descent paths they induce.
//!
//! For a special vertex `i`, the grounded eigenfunction `f_i` minimises
//! `sum w_E(j,k) (g(k) - g(j))^2` over `||g||_w = 1`, `g(i) = 0`. When `G`
//! and `G - i` are positively connected it is unique up to sign and
//! positive on `V_i`, and every positive-weight vertex has a neighbour with
//! a strictly smaller value. Greedy descent on `f_i` therefore reaches `i`;
//! the resulting walk is the spectral path.

use serde::Serialize;

use crate::eigen::{self, grounded_index, grounded_laplacian, grounded_weights, DEFAULT_TOL};
use crate::error::{Connectivity, Error, Result};
use crate::graph::WeightedGraph;
use crate::path::PathRecord;

/// Relative gap under which two neighbour values count as tied.
pub const TIE_RTOL: f64 = 1e-9;
/// Tolerance of the zero-weight averaging identity, relative to `max |f|`.
pub const AVERAGING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    GroundedEigen,
    Spread,
    RwFiedler,
}

/// A vertex function vanishing at the special vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialFunction {
    pub special: usize,
    pub values: Vec<f64>,
    /// `mu` for grounded eigenfunctions, the step `s` for spread functions.
    pub eigenvalue: f64,
    pub gap: Option<f64>,
    pub kind: PotentialKind,
}

impl PotentialFunction {
    pub fn w_norm(&self, g: &WeightedGraph) -> f64 {
        (0..g.n()).map(|v| g.vertex_weight(v) * self.values[v].powi(2)).sum::<f64>().sqrt()
    }
}

pub(crate) fn is_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_RTOL * a.abs().max(b.abs())
}

fn check_preconditions(g: &WeightedGraph, i: usize) -> Result<()> {
    g.check_vertex(i)?;
    if !g.is_positively_connected() {
        return Err(Error::NotPositivelyConnected(Connectivity::Graph));
    }
    if !g.is_positively_connected_without(i) {
        return Err(Error::NotPositivelyConnected(Connectivity::Grounded));
    }
    Ok(())
}

/// `f_i` with the default iterate tolerance.
pub fn grounded_eigenfunction(g: &WeightedGraph, i: usize) -> Result<PotentialFunction> {
    grounded_eigenfunction_with_tol(g, i, DEFAULT_TOL)
}

pub fn grounded_eigenfunction_with_tol(g: &WeightedGraph, i: usize, tol: f64) -> Result<PotentialFunction> {
    check_preconditions(g, i)?;
    if g.n() < 2 {
        return Err(Error::ZeroWeightMatrix);
    }
    let l = grounded_laplacian(g, i)?;
    let w = grounded_weights(g, i);
    let pair = eigen::dominant_pair(&l, &w, tol)?;
    let mut values = vec![0.0; g.n()];
    for v in 0..g.n() {
        if let Some(k) = grounded_index(i, v) {
            values[v] = pair.vector[k];
            if !(values[v] > 0.0) {
                return Err(Error::PositivityViolated(v));
            }
        }
    }
    Ok(PotentialFunction {
        special: i,
        values,
        eigenvalue: pair.value,
        gap: Some(pair.gap),
        kind: PotentialKind::GroundedEigen,
    })
}

/// Descent structure of a potential: each vertex points at its minimising
/// neighbour when that neighbour is strictly lower.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralTree {
    pub special: usize,
    pub parent: Vec<Option<usize>>,
    /// Vertices whose minimising neighbour was not unique (within
    /// [`TIE_RTOL`]), with the whole tied set.
    pub ties: Vec<(usize, Vec<usize>)>,
    /// Vertices other than the special one with no strictly smaller neighbour.
    pub orphans: Vec<usize>,
}

/// Builds `T_i` from `f`. The argmin is exact with smallest-index tie-break;
/// near-ties are recorded separately.
pub fn spectral_tree(g: &WeightedGraph, f: &PotentialFunction) -> SpectralTree {
    let vals = &f.values;
    let mut parent = vec![None; g.n()];
    let mut ties = Vec::new();
    let mut orphans = Vec::new();
    for u in 0..g.n() {
        if u == f.special {
            continue;
        }
        let best = g
            .neighbors(u)
            .map(|(y, _)| y)
            .min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let Some(best) = best else {
            orphans.push(u);
            continue;
        };
        if vals[best] < vals[u] {
            parent[u] = Some(best);
            let mut tied: Vec<usize> = g
                .neighbors(u)
                .map(|(y, _)| y)
                .filter(|&y| is_tie(vals[y], vals[best]))
                .collect();
            if tied.len() > 1 {
                tied.sort_unstable();
                ties.push((u, tied));
            }
        } else {
            orphans.push(u);
        }
    }
    SpectralTree { special: f.special, parent, ties, orphans }
}

impl SpectralTree {
    /// Follows parents from `start` to the special vertex.
    pub fn path_from(&self, g: &WeightedGraph, start: usize) -> Result<PathRecord> {
        g.check_vertex(start)?;
        let mut verts = vec![start];
        let mut tie = false;
        let mut cur = start;
        while cur != self.special {
            tie |= self.ties.iter().any(|(v, _)| *v == cur);
            cur = self.parent[cur].ok_or(Error::OrphanEncountered(cur))?;
            verts.push(cur);
        }
        let mut rec = PathRecord::new(g, verts)?;
        rec.tie = tie;
        Ok(rec)
    }
}

/// Spectral path from `from` to `to`, descending `f_to`.
pub fn spectral_path(g: &WeightedGraph, from: usize, to: usize) -> Result<PathRecord> {
    let f = grounded_eigenfunction(g, to)?;
    spectral_tree(g, &f).path_from(g, from)
}

/// The shorter of the spectral paths `a -> b` and `b -> a`; on equal
/// lengths the `a -> b` path.
pub fn symmetric_spectral_path(g: &WeightedGraph, a: usize, b: usize) -> Result<PathRecord> {
    let forward = spectral_path(g, a, b)?;
    let backward = spectral_path(g, b, a)?;
    Ok(if backward.length < forward.length { backward } else { forward })
}

/// Spectral path from `from` to `to` when `G - to` may split into several
/// positive components. The grounded problem decouples across them, so we
/// solve on the component holding `from` (plus `to`) only. Returns the path
/// in `g` and the eigenfunction on that induced subgraph, with the kept
/// vertices in subgraph order.
pub fn component_spectral_path(
    g: &WeightedGraph,
    from: usize,
    to: usize,
) -> Result<(PathRecord, PotentialFunction, Vec<usize>)> {
    g.check_vertex(from)?;
    g.check_vertex(to)?;
    if from == to {
        return Err(Error::InvalidPath("start and special vertex coincide".into()));
    }
    let mut keep = g.positive_component_without(to, from);
    keep.push(to);
    keep.sort_unstable();
    let (sub, map) = g.induced_subgraph(&keep)?;
    let (s_from, s_to) = (map[from].unwrap_or(0), map[to].unwrap_or(0));
    let f = grounded_eigenfunction(&sub, s_to)?;
    let local = spectral_tree(&sub, &f).path_from(&sub, s_from)?;
    let mut path = PathRecord::new(g, local.vertices.iter().map(|&v| keep[v]).collect())?;
    path.tie = local.tie;
    Ok((path, f, keep))
}

/// `(spectral path length, hop distance)` of the spectral path from `from` to `to`.
pub fn stretch(g: &WeightedGraph, from: usize, to: usize) -> Result<(usize, usize)> {
    if from == to {
        return Err(Error::InvalidPath("stretch needs distinct endpoints".into()));
    }
    let p = spectral_path(g, from, to)?;
    Ok((p.length, p.endpoint_distance))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexDescent {
    pub vertex: usize,
    pub value: f64,
    pub min_neighbor: f64,
    /// Some neighbour has value `<= f(u)`, up to a near-tie.
    pub weak: bool,
    /// Some neighbour has value `< f(u)`.
    pub strict: bool,
    /// Strict descent is guaranteed here: `w_V(u) > 0`, or `w_V(u) = 0`
    /// with a neighbour clearly above `f(u)`.
    pub strict_required: bool,
    /// For zero-weight vertices, `|f(u) - d(u)^{-1} sum_j w_E(u,j) f(j)|`.
    pub averaging_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentReport {
    pub vertices: Vec<VertexDescent>,
    /// `f > 0` on every vertex but the special one.
    pub positive: bool,
    pub averaging_tol: f64,
}

impl DescentReport {
    pub fn failures(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|d| {
                !d.weak
                    || (d.strict_required && !d.strict)
                    || d.averaging_error.is_some_and(|e| e > self.averaging_tol)
            })
            .map(|d| d.vertex)
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.positive && self.failures().is_empty()
    }
}

/// Checks positivity, weak descent everywhere, strict descent where it is
/// guaranteed, and the averaging identity at zero-weight vertices.
pub fn verify_descent(g: &WeightedGraph, f: &PotentialFunction) -> DescentReport {
    let vals = &f.values;
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut positive = true;
    let mut vertices = Vec::new();
    for u in 0..g.n() {
        if u == f.special {
            continue;
        }
        positive &= vals[u] > 0.0;
        let min_neighbor = g.neighbors(u).map(|(y, _)| vals[y]).fold(f64::INFINITY, f64::min);
        let zero_weight = g.vertex_weight(u) == 0.0;
        let clearly_above = g.neighbors(u).any(|(y, _)| vals[y] > vals[u] && !is_tie(vals[y], vals[u]));
        let averaging_error = zero_weight.then(|| {
            let d = g.degree(u);
            let avg = g.neighbors(u).map(|(y, w)| w * vals[y]).sum::<f64>() / d;
            (vals[u] - avg).abs()
        });
        vertices.push(VertexDescent {
            vertex: u,
            value: vals[u],
            min_neighbor,
            weak: min_neighbor <= vals[u] || is_tie(min_neighbor, vals[u]),
            strict: min_neighbor < vals[u],
            strict_required: !zero_weight || clearly_above,
            averaging_error,
        });
    }
    DescentReport { vertices, positive, averaging_tol: AVERAGING_TOL * scale }
}
