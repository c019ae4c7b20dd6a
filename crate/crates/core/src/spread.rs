//! Spread functions and spread paths.
//!
//! For a grounded vertex `i`, the optimiser of "minimise the largest edge
//! difference over unit-norm `f` with `f(i) = 0`" is the hop distance to
//! `i`, rescaled: `f(j) = d(j,i) / ||d||`. Descending it greedily walks a
//! shortest path. Edge weights are ignored throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::path::PathRecord;
use crate::spectral::{spectral_tree, PotentialFunction, PotentialKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadSolution {
    pub special: usize,
    /// Unit 2-norm, zero at `special`, positive elsewhere.
    pub f_tilde: Vec<f64>,
    /// Largest edge difference of `f_tilde`.
    pub s: f64,
    /// `f(j) - min over neighbours`; identically `s` off the special vertex.
    pub l_map: Vec<f64>,
}

impl SpreadSolution {
    pub fn potential(&self) -> PotentialFunction {
        PotentialFunction {
            special: self.special,
            values: self.f_tilde.clone(),
            eigenvalue: self.s,
            gap: None,
            kind: PotentialKind::Spread,
        }
    }
}

pub fn spread_function(g: &WeightedGraph, i: usize) -> Result<SpreadSolution> {
    g.check_vertex(i)?;
    if g.n() < 2 {
        return Err(Error::BadParams("spread needs at least two vertices".into()));
    }
    let dist: Vec<f64> = g
        .hop_distances_from(i)
        .into_iter()
        .map(|d| d.map(|d| d as f64).ok_or(Error::DisconnectedGraph))
        .collect::<Result<_>>()?;
    let norm = dist.iter().map(|d| d * d).sum::<f64>().sqrt();
    let f_tilde: Vec<f64> = dist.iter().map(|d| d / norm).collect();
    let l_map = (0..g.n())
        .map(|j| {
            if j == i {
                0.0
            } else {
                let lowest = g.neighbors(j).map(|(y, _)| f_tilde[y]).fold(f64::INFINITY, f64::min);
                f_tilde[j] - lowest
            }
        })
        .collect();
    Ok(SpreadSolution { special: i, f_tilde, s: 1.0 / norm, l_map })
}

/// Greedy descent of the spread function of `to`, starting at `from`
/// (smallest index among tied minimisers).
pub fn spread_path(g: &WeightedGraph, from: usize, to: usize) -> Result<PathRecord> {
    g.check_vertex(from)?;
    let sol = spread_function(g, to)?;
    spectral_tree(g, &sol.potential()).path_from(g, from)
}

fn max_edge_difference(g: &WeightedGraph, f: &[f64]) -> (f64, Option<(usize, usize)>) {
    g.edges().iter().fold((0.0, None), |(best, arg), e| {
        let d = (f[e.u] - f[e.v]).abs();
        if d > best {
            (d, Some((e.u, e.v)))
        } else {
            (best, arg)
        }
    })
}

fn project_sphere_mean_zero(f: &mut [f64]) -> bool {
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    f.iter_mut().for_each(|x| *x -= mean);
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return false;
    }
    f.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Heuristic for the ungrounded problem: minimise the largest edge
/// difference over unit vectors with zero mean, by projected subgradient
/// descent from `restarts` random starts. Every returned witness is
/// feasible, so the value is an upper bound on the true minimum. `tol` is
/// the step size at which a run stops.
pub fn estimate_global_spread(g: &WeightedGraph, restarts: usize, tol: f64, seed: u64) -> Result<(f64, Vec<f64>)> {
    if g.n() < 2 {
        return Err(Error::BadParams("spread needs at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.n();
    let step0 = 0.5 / (n as f64).sqrt();
    let max_iter = ((step0 / tol.max(1e-9)).powi(2) as usize).clamp(100, 2_000_000);
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if !project_sphere_mean_zero(&mut f) {
                f = (0..n).map(|v| v as f64).collect();
                project_sphere_mean_zero(&mut f);
            }
            let mut best = (max_edge_difference(g, &f).0, f.clone());
            for t in 0..max_iter {
                let (val, arg) = max_edge_difference(g, &f);
                if val < best.0 {
                    best = (val, f.clone());
                }
                let Some((a, b)) = arg else { break };
                let step = step0 / ((t + 1) as f64).sqrt();
                let sign = (f[a] - f[b]).signum();
                f[a] -= step * sign;
                f[b] += step * sign;
                project_sphere_mean_zero(&mut f);
            }
            best
        })
        .collect();
    Ok(runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one restart"))
}
