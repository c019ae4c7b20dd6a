//! Stability of a spectral path under small random weight changes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::spectral::spectral_path;

/// `10^-1, ..., 10^-6`.
pub const DEFAULT_EPSILONS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub trials: usize,
    /// Trials whose perturbed graph still met the positivity preconditions.
    pub valid: usize,
    pub preserved: usize,
    /// `preserved / valid` (zero when nothing was valid).
    pub fraction: f64,
}

impl EpsilonRow {
    pub fn all_preserved(&self) -> bool {
        self.valid > 0 && self.preserved == self.valid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub seed: u64,
    pub special: usize,
    pub start: usize,
    pub baseline: Vec<usize>,
    /// Path vertices other than the special one; no new edges touch them.
    pub protected: Vec<usize>,
    pub rows: Vec<EpsilonRow>,
    /// Largest listed epsilon at which every valid trial kept the path.
    pub largest_stable_epsilon: Option<f64>,
}

/// One random perturbation: every edge and vertex weight moves by
/// `U[-eps, eps]` (clamped at zero), and every non-adjacent pair with no
/// protected endpoint gains an edge of weight `U[0, eps]`.
pub fn perturb(g: &WeightedGraph, protected: &[bool], eps: f64, rng: &mut impl Rng) -> Result<WeightedGraph> {
    let mut jitter = |w: f64| {
        if eps > 0.0 {
            (w + rng.random_range(-eps..=eps)).max(0.0)
        } else {
            w
        }
    };
    let mut edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, jitter(e.weight))).collect();
    let weights: Vec<f64> = g.vertex_weights().iter().map(|&w| jitter(w)).collect();
    if eps > 0.0 {
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                if !protected[a] && !protected[b] && !g.is_adjacent(a, b) {
                    edges.push((a, b, rng.random_range(0.0..=eps)));
                }
            }
        }
    }
    let mut h = WeightedGraph::build(g.n(), &edges, &weights)?;
    if let Some(l) = g.labels() {
        h = h.with_labels(l.to_vec())?;
    }
    Ok(h)
}

fn trial_rng(seed: u64, eps_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((eps_index as u64) << 32) | trial as u64);
    rng
}

/// Perturbs `g` `trials` times per epsilon and records how often the
/// spectral path `start -> special` is unchanged. Trials whose perturbed
/// graph loses positive connectivity (or a valid weight vector) count as
/// invalid, not as failures.
pub fn perturbation_trial(
    g: &WeightedGraph,
    special: usize,
    start: usize,
    epsilons: &[f64],
    trials: usize,
    seed: u64,
) -> Result<PerturbationReport> {
    let baseline = spectral_path(g, start, special)?;
    let mut protected = vec![false; g.n()];
    for &v in &baseline.vertices {
        protected[v] = v != special;
    }
    let rows = epsilons
        .iter()
        .enumerate()
        .map(|(ei, &eps)| {
            if !(eps >= 0.0) || !eps.is_finite() {
                return Err(Error::BadParams(format!("epsilon must be a finite non-negative number, got {eps}")));
            }
            let outcomes: Vec<Option<bool>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, ei, t);
                    let h = perturb(g, &protected, eps, &mut rng).ok()?;
                    if !h.is_positively_connected() || !h.is_positively_connected_without(special) {
                        return None;
                    }
                    match spectral_path(&h, start, special) {
                        Ok(p) => Some(p.vertices == baseline.vertices),
                        Err(Error::OrphanEncountered(_)) => Some(false),
                        Err(_) => None,
                    }
                })
                .collect();
            let valid = outcomes.iter().flatten().count();
            let preserved = outcomes.iter().flatten().filter(|&&ok| ok).count();
            Ok(EpsilonRow {
                epsilon: eps,
                trials,
                valid,
                preserved,
                fraction: if valid > 0 { preserved as f64 / valid as f64 } else { 0.0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let largest_stable_epsilon = rows
        .iter()
        .filter(|r| r.all_preserved())
        .map(|r| r.epsilon)
        .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.max(e))));
    Ok(PerturbationReport {
        seed,
        special,
        start,
        protected: (0..g.n()).filter(|&v| protected[v]).collect(),
        baseline: baseline.vertices,
        rows,
        largest_stable_epsilon,
    })
}
