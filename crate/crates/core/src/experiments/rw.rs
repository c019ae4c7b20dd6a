//! Random-walk Fiedler vector and the local edge-stretch lower bound.

use serde::Serialize;

use crate::eigen::{full_eigen, SymMatrix};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Absolute slack, relative to `max |f_D|`, allowed in the bound check.
pub const BOUND_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchBoundReport {
    /// Right eigenvector of `D^-1 L` for the second-smallest eigenvalue, unit 2-norm.
    pub f_d: Vec<f64>,
    pub lambda: f64,
    pub l_d: Vec<f64>,
    pub delta: f64,
    /// `max |f_D|`.
    pub alpha: f64,
    /// Vertices with `f_D >= 0` and `L_D < lambda f_D`.
    pub violations: Vec<usize>,
    pub min_l_d: f64,
    pub diameter: usize,
}

/// `f_D` and `L_D` with `L_D(x) = f(x) - min_N f` when `f(x) >= 0` and
/// `-f(x) + min_N f` otherwise. Uses the edge weights as given.
pub fn rw_stretch_report(g: &WeightedGraph) -> Result<StretchBoundReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::BadParams("need at least two vertices".into()));
    }
    if !g.is_positively_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / g.degree(v).sqrt()).collect();
    let mut m = SymMatrix::diagonal(&vec![1.0; n]);
    for e in g.edges() {
        m.add(e.u, e.v, -e.weight * inv_sqrt[e.u] * inv_sqrt[e.v]);
    }
    let pairs = full_eigen(&m)?;
    // sorted descending
    let (lambda, z) = pairs[n - 2].clone();
    let mut f_d: Vec<f64> = z.iter().zip(&inv_sqrt).map(|(z, s)| z * s).collect();
    let norm = f_d.iter().map(|x| x * x).sum::<f64>().sqrt();
    f_d.iter_mut().for_each(|x| *x /= norm);
    if let Some(&first) = f_d.iter().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            f_d.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let alpha = f_d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let l_d: Vec<f64> = (0..n)
        .map(|x| {
            let lowest = g.neighbors(x).map(|(y, _)| f_d[y]).fold(f64::INFINITY, f64::min);
            if f_d[x] >= 0.0 {
                f_d[x] - lowest
            } else {
                -f_d[x] + lowest
            }
        })
        .collect();
    let violations = (0..n)
        .filter(|&x| f_d[x] >= 0.0 && l_d[x] < lambda * f_d[x] - BOUND_SLACK * alpha.max(1.0))
        .collect();
    Ok(StretchBoundReport {
        min_l_d: l_d.iter().copied().fold(f64::INFINITY, f64::min),
        diameter: g.diameter()?,
        delta: g.max_degree(),
        f_d,
        lambda,
        l_d,
        alpha,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cycle() {
        let g = WeightedGraph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = rw_stretch_report(&g).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-10);
        assert!(r.violations.is_empty());
        assert!((r.f_d.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(r.delta, 2.0);
    }

    #[test]
    fn complete_graphs() {
        for n in 2..8 {
            let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let g = WeightedGraph::unweighted(n, &edges).unwrap();
            let r = rw_stretch_report(&g).unwrap();
            assert!((r.lambda - n as f64 / (n - 1) as f64).abs() < 1e-10, "n={n}");
            assert!(r.violations.is_empty());
            assert!(r.alpha <= 1.0 + 1e-12);
        }
    }
}
