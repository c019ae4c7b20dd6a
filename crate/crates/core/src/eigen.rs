//! Dense symmetric linear algebra for the grounded eigenproblem
//! `W_{V,i} g = mu L_i g`.
//!
//! The dominant pair comes from inverse iteration on `L_i^{-1} W_{V,i}`
//! through a Cholesky factor of `L_i`. The spectral gap is read off an
//! independent cyclic-Jacobi solve of the congruent symmetric matrix
//! `C^{-1} W C^{-T}` (with `L_i = C C^T`), which has the same spectrum.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Default iterate tolerance for [`dominant_pair`].
pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_INVERSE_ITERATIONS: usize = 10_000;
/// Relative off-diagonal Frobenius norm at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-12;
pub const MAX_JACOBI_SWEEPS: usize = 100;
// Cholesky pivots below this fraction of the largest diagonal entry are
// treated as zero.
const PIVOT_RTOL: f64 = 1e-12;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (k, &x) in d.iter().enumerate() {
            m.data[k * d.len() + k] = x;
        }
        m
    }

    /// Builds from a closure evaluated on the upper triangle and mirrored.
    pub fn from_upper(dim: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for a in 0..dim {
            for b in a..dim {
                m.set(a, b, f(a, b));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.dim + b]
    }

    /// Sets both `(a, b)` and `(b, a)`.
    pub fn set(&mut self, a: usize, b: usize, x: f64) {
        self.data[a * self.dim + b] = x;
        self.data[b * self.dim + a] = x;
    }

    /// Adds to both `(a, b)` and `(b, a)` (once on the diagonal).
    pub fn add(&mut self, a: usize, b: usize, x: f64) {
        self.data[a * self.dim + b] += x;
        if a != b {
            self.data[b * self.dim + a] += x;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.dim.max(1))
            .take(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Position of vertex `v` in the `V_i` ordering (increasing index, `i` skipped).
pub fn grounded_index(i: usize, v: usize) -> Option<usize> {
    match v.cmp(&i) {
        std::cmp::Ordering::Less => Some(v),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(v - 1),
    }
}

/// Vertex of `G` at position `k` of the `V_i` ordering.
pub fn grounded_vertex(i: usize, k: usize) -> usize {
    if k < i {
        k
    } else {
        k + 1
    }
}

/// `L_i`: the weighted Laplacian `D - W_E` with row and column `i` removed.
pub fn grounded_laplacian(g: &WeightedGraph, i: usize) -> Result<SymMatrix> {
    g.check_vertex(i)?;
    let mut m = SymMatrix::zeros(g.n() - 1);
    for e in g.edges() {
        let (a, b) = (grounded_index(i, e.u), grounded_index(i, e.v));
        if let Some(a) = a {
            m.add(a, a, e.weight);
        }
        if let Some(b) = b {
            m.add(b, b, e.weight);
        }
        if let (Some(a), Some(b)) = (a, b) {
            m.add(a, b, -e.weight);
        }
    }
    Ok(m)
}

/// Diagonal of `W_{V,i}`.
pub fn grounded_weights(g: &WeightedGraph, i: usize) -> Vec<f64> {
    (0..g.n()).filter(|&v| v != i).map(|v| g.vertex_weight(v)).collect()
}

/// Lower-triangular `C` with `M = C C^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>,
}

pub fn cholesky(m: &SymMatrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    let scale = (0..n).map(|k| m.get(k, k).abs()).fold(0.0, f64::max);
    let mut c = vec![0.0; n * n];
    for j in 0..n {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= c[j * n + k] * c[j * n + k];
        }
        if !(pivot > PIVOT_RTOL * scale) {
            return Err(Error::NotPositiveDefinite(j));
        }
        let d = pivot.sqrt();
        c[j * n + j] = d;
        for r in j + 1..n {
            let mut s = m.get(r, j);
            for k in 0..j {
                s -= c[r * n + k] * c[j * n + k];
            }
            c[r * n + j] = s / d;
        }
    }
    Ok(CholeskyFactor { dim: n, lower: c })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.lower[r * self.dim + c]
    }

    /// Solves `C y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut y = b.to_vec();
        for r in 0..n {
            let row = &self.lower[r * n..r * n + r];
            let s: f64 = row.iter().zip(&y[..r]).map(|(a, b)| a * b).sum();
            y[r] = (y[r] - s) / self.lower[r * n + r];
        }
        y
    }

    /// Solves `C^T x = y`.
    pub fn backward(&self, y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut x = y.to_vec();
        for r in (0..n).rev() {
            x[r] /= self.lower[r * n + r];
            let xr = x[r];
            for k in 0..r {
                x[k] -= self.lower[r * n + k] * xr;
            }
        }
        x
    }

    /// Solves `C C^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.backward(&self.forward(b))
    }

    /// `C C^T`.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        SymMatrix::from_upper(n, |a, b| (0..=a.min(b)).map(|k| self.get(a, k) * self.get(b, k)).sum())
    }
}

/// Dominant eigenpair of `L_i^{-1} W_{V,i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// `mu`, the largest eigenvalue; the minimum Rayleigh quotient is `1/mu`.
    pub value: f64,
    /// Unit w-norm eigenvector over `V_i`, sign fixed so its first
    /// positive-weight coordinate is positive.
    pub vector: Vec<f64>,
    /// `max |W g - mu L g|`.
    pub residual: f64,
    /// `mu` minus the second-largest eigenvalue (from the Jacobi oracle);
    /// equals `mu` when `V_i` is a single vertex.
    pub gap: f64,
    pub iterations: usize,
}

fn w_norm(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(w, x)| w * x * x).sum::<f64>().sqrt()
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Inverse power iteration `x <- L^{-1} W x` with w-norm normalisation.
///
/// Stops once successive iterates differ by at most `tol` relative to the
/// iterate's max-norm.
pub fn dominant_pair(l: &SymMatrix, w: &[f64], tol: f64) -> Result<EigenPair> {
    let n = l.dim();
    assert_eq!(w.len(), n, "weight diagonal must match matrix dimension");
    if w.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::NegativeWeight(w.iter().copied().find(|&x| !(x >= 0.0)).unwrap_or(f64::NAN)));
    }
    let Some(anchor) = w.iter().position(|&x| x > 0.0) else {
        return Err(Error::ZeroWeightMatrix);
    };
    let chol = cholesky(l)?;

    let mut x = vec![1.0; n];
    let norm = w_norm(w, &x);
    x.iter_mut().for_each(|v| *v /= norm);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_INVERSE_ITERATIONS {
        iterations += 1;
        let wx: Vec<f64> = w.iter().zip(&x).map(|(a, b)| a * b).collect();
        let mut y = chol.solve(&wx);
        let norm = w_norm(w, &y);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NoConvergence(iterations));
        }
        let sign = if y[anchor] < 0.0 { -1.0 } else { 1.0 };
        y.iter_mut().for_each(|v| *v *= sign / norm);
        let diff = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        if diff <= tol * max_abs(&x) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_INVERSE_ITERATIONS));
    }

    // ||x||_w = 1, so mu = x^T W x / x^T L x = 1 / x^T L x
    let lx = l.mul_vec(&x);
    let value = 1.0 / lx.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
    let residual = (0..n).map(|k| (w[k] * x[k] - value * lx[k]).abs()).fold(0.0, f64::max);

    let spectrum = congruent_spectrum(&chol, w)?;
    let gap = if spectrum.len() >= 2 { value - spectrum[1] } else { value };
    Ok(EigenPair { value, vector: x, residual, gap, iterations })
}

/// Eigenvalues of `L^{-1} W`, descending, via Jacobi on `C^{-1} W C^{-T}`.
pub fn congruent_spectrum(chol: &CholeskyFactor, w: &[f64]) -> Result<Vec<f64>> {
    let n = chol.dim();
    // columns of X = C^{-1} diag(sqrt w); the target matrix is X X^T
    let mut x = vec![0.0; n * n];
    for (col, &wc) in w.iter().enumerate() {
        if wc == 0.0 {
            continue;
        }
        let mut e = vec![0.0; n];
        e[col] = wc.sqrt();
        for (r, v) in chol.forward(&e).into_iter().enumerate() {
            x[r * n + col] = v;
        }
    }
    let m = SymMatrix::from_upper(n, |a, b| (0..n).map(|k| x[a * n + k] * x[b * n + k]).sum());
    Ok(full_eigen(&m)?.into_iter().map(|(v, _)| v).collect())
}

/// All eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted
/// by descending eigenvalue. Eigenvectors have unit 2-norm.
pub fn full_eigen(m: &SymMatrix) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = SymMatrix::identity(n).data;
    let target = JACOBI_TOL * m.frobenius();
    let off = |a: &SymMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a.get(p, q).powi(2);
            }
        }
        s.sqrt()
    };
    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_JACOBI_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let tau = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // A <- J^T A J with J = [[c, s], [-s, c]] in the (p, q) plane
                for k in 0..n {
                    let akp = a.data[k * n + p];
                    let akq = a.data[k * n + q];
                    a.data[k * n + p] = c * akp - s * akq;
                    a.data[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a.data[p * n + k];
                    let aqk = a.data[q * n + k];
                    a.data[p * n + k] = c * apk - s * aqk;
                    a.data[q * n + k] = s * apk + c * aqk;
                }
                a.set(p, q, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = off(&a) <= target;
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_JACOBI_SWEEPS));
    }
    let mut pairs: Vec<(f64, Vec<f64>)> =
        (0..n).map(|k| (a.get(k, k), (0..n).map(|r| v[r * n + k]).collect())).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    Ok(pairs)
}

/// `c(w_V, w_E, f) = sum_{jk in E} w_E(j,k) (f(k) - f(j))^2 / ||f||_w^2`,
/// with `f` given over all of `V`.
pub fn rayleigh_c(g: &WeightedGraph, f: &[f64]) -> Result<f64> {
    assert_eq!(f.len(), g.n(), "function must be defined on every vertex");
    let denom: f64 = (0..g.n()).map(|v| g.vertex_weight(v) * f[v] * f[v]).sum();
    if !(denom > 0.0) {
        return Err(Error::ZeroWNorm);
    }
    let num: f64 = g.edges().iter().map(|e| e.weight * (f[e.u] - f[e.v]).powi(2)).sum();
    Ok(num / denom)
}
