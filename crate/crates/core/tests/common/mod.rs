//! Reference computations used by the integration tests. None of these
//! share code with the library's solvers.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specpath::WeightedGraph;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense inverse by Gauss-Jordan with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut ext = row.clone();
            ext.extend((0..n).map(|c| if c == r { 1.0 } else { 0.0 }));
            ext
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "singular matrix in oracle");
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != 0.0 {
                    for c in 0..2 * n {
                        m[r][c] -= factor * m[col][c];
                    }
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Reference grounded eigenfunction by plain power iteration.
///
/// Zero-weight vertices are eliminated with a Schur complement, the
/// remaining pencil `S g = lambda W g` is symmetrised with `W^-1/2`, and the
/// smallest eigenvalue is found by power iteration on `c I - M`. Returns
/// `(lambda_min, f)` with `f` of unit w-norm, positive first positive-weight
/// entry, `f(i) = 0`.
pub fn reference_grounded(g: &WeightedGraph, i: usize) -> (f64, Vec<f64>) {
    let n = g.n();
    let others: Vec<usize> = (0..n).filter(|&v| v != i).collect();
    let lap = |a: usize, b: usize| -> f64 {
        if a == b {
            g.degree(a)
        } else {
            -g.edge_weight(a, b)
        }
    };
    let pos: Vec<usize> = others.iter().copied().filter(|&v| g.vertex_weight(v) > 0.0).collect();
    let zero: Vec<usize> = others.iter().copied().filter(|&v| g.vertex_weight(v) == 0.0).collect();
    let block = |rows: &[usize], cols: &[usize]| -> Vec<Vec<f64>> {
        rows.iter().map(|&a| cols.iter().map(|&b| lap(a, b)).collect()).collect()
    };
    let lpp = block(&pos, &pos);
    let lpz = block(&pos, &zero);
    let lzz_inv = if zero.is_empty() { vec![] } else { invert(&block(&zero, &zero)) };
    let np = pos.len();
    let nz = zero.len();
    // S = Lpp - Lpz Lzz^-1 Lzp
    let mut s = lpp.clone();
    for a in 0..np {
        for b in 0..np {
            let mut acc = 0.0;
            for x in 0..nz {
                for y in 0..nz {
                    acc += lpz[a][x] * lzz_inv[x][y] * lpz[b][y];
                }
            }
            s[a][b] -= acc;
        }
    }
    let isq: Vec<f64> = pos.iter().map(|&v| 1.0 / g.vertex_weight(v).sqrt()).collect();
    let m: Vec<Vec<f64>> = (0..np).map(|a| (0..np).map(|b| isq[a] * s[a][b] * isq[b]).collect()).collect();
    let c = (0..np).map(|a| m[a].iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let mut x = vec![1.0; np];
    let mut lambda = 0.0;
    for _ in 0..2_000_000 {
        let mut y: Vec<f64> = (0..np).map(|a| c * x[a] - (0..np).map(|b| m[a][b] * x[b]).sum::<f64>()).collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let diff = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        lambda = c - norm;
        if diff < 1e-14 {
            break;
        }
    }
    // back to the pencil, then fill in the zero-weight vertices
    let gp: Vec<f64> = x.iter().zip(&isq).map(|(v, s)| v * s).collect();
    let mut f = vec![0.0; n];
    for (a, &v) in pos.iter().enumerate() {
        f[v] = gp[a];
    }
    for (x_idx, &z) in zero.iter().enumerate() {
        let mut acc = 0.0;
        for y in 0..nz {
            let rhs: f64 = (0..np).map(|a| lpz[a][y] * gp[a]).sum();
            acc -= lzz_inv[x_idx][y] * rhs;
        }
        f[z] = acc;
    }
    let wn = (0..n).map(|v| g.vertex_weight(v) * f[v] * f[v]).sum::<f64>().sqrt();
    f.iter_mut().for_each(|v| *v /= wn);
    if let Some(&v) = pos.first() {
        if f[v] < 0.0 {
            f.iter_mut().for_each(|v| *v = -*v);
        }
    }
    (lambda, f)
}

pub fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Every integer `g` with `g(i) = 0` and `|g(a) - g(b)| <= 1` on edges;
/// returns those of largest 2-norm. Edge weights are ignored. The feasible
/// set is a polytope with integral vertices, so these are the maximisers.
pub fn spread_maximisers(g: &WeightedGraph, i: usize) -> (i64, Vec<Vec<i64>>) {
    let n = g.n();
    // BFS order so every vertex after i has an earlier neighbour
    let dist = g.hop_distances_from(i);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (dist[v].unwrap(), v));
    let mut vals = vec![None::<i64>; n];
    vals[i] = Some(0);
    let mut best = (-1i64, Vec::new());
    fn rec(g: &WeightedGraph, order: &[usize], pos: usize, vals: &mut Vec<Option<i64>>, best: &mut (i64, Vec<Vec<i64>>)) {
        if pos == order.len() {
            let v: Vec<i64> = vals.iter().map(|x| x.unwrap()).collect();
            let sq: i64 = v.iter().map(|x| x * x).sum();
            if sq > best.0 {
                *best = (sq, vec![v]);
            } else if sq == best.0 {
                best.1.push(v);
            }
            return;
        }
        let v = order[pos];
        let anchor = g.neighbors(v).filter_map(|(y, _)| vals[y]).next().unwrap();
        for cand in [anchor - 1, anchor, anchor + 1] {
            if g.neighbors(v).all(|(y, _)| vals[y].is_none_or(|x| (x - cand).abs() <= 1)) {
                vals[v] = Some(cand);
                rec(g, order, pos + 1, vals, best);
                vals[v] = None;
            }
        }
    }
    rec(g, &order[1..], 0, &mut vals, &mut best);
    best
}

/// Projected subgradient descent on "largest edge difference" over unit
/// vectors vanishing at `i`. Returns the best objective reached.
pub fn spread_subgradient(g: &WeightedGraph, i: usize, restarts: usize, iters: usize, seed: u64) -> f64 {
    let n = g.n();
    let mut r = rng(seed);
    let project = |f: &mut Vec<f64>| {
        f[i] = 0.0;
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        f.iter_mut().for_each(|x| *x /= norm);
    };
    let objective = |f: &[f64]| g.edges().iter().map(|e| (f[e.u] - f[e.v]).abs()).fold(0.0, f64::max);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut f: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        project(&mut f);
        for t in 0..iters {
            best = best.min(objective(&f));
            let e = g
                .edges()
                .iter()
                .max_by(|a, b| (f[a.u] - f[a.v]).abs().total_cmp(&(f[b.u] - f[b.v]).abs()))
                .unwrap();
            let step = 0.3 / ((t + 1) as f64).sqrt();
            let sgn = (f[e.u] - f[e.v]).signum();
            f[e.u] -= step * sgn;
            f[e.v] += step * sgn;
            project(&mut f);
        }
        best = best.min(objective(&f));
    }
    best
}

/// `sum w_E (f(a) - f(b))^2 / sum w_V f^2`, straight from the definition.
pub fn rayleigh(g: &WeightedGraph, f: &[f64]) -> f64 {
    let num: f64 = g.edges().iter().map(|e| e.weight * (f[e.u] - f[e.v]).powi(2)).sum();
    let den: f64 = (0..g.n()).map(|v| g.vertex_weight(v) * f[v] * f[v]).sum();
    num / den
}

/// Random graph with unit weights whose special vertex `0` leaves a
/// connected remainder, by rejection.
pub fn random_grounded_graph(n: usize, p: f64, r: &mut impl Rng) -> WeightedGraph {
    loop {
        let g = specpath::experiments::random_connected_graph(n, p, r);
        if g.is_positively_connected_without(0) {
            return g;
        }
    }
}
