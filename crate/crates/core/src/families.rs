//! Generators for the three counterexample families and their analytic
//! quotients.
//!
//! Vertex order is fixed so fixtures are byte-stable:
//!
//! * weighted cycle `G(l,k)`: `u`, `v`, then `x_j_i` for branch `i = 1..k`,
//!   level `j = 1..l-1` (branch-major). Edge `uv` first, then each branch
//!   from `u` to `v`.
//! * broom block `B(l,k)`: `u`, `v`, then `x_j_i` (`j = 1..l`, branch-major),
//!   `y_1_i`, `y_2_*`, `y_3_*`, `y_4_i`.
//! * double broom `H(l,k,t)`: `B(l,k)` followed by pendants `u_1..u_T` and
//!   `v_1..v_T`, `T = floor(t k)`.
//! * block path `J(l,k,d)`: connectors `c_0..c_d`, then block `b = 1..d`
//!   (spanning `c_{b-1}`..`c_b`, labels suffixed `@b`), then pendants
//!   `x_1..x_k` on `c_0` and `y_1..y_k` on `c_d`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::quotient::QuotientGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    WeightedCycle,
    BroomBlock,
    DoubleBroom,
    BlockPath,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::WeightedCycle => "weighted-cycle",
            Family::BroomBlock => "broom-block",
            Family::DoubleBroom => "double-broom",
            Family::BlockPath => "block-path",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted-cycle" => Ok(Family::WeightedCycle),
            "broom-block" => Ok(Family::BroomBlock),
            "double-broom" => Ok(Family::DoubleBroom),
            "block-path" => Ok(Family::BlockPath),
            other => Err(Error::BadParams(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams {
    pub family: Family,
    pub ell: usize,
    pub k: usize,
    /// Pendant density, double broom only.
    pub t: Option<f64>,
    /// Block count, block path only.
    pub d: Option<usize>,
}

/// `floor(t k)`, guarded against `t k` landing a hair under an integer.
pub fn pendant_count(t: f64, k: usize) -> usize {
    (t * k as f64 + 1e-9).floor() as usize
}

impl FamilyParams {
    pub fn weighted_cycle(ell: usize, k: usize) -> Self {
        Self { family: Family::WeightedCycle, ell, k, t: None, d: None }
    }

    pub fn broom_block(ell: usize, k: usize) -> Self {
        Self { family: Family::BroomBlock, ell, k, t: None, d: None }
    }

    pub fn double_broom(ell: usize, k: usize, t: f64) -> Self {
        Self { family: Family::DoubleBroom, ell, k, t: Some(t), d: None }
    }

    pub fn block_path(ell: usize, k: usize, d: usize) -> Self {
        Self { family: Family::BlockPath, ell, k, t: None, d: Some(d) }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParams(msg));
        let (ell, k) = (self.ell, self.k);
        match self.family {
            Family::WeightedCycle => {
                // l = 1 would make every branch a parallel copy of uv
                if ell < 2 || k < 1 {
                    return bad(format!("weighted-cycle needs l >= 2, k >= 1 (got l={ell}, k={k})"));
                }
            }
            Family::BroomBlock => {
                if ell <= 2 || k <= 2 {
                    return bad(format!("broom-block needs l, k > 2 (got l={ell}, k={k})"));
                }
            }
            Family::DoubleBroom => {
                if ell <= 2 || k <= 2 {
                    return bad(format!("double-broom needs l, k > 2 (got l={ell}, k={k})"));
                }
                match self.t {
                    Some(t) if t.is_finite() && t > 0.0 => {
                        if pendant_count(t, k) == 0 {
                            return Err(Error::TZero);
                        }
                    }
                    _ => return bad("double-broom needs t > 0".into()),
                }
            }
            Family::BlockPath => {
                let d = self.d.unwrap_or(0);
                if ell % 2 != 0 || ell <= 5 || k <= 2 || d <= ell {
                    return bad(format!("block-path needs even l > 5, k > 2, d > l (got l={ell}, k={k}, d={d})"));
                }
            }
        }
        Ok(())
    }

    /// `T = floor(t k)` for the double broom, zero otherwise.
    pub fn pendants(&self) -> usize {
        self.t.map_or(0, |t| pendant_count(t, self.k))
    }

    pub fn vertex_count(&self) -> usize {
        let (ell, k) = (self.ell, self.k);
        let block = k * (ell + 2) + 4;
        match self.family {
            Family::WeightedCycle => k * (ell - 1) + 2,
            Family::BroomBlock => block,
            Family::DoubleBroom => block + 2 * self.pendants(),
            Family::BlockPath => {
                let d = self.d.unwrap_or(0);
                d * (block - 1) + 1 + 2 * k
            }
        }
    }

    pub fn generate(&self) -> Result<WeightedGraph> {
        self.validate()?;
        match self.family {
            Family::WeightedCycle => gen_weighted_cycle(self.ell, self.k),
            Family::BroomBlock => gen_broom_block(self.ell, self.k),
            Family::DoubleBroom => gen_double_broom(self.ell, self.k, self.t.unwrap_or(0.0)),
            Family::BlockPath => gen_block_path(self.ell, self.k, self.d.unwrap_or(0)),
        }
    }
}

#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn finish(self) -> Result<WeightedGraph> {
        WeightedGraph::unweighted(self.labels.len(), &self.edges)?.with_labels(self.labels)
    }

    /// A copy of `B(l,k)` between existing connectors `u` and `v`.
    fn broom_block(&mut self, u: usize, v: usize, ell: usize, k: usize, suffix: &str) {
        for i in 1..=k {
            let mut prev = u;
            for j in 1..=ell {
                let x = self.vertex(format!("x_{j}_{i}{suffix}"));
                self.edge(prev, x);
                prev = x;
            }
            self.edge(prev, v);
        }
        let y1: Vec<usize> = (1..=k).map(|i| self.vertex(format!("y_1_{i}{suffix}"))).collect();
        let y2 = self.vertex(format!("y_2_*{suffix}"));
        let y3 = self.vertex(format!("y_3_*{suffix}"));
        let y4: Vec<usize> = (1..=k).map(|i| self.vertex(format!("y_4_{i}{suffix}"))).collect();
        for &y in &y1 {
            self.edge(u, y);
            self.edge(y, y2);
        }
        self.edge(y2, y3);
        for &y in &y4 {
            self.edge(y3, y);
            self.edge(y, v);
        }
    }
}

/// `G(l,k)`: `k` internally disjoint `u`-`v` paths of length `l` plus the edge `uv`.
pub fn gen_weighted_cycle(ell: usize, k: usize) -> Result<WeightedGraph> {
    FamilyParams::weighted_cycle(ell, k).validate()?;
    let mut b = Builder::default();
    let u = b.vertex("u".into());
    let v = b.vertex("v".into());
    b.edge(u, v);
    for i in 1..=k {
        let mut prev = u;
        for j in 1..ell {
            let x = b.vertex(format!("x_{j}_{i}"));
            b.edge(prev, x);
            prev = x;
        }
        b.edge(prev, v);
    }
    b.finish()
}

/// `B(l,k)` with connectors `u` and `v`.
pub fn gen_broom_block(ell: usize, k: usize) -> Result<WeightedGraph> {
    FamilyParams::broom_block(ell, k).validate()?;
    let mut b = Builder::default();
    let u = b.vertex("u".into());
    let v = b.vertex("v".into());
    b.broom_block(u, v, ell, k, "");
    b.finish()
}

/// `H(l,k,t)`: `B(l,k)` with `floor(t k)` pendants on each connector.
pub fn gen_double_broom(ell: usize, k: usize, t: f64) -> Result<WeightedGraph> {
    let params = FamilyParams::double_broom(ell, k, t);
    params.validate()?;
    let mut b = Builder::default();
    let u = b.vertex("u".into());
    let v = b.vertex("v".into());
    b.broom_block(u, v, ell, k, "");
    let pendants = params.pendants();
    for (hub, name) in [(u, "u"), (v, "v")] {
        for i in 1..=pendants {
            let p = b.vertex(format!("{name}_{i}"));
            b.edge(hub, p);
        }
    }
    b.finish()
}

/// `J(l,k,d)`: `d` broom blocks in a chain, `k` pendants at each end.
pub fn gen_block_path(ell: usize, k: usize, d: usize) -> Result<WeightedGraph> {
    FamilyParams::block_path(ell, k, d).validate()?;
    let mut b = Builder::default();
    let connectors: Vec<usize> = (0..=d).map(|c| b.vertex(format!("c_{c}"))).collect();
    for blk in 1..=d {
        b.broom_block(connectors[blk - 1], connectors[blk], ell, k, &format!("@{blk}"));
    }
    for (hub, name) in [(connectors[0], "x"), (connectors[d], "y")] {
        for i in 1..=k {
            let p = b.vertex(format!("{name}_{i}"));
            b.edge(hub, p);
        }
    }
    b.finish()
}

/// Counter-clockwise neighbour order at every vertex of `G(l,k)` for the
/// drawing with `uv` arched above and branch `i` drawn `i` units below.
pub fn weighted_cycle_rotation(ell: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    FamilyParams::weighted_cycle(ell, k).validate()?;
    let x = |j: usize, i: usize| 2 + (i - 1) * (ell - 1) + (j - 1);
    let n = k * (ell - 1) + 2;
    let mut rot = vec![Vec::new(); n];
    rot[0] = (1..=k).rev().map(|i| x(1, i)).chain([1]).collect();
    rot[1] = std::iter::once(0).chain((1..=k).map(|i| x(ell - 1, i))).collect();
    for i in 1..=k {
        for j in 1..ell {
            let prev = if j == 1 { 0 } else { x(j - 1, i) };
            let next = if j == ell - 1 { 1 } else { x(j + 1, i) };
            rot[x(j, i)] = vec![prev, next];
        }
    }
    Ok(rot)
}

/// Faces traced by a rotation system, or `None` if `rot` does not list
/// exactly the neighbours of each vertex.
pub fn rotation_faces(g: &WeightedGraph, rot: &[Vec<usize>]) -> Option<usize> {
    if rot.len() != g.n() {
        return None;
    }
    for (v, order) in rot.iter().enumerate() {
        let mut a: Vec<usize> = order.clone();
        let mut b: Vec<usize> = g.neighbors(v).map(|(y, _)| y).collect();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
    }
    let pos = |v: usize, y: usize| rot[v].iter().position(|&z| z == y).unwrap_or(0);
    let mut used = std::collections::HashSet::new();
    let mut faces = 0;
    for e in g.edges() {
        for start in [(e.u, e.v), (e.v, e.u)] {
            if used.contains(&start) {
                continue;
            }
            faces += 1;
            let mut dart = start;
            while used.insert(dart) {
                let (a, b) = dart;
                let deg = rot[b].len();
                dart = (b, rot[b][(pos(b, a) + 1) % deg]);
            }
        }
    }
    Some(faces)
}

/// Euler's formula `V - E + F = 2` for a connected graph with a rotation system.
pub fn is_planar_embedding(g: &WeightedGraph, rot: &[Vec<usize>]) -> bool {
    g.is_connected()
        && rotation_faces(g, rot).is_some_and(|f| g.n() as i64 - g.edge_count() as i64 + f as i64 == 2)
}

/// A quotient weight as a function of the family parameter `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KWeight {
    /// Independent of `k`.
    Const(f64),
    /// `c k`.
    PerK(f64),
    /// `floor(t k)`, asymptotically `t k`.
    FloorTk(f64),
}

impl KWeight {
    pub fn eval(&self, k: usize) -> f64 {
        match *self {
            KWeight::Const(c) => c,
            KWeight::PerK(c) => c * k as f64,
            KWeight::FloorTk(t) => pendant_count(t, k) as f64,
        }
    }

    /// Leading `(coefficient, power of k)`.
    pub fn leading(&self) -> (f64, u32) {
        match *self {
            KWeight::Const(c) => (c, 0),
            KWeight::PerK(c) | KWeight::FloorTk(c) => (c, 1),
        }
    }
}

/// Which connector is the special vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Connector {
    U,
    V,
}

/// A family quotient with weights kept symbolic in `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicQuotient {
    pub labels: Vec<String>,
    pub vertex_weights: Vec<KWeight>,
    pub edges: Vec<(usize, usize, KWeight)>,
    pub special_cell: usize,
}

fn mirror_name(name: &str, ell: usize, family: Family) -> String {
    let parts: Vec<&str> = name.split('_').collect();
    let swap_uv = |s: &str| match s {
        "u" => "v".to_string(),
        "v" => "u".to_string(),
        "u'" => "v'".to_string(),
        "v'" => "u'".to_string(),
        other => other.to_string(),
    };
    match parts.as_slice() {
        [base] => swap_uv(base),
        [base, rest] if *base == "u" || *base == "v" => format!("{}_{rest}", swap_uv(base)),
        ["x", j, rest] => {
            let top = if family == Family::WeightedCycle { ell } else { ell + 1 };
            let (j, prime) = match j.strip_suffix('\'') {
                Some(j) => (j, "'"),
                None => (*j, ""),
            };
            let j: usize = j.parse().unwrap_or(0);
            format!("x_{}{prime}_{rest}", top - j)
        }
        ["x", j] => {
            let (j, prime) = j.strip_suffix('\'').map_or((*j, ""), |j| (j, "'"));
            let j: usize = j.parse().unwrap_or(0);
            format!("x_{}{prime}", ell + 1 - j)
        }
        ["y", j, rest @ ..] => {
            let (j, prime) = j.strip_suffix('\'').map_or((*j, ""), |j| (j, "'"));
            let j: usize = j.parse().unwrap_or(0);
            let mut s = format!("y_{}{prime}", 5 - j);
            for r in rest {
                s.push('_');
                s.push_str(r);
            }
            s
        }
        _ => name.to_string(),
    }
}

impl SymbolicQuotient {
    /// Quotient of `G(l,k)` at `u` (or `v`): cells `u_*`, `v_*`, `x_1_*`..`x_{l-1}_*`.
    pub fn weighted_cycle(ell: usize, at: Connector) -> Result<Self> {
        FamilyParams::weighted_cycle(ell, 1).validate()?;
        let mut labels = vec!["u_*".to_string(), "v_*".to_string()];
        labels.extend((1..ell).map(|j| format!("x_{j}_*")));
        let mut vertex_weights = vec![KWeight::Const(1.0), KWeight::Const(1.0)];
        vertex_weights.extend((1..ell).map(|_| KWeight::PerK(1.0)));
        let x = |j: usize| 1 + j;
        let mut edges = vec![(0, 1, KWeight::Const(1.0)), (0, x(1), KWeight::PerK(1.0))];
        for j in 1..ell - 1 {
            edges.push((x(j), x(j + 1), KWeight::PerK(1.0)));
        }
        edges.push((x(ell - 1), 1, KWeight::PerK(1.0)));
        let mut q = Self { labels, vertex_weights, edges, special_cell: 0 };
        if at == Connector::V {
            q.labels = q.labels.iter().map(|l| mirror_name(l, ell, Family::WeightedCycle)).collect();
        }
        Ok(q)
    }

    /// Quotient of `H(l,k,t)` at `u` (or `v`): cells `u_*`, `v_*`, `u'`, `v'`,
    /// `x_1'`..`x_l'`, `y_1'`..`y_4'`.
    pub fn double_broom(ell: usize, t: f64, at: Connector) -> Result<Self> {
        if ell <= 2 || !(t > 0.0) || !t.is_finite() {
            return Err(Error::BadParams(format!("double-broom quotient needs l > 2, t > 0 (got l={ell}, t={t})")));
        }
        let mut labels: Vec<String> = ["u_*", "v_*", "u'", "v'"].iter().map(|s| s.to_string()).collect();
        labels.extend((1..=ell).map(|j| format!("x_{j}'")));
        labels.extend((1..=4).map(|j| format!("y_{j}'")));
        let one = KWeight::Const(1.0);
        let per_k = KWeight::PerK(1.0);
        let pend = KWeight::FloorTk(t);
        let mut vertex_weights = vec![one, one, pend, pend];
        vertex_weights.extend((1..=ell).map(|_| per_k));
        vertex_weights.extend([per_k, one, one, per_k]);
        let x = |j: usize| 3 + j;
        let y = |j: usize| 3 + ell + j;
        let mut edges = vec![(0, 2, pend), (1, 3, pend), (0, x(1), per_k)];
        for j in 1..ell {
            edges.push((x(j), x(j + 1), per_k));
        }
        edges.extend([
            (x(ell), 1, per_k),
            (0, y(1), per_k),
            (y(1), y(2), per_k),
            (y(2), y(3), one),
            (y(3), y(4), per_k),
            (y(4), 1, per_k),
        ]);
        let mut q = Self { labels, vertex_weights, edges, special_cell: 0 };
        if at == Connector::V {
            q.labels = q.labels.iter().map(|l| mirror_name(l, ell, Family::DoubleBroom)).collect();
        }
        Ok(q)
    }

    /// The weighted quotient for a concrete `k`.
    pub fn instantiate(&self, k: usize) -> Result<WeightedGraph> {
        let weights: Vec<f64> = self.vertex_weights.iter().map(|w| w.eval(k)).collect();
        let edges: Vec<_> = self.edges.iter().map(|&(a, b, w)| (a, b, w.eval(k))).collect();
        WeightedGraph::build(weights.len(), &edges, &weights)?.with_labels(self.labels.clone())
    }

    /// All weights divided by the top power of `k`, `k -> infinity`, and
    /// zero edges removed. Exact: only leading coefficients survive.
    pub fn limit_graph(&self) -> Result<WeightedGraph> {
        let top = self
            .vertex_weights
            .iter()
            .chain(self.edges.iter().map(|(_, _, w)| w))
            .map(|w| w.leading().1)
            .max()
            .unwrap_or(0);
        let limit = |w: &KWeight| {
            let (c, p) = w.leading();
            if p == top {
                c
            } else {
                0.0
            }
        };
        let weights: Vec<f64> = self.vertex_weights.iter().map(limit).collect();
        let edges: Vec<_> = self.edges.iter().map(|(a, b, w)| (*a, *b, limit(w))).collect();
        Ok(WeightedGraph::build(weights.len(), &edges, &weights)?
            .with_labels(self.labels.clone())?
            .strip_zero_edges())
    }
}

fn cell_for_label(label: &str, params: &FamilyParams) -> Option<usize> {
    let ell = params.ell;
    let parts: Vec<&str> = label.split('_').collect();
    let num = |s: &str| s.parse::<usize>().ok();
    match params.family {
        Family::WeightedCycle => match parts.as_slice() {
            ["u"] => Some(0),
            ["v"] => Some(1),
            ["x", j, _] => num(j).filter(|&j| (1..ell).contains(&j)).map(|j| 1 + j),
            _ => None,
        },
        Family::DoubleBroom => match parts.as_slice() {
            ["u"] => Some(0),
            ["v"] => Some(1),
            ["u", _] => Some(2),
            ["v", _] => Some(3),
            ["x", j, _] => num(j).filter(|&j| (1..=ell).contains(&j)).map(|j| 3 + j),
            ["y", j, _] => num(j).filter(|&j| (1..=4).contains(&j)).map(|j| 3 + ell + j),
            _ => None,
        },
        _ => None,
    }
}

/// The vertex permutation of a weighted cycle or double broom that swaps
/// the two connectors (and their pendants), read off the labels.
pub fn mirror_permutation(g: &WeightedGraph, params: &FamilyParams) -> Result<Vec<usize>> {
    let labels = g.labels().ok_or_else(|| Error::BadParams("graph has no labels".into()))?;
    labels
        .iter()
        .map(|l| g.find_vertex(&mirror_name(l, params.ell, params.family)))
        .collect()
}

/// The permutation exchanging branches `a` and `b` (labels `x_j_a` and
/// `x_j_b`, and `y_1`/`y_4` copies when present).
pub fn branch_swap(g: &WeightedGraph, a: usize, b: usize) -> Result<Vec<usize>> {
    let labels = g.labels().ok_or_else(|| Error::BadParams("graph has no labels".into()))?;
    labels
        .iter()
        .map(|l| {
            let parts: Vec<&str> = l.split('_').collect();
            let swapped = match parts.as_slice() {
                [base @ ("x" | "y"), j, i] if *i == a.to_string() => format!("{base}_{j}_{b}"),
                [base @ ("x" | "y"), j, i] if *i == b.to_string() => format!("{base}_{j}_{a}"),
                _ => l.clone(),
            };
            g.find_vertex(&swapped)
        })
        .collect()
}

/// The analytic quotient of a generated weighted cycle or double broom at
/// connector `at`. `g` must be `params.generate()`.
pub fn analytic_quotient(g: &WeightedGraph, params: &FamilyParams, at: Connector) -> Result<QuotientGraph> {
    let sym = match params.family {
        Family::WeightedCycle => SymbolicQuotient::weighted_cycle(params.ell, at)?,
        Family::DoubleBroom => SymbolicQuotient::double_broom(params.ell, params.t.unwrap_or(0.0), at)?,
        other => return Err(Error::UnsupportedFamily(other.to_string())),
    };
    let labels = g.labels().ok_or_else(|| Error::BadParams("graph has no labels".into()))?;
    if g.n() != params.vertex_count() {
        return Err(Error::BadParams("graph does not match the family parameters".into()));
    }
    let phi: Vec<usize> = labels
        .iter()
        .map(|l| {
            let name = match at {
                Connector::U => l.clone(),
                Connector::V => mirror_name(l, params.ell, params.family),
            };
            cell_for_label(&name, params).ok_or_else(|| Error::UnknownLabel(l.clone()))
        })
        .collect::<Result<_>>()?;
    let special = g.find_vertex(match at {
        Connector::U => "u",
        Connector::V => "v",
    })?;
    Ok(QuotientGraph { graph: sym.instantiate(params.k)?, phi, special, special_cell: sym.special_cell })
}
