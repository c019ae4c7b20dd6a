//! k-sweeps over the weighted cycle and double broom, and the block path report.

use std::io::Write;
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{analytic_quotient, Connector, Family, FamilyParams, SymbolicQuotient};
use crate::graph::WeightedGraph;
use crate::path::PathRecord;
use crate::quotient::{lift_path, quotient_spectral_path, QuotientGraph};
use crate::spectral::{component_spectral_path, spectral_path};

/// Largest k a default sweep visits.
pub const DEFAULT_MAX_K: usize = 1 << 14;

/// `min, 2 min, 4 min, ...` up to `max`.
pub fn doubling_ks(min: usize, max: usize) -> Vec<usize> {
    std::iter::successors(Some(min.max(1)), |k| k.checked_mul(2)).take_while(|&k| k <= max).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub params: FamilyParams,
    /// `None` for the limit row (k -> infinity).
    pub k: Option<usize>,
    pub spectral_len: usize,
    /// For the limit row this is the distance in any finite member; it does
    /// not depend on k.
    pub hop_dist: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub stretch: Ratio<usize>,
    pub tie_flag: bool,
    pub eigen_gap: f64,
    pub wall_time_s: f64,
    /// Labels of the quotient path (before any pendant edge is appended).
    pub quotient_path: Vec<String>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl SweepRow {
    pub fn stretch_f64(&self) -> f64 {
        *self.stretch.numer() as f64 / *self.stretch.denom() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: Family,
    pub ell: usize,
    pub t: Option<f64>,
    /// Path length the sweep is expected to settle at.
    pub target_len: usize,
    pub rows: Vec<SweepRow>,
    pub limit: SweepRow,
    /// Smallest listed k from which every row has `target_len`.
    pub stabilization_k: Option<usize>,
}

impl SweepReport {
    /// Whether the last listed k reached the target (and so stayed there from
    /// the stabilisation point on).
    pub fn retained(&self) -> bool {
        self.stabilization_k.is_some()
    }
}

fn stabilization(rows: &[SweepRow], target: usize) -> Option<usize> {
    let mut first = None;
    for r in rows {
        if r.spectral_len == target {
            first = first.or(r.k);
        } else {
            first = None;
        }
    }
    first
}

struct QuotientRun {
    quotient_path: PathRecord,
    lifted: PathRecord,
    gap: f64,
}

/// Quotient solve with a component-restricted grounding, lifted to `g`.
fn run_quotient(g: &WeightedGraph, q: &QuotientGraph, from: usize) -> Result<QuotientRun> {
    let (quotient_path, f, _) = component_spectral_path(&q.graph, q.phi[from], q.special_cell)?;
    let mut lifted = lift_path(g, q, &quotient_path.vertices, from)?;
    lifted.tie = quotient_path.tie;
    Ok(QuotientRun { quotient_path, lifted, gap: f.gap.unwrap_or(f64::NAN) })
}

fn make_row(params: FamilyParams, k: Option<usize>, path: &PathRecord, hop: usize, gap: f64, labels: Vec<String>, t0: Instant) -> Result<SweepRow> {
    if hop == 0 {
        return Err(Error::InvalidPath("endpoints coincide".into()));
    }
    Ok(SweepRow {
        params,
        k,
        spectral_len: path.length,
        hop_dist: hop,
        stretch: Ratio::new(path.length, hop),
        tie_flag: path.tie,
        eigen_gap: gap,
        wall_time_s: t0.elapsed().as_secs_f64(),
        quotient_path: labels,
    })
}

fn limit_path(sym: &SymbolicQuotient, from_label: &str) -> Result<(PathRecord, f64, Vec<String>)> {
    let lim = sym.limit_graph()?;
    let from = lim.find_vertex(from_label)?;
    let (p, f, _) = component_spectral_path(&lim, from, sym.special_cell)?;
    let labels = p.labels(&lim);
    Ok((p, f.gap.unwrap_or(f64::NAN), labels))
}

/// Spectral path `x_{l-1,1} -> u` in `G(l,k)` for every `k` in `ks`, solved
/// on the analytic quotient and lifted.
pub fn sweep_weighted_cycle(ell: usize, ks: &[usize]) -> Result<SweepReport> {
    let base = FamilyParams::weighted_cycle(ell, 1);
    base.validate()?;
    let start = format!("x_{}_1", ell - 1);
    let rows = ks
        .par_iter()
        .map(|&k| {
            let t0 = Instant::now();
            let params = base.with_k(k);
            let g = params.generate()?;
            let q = analytic_quotient(&g, &params, Connector::U)?;
            let run = run_quotient(&g, &q, g.find_vertex(&start)?)?;
            let labels = run.quotient_path.labels(&q.graph);
            make_row(params, Some(k), &run.lifted, run.lifted.endpoint_distance, run.gap, labels, t0)
        })
        .collect::<Result<Vec<_>>>()?;

    let t0 = Instant::now();
    let sym = SymbolicQuotient::weighted_cycle(ell, Connector::U)?;
    let (p, gap, labels) = limit_path(&sym, &format!("x_{}_*", ell - 1))?;
    let g1 = base.generate()?;
    let hop = g1.hop_distance(g1.find_vertex(&start)?, g1.find_vertex("u")?)?.ok_or(Error::DisconnectedGraph)?;
    let limit = make_row(base, None, &p, hop, gap, labels, t0)?;

    let target_len = ell - 1;
    Ok(SweepReport {
        family: Family::WeightedCycle,
        ell,
        t: None,
        target_len,
        stabilization_k: stabilization(&rows, target_len),
        rows,
        limit,
    })
}

/// Path from `from_label` to the pendant `to_label` on the opposite side,
/// via the quotient at the pendant's connector plus the final pendant edge.
fn broom_direction(g: &WeightedGraph, params: &FamilyParams, at: Connector, from: &str, to: &str) -> Result<(PathRecord, f64, Vec<String>)> {
    let q = analytic_quotient(g, params, at)?;
    let run = run_quotient(g, &q, g.find_vertex(from)?)?;
    let mut verts = run.lifted.vertices;
    verts.push(g.find_vertex(to)?);
    let mut p = PathRecord::new(g, verts)?;
    p.tie = run.lifted.tie;
    Ok((p, run.gap, run.quotient_path.labels(&q.graph)))
}

/// Symmetric spectral path between `u_1` and `v_1` in `H(l,k,t)`.
pub fn sweep_double_broom(ell: usize, t: f64, ks: &[usize]) -> Result<SweepReport> {
    let base = FamilyParams::double_broom(ell, 3, t);
    base.validate()?;
    let rows = ks
        .par_iter()
        .map(|&k| {
            let t0 = Instant::now();
            let params = base.with_k(k);
            let g = params.generate()?;
            // forward: grounded at v_1, reverse: grounded at u_1
            let fwd = broom_direction(&g, &params, Connector::V, "u_1", "v_1")?;
            let rev = broom_direction(&g, &params, Connector::U, "v_1", "u_1")?;
            let (p, gap, labels) = if rev.0.length < fwd.0.length { rev } else { fwd };
            make_row(params, Some(k), &p, p.endpoint_distance, gap, labels, t0)
        })
        .collect::<Result<Vec<_>>>()?;

    let t0 = Instant::now();
    let sym = SymbolicQuotient::double_broom(ell, t, Connector::U)?;
    let (qp, gap, labels) = limit_path(&sym, "v'")?;
    let g3 = base.generate()?;
    let hop = g3.hop_distance(g3.find_vertex("v_1")?, g3.find_vertex("u_1")?)?.ok_or(Error::DisconnectedGraph)?;
    // account for the appended pendant edge
    let limit = SweepRow {
        spectral_len: qp.length + 1,
        stretch: Ratio::new(qp.length + 1, hop),
        ..make_row(base, None, &qp, hop, gap, labels, t0)?
    };

    let target_len = ell + 3;
    Ok(SweepReport {
        family: Family::DoubleBroom,
        ell,
        t: Some(t),
        target_len,
        stabilization_k: stabilization(&rows, target_len),
        rows,
        limit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPathReport {
    pub params: FamilyParams,
    pub n: usize,
    pub diameter: usize,
    /// `5d + l - 4`.
    pub expected_diameter: usize,
    pub hop_dist: usize,
    pub forward_len: usize,
    pub backward_len: usize,
    pub symmetric_len: usize,
    /// `(l + 1) d + 2`.
    pub claimed_len: usize,
    pub matches_claim: bool,
    pub stretch_vs_diameter: f64,
    pub stretch_vs_distance: f64,
    pub path: Vec<String>,
}

/// Diameter and the measured symmetric spectral path `x_1 <-> y_1` of
/// `J(l,k,d)`, solved on the full graph.
pub fn block_path_report(ell: usize, k: usize, d: usize) -> Result<BlockPathReport> {
    let params = FamilyParams::block_path(ell, k, d);
    let g = params.generate()?;
    let (x1, y1) = (g.find_vertex("x_1")?, g.find_vertex("y_1")?);
    let diameter = g.diameter()?;
    let (fwd, bwd) = rayon::join(|| spectral_path(&g, x1, y1), || spectral_path(&g, y1, x1));
    let (fwd, bwd) = (fwd?, bwd?);
    // same choice as symmetric_spectral_path, without solving twice
    let path = if bwd.length < fwd.length { bwd.clone() } else { fwd.clone() };
    let claimed_len = (ell + 1) * d + 2;
    Ok(BlockPathReport {
        params,
        n: g.n(),
        diameter,
        expected_diameter: 5 * d + ell - 4,
        hop_dist: path.endpoint_distance,
        forward_len: fwd.length,
        backward_len: bwd.length,
        symmetric_len: path.length,
        claimed_len,
        matches_claim: path.length == claimed_len,
        stretch_vs_diameter: path.length as f64 / diameter as f64,
        stretch_vs_distance: path.length as f64 / path.endpoint_distance as f64,
        path: path.labels(&g),
    })
}

/// `(k, symmetric spectral path length x_1 <-> y_1)` of `J(l,k,d)` for each
/// k, solved on the refinement quotient so large k stays cheap.
pub fn block_path_scan(ell: usize, d: usize, ks: &[usize]) -> Result<Vec<(usize, usize)>> {
    ks.par_iter()
        .map(|&k| {
            let g = FamilyParams::block_path(ell, k, d).generate()?;
            let (x1, y1) = (g.find_vertex("x_1")?, g.find_vertex("y_1")?);
            let fwd = quotient_spectral_path(&g, x1, y1)?.path.length;
            let bwd = quotient_spectral_path(&g, y1, x1)?.path.length;
            Ok((k, fwd.min(bwd)))
        })
        .collect()
}

pub const SWEEP_CSV_COLUMNS: [&str; 11] = [
    "family",
    "ell",
    "k",
    "t",
    "spectral_len",
    "hop_dist",
    "stretch",
    "stretch_value",
    "tie",
    "eigen_gap",
    "wall_time_s",
];

/// One line per row, limit row last with `k = inf`. Columns as in
/// [`SWEEP_CSV_COLUMNS`]. With `timing = false` the time column is zero so
/// the output is reproducible.
pub fn write_sweep_csv<W: Write>(report: &SweepReport, out: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_COLUMNS)?;
    for row in report.rows.iter().chain(std::iter::once(&report.limit)) {
        w.write_record([
            report.family.to_string(),
            report.ell.to_string(),
            row.k.map_or("inf".into(), |k| k.to_string()),
            report.t.map_or(String::new(), |t| t.to_string()),
            row.spectral_len.to_string(),
            row.hop_dist.to_string(),
            row.stretch.to_string(),
            format!("{:.6}", row.stretch_f64()),
            row.tie_flag.to_string(),
            format!("{:e}", row.eigen_gap),
            if timing { format!("{:.6}", row.wall_time_s) } else { "0".into() },
        ])?;
    }
    w.flush()?;
    Ok(())
}
