//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion outside `KNOWN_FAILURES` fails, or if a known
//! failure starts passing.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::Rng;

use common::*;
use specpath::experiments::{
    block_path_report, block_path_scan, doubling_ks, perturbation_trial, planted_twins_graph, random_connected_graph,
    random_pair_probability, random_weighted_graph, ratio_to_f64, rw_stretch_report, stretch_histogram,
    sweep_double_broom, sweep_weighted_cycle, DEFAULT_EPSILONS, DEFAULT_MAX_K,
};
use specpath::families::{analytic_quotient, SymbolicQuotient};
use specpath::quotient::{lift, quotient_graph, refine_partition};
use specpath::spectral::verify_descent;
use specpath::{grounded_eigenfunction, spread_function, spread_path, Connector, FamilyParams, WeightedGraph};

// pinned tolerances
const LIFT_TOL: f64 = 1e-8;
const SPREAD_TOL: f64 = 1e-8;
const GAP_RTOL: f64 = 1e-10;
const RAYLEIGH_RTOL: f64 = 1e-9;
const RW_EIGEN_TOL: f64 = 1e-10;
const PAIR_PROB_LIMIT: f64 = 0.49;

const RAYLEIGH_SAMPLES: usize = 1000;
const PERTURB_TRIALS: usize = 200;
const PERTURB_SEED: u64 = 2024;

/// Criteria that fail with a correct implementation. See the README.
const KNOWN_FAILURES: &[usize] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Outcome::error(e),
        }
    };
}

fn weighted_cycle_sweeps() -> Outcome {
    let ks = doubling_ks(1, DEFAULT_MAX_K);
    let mut pass = true;
    let mut parts = Vec::new();
    for ell in [5, 8, 12] {
        let rep = tri!(sweep_weighted_cycle(ell, &ks));
        let last = rep.rows.last().expect("non-empty sweep");
        let hops_ok = rep.rows.iter().all(|r| r.hop_dist == 2) && rep.limit.hop_dist == 2;
        let len_ok = rep.retained() && last.spectral_len == ell - 1 && rep.limit.spectral_len == ell - 1;
        let stretch_ok = ell != 5 || (*last.stretch.numer() == 2 && *last.stretch.denom() == 1);
        pass &= hops_ok && len_ok && stretch_ok;
        parts.push(format!(
            "l={ell}: stable from k={} len={} dist={} stretch={}",
            rep.stabilization_k.map_or("never".into(), |k| k.to_string()),
            last.spectral_len,
            last.hop_dist,
            last.stretch
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn double_broom_sweep() -> Outcome {
    let rep = tri!(sweep_double_broom(7, 2.0, &doubling_ks(4, DEFAULT_MAX_K)));
    let last = rep.rows.last().expect("non-empty sweep");
    let pass = rep.retained()
        && last.spectral_len == 10
        && rep.limit.spectral_len == 10
        && rep.rows.iter().all(|r| r.hop_dist == 7);
    Outcome::new(
        pass,
        format!(
            "stable from k={} len={} dist={} limit len={}",
            rep.stabilization_k.map_or("never".into(), |k| k.to_string()),
            last.spectral_len,
            last.hop_dist,
            rep.limit.spectral_len
        ),
    )
}

fn block_path() -> Outcome {
    let rep = tri!(block_path_report(8, 3, 9));
    let scan = tri!(block_path_scan(8, 9, &[3, 6, 12, 24, 48, 96]));
    let pass = rep.diameter == rep.expected_diameter && rep.stretch_vs_diameter > 1.0;
    let scan: Vec<String> = scan.iter().map(|(k, l)| format!("k={k}:{l}")).collect();
    Outcome::new(
        pass,
        format!(
            "n={} diameter={} (expected {}) measured len={} dist={} claimed len={} len/diameter={:.3}; k-scan {}",
            rep.n,
            rep.diameter,
            rep.expected_diameter,
            rep.symmetric_len,
            rep.hop_dist,
            rep.claimed_len,
            rep.stretch_vs_diameter,
            scan.join(" ")
        ),
    )
}

fn spread_corpus() -> Vec<WeightedGraph> {
    let mut r = rng(400);
    let mut graphs: Vec<WeightedGraph> = (0..100)
        .map(|_| {
            let n = r.random_range(2..=40);
            let p = r.random_range(0.02..0.3);
            random_connected_graph(n, p, &mut r)
        })
        .collect();
    for params in [
        FamilyParams::weighted_cycle(5, 2),
        FamilyParams::weighted_cycle(8, 3),
        FamilyParams::double_broom(6, 3, 5.0 / 3.0),
        FamilyParams::block_path(6, 3, 7),
    ] {
        graphs.push(params.generate().expect("valid family parameters"));
    }
    graphs
}

fn spread_paths() -> Outcome {
    let graphs = spread_corpus();
    let mut pairs = 0usize;
    let mut bad_len = 0usize;
    let mut worst = 0.0f64;
    for g in &graphs {
        for to in 0..g.n() {
            let sol = tri!(spread_function(g, to));
            let dist = g.hop_distances_from(to);
            for v in 0..g.n() {
                let d = dist[v].expect("connected") as f64;
                worst = worst.max((sol.f_tilde[v] / sol.s - d).abs());
            }
            for from in (0..g.n()).filter(|&v| v != to) {
                let p = tri!(spread_path(g, from, to));
                pairs += 1;
                if p.length != dist[from].expect("connected") {
                    bad_len += 1;
                }
            }
        }
    }
    Outcome::new(
        bad_len == 0 && worst <= SPREAD_TOL,
        format!("{} graphs, {pairs} pairs, {bad_len} non-geodesic, max |f/s - d| = {worst:.2e}", graphs.len()),
    )
}

/// Lifted quotient eigenfunction against the direct solve.
fn lift_error(g: &WeightedGraph, i: usize) -> specpath::Result<(usize, f64)> {
    let q = quotient_graph(g, i, &refine_partition(g, i))?;
    let qf = grounded_eigenfunction(&q.graph, q.special_cell)?;
    let lifted = lift(g, &q, &qf);
    let direct = grounded_eigenfunction(g, i)?;
    Ok((q.graph.n(), inf_dist(&lifted.values, &direct.values)))
}

/// `x_2_7 -> x_2_*`, `u_3 -> u_*`, `y_2_* -> y_2_*`.
fn label_class(label: &str) -> String {
    match label.rsplit_once('_') {
        Some((head, tail)) if tail.chars().all(|c| c.is_ascii_digit()) => format!("{head}_*"),
        _ => label.to_string(),
    }
}

fn cells_as_labels(g: &WeightedGraph, cells: &[Vec<usize>]) -> BTreeSet<BTreeSet<String>> {
    cells.iter().map(|c| c.iter().map(|&v| g.label(v)).collect()).collect()
}

fn label_classes(g: &WeightedGraph) -> BTreeSet<BTreeSet<String>> {
    let mut by: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for v in 0..g.n() {
        by.entry(label_class(&g.label(v))).or_default().insert(g.label(v));
    }
    by.into_values().collect()
}

/// Refinement at a connector yields the analytic classes, and the analytic
/// quotient has the same weights once cells are matched.
fn analytic_matches(params: &FamilyParams, at: Connector) -> specpath::Result<bool> {
    let g = params.generate()?;
    let name = match at {
        Connector::U => "u",
        Connector::V => "v",
    };
    let i = g.find_vertex(name)?;
    let p = refine_partition(&g, i);
    let computed = quotient_graph(&g, i, &p)?;
    let analytic = analytic_quotient(&g, params, at)?;
    let mut ok = analytic.graph.n() == computed.graph.n();
    if at == Connector::U {
        ok &= cells_as_labels(&g, &p.cells) == label_classes(&g);
    }
    // cell c of the computed quotient corresponds to analytic cell of any member
    let map: Vec<usize> = computed.preimages().iter().map(|cell| analytic.phi[cell[0]]).collect();
    for cell in computed.preimages() {
        ok &= cell.iter().all(|&v| analytic.phi[v] == analytic.phi[cell[0]]);
    }
    if !ok {
        return Ok(false);
    }
    for c in 0..computed.graph.n() {
        ok &= (computed.graph.vertex_weight(c) - analytic.graph.vertex_weight(map[c])).abs() < 1e-12;
    }
    for e in computed.graph.edges() {
        ok &= (e.weight - analytic.graph.edge_weight(map[e.u], map[e.v])).abs() < 1e-12;
    }
    ok &= computed.graph.edge_count() == analytic.graph.edge_count();
    ok &= map[computed.special_cell] == analytic.special_cell;
    Ok(ok)
}

fn quotient_lifts() -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (params, special) in [
        (FamilyParams::weighted_cycle(5, 3), "u"),
        (FamilyParams::double_broom(7, 3, 2.0), "u_1"),
        (FamilyParams::block_path(8, 3, 9), "x_1"),
    ] {
        let g = tri!(params.generate());
        let i = tri!(g.find_vertex(special));
        let (cells, err) = tri!(lift_error(&g, i));
        worst = worst.max(err);
        parts.push(format!("{}(l={},k={}) at {special}: {} -> {cells} cells", params.family, params.ell, params.k, g.n()));
    }
    let mut r = rng(500);
    let mut twins = 0;
    while twins < 20 {
        let n = r.random_range(5..=14);
        let (g, pairs) = planted_twins_graph(n, 0.3, 3, &mut r);
        if pairs.is_empty() || !g.is_positively_connected_without(0) {
            continue;
        }
        twins += 1;
        let (_, err) = tri!(lift_error(&g, 0));
        worst = worst.max(err);
    }
    let mut classes_ok = true;
    for (params, at) in [
        (FamilyParams::weighted_cycle(5, 3), Connector::U),
        (FamilyParams::weighted_cycle(5, 3), Connector::V),
        (FamilyParams::double_broom(7, 3, 2.0), Connector::U),
        (FamilyParams::double_broom(7, 3, 2.0), Connector::V),
    ] {
        classes_ok &= tri!(analytic_matches(&params, at));
    }
    Outcome::new(
        worst <= LIFT_TOL && classes_ok,
        format!(
            "{}; {twins} twin graphs; max lift error {worst:.2e}; analytic classes {}",
            parts.join(", "),
            if classes_ok { "match" } else { "differ" }
        ),
    )
}

fn grounded_corpus() -> Vec<(WeightedGraph, usize)> {
    let mut r = rng(600);
    let mut out = Vec::new();
    while out.len() < 100 {
        let n = r.random_range(3..=30);
        let g = random_weighted_graph(n, r.random_range(0.05..0.4), 0.25, &mut r);
        let i = r.random_range(0..n);
        let has_weight = (0..n).any(|v| v != i && g.vertex_weight(v) > 0.0);
        if has_weight && g.is_positively_connected_without(i) {
            out.push((g, i));
        }
    }
    for (params, special) in [
        (FamilyParams::weighted_cycle(5, 3), "u"),
        (FamilyParams::double_broom(7, 3, 2.0), "u_1"),
        (FamilyParams::block_path(6, 3, 7), "x_1"),
    ] {
        let g = params.generate().expect("valid family parameters");
        let i = g.find_vertex(special).expect("label exists");
        out.push((g, i));
    }
    out
}

fn eigen_invariants() -> Outcome {
    let corpus = grounded_corpus();
    let mut r = rng(601);
    let (mut descent_fail, mut gap_fail, mut rayleigh_fail) = (0, 0, 0);
    let mut zero_weight = 0;
    for (g, i) in &corpus {
        let i = *i;
        zero_weight += (0..g.n()).filter(|&v| g.vertex_weight(v) == 0.0).count();
        let f = tri!(grounded_eigenfunction(g, i));
        if !verify_descent(g, &f).passes() {
            descent_fail += 1;
        }
        if !f.gap.is_some_and(|gap| gap > GAP_RTOL * f.eigenvalue) {
            gap_fail += 1;
        }
        let rf = rayleigh(g, &f.values);
        let mut ok = (rf * f.eigenvalue - 1.0).abs() < 1e-8;
        let mut drawn = 0;
        while drawn < RAYLEIGH_SAMPLES {
            let mut h: Vec<f64> = (0..g.n()).map(|_| r.random_range(-1.0..1.0)).collect();
            h[i] = 0.0;
            if (0..g.n()).all(|v| g.vertex_weight(v) * h[v] == 0.0) {
                continue;
            }
            drawn += 1;
            ok &= rf <= rayleigh(g, &h) * (1.0 + RAYLEIGH_RTOL);
        }
        if !ok {
            rayleigh_fail += 1;
        }
    }
    Outcome::new(
        descent_fail + gap_fail + rayleigh_fail == 0,
        format!(
            "{} graphs ({zero_weight} zero-weight vertices): descent failures {descent_fail}, gap failures {gap_fail}, rayleigh failures {rayleigh_fail}",
            corpus.len()
        ),
    )
}

fn perturbation() -> Outcome {
    let q = tri!(SymbolicQuotient::weighted_cycle(5, Connector::U));
    let g = tri!(q.limit_graph());
    let start = tri!(g.find_vertex("x_4_*"));
    let rep = tri!(perturbation_trial(&g, q.special_cell, start, &DEFAULT_EPSILONS, PERTURB_TRIALS, PERTURB_SEED));
    let rows: Vec<String> = rep.rows.iter().map(|r| format!("{:e}:{}/{}", r.epsilon, r.preserved, r.valid)).collect();
    let full = rep.rows.iter().any(|r| r.trials == PERTURB_TRIALS && r.valid == r.trials && r.all_preserved());
    Outcome::new(
        full && rep.largest_stable_epsilon.is_some(),
        format!(
            "limit graph, {PERTURB_TRIALS} trials, seed {PERTURB_SEED}: {}; largest stable eps {}",
            rows.join(" "),
            rep.largest_stable_epsilon.map_or("none".into(), |e| format!("{e:e}"))
        ),
    )
}

fn pair_probability() -> Outcome {
    let ts = [0.1, 0.25, 0.5, 1.0, 5.0 / 3.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 1e4];
    let mut pass = true;
    let mut parts = Vec::new();
    for (ell, k) in [(6, 3), (7, 3), (10, 5)] {
        let ps: Vec<f64> = tri!(ts.iter().map(|&t| random_pair_probability(ell, k, t).map(|p| ratio_to_f64(&p))).collect::<specpath::Result<Vec<_>>>());
        let monotone = ps.windows(2).all(|w| w[1] >= w[0]);
        let last = *ps.last().expect("non-empty grid");
        pass &= monotone && last > PAIR_PROB_LIMIT && last < 0.5;
        parts.push(format!("(l={ell},k={k}) p(1e4)={last:.5}{}", if monotone { "" } else { " not monotone" }));
    }
    Outcome::new(pass, parts.join("; "))
}

fn rw_bound() -> Outcome {
    let mut r = rng(900);
    let mut graphs: Vec<WeightedGraph> = Vec::new();
    for c in 0..100 {
        let n = r.random_range(2..=40);
        let p = r.random_range(0.02..0.3);
        graphs.push(if c % 2 == 0 { random_connected_graph(n, p, &mut r) } else { random_weighted_graph(n, p, 0.0, &mut r) });
    }
    for params in [
        FamilyParams::weighted_cycle(5, 3),
        FamilyParams::double_broom(7, 3, 2.0),
        FamilyParams::block_path(6, 3, 7),
    ] {
        graphs.push(params.generate().expect("valid family parameters"));
    }
    let mut violations = 0;
    for g in &graphs {
        violations += tri!(rw_stretch_report(g)).violations.len();
    }
    let mut worst = 0.0f64;
    for n in 2..=12usize {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let g = tri!(WeightedGraph::unweighted(n, &edges));
        worst = worst.max((tri!(rw_stretch_report(&g)).lambda - n as f64 / (n - 1) as f64).abs());
    }
    let c4 = tri!(WeightedGraph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]));
    worst = worst.max((tri!(rw_stretch_report(&c4)).lambda - 1.0).abs());
    Outcome::new(
        violations == 0 && worst <= RW_EIGEN_TOL,
        format!("{} graphs, {violations} violations; K_n and C_4 eigenvalue error {worst:.2e}", graphs.len()),
    )
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 9] = [
        (1, "weighted cycle sweeps", weighted_cycle_sweeps),
        (2, "double broom sweep", double_broom_sweep),
        (3, "block path stretch", block_path),
        (4, "spread paths are geodesic", spread_paths),
        (5, "quotient lifts", quotient_lifts),
        (6, "grounded eigenfunction invariants", eigen_invariants),
        (7, "perturbation stability", perturbation),
        (8, "random pair probability", pair_probability),
        (9, "random-walk bound", rw_bound),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let t0 = Instant::now();
        let out = run();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (out.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (was known failing)",
        };
        println!("criterion {id} [{tag}] {name}: {} ({:.1}s)", out.detail, t0.elapsed().as_secs_f64());
        if out.pass == known {
            unexpected.push(id);
        }
    }
    let mut r = rng(1000);
    let graphs: Vec<WeightedGraph> = (0..30).map(|_| random_connected_graph(r.random_range(4..=16), 0.2, &mut r)).collect();
    if let Ok(h) = stretch_histogram(&graphs) {
        println!("info: spectral path stretch histogram over 30 random graphs: {h:?}");
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
