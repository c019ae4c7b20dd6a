//! Reproduction harness: k-sweeps, the block path report, perturbation
//! trials, the random pair probability and the random-walk bound report.

mod perturb;
mod random;
mod rw;
mod sweep;

use num_rational::Ratio;

use crate::error::Result;
use crate::families::FamilyParams;

pub use perturb::{perturb, perturbation_trial, EpsilonRow, PerturbationReport, DEFAULT_EPSILONS};
pub use random::{
    planted_twins_graph, random_connected_graph, random_weighted_graph, stretch_histogram, HistogramSummary,
};
pub use rw::{rw_stretch_report, StretchBoundReport, BOUND_SLACK};
pub use sweep::{
    block_path_report, block_path_scan, doubling_ks, sweep_double_broom, sweep_weighted_cycle, write_sweep_csv, BlockPathReport,
    SweepReport, SweepRow, DEFAULT_MAX_K, SWEEP_CSV_COLUMNS,
};

/// Chance that a uniformly random vertex pair of `H(l,k,t)` is a
/// `{u_i, v_j}` pair: `2T^2 / n^2`, `T = floor(t k)`, `n = 2T + 4 + k(l + 2)`.
/// `T = 0` gives zero.
pub fn random_pair_probability(ell: usize, k: usize, t: f64) -> Result<Ratio<u128>> {
    let params = FamilyParams::double_broom(ell, k, t);
    match params.validate() {
        Ok(()) | Err(crate::Error::TZero) => {}
        Err(e) => return Err(e),
    }
    let big_t = params.pendants() as u128;
    let n = 2 * big_t + 4 + (k as u128) * (ell as u128 + 2);
    Ok(Ratio::new(2 * big_t * big_t, n * n))
}

pub fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
