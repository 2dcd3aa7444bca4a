//! Brute-force cross-validation of traced boundaries.
//!
//! The sweep rebuilds each region the dumb way: evaluate the scheme's
//! membership predicate on a square rate lattice, OR-ing over a lattice of
//! scheme parameters, and keep the highest feasible point per column. A
//! correctly traced boundary must dominate this frontier, since the tracer
//! searches at least as hard in the parameters and is not quantized in the
//! rates.

use crate::model::{rate_upper_bound, RegionBoundary, SchemeId, SchemeParams, SystemConfig, TrafficProfile};
use crate::region::{ParamsUsed, SchemeRegion};
use crate::tracer::{boundary_height, lift_rates};
use rayon::prelude::*;

/// Outcome of comparing a swept frontier against a traced boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub scheme: SchemeId,
    pub rate_grid: usize,
    pub param_grid: usize,
    /// Largest distance by which a frontier point sits below the traced
    /// boundary (rate units; the coarser the lattice, the larger).
    pub hausdorff_gap: f64,
    /// Frontier points more than the tolerance above the traced boundary.
    pub containment_violations: usize,
}

/// Scheme parameter lattice matching what the scheme actually reads.
fn param_lattice(used: ParamsUsed, param_grid: usize) -> Vec<SchemeParams> {
    let axis: Vec<f64> = (0..param_grid)
        .map(|i| i as f64 / (param_grid - 1) as f64)
        .collect();
    match used {
        ParamsUsed::None => vec![SchemeParams::new(0.0, 0.0)],
        ParamsUsed::Alpha => axis.iter().map(|&a| SchemeParams::new(a, 0.0)).collect(),
        ParamsUsed::AlphaTau => axis
            .iter()
            .flat_map(|&a| axis.iter().map(move |&t| SchemeParams::new(a, t)))
            .collect(),
    }
}

/// Maximal feasible frontier of a scheme on a `rate_grid`² lattice over
/// `[0, U]²`, OR-ed over a `param_grid` lattice of scheme parameters.
/// Columns with no feasible point (not even `r2u = 0`) are omitted.
pub fn sweep_region(
    scheme: &dyn SchemeRegion,
    profile: &TrafficProfile,
    cfg: &SystemConfig,
    rate_grid: usize,
    param_grid: usize,
) -> Vec<(f64, f64)> {
    assert!(rate_grid >= 2 && param_grid >= 2, "lattices need at least 2 points");
    let upper = rate_upper_bound(cfg);
    let params = param_lattice(scheme.params_used(), param_grid);
    let step = upper / (rate_grid - 1) as f64;

    (0..rate_grid)
        .into_par_iter()
        .filter_map(|col| {
            let r1 = col as f64 * step;
            // Feasibility is monotone in r2u at fixed parameters, so the
            // highest feasible lattice row per parameter point is found by
            // binary search; the column frontier is the best row over all
            // parameter points.
            let mut best_row: Option<usize> = None;
            for p in &params {
                let feasible = |row: usize| {
                    let rates = lift_rates(r1, row as f64 * step, profile);
                    scheme.feasible_at(&rates, p)
                };
                let start = best_row.map_or(0, |b| b + 1);
                if start >= rate_grid || !feasible(start) {
                    continue;
                }
                let (mut lo, mut hi) = (start, rate_grid - 1);
                while lo < hi {
                    let mid = (lo + hi + 1) / 2;
                    if feasible(mid) {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                best_row = Some(lo);
                if lo == rate_grid - 1 {
                    break;
                }
            }
            best_row.map(|row| (r1, row as f64 * step))
        })
        .collect()
}

/// Vertical comparison of a swept frontier against a traced boundary:
/// gap below (how conservative the lattice is) and count of points above
/// the boundary by more than `tol` (tracer misses).
pub fn compare_boundaries(
    oracle_frontier: &[(f64, f64)],
    traced: &RegionBoundary,
    tol: f64,
) -> SweepReport {
    assert!(!oracle_frontier.is_empty(), "empty oracle frontier");
    assert!(!traced.points.is_empty(), "empty traced boundary");
    let mut gap = 0.0f64;
    let mut violations = 0;
    for &(x, y) in oracle_frontier {
        let h = boundary_height(&traced.points, x);
        gap = gap.max(h - y);
        if y - h > tol {
            violations += 1;
        }
    }
    SweepReport {
        scheme: traced.scheme,
        rate_grid: 0,
        param_grid: 0,
        hausdorff_gap: gap.max(0.0),
        containment_violations: violations,
    }
}
