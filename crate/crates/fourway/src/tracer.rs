//! Boundary tracing: turns a scheme's feasibility predicate into the upper
//! boundary of its `(R1u, R2u)` uplink slice under a traffic profile.
//!
//! At fixed scheme parameters every constraint is monotone and linear in
//! the rates, so the maximal rate along any ray is found exactly by
//! bisection; the only approximation is the search over the superposition
//! split `α` (coarse grid plus local refinement; the phase split `τ` of
//! two-phase DF is eliminated exactly per `α`). The axis intercepts are
//! computed by dedicated bisections in both orientations, the interior by
//! one bisection per grid abscissa, and the result is closed under convex
//! combination (time sharing between operating points).

use crate::model::{
    rate_upper_bound, RateTuple, RegionBoundary, SystemConfig, TrafficProfile, FLOAT_SLACK,
};
use crate::region::{slack_admits, ParamsUsed, SchemeRegion};
use rayon::prelude::*;
use thiserror::Error;

/// Numerical knobs of the tracer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracerSettings {
    /// Abscissae of the traced boundary over `[0, R1uMax]`.
    pub r1_grid_points: usize,
    /// Absolute rate tolerance of every bisection.
    pub bisection_tol: f64,
    /// Coarse grid size of the `α` search.
    pub alpha_grid_points: usize,
    /// Reserved for schemes that expose a gridded `τ`; the built-in
    /// two-phase DF search solves `τ` in closed form per `α` instead.
    pub tau_grid_points: usize,
    /// Local refinement rounds around the best coarse `α` cell.
    pub refine_iterations: usize,
}

impl Default for TracerSettings {
    fn default() -> Self {
        Self {
            r1_grid_points: 201,
            bisection_tol: 1e-6,
            alpha_grid_points: 41,
            tau_grid_points: 41,
            refine_iterations: 3,
        }
    }
}

impl TracerSettings {
    fn check(&self) -> Result<(), TracerError> {
        let ok = self.r1_grid_points >= 2
            && self.alpha_grid_points >= 2
            && self.tau_grid_points >= 2
            && self.bisection_tol > 0.0
            && self.bisection_tol.is_finite();
        if ok {
            Ok(())
        } else {
            Err(TracerError::BadSettings(*self))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TracerError {
    #[error("invalid tracer settings: {0:?} (grids need >= 2 points, tolerance > 0)")]
    BadSettings(TracerSettings),
    #[error("scheme rejects the zero-rate tuple; the region is malformed")]
    ZeroRateInfeasible,
    #[error("convex closure of an empty point set")]
    EmptyPointSet,
}

/// Which uplink rate a dedicated axis bisection maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    R1u,
    R2u,
}

/// Expands an uplink rate pair into the full tuple under the profile's
/// fixed downlink-uplink ratios.
pub fn lift_rates(r1u: f64, r2u: f64, profile: &TrafficProfile) -> RateTuple {
    RateTuple::new(r1u, profile.theta1 * r1u, r2u, profile.theta2 * r2u)
}

/// True if some searched `α` admits the tuple: coarse grid first, then
/// `refine_iterations` rounds of re-gridding a window of two coarse cells
/// around the best candidate seen.
fn feasible_searched(scheme: &dyn SchemeRegion, rates: &RateTuple, settings: &TracerSettings) -> bool {
    if scheme.params_used() == ParamsUsed::None {
        return slack_admits(scheme.alpha_slack(rates, 0.0));
    }
    let n = settings.alpha_grid_points;
    let mut best_slack = f64::INFINITY;
    let mut best_alpha = 0.0;
    let scan = |lo: f64, hi: f64, best_slack: &mut f64, best_alpha: &mut f64| -> bool {
        for i in 0..n {
            let alpha = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let slack = scheme.alpha_slack(rates, alpha);
            if slack_admits(slack) {
                return true;
            }
            if slack < *best_slack {
                *best_slack = slack;
                *best_alpha = alpha;
            }
        }
        false
    };
    if scan(0.0, 1.0, &mut best_slack, &mut best_alpha) {
        return true;
    }
    let mut half_window = 2.0 / (n - 1) as f64;
    for _ in 0..settings.refine_iterations {
        let lo = (best_alpha - half_window).max(0.0);
        let hi = (best_alpha + half_window).min(1.0);
        if scan(lo, hi, &mut best_slack, &mut best_alpha) {
            return true;
        }
        half_window = 2.0 * (hi - lo) / (n - 1) as f64;
    }
    false
}

/// Largest rate `r` with `lift(r)` feasible, found by bisection on `[0, hi]`.
/// Assumes `lift(0)` is feasible and `lift(hi)` is not.
fn bisect_max_rate<F>(lift: F, hi: f64, tol: f64, scheme: &dyn SchemeRegion, settings: &TracerSettings) -> f64
where
    F: Fn(f64) -> RateTuple,
{
    let mut lo = 0.0;
    let mut hi = hi;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible_searched(scheme, &lift(mid), settings) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest feasible uplink rate on one axis (the other user silent) under
/// the profile, maximized over the searched scheme parameters.
pub fn max_rate_on_axis(
    scheme: &dyn SchemeRegion,
    profile: &TrafficProfile,
    cfg: &SystemConfig,
    settings: &TracerSettings,
    axis: Axis,
) -> Result<f64, TracerError> {
    settings.check()?;
    let lift = |r: f64| match axis {
        Axis::R1u => lift_rates(r, 0.0, profile),
        Axis::R2u => lift_rates(0.0, r, profile),
    };
    if !feasible_searched(scheme, &lift(0.0), settings) {
        return Err(TracerError::ZeroRateInfeasible);
    }
    let upper = rate_upper_bound(cfg);
    if upper == 0.0 || feasible_searched(scheme, &lift(upper), settings) {
        return Ok(upper);
    }
    Ok(bisect_max_rate(lift, upper, settings.bisection_tol, scheme, settings))
}

/// Traces the full `(R1u, R2u)` boundary of a scheme under a profile and
/// closes it convexly. The scenario label is carried into the result for
/// reporting.
pub fn trace_boundary(
    scheme: &dyn SchemeRegion,
    profile: &TrafficProfile,
    cfg: &SystemConfig,
    settings: &TracerSettings,
    scenario: &str,
) -> Result<RegionBoundary, TracerError> {
    settings.check()?;
    let r1u_max = max_rate_on_axis(scheme, profile, cfg, settings, Axis::R1u)?;
    let r2u_max = max_rate_on_axis(scheme, profile, cfg, settings, Axis::R2u)?;
    let upper = rate_upper_bound(cfg);
    let n = settings.r1_grid_points;

    // Interior columns are independent; evaluate them in parallel. The
    // reduction is positional, so worker count cannot change the output.
    let mut raw: Vec<(f64, f64)> = (1..n)
        .into_par_iter()
        .map(|i| {
            let r1 = r1u_max * i as f64 / (n - 1) as f64;
            let lift = |r2: f64| lift_rates(r1, r2, profile);
            let r2 = if feasible_searched(scheme, &lift(upper), settings) {
                upper
            } else {
                bisect_max_rate(lift, upper, settings.bisection_tol, scheme, settings)
            };
            (r1, r2)
        })
        .collect();
    raw.insert(0, (0.0, r2u_max));

    // A bisection residue at the right end is not a real vertical face.
    if let Some(last) = raw.last_mut() {
        if last.1 <= 10.0 * settings.bisection_tol {
            last.1 = 0.0;
        }
    }

    let points = convex_closure(&raw)?;
    let max_sum_rate = points
        .iter()
        .map(|p| p.0 + p.1)
        .fold(0.0, f64::max);
    Ok(RegionBoundary {
        scheme: scheme.id(),
        scenario: scenario.to_string(),
        points,
        r1u_max,
        r2u_max,
        max_sum_rate,
    })
}

/// Upper-right convex hull of a nonnegative point set, augmented with its
/// axis projections `(r1uMax, 0)` and `(0, r2uMax)`.
///
/// The result is the Pareto frontier of the convex closure, sorted by
/// `r1u`: collinear interior points are dropped, and a region whose widest
/// point still has positive `r2u` ends with an explicit vertical drop to
/// the axis. Every input point is on or below the returned polyline.
pub fn convex_closure(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>, TracerError> {
    if points.is_empty() {
        return Err(TracerError::EmptyPointSet);
    }
    debug_assert!(
        points.iter().all(|p| p.0 >= 0.0 && p.1 >= 0.0),
        "hull input must be nonnegative"
    );
    let x_max = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let y_max = points.iter().map(|p| p.1).fold(0.0, f64::max);

    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.push((x_max, 0.0));
    pts.push((0.0, y_max));
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    // One representative per abscissa: the highest.
    pts.dedup_by(|next, kept| {
        if next.0 == kept.0 {
            kept.1 = kept.1.max(next.1);
            true
        } else {
            false
        }
    });

    // Monotone chain for the concave upper envelope; near-collinear points
    // (cross within 1e-12) count as collinear and are dropped.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= -1e-12 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let last = *hull.last().expect("nonempty");
    if last.1 > 0.0 {
        hull.push((last.0, 0.0));
    }
    Ok(hull)
}

/// Height of a traced boundary polyline at abscissa `x`: linear between
/// points, zero beyond the right end. A terminal vertical drop does not
/// shadow the face height at its abscissa.
pub fn boundary_height(points: &[(f64, f64)], x: f64) -> f64 {
    let mut pts = points;
    if pts.len() >= 2 && pts[pts.len() - 1].0 == pts[pts.len() - 2].0 {
        pts = &pts[..pts.len() - 1];
    }
    match pts {
        [] => 0.0,
        [only] => {
            if x <= only.0 {
                only.1
            } else {
                0.0
            }
        }
        _ => {
            let first = pts[0];
            let last = pts[pts.len() - 1];
            if x <= first.0 {
                return first.1;
            }
            if x > last.0 {
                return 0.0;
            }
            let idx = pts.partition_point(|p| p.0 < x);
            let (a, b) = (pts[idx - 1], pts[idx]);
            if b.0 == a.0 {
                return a.1.max(b.1);
            }
            a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
        }
    }
}

/// True if every point of `inner` lies on or under the `outer` polyline,
/// within `tol`; also reports the largest excursion above it.
pub fn contained_within(inner: &[(f64, f64)], outer: &[(f64, f64)], tol: f64) -> (bool, f64) {
    let mut worst = f64::NEG_INFINITY;
    for p in inner {
        worst = worst.max(p.1 - boundary_height(outer, p.0));
    }
    (worst <= tol + FLOAT_SLACK, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{capacity, SchemeId, SystemConfig};
    use crate::region::region_for;

    fn symmetric() -> SystemConfig {
        SystemConfig::uniform(1.0, 10.0).validated().unwrap()
    }

    #[test]
    fn lift_rates_examples() {
        let p = TrafficProfile::new(1.0, 1.0);
        assert_eq!(lift_rates(1.0, 1.0, &p), RateTuple::new(1.0, 1.0, 1.0, 1.0));
        let p = TrafficProfile::new(2.0, 0.5);
        assert_eq!(lift_rates(1.0, 0.0, &p), RateTuple::new(1.0, 2.0, 0.0, 0.0));
        assert_eq!(lift_rates(0.0, 0.0, &p), RateTuple::zero());
    }

    #[test]
    fn df4_axis_intercept_closed_form() {
        // With equal ratios the binding loads invert to
        // 1 / (2/C(20) + 1/C(10)).
        let cfg = symmetric();
        let scheme = region_for(SchemeId::Df4, &cfg);
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings::default();
        let r = max_rate_on_axis(scheme.as_ref(), &profile, &cfg, &settings, Axis::R1u).unwrap();
        let expected = 1.0 / (2.0 / capacity(20.0) + 1.0 / capacity(10.0));
        assert!((r - expected).abs() < 2e-6, "got {r}, expected {expected}");
    }

    #[test]
    fn af4_axis_intercept_closed_form() {
        let cfg = symmetric();
        let scheme = region_for(SchemeId::Af4, &cfg);
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings::default();
        let r = max_rate_on_axis(scheme.as_ref(), &profile, &cfg, &settings, Axis::R1u).unwrap();
        let expected = 0.5 * capacity(100.0 / 31.0);
        assert!((r - expected).abs() < 2e-6, "got {r}, expected {expected}");
    }

    #[test]
    fn disconnected_user_has_zero_intercept() {
        let cfg = SystemConfig {
            g11: 0.0,
            g12: 0.0,
            ..SystemConfig::uniform(1.0, 10.0)
        }
        .validated()
        .unwrap();
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings::default();
        for id in SchemeId::ALL {
            let scheme = region_for(id, &cfg);
            let r = max_rate_on_axis(scheme.as_ref(), &profile, &cfg, &settings, Axis::R1u).unwrap();
            assert_eq!(r, 0.0, "{id}");
        }
    }

    #[test]
    fn four_phase_boundaries_are_load_sum_lines() {
        // The closed forms are linear in the rates, so every non-axis
        // boundary point sits on the load-sum = 1 plane.
        let cfg = symmetric();
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings {
            r1_grid_points: 41,
            ..TracerSettings::default()
        };
        let af4 = trace_boundary(
            region_for(SchemeId::Af4, &cfg).as_ref(),
            &profile,
            &cfg,
            &settings,
            "t",
        )
        .unwrap();
        for &(x, y) in &af4.points {
            if x > 0.0 && y > 0.0 {
                let loads = crate::af::af4_loads(&lift_rates(x, y, &profile), &cfg);
                assert!((loads.l1 + loads.l2 - 1.0).abs() <= 10.0 * settings.bisection_tol);
            }
        }
        let df4 = trace_boundary(
            region_for(SchemeId::Df4, &cfg).as_ref(),
            &profile,
            &cfg,
            &settings,
            "t",
        )
        .unwrap();
        for &(x, y) in &df4.points {
            if x > 0.0 && y > 0.0 {
                let sum = crate::df::df4_loads(&lift_rates(x, y, &profile), &cfg).sum();
                assert!((sum - 1.0).abs() <= 10.0 * settings.bisection_tol);
            }
        }
    }

    #[test]
    fn two_phase_df_endpoints_match_four_phase() {
        let cfg = symmetric();
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings::default();
        let tol = 2.0 * settings.bisection_tol;
        for axis in [Axis::R1u, Axis::R2u] {
            let df2 = max_rate_on_axis(
                region_for(SchemeId::Df2, &cfg).as_ref(),
                &profile,
                &cfg,
                &settings,
                axis,
            )
            .unwrap();
            let df4 = max_rate_on_axis(
                region_for(SchemeId::Df4, &cfg).as_ref(),
                &profile,
                &cfg,
                &settings,
                axis,
            )
            .unwrap();
            assert!((df2 - df4).abs() <= tol, "axis {axis:?}: df2 {df2} vs df4 {df4}");
        }
    }

    #[test]
    fn traced_boundaries_satisfy_invariants() {
        let cfg = symmetric();
        let profile = TrafficProfile::symmetric(1.0);
        let settings = TracerSettings {
            r1_grid_points: 61,
            ..TracerSettings::default()
        };
        for id in SchemeId::ALL {
            let b = trace_boundary(region_for(id, &cfg).as_ref(), &profile, &cfg, &settings, "t")
                .unwrap();
            b.validate(10.0 * settings.bisection_tol).unwrap();
            assert!(b.max_sum_rate >= b.r1u_max.max(b.r2u_max) - 1e-9);
        }
    }

    #[test]
    fn denser_parameter_grid_never_shrinks_boundary() {
        let cfg = symmetric();
        let profile = TrafficProfile::new(2.0, 0.5);
        let coarse = TracerSettings {
            r1_grid_points: 21,
            alpha_grid_points: 21,
            tau_grid_points: 21,
            ..TracerSettings::default()
        };
        let fine = TracerSettings {
            alpha_grid_points: 41,
            tau_grid_points: 41,
            ..coarse
        };
        for id in [SchemeId::Af2, SchemeId::Df2] {
            let scheme = region_for(id, &cfg);
            let a = trace_boundary(scheme.as_ref(), &profile, &cfg, &coarse, "t").unwrap();
            let b = trace_boundary(scheme.as_ref(), &profile, &cfg, &fine, "t").unwrap();
            for &(x, y) in &a.points {
                let refined = boundary_height(&b.points, x);
                assert!(
                    refined >= y - coarse.bisection_tol,
                    "{id}: refined boundary dipped from {y} to {refined} at {x}"
                );
            }
        }
    }

    #[test]
    fn hull_drops_dominated_point() {
        let hull = convex_closure(&[(0.0, 1.0), (1.0, 0.0), (0.4, 0.4)]).unwrap();
        assert_eq!(hull, vec![(0.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn hull_collapses_collinear_interior() {
        let hull = convex_closure(&[(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]).unwrap();
        assert_eq!(hull, vec![(0.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn hull_keeps_vertical_face() {
        let hull = convex_closure(&[(0.0, 1.0), (0.8, 0.6)]).unwrap();
        assert_eq!(hull, vec![(0.0, 1.0), (0.8, 0.6), (0.8, 0.0)]);
    }

    #[test]
    fn hull_idempotent() {
        let inputs = vec![
            vec![(0.0, 1.0), (0.3, 0.9), (0.7, 0.5), (1.0, 0.0)],
            vec![(0.0, 1.0), (0.8, 0.6)],
            vec![(0.2, 0.3)],
        ];
        for pts in inputs {
            let once = convex_closure(&pts).unwrap();
            let twice = convex_closure(&once).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn hull_dominates_inputs() {
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let x = i as f64 * 0.025;
                (x, (1.0 - x * x).max(0.0))
            })
            .collect();
        let hull = convex_closure(&pts).unwrap();
        let (ok, worst) = contained_within(&pts, &hull, 1e-12);
        assert!(ok, "input point above its own hull by {worst}");
    }

    #[test]
    fn hull_rejects_empty_input() {
        assert!(matches!(convex_closure(&[]), Err(TracerError::EmptyPointSet)));
    }

    #[test]
    fn boundary_height_interpolates() {
        let pts = vec![(0.0, 1.0), (1.0, 0.5), (1.0, 0.0)];
        assert_eq!(boundary_height(&pts, 0.0), 1.0);
        assert!((boundary_height(&pts, 0.5) - 0.75).abs() < 1e-15);
        assert_eq!(boundary_height(&pts, 1.0), 0.5);
        assert_eq!(boundary_height(&pts, 1.1), 0.0);
    }

    #[test]
    fn malformed_region_is_reported() {
        struct Nothing;
        impl crate::region::SchemeRegion for Nothing {
            fn id(&self) -> SchemeId {
                SchemeId::Af4
            }
            fn params_used(&self) -> crate::region::ParamsUsed {
                crate::region::ParamsUsed::None
            }
            fn feasible_at(&self, _: &RateTuple, _: &crate::model::SchemeParams) -> bool {
                false
            }
            fn alpha_slack(&self, _: &RateTuple, _: f64) -> f64 {
                1.0
            }
        }
        let cfg = symmetric();
        let err = max_rate_on_axis(
            &Nothing,
            &TrafficProfile::symmetric(1.0),
            &cfg,
            &TracerSettings::default(),
            Axis::R1u,
        );
        assert!(matches!(err, Err(TracerError::ZeroRateInfeasible)));
    }

    #[test]
    fn disconnected_user_boundary_is_axis_segment() {
        let cfg = SystemConfig {
            g11: 0.0,
            g12: 0.0,
            ..SystemConfig::uniform(1.0, 10.0)
        }
        .validated()
        .unwrap();
        let b = trace_boundary(
            region_for(SchemeId::Df2, &cfg).as_ref(),
            &TrafficProfile::symmetric(1.0),
            &cfg,
            &TracerSettings::default(),
            "t",
        )
        .unwrap();
        assert_eq!(b.r1u_max, 0.0);
        assert!(b.r2u_max > 0.0);
        assert_eq!(b.points.len(), 2);
        assert_eq!(b.points[0], (0.0, b.r2u_max));
        assert_eq!(b.points[1], (0.0, 0.0));
        b.validate(1e-9).unwrap();
    }

    #[test]
    fn settings_validation() {
        let bad = TracerSettings {
            bisection_tol: 0.0,
            ..TracerSettings::default()
        };
        let cfg = symmetric();
        let scheme = region_for(SchemeId::Af4, &cfg);
        let err = max_rate_on_axis(
            scheme.as_ref(),
            &TrafficProfile::symmetric(1.0),
            &cfg,
            &bad,
            Axis::R1u,
        );
        assert!(matches!(err, Err(TracerError::BadSettings(_))));
    }
}
