//! Amplify-and-forward rate regions.
//!
//! With AF relays the end-to-end system collapses, after self-interference
//! cancellation, into one equivalent broadcast channel (BS to both users
//! through the relays) and one equivalent multiple-access channel (both
//! users to the BS). The two-phase scheme is then a superposition-coded BC
//! region plus an MA region, each at half time; the four-phase reference
//! scheme time-shares two independent two-way AF sessions and admits a
//! closed form in two load fractions `l1 + l2 <= 1`.

use crate::model::{capacity, le, RateTuple, SystemConfig, FLOAT_SLACK};

/// Equivalent single-hop SNRs of the AF two-phase scheme, plus the relay
/// amplification factors they derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfEquivalentSnrs {
    /// Broadcast-channel SNR seen by U1 / U2.
    pub s1: f64,
    pub s2: f64,
    /// Multiple-access-channel SNR of U1 / U2 at the BS.
    pub sp1: f64,
    pub sp2: f64,
    /// Relay power scaling applied to the phase-1 receive signal.
    pub beta1: f64,
    pub beta2: f64,
}

/// Equivalent BC and MA SNRs for a validated (unit-noise) configuration.
pub fn af_equivalent_snrs(cfg: &SystemConfig) -> AfEquivalentSnrs {
    debug_assert!((cfg.noise_var - 1.0).abs() < 1e-12, "config must be validated");
    // Received power at each relay in phase 1 (user + BS + noise).
    let d1 = cfg.g11 * cfg.p1 + cfg.g12 * cfg.p_b + 1.0;
    let d2 = cfg.g21 * cfg.p2 + cfg.g22 * cfg.p_b + 1.0;

    let s1 = cfg.g11 * cfg.g12 * cfg.p_b * cfg.p_r1
        / (cfg.g11 * (cfg.p1 + cfg.p_r1) + cfg.g12 * cfg.p_b + 1.0);
    let s2 = cfg.g21 * cfg.g22 * cfg.p_b * cfg.p_r2
        / (cfg.g21 * (cfg.p2 + cfg.p_r2) + cfg.g22 * cfg.p_b + 1.0);

    // MA SNRs: per-user signal power over the common amplified-noise floor.
    let num1 = cfg.g11 * cfg.g12 * cfg.p1 * cfg.p_r1 / d1;
    let num2 = cfg.g21 * cfg.g22 * cfg.p2 * cfg.p_r2 / d2;
    let den = cfg.g12 * cfg.p_r1 / d1 + cfg.g22 * cfg.p_r2 / d2 + 1.0;

    AfEquivalentSnrs {
        s1,
        s2,
        sp1: num1 / den,
        sp2: num2 / den,
        beta1: cfg.p_r1 / d1.sqrt(),
        beta2: cfg.p_r2 / d2.sqrt(),
    }
}

/// Membership of a rate tuple in the two-phase AF region at superposition
/// split `alpha`.
///
/// The BC side decodes in degradedness order: the stronger equivalent
/// channel cancels the weaker user's layer first. When the two BC SNRs tie
/// (within [`FLOAT_SLACK`]) both decode orders are admissible and the union
/// of the two branch regions is used.
pub fn af2_feasible(rates: &RateTuple, alpha: f64, cfg: &SystemConfig) -> bool {
    assert!(
        (0.0..=1.0).contains(&alpha),
        "superposition split must lie in [0, 1], got {alpha}"
    );
    let snrs = af_equivalent_snrs(cfg);
    af2_feasible_with(rates, alpha, &snrs)
}

pub(crate) fn af2_feasible_with(rates: &RateTuple, alpha: f64, snrs: &AfEquivalentSnrs) -> bool {
    let uplink = le(rates.r1u, 0.5 * capacity(snrs.sp1))
        && le(rates.r2u, 0.5 * capacity(snrs.sp2))
        && le(rates.r1u + rates.r2u, 0.5 * capacity(snrs.sp1 + snrs.sp2));
    if !uplink {
        return false;
    }
    let (b1, b2) = af2_downlink_bounds(alpha, snrs);
    let in_b1 = le(rates.r1d, b1.0) && le(rates.r2d, b1.1);
    let in_b2 = le(rates.r1d, b2.0) && le(rates.r2d, b2.1);
    if (snrs.s1 - snrs.s2).abs() <= FLOAT_SLACK {
        in_b1 || in_b2
    } else if snrs.s1 > snrs.s2 {
        in_b1
    } else {
        in_b2
    }
}

/// Downlink rate bounds `(R1d, R2d)` of the two decode orders at split
/// `alpha`: first element assumes `S1 > S2`, second `S1 <= S2`.
fn af2_downlink_bounds(alpha: f64, snrs: &AfEquivalentSnrs) -> ((f64, f64), (f64, f64)) {
    let b1 = (
        0.5 * capacity(snrs.s1 * alpha),
        0.5 * capacity(snrs.s2 * (1.0 - alpha) / (snrs.s2 * alpha + 1.0)),
    );
    let b2 = (
        0.5 * capacity(snrs.s1 * alpha / (snrs.s1 * (1.0 - alpha) + 1.0)),
        0.5 * capacity(snrs.s2 * (1.0 - alpha)),
    );
    (b1, b2)
}

/// Worst constraint violation of the two-phase AF region at fixed `alpha`;
/// nonpositive means feasible. Used by the boundary tracer to rank and
/// refine candidate splits.
pub(crate) fn af2_slack(rates: &RateTuple, alpha: f64, snrs: &AfEquivalentSnrs) -> f64 {
    let up = (rates.r1u - 0.5 * capacity(snrs.sp1))
        .max(rates.r2u - 0.5 * capacity(snrs.sp2))
        .max(rates.r1u + rates.r2u - 0.5 * capacity(snrs.sp1 + snrs.sp2));
    let (b1, b2) = af2_downlink_bounds(alpha, snrs);
    let d1 = (rates.r1d - b1.0).max(rates.r2d - b1.1);
    let d2 = (rates.r1d - b2.0).max(rates.r2d - b2.1);
    let down = if (snrs.s1 - snrs.s2).abs() <= FLOAT_SLACK {
        d1.min(d2)
    } else if snrs.s1 > snrs.s2 {
        d1
    } else {
        d2
    };
    up.max(down)
}

/// Load fractions of the four-phase AF closed form: the share of the frame
/// each user's two-way session needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfFourPhaseLoads {
    pub l1: f64,
    pub l2: f64,
}

/// A rate demand over the capacity that serves it.
///
/// An absent flow over a dead link is no load (`0/0 -> 0`); a positive
/// demand on a dead link can never be served (`x/0 -> inf`).
#[inline]
pub(crate) fn load_ratio(num: f64, cap: f64) -> f64 {
    if num <= 0.0 {
        0.0
    } else if cap <= 0.0 {
        f64::INFINITY
    } else {
        num / cap
    }
}

/// End-to-end AF capacities of the four flows in the four-phase scheme
/// (uplink and downlink of each user), before time scaling.
pub(crate) fn af4_capacities(cfg: &SystemConfig) -> [f64; 4] {
    debug_assert!((cfg.noise_var - 1.0).abs() < 1e-12, "config must be validated");
    let c1u = capacity(
        cfg.g11 * cfg.g12 * cfg.p1 * cfg.p_r1
            / (cfg.g11 * cfg.p1 + cfg.g12 * (cfg.p_r1 + cfg.p_b) + 1.0),
    );
    let c1d = capacity(
        cfg.g11 * cfg.g12 * cfg.p_b * cfg.p_r1
            / (cfg.g12 * cfg.p_b + cfg.g11 * (cfg.p_r1 + cfg.p1) + 1.0),
    );
    let c2u = capacity(
        cfg.g21 * cfg.g22 * cfg.p2 * cfg.p_r2
            / (cfg.g21 * cfg.p2 + cfg.g22 * (cfg.p_r2 + cfg.p_b) + 1.0),
    );
    let c2d = capacity(
        cfg.g21 * cfg.g22 * cfg.p_b * cfg.p_r2
            / (cfg.g22 * cfg.p_b + cfg.g21 * (cfg.p_r2 + cfg.p2) + 1.0),
    );
    [c1u, c1d, c2u, c2d]
}

/// Four-phase AF load fractions of a rate tuple.
pub fn af4_loads(rates: &RateTuple, cfg: &SystemConfig) -> AfFourPhaseLoads {
    let [c1u, c1d, c2u, c2d] = af4_capacities(cfg);
    AfFourPhaseLoads {
        l1: load_ratio(2.0 * rates.r1u, c1u).max(load_ratio(2.0 * rates.r1d, c1d)),
        l2: load_ratio(2.0 * rates.r2u, c2u).max(load_ratio(2.0 * rates.r2d, c2d)),
    }
}

/// Closed-form membership in the four-phase AF region: `l1 + l2 <= 1`.
pub fn af4_feasible(rates: &RateTuple, cfg: &SystemConfig) -> bool {
    let loads = af4_loads(rates, cfg);
    le(loads.l1 + loads.l2, 1.0)
}

/// Oracle form of the four-phase AF region before the session time ratio
/// `η` is eliminated: scans a uniform `η` grid and accepts if any split
/// supports all four flows. Agrees with [`af4_feasible`] away from the
/// `l1 + l2 = 1` boundary (within one grid cell).
pub fn af4_feasible_sweep(rates: &RateTuple, cfg: &SystemConfig, eta_grid_size: usize) -> bool {
    assert!(eta_grid_size >= 2, "eta grid needs at least 2 points");
    let [c1u, c1d, c2u, c2d] = af4_capacities(cfg);
    let n = eta_grid_size;
    for k in 0..n {
        let eta = k as f64 / (n - 1) as f64;
        if le(rates.r1u, 0.5 * eta * c1u)
            && le(rates.r1d, 0.5 * eta * c1d)
            && le(rates.r2u, 0.5 * (1.0 - eta) * c2u)
            && le(rates.r2d, 0.5 * (1.0 - eta) * c2d)
        {
            return true;
        }
    }
    false
}
