//! Decode-and-forward rate regions.
//!
//! In the two-phase scheme each relay decodes in phase 1 over a multiple-
//! access channel that carries its user's uplink plus the superposed BS
//! downlinks. The relay may either treat the other user's downlink layer
//! as noise (two-user MA) or decode it too (three-user MA); the achievable
//! set per relay is the union of the two. Phase 2 is a pair of broadcasts
//! with side information whose rates are bounded by single-link capacities
//! on the downlink side and by the relay-to-BS MA region on the uplink
//! side. The four-phase reference scheme runs the two two-way sessions in
//! four time slices and collapses into the closed form
//! `k1 + k2 + k3 + k4 <= 1`.
//!
//! The BS splits its transmit power as `α` for U1's layer and `1 - α` for
//! U2's layer, so relay 1 sees split `α` and relay 2 sees `1 - α`.

use crate::af::load_ratio;
use crate::model::{capacity, le, RateTuple, SchemeParams, SystemConfig};

/// One of the two relay stations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relay {
    R1,
    R2,
}

impl Relay {
    /// Maps the 1-based station number used in reports onto the enum.
    /// Panics for anything other than 1 or 2.
    pub fn from_index(index: u8) -> Relay {
        match index {
            1 => Relay::R1,
            2 => Relay::R2,
            other => panic!("relay index must be 1 or 2, got {other}"),
        }
    }
}

/// Phase-1 quantities seen at one relay: received user signal power,
/// received BS signal power, the relay's own downlink share of the BS
/// split, and the rates its constraints touch `(r_iu, r_id, r_jd)`.
struct RelayView {
    user_pwr: f64,
    bs_pwr: f64,
    own_split: f64,
    riu: f64,
    rid: f64,
    rjd: f64,
}

fn relay_view(relay: Relay, rates: &RateTuple, alpha: f64, cfg: &SystemConfig) -> RelayView {
    match relay {
        Relay::R1 => RelayView {
            user_pwr: cfg.g11 * cfg.p1,
            bs_pwr: cfg.g12 * cfg.p_b,
            own_split: alpha,
            riu: rates.r1u,
            rid: rates.r1d,
            rjd: rates.r2d,
        },
        Relay::R2 => RelayView {
            user_pwr: cfg.g21 * cfg.p2,
            bs_pwr: cfg.g22 * cfg.p_b,
            own_split: 1.0 - alpha,
            riu: rates.r2u,
            rid: rates.r2d,
            rjd: rates.r1d,
        },
    }
}

fn check_params(alpha: f64, tau: f64) {
    assert!(
        (0.0..=1.0).contains(&alpha) && (0.0..=1.0).contains(&tau),
        "scheme parameters must lie in [0, 1], got alpha={alpha}, tau={tau}"
    );
}

/// Phase-1 membership at one relay when the other user's downlink layer is
/// treated as noise: a two-user MA region over `(R_i^u, R_i^d)` scaled by
/// the phase-1 fraction `tau`. Puts no constraint on the other user.
pub fn df2_ma_treat_noise_member(
    rates: &RateTuple,
    relay: Relay,
    alpha: f64,
    tau: f64,
    cfg: &SystemConfig,
) -> bool {
    check_params(alpha, tau);
    let v = relay_view(relay, rates, alpha, cfg);
    let floor = (1.0 - v.own_split) * v.bs_pwr + 1.0;
    le(v.riu, tau * capacity(v.user_pwr / floor))
        && le(v.rid, tau * capacity(v.own_split * v.bs_pwr / floor))
        && le(v.riu + v.rid, tau * capacity((v.user_pwr + v.own_split * v.bs_pwr) / floor))
}

/// Phase-1 membership at one relay when it decodes all three signals it
/// hears (its user's uplink and both downlink layers): a three-user MA
/// region over `(R_i^u, R_i^d, R_j^d)` scaled by `tau`. The other user's
/// uplink stays unconstrained.
pub fn df2_ma_decode_all_member(
    rates: &RateTuple,
    relay: Relay,
    alpha: f64,
    tau: f64,
    cfg: &SystemConfig,
) -> bool {
    check_params(alpha, tau);
    let v = relay_view(relay, rates, alpha, cfg);
    let own = v.own_split * v.bs_pwr;
    let other = (1.0 - v.own_split) * v.bs_pwr;
    le(v.riu, tau * capacity(v.user_pwr))
        && le(v.rid, tau * capacity(own))
        && le(v.rjd, tau * capacity(other))
        && le(v.riu + v.rid, tau * capacity(v.user_pwr + own))
        && le(v.riu + v.rjd, tau * capacity(v.user_pwr + other))
        && le(v.rid + v.rjd, tau * capacity(v.bs_pwr))
        && le(v.riu + v.rid + v.rjd, tau * capacity(v.user_pwr + v.bs_pwr))
}

/// Phase-2 membership: relay broadcasts with side information at the
/// receivers, scaled by the phase-2 fraction `1 - tau`. Downlinks are
/// bounded by their relay-to-user link capacity; uplinks by the two-relay
/// MA region at the BS.
pub fn df2_phase2_member(rates: &RateTuple, tau: f64, cfg: &SystemConfig) -> bool {
    check_params(0.0, tau);
    let s = 1.0 - tau;
    le(rates.r1d, s * capacity(cfg.g11 * cfg.p_r1))
        && le(rates.r2d, s * capacity(cfg.g21 * cfg.p_r2))
        && le(rates.r1u, s * capacity(cfg.g12 * cfg.p_r1))
        && le(rates.r2u, s * capacity(cfg.g22 * cfg.p_r2))
        && le(
            rates.r1u + rates.r2u,
            s * capacity(cfg.g12 * cfg.p_r1 + cfg.g22 * cfg.p_r2),
        )
}

/// Membership of a rate tuple in the two-phase DF region at fixed scheme
/// parameters, before convex closure over `(α, τ)`: each relay admits the
/// tuple in at least one of its two MA modes, and phase 2 admits it.
pub fn df2_feasible(rates: &RateTuple, params: &SchemeParams, cfg: &SystemConfig) -> bool {
    let relay_ok = |relay| {
        df2_ma_treat_noise_member(rates, relay, params.alpha, params.tau, cfg)
            || df2_ma_decode_all_member(rates, relay, params.alpha, params.tau, cfg)
    };
    relay_ok(Relay::R1) && relay_ok(Relay::R2) && df2_phase2_member(rates, params.tau, cfg)
}

/// Smallest phase-1 fraction one relay needs for the tuple in a given MA
/// mode; `inf` when no fraction suffices (dead link with positive demand).
fn tau_needed_treat_noise(v: &RelayView) -> f64 {
    let floor = (1.0 - v.own_split) * v.bs_pwr + 1.0;
    load_ratio(v.riu, capacity(v.user_pwr / floor))
        .max(load_ratio(v.rid, capacity(v.own_split * v.bs_pwr / floor)))
        .max(load_ratio(
            v.riu + v.rid,
            capacity((v.user_pwr + v.own_split * v.bs_pwr) / floor),
        ))
}

fn tau_needed_decode_all(v: &RelayView) -> f64 {
    let own = v.own_split * v.bs_pwr;
    let other = (1.0 - v.own_split) * v.bs_pwr;
    load_ratio(v.riu, capacity(v.user_pwr))
        .max(load_ratio(v.rid, capacity(own)))
        .max(load_ratio(v.rjd, capacity(other)))
        .max(load_ratio(v.riu + v.rid, capacity(v.user_pwr + own)))
        .max(load_ratio(v.riu + v.rjd, capacity(v.user_pwr + other)))
        .max(load_ratio(v.rid + v.rjd, capacity(v.bs_pwr)))
        .max(load_ratio(v.riu + v.rid + v.rjd, capacity(v.user_pwr + v.bs_pwr)))
}

/// Phase-2 fraction the tuple needs.
fn phase2_fraction_needed(rates: &RateTuple, cfg: &SystemConfig) -> f64 {
    load_ratio(rates.r1d, capacity(cfg.g11 * cfg.p_r1))
        .max(load_ratio(rates.r2d, capacity(cfg.g21 * cfg.p_r2)))
        .max(load_ratio(rates.r1u, capacity(cfg.g12 * cfg.p_r1)))
        .max(load_ratio(rates.r2u, capacity(cfg.g22 * cfg.p_r2)))
        .max(load_ratio(
            rates.r1u + rates.r2u,
            capacity(cfg.g12 * cfg.p_r1 + cfg.g22 * cfg.p_r2),
        ))
}

/// Exact range of phase-1 fractions `τ` admitting the tuple at fixed `α`,
/// as `(tau_min, tau_max)`; the tuple is two-phase-DF feasible at this `α`
/// iff `tau_min <= tau_max`.
///
/// Every constraint is either `τ >= demand/capacity` (phase 1, where each
/// relay takes the laxer of its two MA modes) or `1 - τ >= demand/capacity`
/// (phase 2), so feasibility in `τ` is an interval and needs no grid.
pub fn df2_tau_window(rates: &RateTuple, alpha: f64, cfg: &SystemConfig) -> (f64, f64) {
    check_params(alpha, 0.0);
    let need = |relay| {
        let v = relay_view(relay, rates, alpha, cfg);
        tau_needed_treat_noise(&v).min(tau_needed_decode_all(&v))
    };
    let tau_min = need(Relay::R1).max(need(Relay::R2));
    let tau_max = 1.0 - phase2_fraction_needed(rates, cfg);
    (tau_min, tau_max)
}

/// Load fractions of the four-phase DF closed form: the share of the frame
/// each of the four phases needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfFourPhaseLoads {
    /// Phase 1: MA from U1 and BS to RS1.
    pub k1: f64,
    /// Phase 2: broadcast from RS1.
    pub k2: f64,
    /// Phase 3: MA from U2 and BS to RS2.
    pub k3: f64,
    /// Phase 4: broadcast from RS2.
    pub k4: f64,
}

impl DfFourPhaseLoads {
    pub fn sum(&self) -> f64 {
        self.k1 + self.k2 + self.k3 + self.k4
    }
}

/// Four-phase DF load fractions of a rate tuple.
pub fn df4_loads(rates: &RateTuple, cfg: &SystemConfig) -> DfFourPhaseLoads {
    debug_assert!((cfg.noise_var - 1.0).abs() < 1e-12, "config must be validated");
    let k1 = load_ratio(rates.r1u, capacity(cfg.g11 * cfg.p1))
        .max(load_ratio(rates.r1d, capacity(cfg.g12 * cfg.p_b)))
        .max(load_ratio(
            rates.r1u + rates.r1d,
            capacity(cfg.g11 * cfg.p1 + cfg.g12 * cfg.p_b),
        ));
    let k2 = load_ratio(rates.r1d, capacity(cfg.g11 * cfg.p_r1))
        .max(load_ratio(rates.r1u, capacity(cfg.g12 * cfg.p_r1)));
    let k3 = load_ratio(rates.r2u, capacity(cfg.g21 * cfg.p2))
        .max(load_ratio(rates.r2d, capacity(cfg.g22 * cfg.p_b)))
        .max(load_ratio(
            rates.r2u + rates.r2d,
            capacity(cfg.g21 * cfg.p2 + cfg.g22 * cfg.p_b),
        ));
    let k4 = load_ratio(rates.r2d, capacity(cfg.g21 * cfg.p_r2))
        .max(load_ratio(rates.r2u, capacity(cfg.g22 * cfg.p_r2)));
    DfFourPhaseLoads { k1, k2, k3, k4 }
}

/// Closed-form membership in the four-phase DF region:
/// `k1 + k2 + k3 + k4 <= 1`.
pub fn df4_feasible(rates: &RateTuple, cfg: &SystemConfig) -> bool {
    le(df4_loads(rates, cfg).sum(), 1.0)
}

/// Oracle form of the four-phase DF region before the phase durations are
/// eliminated: searches a uniform lattice of `(τ1, τ2, τ3)` with
/// `τ4 = 1 - τ1 - τ2 - τ3 >= 0` for a split meeting every phase demand.
///
/// The innermost lattice dimension collapses to a bounds check: at fixed
/// `(τ1, τ2)` the `τ3` constraints are `τ3 >= k3` and
/// `τ3 <= 1 - τ1 - τ2 - k4`, so a lattice `τ3` exists iff the rounded-up
/// lower bound does not exceed the rounded-down upper bound.
///
/// Because three coordinates round up by as much as one cell each, the
/// sweep can reject feasible tuples whose load sum lies within three cells
/// of 1; outside that shell it agrees with [`df4_feasible`].
pub fn df4_feasible_sweep(rates: &RateTuple, cfg: &SystemConfig, grid_size: usize) -> bool {
    assert!(grid_size >= 2, "simplex grid needs at least 2 points per dimension");
    let loads = df4_loads(rates, cfg);
    if !loads.sum().is_finite() {
        return false;
    }
    let n = (grid_size - 1) as f64;
    let eps = crate::model::FLOAT_SLACK;
    let first_at_least = |k: f64| ((k - eps) * n).ceil().max(0.0) as usize;
    let j1_min = first_at_least(loads.k1);
    let j2_min = first_at_least(loads.k2);
    let j3_min = first_at_least(loads.k3);
    for j1 in j1_min..grid_size {
        let tau1 = j1 as f64 / n;
        for j2 in j2_min..grid_size {
            let tau2 = j2 as f64 / n;
            if tau1 + tau2 > 1.0 + eps {
                break;
            }
            let j3_max = ((1.0 - tau1 - tau2 - loads.k4 + eps) * n).floor();
            if j3_max >= j3_min as f64 {
                return true;
            }
        }
    }
    false
}

/// Corner points of the phase-2 multiple-access region at the BS, reached
/// by the two successive-decoding orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaCornerPoints {
    /// `(R1u, R2u)` when the BS decodes RS1 first (favors user 2).
    pub point_a: (f64, f64),
    /// `(R1u, R2u)` when the BS decodes RS2 first (favors user 1).
    pub point_b: (f64, f64),
}

/// The two MA corner points of the relay-to-BS uplink channel.
pub fn ma_corner_points(cfg: &SystemConfig) -> MaCornerPoints {
    debug_assert!((cfg.noise_var - 1.0).abs() < 1e-12, "config must be validated");
    let s1 = cfg.g12 * cfg.p_r1;
    let s2 = cfg.g22 * cfg.p_r2;
    MaCornerPoints {
        point_a: (capacity(s1 / (s2 + 1.0)), capacity(s2)),
        point_b: (capacity(s1), capacity(s2 / (s1 + 1.0))),
    }
}

/// Rate tuples achieved in phase 2 by time-sharing the two corner-point
/// codewords, with both downlinks held at their single-user capacities.
///
/// Returns, scaled by the phase-2 fraction `1 - tau`: the upper axis
/// endpoint above corner A, `samples` points sweeping the MA sum-capacity
/// face from corner A to corner B, and the right axis endpoint below
/// corner B. Every returned tuple satisfies [`df2_phase2_member`] at the
/// same `tau`.
pub fn time_share_reconstruct(cfg: &SystemConfig, tau: f64, samples: usize) -> Vec<RateTuple> {
    check_params(0.0, tau);
    assert!(samples >= 2, "need at least the two corner points");
    let corners = ma_corner_points(cfg);
    let (a, b) = (corners.point_a, corners.point_b);
    let scale = 1.0 - tau;
    let c1d = scale * capacity(cfg.g11 * cfg.p_r1);
    let c2d = scale * capacity(cfg.g21 * cfg.p_r2);

    let mut tuples = Vec::with_capacity(samples + 2);
    tuples.push(RateTuple::new(0.0, c1d, scale * a.1, c2d));
    for i in 0..samples {
        let t = 1.0 - i as f64 / (samples - 1) as f64;
        let r1u = scale * (t * a.0 + (1.0 - t) * b.0);
        let r2u = scale * (t * a.1 + (1.0 - t) * b.1);
        tuples.push(RateTuple::new(r1u, c1d, r2u, c2d));
    }
    tuples.push(RateTuple::new(scale * b.0, c1d, 0.0, c2d));
    tuples
}
