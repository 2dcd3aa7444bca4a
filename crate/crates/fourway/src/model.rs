//! Channel/power configuration, rate tuples and the single-link capacity
//! primitive shared by every relaying scheme.
//!
//! The cell carries two mobile stations, each exchanging two-way traffic
//! with one base station through a dedicated, non-interfering relay:
//!
//! ```text
//!   U1 --h11-- RS1 --h12-- BS --h22-- RS2 --h21-- U2
//! ```
//!
//! Only the squared channel magnitudes enter the rate formulas, so the
//! configuration stores the gains `|h_l|^2` directly. All powers are in
//! linear scale; validation normalizes them by the noise variance so that
//! every downstream formula can assume unit noise.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Comparison slack for feasibility predicates and branch selection.
///
/// Region boundaries are suprema; closing the schemes' strict rate
/// inequalities at this tolerance keeps bisection well defined without
/// admitting genuinely infeasible tuples at double precision.
pub const FLOAT_SLACK: f64 = 1e-12;

/// `a <= b` up to [`FLOAT_SLACK`].
#[inline]
pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b + FLOAT_SLACK
}

/// Single-link AWGN capacity `C(γ) = log2(1 + γ)` in bits per channel use.
///
/// Panics if `gamma` is negative or non-finite; every SNR produced by the
/// scheme algebra is nonnegative, so a violation is a caller bug.
#[inline]
pub fn capacity(gamma: f64) -> f64 {
    assert!(
        gamma.is_finite() && gamma >= 0.0,
        "SNR must be finite and nonnegative, got {gamma}"
    );
    gamma.ln_1p() / std::f64::consts::LN_2
}

/// Validation failure for a [`SystemConfig`] field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("field `{field}` must be nonnegative and finite, got {value}")]
    NegativeOrNonFinite { field: &'static str, value: f64 },
    #[error("field `noise_var` must be positive and finite, got {value}")]
    BadNoiseVariance { value: f64 },
}

/// Squared channel gains, transmit powers and noise variance of the cell.
///
/// Field names follow the link indices: `g11` is `|h11|^2` (U1–RS1), `g12`
/// is `|h12|^2` (RS1–BS), `g22` is `|h22|^2` (BS–RS2) and `g21` is
/// `|h21|^2` (RS2–U2). Powers are per transmitting node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub g21: f64,
    /// Transmit power of U1.
    pub p1: f64,
    /// Transmit power of RS1.
    pub p_r1: f64,
    /// Transmit power of the BS.
    pub p_b: f64,
    /// Transmit power of RS2.
    pub p_r2: f64,
    /// Transmit power of U2.
    pub p2: f64,
    /// Receiver noise variance (defaults to 1).
    #[serde(default = "default_noise_var")]
    pub noise_var: f64,
}

fn default_noise_var() -> f64 {
    1.0
}

impl SystemConfig {
    /// Configuration with identical gains on all four links and identical
    /// transmit power at all five nodes, unit noise.
    pub fn uniform(gain: f64, power: f64) -> Self {
        Self {
            g11: gain,
            g12: gain,
            g22: gain,
            g21: gain,
            p1: power,
            p_r1: power,
            p_b: power,
            p_r2: power,
            p2: power,
            noise_var: 1.0,
        }
    }

    /// Checks every invariant and returns the configuration normalized to
    /// unit noise (each power divided by `noise_var` once).
    ///
    /// Normalization is idempotent; the scheme formulas assume it has been
    /// applied and hard-code the `+ 1` noise term.
    pub fn validated(self) -> Result<Self, ConfigError> {
        let nonneg = [
            ("g11", self.g11),
            ("g12", self.g12),
            ("g22", self.g22),
            ("g21", self.g21),
            ("p1", self.p1),
            ("p_r1", self.p_r1),
            ("p_b", self.p_b),
            ("p_r2", self.p_r2),
            ("p2", self.p2),
        ];
        for (field, value) in nonneg {
            if !value.is_finite() || value < 0.0 {
                return Err(ConfigError::NegativeOrNonFinite { field, value });
            }
        }
        if !self.noise_var.is_finite() || self.noise_var <= 0.0 {
            return Err(ConfigError::BadNoiseVariance {
                value: self.noise_var,
            });
        }
        let s = self.noise_var;
        Ok(Self {
            p1: self.p1 / s,
            p_r1: self.p_r1 / s,
            p_b: self.p_b / s,
            p_r2: self.p_r2 / s,
            p2: self.p2 / s,
            noise_var: 1.0,
            ..self
        })
    }
}

/// A point of the four-dimensional rate region, bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateTuple {
    /// Uplink rate of U1.
    pub r1u: f64,
    /// Downlink rate of U1.
    pub r1d: f64,
    /// Uplink rate of U2.
    pub r2u: f64,
    /// Downlink rate of U2.
    pub r2d: f64,
}

impl RateTuple {
    pub fn new(r1u: f64, r1d: f64, r2u: f64, r2d: f64) -> Self {
        for (name, r) in [("r1u", r1u), ("r1d", r1d), ("r2u", r2u), ("r2d", r2d)] {
            assert!(r.is_finite() && r >= 0.0, "rate {name} must be finite and nonnegative, got {r}");
        }
        Self { r1u, r1d, r2u, r2d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Coordinatewise `self <= other`.
    pub fn dominated_by(&self, other: &RateTuple) -> bool {
        self.r1u <= other.r1u && self.r1d <= other.r1d && self.r2u <= other.r2u && self.r2d <= other.r2d
    }
}

/// Fixed downlink-to-uplink demand ratios `R_i^d = θ_i · R_i^u` used to cut
/// a two-dimensional uplink slice out of the four-dimensional region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficProfile {
    pub theta1: f64,
    pub theta2: f64,
}

impl TrafficProfile {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        assert!(
            theta1 > 0.0 && theta1.is_finite() && theta2 > 0.0 && theta2.is_finite(),
            "downlink-uplink ratios must be positive and finite, got ({theta1}, {theta2})"
        );
        Self { theta1, theta2 }
    }

    pub fn symmetric(theta: f64) -> Self {
        Self::new(theta, theta)
    }
}

/// Free parameters of the two-phase schemes: the superposition power split
/// `α` at the BS and the phase-1 time fraction `τ` (DF only; AF splits time
/// evenly by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub alpha: f64,
    pub tau: f64,
}

impl SchemeParams {
    pub fn new(alpha: f64, tau: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&alpha) && (0.0..=1.0).contains(&tau),
            "scheme parameters must lie in [0, 1], got alpha={alpha}, tau={tau}"
        );
        Self { alpha, tau }
    }
}

/// The four relaying schemes the tracer knows how to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// Two-phase amplify-and-forward.
    Af2,
    /// Four-phase amplify-and-forward (time-shared two-way relaying).
    Af4,
    /// Two-phase decode-and-forward.
    Df2,
    /// Four-phase decode-and-forward.
    Df4,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Af2, SchemeId::Af4, SchemeId::Df2, SchemeId::Df4];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Af2 => "af2",
            SchemeId::Af4 => "af4",
            SchemeId::Df2 => "df2",
            SchemeId::Df4 => "df4",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "af2" => Ok(SchemeId::Af2),
            "af4" => Ok(SchemeId::Af4),
            "df2" => Ok(SchemeId::Df2),
            "df4" => Ok(SchemeId::Df4),
            other => Err(format!("unknown scheme `{other}` (expected af2, af4, df2 or df4)")),
        }
    }
}

/// Violation of a [`RegionBoundary`] structural invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("boundary has no points")]
    Empty,
    #[error("boundary must start on the r2u axis: first point has r1u = {0}")]
    MissingLeftEndpoint(f64),
    #[error("boundary must end on the r1u axis: last point has r2u = {0}")]
    MissingRightEndpoint(f64),
    #[error("r1u must increase along the boundary (violated at index {0})")]
    NotSorted(usize),
    #[error("r2u must not increase along the boundary (violated at index {0})")]
    NotMonotone(usize),
    #[error("boundary is not convex at index {index}: second difference {defect}")]
    NotConvex { index: usize, defect: f64 },
}

/// Traced upper boundary of a two-dimensional uplink rate region.
///
/// `points` is the Pareto frontier ordered by increasing `r1u`, starting on
/// the `r2u` axis and ending on the `r1u` axis. Regions whose maximum `r1u`
/// is limited by a rate-independent constraint have a genuine vertical face
/// there; it is represented by one final point that repeats the last `r1u`
/// at `r2u = 0`. Everywhere else `r1u` is strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBoundary {
    pub scheme: SchemeId,
    pub scenario: String,
    /// `(r1u, r2u)` frontier points.
    pub points: Vec<(f64, f64)>,
    /// Intercept on the `r1u` axis.
    pub r1u_max: f64,
    /// Intercept on the `r2u` axis.
    pub r2u_max: f64,
    /// Largest `r1u + r2u` over the frontier points.
    pub max_sum_rate: f64,
}

impl RegionBoundary {
    /// Checks ordering, endpoints, monotonicity and convexity.
    ///
    /// `tol` bounds how far the endpoints may sit off their axes; the
    /// convexity check allows discrete second differences up to `1e-9`.
    pub fn validate(&self, tol: f64) -> Result<(), BoundaryError> {
        let pts = &self.points;
        let first = *pts.first().ok_or(BoundaryError::Empty)?;
        let last = *pts.last().expect("nonempty");
        if first.0.abs() > tol {
            return Err(BoundaryError::MissingLeftEndpoint(first.0));
        }
        if last.1.abs() > tol {
            return Err(BoundaryError::MissingRightEndpoint(last.1));
        }
        for (i, w) in pts.windows(2).enumerate() {
            let dx = w[1].0 - w[0].0;
            let terminal_drop = i + 2 == pts.len() && dx == 0.0 && w[1].1 < w[0].1;
            if dx <= 0.0 && !terminal_drop {
                return Err(BoundaryError::NotSorted(i + 1));
            }
            if w[1].1 > w[0].1 + FLOAT_SLACK {
                return Err(BoundaryError::NotMonotone(i + 1));
            }
        }
        // Slopes must be nonincreasing; a terminal vertical drop is -inf.
        let mut prev_slope = f64::INFINITY;
        for (i, w) in pts.windows(2).enumerate() {
            let dx = w[1].0 - w[0].0;
            let slope = if dx > 0.0 {
                (w[1].1 - w[0].1) / dx
            } else {
                f64::NEG_INFINITY
            };
            let defect = slope - prev_slope;
            if defect > 1e-9 {
                return Err(BoundaryError::NotConvex { index: i + 1, defect });
            }
            prev_slope = slope;
        }
        Ok(())
    }
}

/// Analytic upper bound on any single rate (and loose bound on rate sums
/// searched by the tracer): the sum of the four single-link capacities.
/// Every scheme constraint caps each rate by a time-scaled subset of these.
pub fn rate_upper_bound(cfg: &SystemConfig) -> f64 {
    capacity(cfg.g11 * cfg.p1)
        + capacity(cfg.g12 * cfg.p_r1)
        + capacity(cfg.g22 * cfg.p_r2)
        + capacity(cfg.g21 * cfg.p2)
}
