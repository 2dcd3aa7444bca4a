//! Uniform view of the four scheme regions for the boundary tracer and the
//! brute-force oracle.
//!
//! The four-phase regions are closed forms with no free parameters. The
//! two-phase AF region has the superposition split `α`; its phase split is
//! structurally one half. The two-phase DF region has `(α, τ)`, but at
//! fixed `α` its feasibility in `τ` is an interval, so the trait exposes a
//! per-`α` slack that already minimizes over `τ` exactly; only `α` is left
//! for grid search.

use crate::af::{af2_slack, af4_loads, af_equivalent_snrs, AfEquivalentSnrs};
use crate::df::{df2_feasible, df2_tau_window, df4_loads};
use crate::model::{RateTuple, SchemeId, SchemeParams, SystemConfig, FLOAT_SLACK};

/// Which scheme parameters a region actually reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamsUsed {
    /// Closed form, no free parameters.
    None,
    /// Superposition split only.
    Alpha,
    /// Superposition split and phase-1 duration.
    AlphaTau,
}

/// A scheme's 4-dimensional rate region with its parameters exposed.
pub trait SchemeRegion: Sync {
    fn id(&self) -> SchemeId;

    fn params_used(&self) -> ParamsUsed;

    /// Membership at fixed scheme parameters. Parameters the scheme does
    /// not use are ignored.
    fn feasible_at(&self, rates: &RateTuple, params: &SchemeParams) -> bool;

    /// Feasibility slack at fixed `alpha`, minimized exactly over any
    /// remaining parameters; nonpositive (within [`FLOAT_SLACK`]) means
    /// some parameter choice admits the tuple. Continuous in `alpha`, so a
    /// grid-plus-refinement search over it is well behaved.
    fn alpha_slack(&self, rates: &RateTuple, alpha: f64) -> f64;
}

/// Region object for a scheme over a validated configuration.
pub fn region_for(id: SchemeId, cfg: &SystemConfig) -> Box<dyn SchemeRegion> {
    match id {
        SchemeId::Af2 => Box::new(Af2Region::new(cfg)),
        SchemeId::Af4 => Box::new(Af4Region { cfg: *cfg }),
        SchemeId::Df2 => Box::new(Df2Region { cfg: *cfg }),
        SchemeId::Df4 => Box::new(Df4Region { cfg: *cfg }),
    }
}

pub struct Af2Region {
    snrs: AfEquivalentSnrs,
}

impl Af2Region {
    pub fn new(cfg: &SystemConfig) -> Self {
        Self {
            snrs: af_equivalent_snrs(cfg),
        }
    }
}

impl SchemeRegion for Af2Region {
    fn id(&self) -> SchemeId {
        SchemeId::Af2
    }

    fn params_used(&self) -> ParamsUsed {
        ParamsUsed::Alpha
    }

    fn feasible_at(&self, rates: &RateTuple, params: &SchemeParams) -> bool {
        crate::af::af2_feasible_with(rates, params.alpha, &self.snrs)
    }

    fn alpha_slack(&self, rates: &RateTuple, alpha: f64) -> f64 {
        af2_slack(rates, alpha, &self.snrs)
    }
}

pub struct Af4Region {
    cfg: SystemConfig,
}

impl SchemeRegion for Af4Region {
    fn id(&self) -> SchemeId {
        SchemeId::Af4
    }

    fn params_used(&self) -> ParamsUsed {
        ParamsUsed::None
    }

    fn feasible_at(&self, rates: &RateTuple, _params: &SchemeParams) -> bool {
        crate::af::af4_feasible(rates, &self.cfg)
    }

    fn alpha_slack(&self, rates: &RateTuple, _alpha: f64) -> f64 {
        let loads = af4_loads(rates, &self.cfg);
        loads.l1 + loads.l2 - 1.0
    }
}

pub struct Df2Region {
    cfg: SystemConfig,
}

impl SchemeRegion for Df2Region {
    fn id(&self) -> SchemeId {
        SchemeId::Df2
    }

    fn params_used(&self) -> ParamsUsed {
        ParamsUsed::AlphaTau
    }

    fn feasible_at(&self, rates: &RateTuple, params: &SchemeParams) -> bool {
        df2_feasible(rates, params, &self.cfg)
    }

    fn alpha_slack(&self, rates: &RateTuple, alpha: f64) -> f64 {
        let (tau_min, tau_max) = df2_tau_window(rates, alpha, &self.cfg);
        tau_min - tau_max
    }
}

pub struct Df4Region {
    cfg: SystemConfig,
}

impl SchemeRegion for Df4Region {
    fn id(&self) -> SchemeId {
        SchemeId::Df4
    }

    fn params_used(&self) -> ParamsUsed {
        ParamsUsed::None
    }

    fn feasible_at(&self, rates: &RateTuple, _params: &SchemeParams) -> bool {
        crate::df::df4_feasible(rates, &self.cfg)
    }

    fn alpha_slack(&self, rates: &RateTuple, _alpha: f64) -> f64 {
        df4_loads(rates, &self.cfg).sum() - 1.0
    }
}

/// Slack and membership must agree for every region.
#[inline]
pub(crate) fn slack_admits(slack: f64) -> bool {
    slack <= FLOAT_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn symmetric() -> SystemConfig {
        SystemConfig::uniform(1.0, 10.0).validated().unwrap()
    }

    #[test]
    fn slack_sign_matches_membership() {
        let cfg = symmetric();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for id in [SchemeId::Af2, SchemeId::Af4, SchemeId::Df4] {
            let region = region_for(id, &cfg);
            for _ in 0..800 {
                let rates = RateTuple::new(
                    rng.gen_range(0.0..1.6),
                    rng.gen_range(0.0..1.6),
                    rng.gen_range(0.0..1.6),
                    rng.gen_range(0.0..1.6),
                );
                let alpha = rng.gen_range(0.0..=1.0);
                let slack = region.alpha_slack(&rates, alpha);
                let params = SchemeParams::new(alpha, 0.5);
                match region.params_used() {
                    ParamsUsed::None => {
                        assert_eq!(slack_admits(slack), region.feasible_at(&rates, &params))
                    }
                    ParamsUsed::Alpha => {
                        assert_eq!(slack_admits(slack), region.feasible_at(&rates, &params))
                    }
                    ParamsUsed::AlphaTau => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn df2_slack_admits_iff_some_tau_admits() {
        let cfg = symmetric();
        let region = region_for(SchemeId::Df2, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..800 {
            let rates = RateTuple::new(
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..1.5),
                rng.gen_range(0.0..1.5),
            );
            let alpha = rng.gen_range(0.0..=1.0);
            let admits = slack_admits(region.alpha_slack(&rates, alpha));
            let any_tau = (0..=100)
                .any(|i| region.feasible_at(&rates, &SchemeParams::new(alpha, i as f64 / 100.0)));
            if any_tau {
                assert!(admits, "tau grid found a witness the window missed");
            }
            if !admits {
                assert!(!any_tau);
            }
        }
    }

    #[test]
    fn four_phase_regions_ignore_params() {
        let cfg = symmetric();
        let rates = RateTuple::new(0.5, 0.5, 0.5, 0.5);
        for id in [SchemeId::Af4, SchemeId::Df4] {
            let region = region_for(id, &cfg);
            let base = region.feasible_at(&rates, &SchemeParams::new(0.0, 0.0));
            for (a, t) in [(0.3, 0.9), (1.0, 0.1), (0.5, 0.5)] {
                assert_eq!(region.feasible_at(&rates, &SchemeParams::new(a, t)), base);
            }
        }
    }
}
