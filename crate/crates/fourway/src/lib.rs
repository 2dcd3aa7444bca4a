//! Achievable rate regions of four-way relaying.
//!
//! Two mobile stations each run two-way traffic with one base station
//! through dedicated, mutually non-interfering relays. This crate computes
//! the four-dimensional achievable rate regions of four schemes — two-phase
//! and four-phase, each with amplify-and-forward or decode-and-forward
//! relays — and traces their two-dimensional uplink boundaries under fixed
//! downlink-uplink traffic ratios.
//!
//! - [`model`]: configuration, rates, capacities and shared invariants.
//! - [`af`] / [`df`]: the per-scheme feasibility predicates and closed
//!   forms.
//! - [`region`]: one trait over all four schemes for the numeric layers.
//! - [`tracer`]: bisection + parameter search that turns a predicate into
//!   a boundary.
//! - [`oracle`]: brute-force lattice sweeps cross-validating the tracer.
//! - [`scenario`]: named reference setups, CSV/report emission.

pub mod af;
pub mod df;
pub mod model;
pub mod oracle;
pub mod region;
pub mod scenario;
pub mod tracer;

pub use model::{
    capacity, RateTuple, RegionBoundary, SchemeId, SchemeParams, SystemConfig, TrafficProfile,
};
pub use region::{region_for, SchemeRegion};
pub use scenario::{builtin_scenario, builtin_scenarios, run_scenario, RunOptions, Scenario};
pub use tracer::{trace_boundary, TracerSettings};
