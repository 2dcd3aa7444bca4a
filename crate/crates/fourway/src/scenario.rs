//! Scenario runner: traces the requested scheme boundaries for a named
//! cell configuration, cross-checks them against the brute-force sweep,
//! and emits plottable boundary data plus a machine-parseable report.
//!
//! One CSV per (scenario, scheme) with header `r1u,r2u` and 12 significant
//! digits, so repeated runs diff clean. The report's containment verdicts
//! are recomputed from the emitted files, not from in-memory state.

use crate::model::{rate_upper_bound, SchemeId, SystemConfig, TrafficProfile};
use crate::oracle::{compare_boundaries, sweep_region, SweepReport};
use crate::region::region_for;
use crate::tracer::{contained_within, convex_closure, trace_boundary, TracerError, TracerSettings};
use serde::Deserialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Tolerance for the report's pairwise containment verdicts (bits/use).
pub const CONTAINMENT_TOL: f64 = 1e-4;

/// A named cell configuration with its traffic profile and optional
/// tracer overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub config: SystemConfig,
    pub profile: TrafficProfile,
    pub settings: Option<TracerSettings>,
}

impl Scenario {
    fn new(name: &str, config: SystemConfig, profile: TrafficProfile) -> Self {
        Self {
            name: name.to_string(),
            config,
            profile,
            settings: None,
        }
    }

    /// Loads a scenario from a TOML file mirroring the [`Scenario`]
    /// fields; tracer keys are optional and patch the defaults.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile =
            toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        if !(file.profile.theta1 > 0.0 && file.profile.theta2 > 0.0) {
            return Err(ScenarioError::Parse(
                "downlink-uplink ratios must be positive".to_string(),
            ));
        }
        let mut settings = None;
        if let Some(t) = file.tracer {
            let mut s = TracerSettings::default();
            if let Some(v) = t.r1_grid_points {
                s.r1_grid_points = v;
            }
            if let Some(v) = t.bisection_tol {
                s.bisection_tol = v;
            }
            if let Some(v) = t.alpha_grid_points {
                s.alpha_grid_points = v;
            }
            if let Some(v) = t.tau_grid_points {
                s.tau_grid_points = v;
            }
            if let Some(v) = t.refine_iterations {
                s.refine_iterations = v;
            }
            settings = Some(s);
        }
        Ok(Scenario {
            name: file.name,
            config: file.config,
            profile: file.profile,
            settings,
        })
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }
}

#[derive(Debug, Deserialize)]
struct ScenarioFile {
    name: String,
    config: SystemConfig,
    profile: TrafficProfile,
    tracer: Option<TracerOverrides>,
}

#[derive(Debug, Deserialize)]
struct TracerOverrides {
    r1_grid_points: Option<usize>,
    bisection_tol: Option<f64>,
    alpha_grid_points: Option<usize>,
    tau_grid_points: Option<usize>,
    refine_iterations: Option<usize>,
}

/// The six reference scenarios: three SNR profiles at balanced traffic and
/// three traffic profiles at balanced SNR, all at per-node power 10.
pub fn builtin_scenarios() -> Vec<Scenario> {
    let uniform = SystemConfig::uniform(1.0, 10.0);
    let weak_bs_links = SystemConfig {
        g12: 0.1,
        g22: 0.1,
        ..uniform
    };
    let weak_user_links = SystemConfig {
        g11: 0.1,
        g21: 0.1,
        ..uniform
    };
    vec![
        Scenario::new("fig4", uniform, TrafficProfile::new(1.0, 1.0)),
        Scenario::new("fig5", weak_bs_links, TrafficProfile::new(1.0, 1.0)),
        Scenario::new("fig6", weak_user_links, TrafficProfile::new(1.0, 1.0)),
        Scenario::new("fig7", uniform, TrafficProfile::new(0.5, 0.5)),
        Scenario::new("fig8", uniform, TrafficProfile::new(2.0, 2.0)),
        Scenario::new("fig9", uniform, TrafficProfile::new(2.0, 0.5)),
    ]
}

/// Scenario lookup by name among the built-ins.
pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

/// Per-run switches of the scenario runner.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Schemes to trace; normalized to a fixed order internally.
    pub schemes: Vec<SchemeId>,
    /// Tracer overrides taking precedence over the scenario's own.
    pub settings: Option<TracerSettings>,
    /// Run the brute-force sweeps and fail the run on containment misses.
    pub oracle: bool,
    /// Rate lattice of the sweep (points per axis).
    pub oracle_rate_grid: usize,
    /// Parameter lattice of the sweep (points per parameter axis).
    pub oracle_param_grid: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            schemes: SchemeId::ALL.to_vec(),
            settings: None,
            oracle: true,
            oracle_rate_grid: 201,
            oracle_param_grid: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid configuration: {0}")]
    Config(#[from] crate::model::ConfigError),
    #[error("tracing failed: {0}")]
    Tracer(#[from] TracerError),
    #[error("cannot use path `{path}`: {reason}")]
    Io { path: PathBuf, reason: String },
    #[error("bad scenario description: {0}")]
    Parse(String),
    #[error("no schemes requested")]
    NoSchemes,
}

/// Per-scheme summary of the traced boundary and its oracle cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSummary {
    pub scheme: SchemeId,
    pub r1u_max: f64,
    pub r2u_max: f64,
    pub max_sum_rate: f64,
    pub oracle: Option<SweepReport>,
    /// Boundary file this summary was derived from.
    pub file: PathBuf,
}

/// A `outer ⊇ inner` verdict recomputed from the emitted boundary files.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentVerdict {
    pub outer: SchemeId,
    pub inner: SchemeId,
    pub contained: bool,
    /// Largest excursion of the inner boundary above the outer hull
    /// (negative when strictly inside).
    pub max_violation: f64,
}

/// Everything one scenario run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub schemes: Vec<SchemeSummary>,
    pub containment: Vec<ContainmentVerdict>,
    pub report_file: PathBuf,
    /// True if any oracle cross-check reported containment violations.
    pub oracle_failed: bool,
}

fn fmt_rate(x: f64) -> String {
    format!("{x:.11e}")
}

/// Traces every requested scheme of a scenario into `out_dir` and writes
/// the comparison report next to the boundary files.
pub fn run_scenario(
    scenario: &Scenario,
    opts: &RunOptions,
    out_dir: &Path,
) -> Result<RunReport, ScenarioError> {
    if opts.schemes.is_empty() {
        return Err(ScenarioError::NoSchemes);
    }
    let cfg = scenario.config.validated()?;
    let settings = opts
        .settings
        .or(scenario.settings)
        .unwrap_or_default();
    let mut schemes: Vec<SchemeId> = SchemeId::ALL
        .into_iter()
        .filter(|id| opts.schemes.contains(id))
        .collect();
    schemes.dedup();

    fs::create_dir_all(out_dir).map_err(|e| ScenarioError::Io {
        path: out_dir.to_path_buf(),
        reason: e.to_string(),
    })?;

    // Trace and emit one boundary file per scheme.
    let mut summaries = Vec::with_capacity(schemes.len());
    for &id in &schemes {
        let region = region_for(id, &cfg);
        let boundary = trace_boundary(region.as_ref(), &scenario.profile, &cfg, &settings, &scenario.name)?;
        let path = out_dir.join(format!("{}_{}.csv", scenario.name, id));
        let mut text = String::from("r1u,r2u\n");
        for &(x, y) in &boundary.points {
            let _ = writeln!(text, "{},{}", fmt_rate(x), fmt_rate(y));
        }
        fs::write(&path, text).map_err(|e| ScenarioError::Io {
            path: path.clone(),
            reason: e.to_string(),
        })?;

        let oracle = if opts.oracle {
            let frontier = sweep_region(
                region.as_ref(),
                &scenario.profile,
                &cfg,
                opts.oracle_rate_grid,
                opts.oracle_param_grid,
            );
            let cell = rate_upper_bound(&cfg) / (opts.oracle_rate_grid - 1) as f64;
            let mut report = compare_boundaries(&frontier, &boundary, 2.0 * cell);
            report.rate_grid = opts.oracle_rate_grid;
            report.param_grid = opts.oracle_param_grid;
            Some(report)
        } else {
            None
        };

        summaries.push(SchemeSummary {
            scheme: id,
            r1u_max: boundary.r1u_max,
            r2u_max: boundary.r2u_max,
            max_sum_rate: boundary.max_sum_rate,
            oracle,
            file: path,
        });
    }

    // Containment verdicts from the files just written.
    let mut containment = Vec::new();
    for (outer, inner) in [
        (SchemeId::Df2, SchemeId::Df4),
        (SchemeId::Df2, SchemeId::Af2),
        (SchemeId::Df4, SchemeId::Af4),
    ] {
        if schemes.contains(&outer) && schemes.contains(&inner) {
            containment.push(containment_from_files(
                out_dir, &scenario.name, outer, inner,
            )?);
        }
    }

    let oracle_failed = summaries
        .iter()
        .filter_map(|s| s.oracle.as_ref())
        .any(|r| r.containment_violations > 0);

    let report_file = out_dir.join(format!("{}_report.txt", scenario.name));
    let text = render_report(scenario, &summaries, &containment);
    fs::write(&report_file, text).map_err(|e| ScenarioError::Io {
        path: report_file.clone(),
        reason: e.to_string(),
    })?;

    Ok(RunReport {
        scenario: scenario.name.clone(),
        schemes: summaries,
        containment,
        report_file,
        oracle_failed,
    })
}

/// Reads a boundary CSV back into points.
pub fn read_boundary_csv(path: &Path) -> Result<Vec<(f64, f64)>, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != "r1u,r2u" {
                return Err(ScenarioError::Parse(format!(
                    "{}: expected header `r1u,r2u`, found `{line}`",
                    path.display()
                )));
            }
            continue;
        }
        let mut cols = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64, ScenarioError> {
            s.and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| ScenarioError::Parse(format!("{}: bad row `{line}`", path.display())))
        };
        let x = parse(cols.next())?;
        let y = parse(cols.next())?;
        points.push((x, y));
    }
    if points.is_empty() {
        return Err(ScenarioError::Parse(format!(
            "{}: no boundary points",
            path.display()
        )));
    }
    Ok(points)
}

fn containment_from_files(
    out_dir: &Path,
    scenario: &str,
    outer: SchemeId,
    inner: SchemeId,
) -> Result<ContainmentVerdict, ScenarioError> {
    let outer_pts = read_boundary_csv(&out_dir.join(format!("{scenario}_{outer}.csv")))?;
    let inner_pts = read_boundary_csv(&out_dir.join(format!("{scenario}_{inner}.csv")))?;
    let outer_hull = convex_closure(&outer_pts)?;
    let (contained, max_violation) = contained_within(&inner_pts, &outer_hull, CONTAINMENT_TOL);
    Ok(ContainmentVerdict {
        outer,
        inner,
        contained,
        max_violation,
    })
}

fn render_report(
    scenario: &Scenario,
    summaries: &[SchemeSummary],
    containment: &[ContainmentVerdict],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario = {}", scenario.name);
    let _ = writeln!(out, "theta1 = {}", scenario.profile.theta1);
    let _ = writeln!(out, "theta2 = {}", scenario.profile.theta2);
    let names: Vec<&str> = summaries.iter().map(|s| s.scheme.as_str()).collect();
    let _ = writeln!(out, "schemes = {}", names.join(","));
    for s in summaries {
        let id = s.scheme;
        let _ = writeln!(out, "scheme.{id}.r1u_max = {}", fmt_rate(s.r1u_max));
        let _ = writeln!(out, "scheme.{id}.r2u_max = {}", fmt_rate(s.r2u_max));
        let _ = writeln!(out, "scheme.{id}.max_sum_rate = {}", fmt_rate(s.max_sum_rate));
        if let Some(o) = &s.oracle {
            let _ = writeln!(out, "scheme.{id}.oracle_gap = {}", fmt_rate(o.hausdorff_gap));
            let _ = writeln!(
                out,
                "scheme.{id}.oracle_violations = {}",
                o.containment_violations
            );
        }
    }
    for v in containment {
        let key = format!("containment.{}_contains_{}", v.outer, v.inner);
        let _ = writeln!(out, "{key} = {}", v.contained);
        let _ = writeln!(out, "{key}.max_violation = {}", fmt_rate(v.max_violation));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn builtin_scenarios_match_reference_setups() {
        let all = builtin_scenarios();
        assert_eq!(all.len(), 6);
        let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9"]);

        let fig4 = &all[0];
        assert_eq!(
            (fig4.config.g11, fig4.config.g12, fig4.config.g22, fig4.config.g21),
            (1.0, 1.0, 1.0, 1.0)
        );
        for p in [fig4.config.p1, fig4.config.p_r1, fig4.config.p_b, fig4.config.p_r2, fig4.config.p2] {
            assert_eq!(p, 10.0);
        }
        assert_eq!((fig4.profile.theta1, fig4.profile.theta2), (1.0, 1.0));

        let fig5 = &all[1];
        assert_eq!((fig5.config.g12, fig5.config.g22), (0.1, 0.1));
        assert_eq!((fig5.config.g11, fig5.config.g21), (1.0, 1.0));

        let fig6 = &all[2];
        assert_eq!((fig6.config.g11, fig6.config.g21), (0.1, 0.1));

        let fig9 = &all[5];
        assert_eq!((fig9.profile.theta1, fig9.profile.theta2), (2.0, 0.5));
    }

    #[test]
    fn scenario_toml_round_trip() {
        let text = r#"
            name = "custom"
            [config]
            g11 = 1.0
            g12 = 0.5
            g22 = 0.5
            g21 = 1.0
            p1 = 10.0
            p_r1 = 10.0
            p_b = 12.0
            p_r2 = 10.0
            p2 = 10.0
            [profile]
            theta1 = 2.0
            theta2 = 1.0
            [tracer]
            r1_grid_points = 51
        "#;
        let s = Scenario::from_toml_str(text).unwrap();
        assert_eq!(s.name, "custom");
        assert_eq!(s.config.g12, 0.5);
        assert_eq!(s.config.noise_var, 1.0);
        assert_eq!(s.profile.theta1, 2.0);
        let settings = s.settings.unwrap();
        assert_eq!(settings.r1_grid_points, 51);
        assert_eq!(settings.alpha_grid_points, TracerSettings::default().alpha_grid_points);
    }

    #[test]
    fn scenario_toml_rejects_bad_profile() {
        let text = r#"
            name = "bad"
            [config]
            g11 = 1.0
            g12 = 1.0
            g22 = 1.0
            g21 = 1.0
            p1 = 10.0
            p_r1 = 10.0
            p_b = 10.0
            p_r2 = 10.0
            p2 = 10.0
            [profile]
            theta1 = 0.0
            theta2 = 1.0
        "#;
        assert!(matches!(
            Scenario::from_toml_str(text),
            Err(ScenarioError::Parse(_))
        ));
    }

    fn quick_opts(schemes: Vec<SchemeId>) -> RunOptions {
        RunOptions {
            schemes,
            settings: Some(TracerSettings {
                r1_grid_points: 31,
                alpha_grid_points: 17,
                tau_grid_points: 17,
                refine_iterations: 2,
                bisection_tol: 1e-6,
            }),
            oracle: false,
            ..RunOptions::default()
        }
    }

    #[test]
    fn run_writes_boundaries_and_report() {
        let dir = tempdir().unwrap();
        let scenario = builtin_scenario("fig4").unwrap();
        let report = run_scenario(
            &scenario,
            &quick_opts(vec![SchemeId::Df4, SchemeId::Df2]),
            dir.path(),
        )
        .unwrap();
        assert_eq!(report.schemes.len(), 2);
        assert!(!report.oracle_failed);
        assert_eq!(report.containment.len(), 1);
        assert!(report.containment[0].contained);
        // df2 strictly extends df4 away from the axes.
        let df2 = report.schemes.iter().find(|s| s.scheme == SchemeId::Df2).unwrap();
        let df4 = report.schemes.iter().find(|s| s.scheme == SchemeId::Df4).unwrap();
        assert!(df2.max_sum_rate > df4.max_sum_rate + 1e-3);

        let report_text = fs::read_to_string(&report.report_file).unwrap();
        assert!(report_text.contains("scenario = fig4"));
        assert!(report_text.contains("containment.df2_contains_df4 = true"));

        let pts = read_boundary_csv(&df4.file).unwrap();
        assert!(pts.len() >= 2);
        assert_eq!(pts[0].0, 0.0);
    }

    #[test]
    fn run_single_scheme_has_no_containment_section() {
        let dir = tempdir().unwrap();
        let scenario = builtin_scenario("fig4").unwrap();
        let report =
            run_scenario(&scenario, &quick_opts(vec![SchemeId::Df4]), dir.path()).unwrap();
        assert!(report.containment.is_empty());
        let text = fs::read_to_string(&report.report_file).unwrap();
        assert!(!text.contains("containment."));
    }

    #[test]
    fn run_rejects_unwritable_path() {
        let dir = tempdir().unwrap();
        let blocker = dir.path().join("occupied");
        fs::write(&blocker, "not a directory").unwrap();
        let scenario = builtin_scenario("fig4").unwrap();
        let err = run_scenario(&scenario, &quick_opts(vec![SchemeId::Af4]), &blocker).unwrap_err();
        match err {
            ScenarioError::Io { path, .. } => assert_eq!(path, blocker),
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let scenario = builtin_scenario("fig7").unwrap();
        let opts = quick_opts(vec![SchemeId::Af2, SchemeId::Df4]);
        let dir_a = tempdir().unwrap();
        let dir_b = tempdir().unwrap();
        let a = run_scenario(&scenario, &opts, dir_a.path()).unwrap();
        let b = run_scenario(&scenario, &opts, dir_b.path()).unwrap();
        for (sa, sb) in a.schemes.iter().zip(&b.schemes) {
            assert_eq!(fs::read(&sa.file).unwrap(), fs::read(&sb.file).unwrap());
        }
        assert_eq!(
            fs::read(&a.report_file).unwrap(),
            fs::read(&b.report_file).unwrap()
        );
    }
}
