//! Command-line scenario runner: traces the achievable-rate boundaries of
//! the four-way relaying schemes, cross-checks them against brute-force
//! sweeps and writes plottable CSV data plus a key-value report per
//! scenario.
//!
//! Exit codes: 0 on success, 1 on validation/usage errors, 2 when an
//! oracle cross-check found containment violations.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fourway::scenario::{builtin_scenario, builtin_scenarios, run_scenario, RunOptions, Scenario};
use fourway::tracer::TracerSettings;
use fourway::SchemeId;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable overriding the default output directory.
const OUT_DIR_ENV: &str = "FOURWAY_OUT";

#[derive(Parser)]
#[command(name = "fourway", version, about = "Four-way relaying rate-region scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Trace scheme boundaries for one or more scenarios.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario name (repeatable); all six when neither this nor
    /// --config is given.
    #[arg(long = "scenario")]
    scenarios: Vec<String>,

    /// Custom scenario description file (TOML, repeatable).
    #[arg(long = "config")]
    configs: Vec<PathBuf>,

    /// Schemes to trace.
    #[arg(long, value_delimiter = ',', default_values = ["af2", "af4", "df2", "df4"])]
    schemes: Vec<SchemeId>,

    /// Output directory (default: $FOURWAY_OUT or ./fourway-out).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Skip the brute-force oracle cross-checks.
    #[arg(long)]
    no_oracle: bool,

    /// Oracle rate lattice points per axis.
    #[arg(long, default_value_t = 201)]
    rate_grid: usize,

    /// Oracle parameter lattice points per parameter axis.
    #[arg(long, default_value_t = 41)]
    param_grid: usize,

    /// Boundary abscissae per trace.
    #[arg(long)]
    r1_grid: Option<usize>,

    /// Bisection tolerance in bits per channel use.
    #[arg(long)]
    tol: Option<f64>,

    /// Coarse grid points of the superposition-split search.
    #[arg(long)]
    alpha_grid: Option<usize>,

    /// Grid points reserved for a gridded phase-split search.
    #[arg(long)]
    tau_grid: Option<usize>,

    /// Local refinement rounds of the parameter search.
    #[arg(long)]
    refine: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::List => {
            for s in builtin_scenarios() {
                println!(
                    "{}: gains ({}, {}, {}, {}), powers ({}, {}, {}, {}, {}), theta ({}, {})",
                    s.name,
                    s.config.g11,
                    s.config.g12,
                    s.config.g22,
                    s.config.g21,
                    s.config.p1,
                    s.config.p_r1,
                    s.config.p_b,
                    s.config.p_r2,
                    s.config.p2,
                    s.profile.theta1,
                    s.profile.theta2,
                );
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let mut scenarios: Vec<Scenario> = Vec::new();
    for name in &args.scenarios {
        match builtin_scenario(name) {
            Some(s) => scenarios.push(s),
            None => {
                eprintln!("error: unknown scenario `{name}` (see `fourway list`)");
                return ExitCode::from(1);
            }
        }
    }
    for path in &args.configs {
        match Scenario::from_toml_file(path) {
            Ok(s) => scenarios.push(s),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    }
    if scenarios.is_empty() {
        scenarios = builtin_scenarios();
    }

    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fourway-out"));

    let settings = tracer_overrides(&args);
    let opts = RunOptions {
        schemes: args.schemes.clone(),
        settings,
        oracle: !args.no_oracle,
        oracle_rate_grid: args.rate_grid,
        oracle_param_grid: args.param_grid,
    };

    let mut oracle_failed = false;
    for scenario in &scenarios {
        match run_scenario(scenario, &opts, &out_dir) {
            Ok(report) => {
                for s in &report.schemes {
                    let oracle = match &s.oracle {
                        Some(o) if o.containment_violations > 0 => {
                            format!(", oracle VIOLATIONS: {}", o.containment_violations)
                        }
                        Some(o) => format!(", oracle gap {:.4}", o.hausdorff_gap),
                        None => String::new(),
                    };
                    println!(
                        "{} {}: r1u_max {:.6}, r2u_max {:.6}, max sum rate {:.6}{oracle}",
                        report.scenario, s.scheme, s.r1u_max, s.r2u_max, s.max_sum_rate
                    );
                }
                for v in &report.containment {
                    println!(
                        "{} containment {} ⊇ {}: {} (max violation {:.2e})",
                        report.scenario, v.outer, v.inner, v.contained, v.max_violation
                    );
                }
                println!("{} report: {}", report.scenario, report.report_file.display());
                oracle_failed |= report.oracle_failed;
            }
            Err(e) => {
                eprintln!("error: scenario `{}`: {e}", scenario.name);
                return ExitCode::from(1);
            }
        }
    }
    if oracle_failed {
        eprintln!("error: oracle cross-checks reported containment violations");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn tracer_overrides(args: &RunArgs) -> Option<TracerSettings> {
    let any = args.r1_grid.is_some()
        || args.tol.is_some()
        || args.alpha_grid.is_some()
        || args.tau_grid.is_some()
        || args.refine.is_some();
    if !any {
        return None;
    }
    let mut s = TracerSettings::default();
    if let Some(v) = args.r1_grid {
        s.r1_grid_points = v;
    }
    if let Some(v) = args.tol {
        s.bisection_tol = v;
    }
    if let Some(v) = args.alpha_grid {
        s.alpha_grid_points = v;
    }
    if let Some(v) = args.tau_grid {
        s.tau_grid_points = v;
    }
    if let Some(v) = args.refine {
        s.refine_iterations = v;
    }
    Some(s)
}
