//! Command-line front end.
//!
//! Model parameters come from a JSON config; flags only control experiments.
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on invalid
//! input or any other error. `WIFI_MONETIZATION_THREADS` overrides the worker
//! count.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{self, artifact_name};
use crate::oracle::{self, DEFAULT_GRID_POINTS};
use crate::params::{MarketConfig, MarketParams};
use crate::platform::{solve_equilibrium, EquilibriumOutcome};
use crate::simulation::{run_market_simulation, write_tau_csv};

pub const THREADS_ENV: &str = "WIFI_MONETIZATION_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "wifi-monetization",
    version,
    about = "Equilibrium solver and experiments for advertising-sponsored public Wi-Fi"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON market config; defaults to the baseline venue.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for output artifacts.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the equilibrium for one market.
    Equilibrium {
        config: PathBuf,
        /// Emit machine-readable JSON.
        #[arg(long)]
        json: bool,
    },
    /// Solve on a (gamma, lambda) lattice and write long-format CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = experiments::DEFAULT_GAMMA_RANGE.0)]
        gamma_min: f64,
        #[arg(long, default_value_t = experiments::DEFAULT_GAMMA_RANGE.1)]
        gamma_max: f64,
        #[arg(long, default_value_t = experiments::DEFAULT_LAMBDA_RANGE.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = experiments::DEFAULT_LAMBDA_RANGE.1)]
        lambda_max: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Only used to name the output file.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo simulation at the equilibrium prices.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 500)]
        replications: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Optimal uniform sharing ratio over sampled venues.
    Uniform {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = experiments::DEFAULT_VO_COUNT)]
        vo_count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Equilibrium social welfare along a lambda grid.
    Welfare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.01)]
        lambda_min: f64,
        #[arg(long, default_value_t = 15.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Check every closed form against its brute-force oracle.
    Verify {
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Machine-readable output of `equilibrium --json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub params: MarketConfig,
    pub equilibrium: EquilibriumOutcome,
}

pub fn load_config(path: &Path) -> Result<MarketParams> {
    let text = std::fs::read_to_string(path)?;
    let cfg: MarketConfig = serde_json::from_str(&text)?;
    MarketParams::new(cfg)
}

fn load_or_baseline(path: Option<&Path>) -> Result<MarketParams> {
    path.map_or_else(|| Ok(MarketParams::baseline()), load_config)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a pool may already exist when `run` is called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parse `args` (including the program name) and run the command, writing
/// human output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    configure_threads();
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Equilibrium { config, json } => {
            let params = load_config(&config)?;
            let eq = solve_equilibrium(&params)?;
            if json {
                let report = EquilibriumReport {
                    params: params.to_config(),
                    equilibrium: eq,
                };
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                print_equilibrium(out, &eq)?;
            }
            Ok(EXIT_OK)
        }
        Command::Sweep {
            common,
            gamma_min,
            gamma_max,
            lambda_min,
            lambda_max,
            grid,
            seed,
        } => {
            let params = load_or_baseline(common.config.as_deref())?;
            let sweep = experiments::sweep(
                &params,
                (gamma_min, gamma_max),
                (lambda_min, lambda_max),
                grid,
            )?;
            let path = common.out_dir.join(artifact_name("sweep", seed));
            sweep.write_long_csv(std::fs::File::create(&path)?)?;
            writeln!(out, "wrote {} cells to {}", grid * grid, path.display())?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            common,
            replications,
            seed,
        } => {
            let params = load_or_baseline(common.config.as_deref())?;
            let eq = solve_equilibrium(&params)?;
            let report = run_market_simulation(&params, &eq, replications, seed)?;
            let json = common.out_dir.join(format!("simulate_{seed}.json"));
            report.write_json(&json)?;
            let tau = common.out_dir.join(artifact_name("tau", seed));
            write_tau_csv(&report.tau_curve, std::fs::File::create(&tau)?)?;
            writeln!(out, "replications       {}", report.replication_count)?;
            writeln!(
                out,
                "premium revenue    {:.6} (closed form {:.6})",
                report.empirical_vo_premium_revenue, report.expected_vo_premium_revenue
            )?;
            writeln!(
                out,
                "VO ad revenue      {:.6} (closed form {:.6})",
                report.empirical_vo_ad_revenue, report.expected_vo_ad_revenue
            )?;
            writeln!(
                out,
                "platform revenue   {:.6} (closed form {:.6})",
                report.empirical_platform_revenue, report.expected_platform_revenue
            )?;
            writeln!(
                out,
                "tagged AD view     {:.6} (closed form {:.6}, se {:.2e})",
                report.tagged_ad.empirical_nu,
                report.tagged_ad.closed_nu,
                report.tagged_ad.standard_error
            )?;
            writeln!(out, "wrote {} and {}", json.display(), tau.display())?;
            Ok(EXIT_OK)
        }
        Command::Uniform {
            common,
            vo_count,
            seed,
        } => {
            let params = load_or_baseline(common.config.as_deref())?;
            let res = experiments::uniform_sharing_optimum(&params, vo_count, seed)?;
            let path = common.out_dir.join(artifact_name("uniform", seed));
            res.write_curve_csv(std::fs::File::create(&path)?)?;
            writeln!(out, "delta_u_star                  {:.4}", res.delta_u_star)?;
            writeln!(
                out,
                "expected platform revenue     {:.6}",
                res.expected_platform_revenue
            )?;
            writeln!(
                out,
                "with VO-specific sharing      {:.6}",
                res.vo_specific_platform_revenue
            )?;
            writeln!(out, "wrote {}", path.display())?;
            Ok(EXIT_OK)
        }
        Command::Welfare {
            common,
            lambda_min,
            lambda_max,
            grid,
        } => {
            let params = match common.config.as_deref() {
                Some(p) => load_config(p)?,
                None => experiments::welfare_example_params(),
            };
            let curve = experiments::welfare_lambda_curve(&params, (lambda_min, lambda_max), grid)?;
            let path = common.out_dir.join(artifact_name("welfare", 0));
            experiments::write_pairs_csv(
                ["lambda", "social_welfare"],
                &curve,
                std::fs::File::create(&path)?,
            )?;
            writeln!(out, "wrote {} points to {}", curve.len(), path.display())?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            draws,
            seed,
            grid_points,
            out_dir,
        } => {
            if draws == 0 {
                return Err(Error::invalid("draws", "must be at least 1"));
            }
            let (ad, _) = oracle::verify_ad_price(draws, seed, grid_points)?;
            let (wifi, _) = oracle::verify_wifi_price(draws, seed, grid_points)?;
            let (sharing, _) = oracle::verify_sharing(draws, seed, grid_points)?;
            let cells = oracle::zeta_experiment(1..=15, 1..=15, draws, seed)?;
            let path = out_dir.join(artifact_name("zeta", seed));
            oracle::write_zeta_csv_file(&cells, &path)?;
            let suites = [ad, wifi, sharing, oracle::zeta_report(&cells)];
            for s in &suites {
                writeln!(
                    out,
                    "{} {:<11} draws={:<6} max_rel_gap={:.3e} tolerance={:.1e}",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.draws,
                    s.max_rel_gap,
                    s.tolerance
                )?;
            }
            writeln!(out, "wrote {}", path.display())?;
            Ok(if suites.iter().all(|s| s.passed) {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

fn print_equilibrium(out: &mut dyn Write, eq: &EquilibriumOutcome) -> Result<()> {
    writeln!(out, "omega               {:.6}", eq.omega)?;
    writeln!(out, "regime              {}", eq.regime.name())?;
    writeln!(out, "delta_star          {:.6}", eq.delta_star)?;
    writeln!(out, "p_f_star            {:.6}", eq.p_f_star)?;
    writeln!(out, "p_a                 {:.6}", eq.p_a)?;
    writeln!(out, "phi_a               {:.6}", eq.phi_a)?;
    writeln!(out, "phi_f               {:.6}", eq.phi_f)?;
    writeln!(out, "platform_revenue    {:.6}", eq.platform_revenue)?;
    writeln!(out, "vo_ad_revenue       {:.6}", eq.vo_ad_revenue)?;
    writeln!(out, "vo_premium_revenue  {:.6}", eq.vo_premium_revenue)?;
    writeln!(out, "vo_total_revenue    {:.6}", eq.vo_total_revenue)?;
    writeln!(out, "social_welfare      {:.6}", eq.social_welfare)?;
    Ok(())
}
