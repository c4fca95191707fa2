//! Command-line front end: load a parameter set, run a computation, emit
//! plot-ready CSV/JSON datasets.
//!
//! Identical invocations produce byte-identical data files; run metadata
//! lives in a `run_meta.json` sidecar, never inside the datasets.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{Ctx, OutputFormat};

#[derive(Parser)]
#[command(
    name = "fwmix",
    version,
    about = "Radiation-pressure four-wave mixing in cavity optomechanics",
    long_about = "Simulates a pump-driven optomechanical cavity: stimulated Stokes/anti-Stokes \
                  gain spectra, normal-mode root trajectories, quantum-noise spectra and the \
                  photon coincidence rate g2(tau). Datasets are written as CSV (default) or JSON."
)]
struct Cli {
    /// Named parameter preset.
    #[arg(long, global = true, default_value = "aspelmeyer")]
    preset: String,

    /// Key-value config file applied on top of the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for datasets.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Dataset format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Relative tolerance for the adaptive integration pipeline.
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stokes/anti-Stokes gain and quadrature spectra vs probe offset.
    Gain {
        /// Pump powers in mW (comma separated).
        #[arg(long = "power-mw", value_delimiter = ',', default_values_t = vec![1.0, 6.9, 20.0])]
        power_mw: Vec<f64>,
        /// Lower edge of the probe grid, in units of omega_m.
        #[arg(long, default_value_t = 0.5)]
        grid_lo: f64,
        /// Upper edge of the probe grid, in units of omega_m.
        #[arg(long, default_value_t = 1.5)]
        grid_hi: f64,
        /// Probe grid point count.
        #[arg(long, default_value_t = 2001)]
        grid_points: usize,
    },
    /// Normal-mode root trajectories over a pump-power sweep.
    Roots {
        /// Power sweep as lo:hi:points in mW (or a single power).
        #[arg(long = "power-sweep-mw", default_value = "0:20:200")]
        power_sweep_mw: String,
        /// Bracket lo:hi in mW searched for the splitting onset.
        #[arg(long = "critical-bracket-mw", default_value = "1:20")]
        critical_bracket_mw: String,
    },
    /// Photon coincidence rate g2(tau) of the spontaneously generated field.
    G2 {
        /// Pump power in mW.
        #[arg(long = "power-mw", default_value_t = 1.0)]
        power_mw: f64,
        /// Largest delay on the tau grid, in microseconds.
        #[arg(long = "tau-max-us", default_value_t = 30.0)]
        tau_max_us: f64,
        /// Number of tau samples.
        #[arg(long = "tau-points", default_value_t = 601)]
        tau_points: usize,
        /// Bath temperature in K.
        #[arg(long = "temperature-k", default_value_t = 0.0)]
        temperature_k: f64,
    },
    /// Noise spectra n(omega), a(omega) over the adaptive frequency grid.
    Spectrum {
        /// Pump power in mW.
        #[arg(long = "power-mw", default_value_t = 1.0)]
        power_mw: f64,
    },
    /// Run the full dataset suite (roots, gains, g2, spectrum) in one go.
    Repro,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut params = fwmix::config::preset(&cli.preset)?;
    if let Some(path) = &cli.config {
        params = fwmix::config::apply_file(params, path)?;
    }
    let ctx = Ctx {
        params,
        preset: cli.preset.clone(),
        config_path: cli.config.clone(),
        out: cli.out.clone(),
        format: cli.format,
        tol: cli.tol,
    };
    match cli.command {
        Command::Gain {
            power_mw,
            grid_lo,
            grid_hi,
            grid_points,
        } => commands::run_gain(&ctx, &power_mw, grid_lo, grid_hi, grid_points),
        Command::Roots {
            power_sweep_mw,
            critical_bracket_mw,
        } => commands::run_roots(&ctx, &power_sweep_mw, &critical_bracket_mw),
        Command::G2 {
            power_mw,
            tau_max_us,
            tau_points,
            temperature_k,
        } => commands::run_g2(&ctx, power_mw, tau_max_us, tau_points, temperature_k),
        Command::Spectrum { power_mw } => commands::run_spectrum(&ctx, power_mw),
        Command::Repro => commands::run_repro(&ctx),
    }
}
