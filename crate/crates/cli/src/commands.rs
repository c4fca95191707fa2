//! Implementation of the CLI subcommands.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

use fwmix::model::{steady_state, PhysicalParams};
use fwmix::modes;
use fwmix::noise::{self, NoiseConfig};
use fwmix::response;

/// Dataset serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Comma-separated values with documented headers.
    Csv,
    /// JSON record sets mirroring the CSV columns.
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Resolved global options shared by every subcommand.
pub struct Ctx {
    pub params: PhysicalParams,
    pub preset: String,
    pub config_path: Option<PathBuf>,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub tol: f64,
}

impl Ctx {
    fn noise_config(&self) -> NoiseConfig {
        NoiseConfig::default().with_rel_tol(self.tol)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        let path = self.path(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    /// Run metadata sidecar: everything needed to reproduce the invocation,
    /// and nothing that would make the data files differ between runs.
    fn write_meta(&self, command: &str, extra: serde_json::Value) -> Result<()> {
        let meta = serde_json::json!({
            "tool": "fwmix",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "preset": self.preset,
            "config": self.config_path.as_ref().map(|p| p.display().to_string()),
            "format": self.format.extension(),
            "tol": self.tol,
            "params": self.params,
            "args": extra,
        });
        self.write("run_meta.json", serde_json::to_string_pretty(&meta)?.as_bytes())?;
        Ok(())
    }
}

fn power_tag(power_mw: f64) -> String {
    format!("{power_mw}").replace('.', "p")
}

/// Parse `lo:hi:points` (or `lo:hi` with 201 points, or a single value)
/// into an inclusive grid. Values are in mW here; conversion happens at the
/// call site.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("`{s}` is not a number in sweep `{text}`"))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [lo, hi] | [lo, hi, _] => {
            let lo = parse(lo)?;
            let hi = parse(hi)?;
            let n = if parts.len() == 3 {
                parts[2]
                    .trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad point count in sweep `{text}`"))?
            } else {
                201
            };
            if lo == hi || n <= 1 {
                return Ok(vec![lo]);
            }
            if hi < lo {
                bail!("sweep `{text}` must be ascending");
            }
            Ok((0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect())
        }
        _ => bail!("sweep `{text}` must look like lo:hi:points"),
    }
}

pub fn run_gain(
    ctx: &Ctx,
    powers_mw: &[f64],
    grid_lo: f64,
    grid_hi: f64,
    grid_points: usize,
) -> Result<()> {
    if powers_mw.is_empty() {
        bail!("at least one pump power is required");
    }
    if !(grid_lo < grid_hi) || grid_points < 2 {
        bail!("probe grid must satisfy lo < hi with at least 2 points");
    }
    let mut summaries = Vec::new();
    for &p_mw in powers_mw {
        let params = ctx.params.with_pump_power(p_mw * 1e-3);
        let op = steady_state(&params)?;
        let grid = response::offset_grid(&op, grid_lo, grid_hi, grid_points);
        let series = response::sweep_response(&op, &grid)?;
        let name = format!("gain_p{}mw.{}", power_tag(p_mw), ctx.format.extension());
        match ctx.format {
            OutputFormat::Csv => {
                let mut buf = Vec::new();
                series.write_csv(&mut buf)?;
                ctx.write(&name, &buf)?;
            }
            OutputFormat::Json => {
                ctx.write(&name, serde_json::to_string_pretty(&series.to_json_records())?.as_bytes())?;
            }
        }
        let (max_gs, at_gs) = series.max_gain_s();
        let (max_gas, at_gas) = series.max_gain_as();
        let peaks = series.antistokes_peaks();
        let c_l = response::pump_response(&op);
        println!(
            "p = {p_mw} mW: max Gs = {max_gs:.4} at delta/omega_m = {at_gs:.4}; \
             max Gas = {max_gas:.4} at {at_gas:.4}; anti-Stokes peaks: {}",
            peaks.len()
        );
        summaries.push(serde_json::json!({
            "power_mw": p_mw,
            "max_gs": max_gs,
            "max_gs_at": at_gs,
            "max_gas": max_gas,
            "max_gas_at": at_gas,
            "antistokes_peak_count": peaks.len(),
            "antistokes_peaks_at": peaks.iter().map(|p| p.0).collect::<Vec<_>>(),
            "pump_response_re": c_l.re,
            "pump_response_im": c_l.im,
            "file": name,
        }));
    }
    ctx.write(
        "gain_summary.json",
        serde_json::to_string_pretty(&serde_json::Value::Array(summaries))?.as_bytes(),
    )?;
    ctx.write_meta(
        "gain",
        serde_json::json!({
            "power_mw": powers_mw,
            "grid_lo": grid_lo,
            "grid_hi": grid_hi,
            "grid_points": grid_points,
        }),
    )?;
    Ok(())
}

pub fn run_roots(ctx: &Ctx, sweep_mw: &str, bracket_mw: &str) -> Result<()> {
    let powers: Vec<f64> = parse_sweep(sweep_mw)?.iter().map(|p| p * 1e-3).collect();
    let sets = modes::sweep_roots(&ctx.params, &powers)?;
    let omega_m = ctx.params.mech_freq;

    if let Some(first_unstable) = powers
        .iter()
        .zip(&sets)
        .find(|(_, set)| !set.stable)
        .map(|(p, _)| p)
    {
        eprintln!(
            "warning: parametric instability from {} mW upward; rows flagged stable=false",
            first_unstable * 1e3
        );
    }

    let name = format!("roots.{}", ctx.format.extension());
    match ctx.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            modes::write_roots_csv(&mut buf, &powers, &sets, omega_m)?;
            ctx.write(&name, &buf)?;
        }
        OutputFormat::Json => {
            let records = modes::roots_json_records(&powers, &sets, omega_m);
            ctx.write(&name, serde_json::to_string_pretty(&records)?.as_bytes())?;
        }
    }
    println!(
        "wrote {} root sets ({} rows) to {}",
        sets.len(),
        4 * sets.len(),
        ctx.path(&name).display()
    );

    let bracket: Vec<f64> = parse_sweep(bracket_mw)?;
    if bracket.len() >= 2 {
        let lo = bracket[0] * 1e-3;
        let hi = bracket[bracket.len() - 1] * 1e-3;
        match modes::critical_power(&ctx.params, (lo, hi)) {
            Ok(p) => println!("splitting onset at {:.4} mW (resolved to 1 uW)", p * 1e3),
            Err(fwmix::Error::Bracket(msg)) => {
                println!("no splitting onset inside bracket: {msg}")
            }
            Err(other) => return Err(other.into()),
        }
    }
    ctx.write_meta(
        "roots",
        serde_json::json!({ "power_sweep_mw": sweep_mw, "critical_bracket_mw": bracket_mw }),
    )?;
    Ok(())
}

pub fn run_g2(
    ctx: &Ctx,
    power_mw: f64,
    tau_max_us: f64,
    tau_points: usize,
    temperature_k: f64,
) -> Result<()> {
    if !(tau_max_us > 0.0) || tau_points < 2 {
        bail!("tau grid must have positive range and at least 2 points");
    }
    let params = ctx.params.with_pump_power(power_mw * 1e-3);
    let op = steady_state(&params)?;
    let tau: Vec<f64> = (0..tau_points)
        .map(|i| tau_max_us * 1e-6 * i as f64 / (tau_points - 1) as f64)
        .collect();
    let series = noise::correlators(&op, temperature_k, &tau, &ctx.noise_config())
        .context("computing photon correlations")?;

    let tag = power_tag(power_mw);
    let name = format!("g2_p{tag}mw.{}", ctx.format.extension());
    match ctx.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            ctx.write(&name, &buf)?;
        }
        OutputFormat::Json => {
            ctx.write(&name, serde_json::to_string_pretty(&series.to_json_records())?.as_bytes())?;
        }
    }
    let summary = series.summary_json()?;
    ctx.write(
        &format!("g2_p{tag}mw_summary.json"),
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;
    println!(
        "p = {power_mw} mW, T = {temperature_k} K: n_bar = {:.4}, g2(0) = {:.4}, \
         peak g2 = {:.4} at tau = {:.3} us, peak/zero = {:.4}",
        summary["n_bar"].as_f64().unwrap(),
        summary["g2_zero"].as_f64().unwrap(),
        summary["g2_peak"].as_f64().unwrap(),
        summary["peak_tau_us"].as_f64().unwrap(),
        summary["cs_ratio"].as_f64().unwrap(),
    );
    ctx.write_meta(
        "g2",
        serde_json::json!({
            "power_mw": power_mw,
            "tau_max_us": tau_max_us,
            "tau_points": tau_points,
            "temperature_k": temperature_k,
        }),
    )?;
    Ok(())
}

pub fn run_spectrum(ctx: &Ctx, power_mw: f64) -> Result<()> {
    let params = ctx.params.with_pump_power(power_mw * 1e-3);
    let op = steady_state(&params)?;
    let cfg = ctx.noise_config();
    let spec = noise::spectrum_grid(&op, &cfg)?;
    let xs = spec.build()?;
    let omega_m = op.mech_freq;

    let grid_meta = serde_json::json!({
        "background": {
            "lo_over_omega_m": spec.background.0 / omega_m,
            "hi_over_omega_m": spec.background.1 / omega_m,
            "points": spec.background_points,
        },
        "windows": spec.windows.iter().map(|w| serde_json::json!({
            "center_over_omega_m": w.center / omega_m,
            "width_over_omega_m": w.width / omega_m,
            "points": w.points,
        })).collect::<Vec<_>>(),
    });

    let mut rows = Vec::with_capacity(xs.len());
    for &w in &xs {
        let (n, a) = noise::output_noise_spectra(w, &op, params.temperature)?;
        rows.push((w / omega_m, n, a));
    }

    let tag = power_tag(power_mw);
    match ctx.format {
        OutputFormat::Csv => {
            let mut buf = String::from("omega_over_omega_m,n_spec,a_re,a_im\n");
            for (x, n, a) in &rows {
                buf.push_str(&format!("{x},{n},{},{}\n", a.re, a.im));
            }
            ctx.write(&format!("spectrum_p{tag}mw.csv"), buf.as_bytes())?;
            ctx.write(
                &format!("spectrum_p{tag}mw_grid.json"),
                serde_json::to_string_pretty(&grid_meta)?.as_bytes(),
            )?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "grid": grid_meta,
                "data": rows.iter().map(|(x, n, a)| serde_json::json!({
                    "omega_over_omega_m": x,
                    "n_spec": n,
                    "a_re": a.re,
                    "a_im": a.im,
                })).collect::<Vec<_>>(),
            });
            ctx.write(
                &format!("spectrum_p{tag}mw.json"),
                serde_json::to_string_pretty(&doc)?.as_bytes(),
            )?;
        }
    }
    println!(
        "p = {power_mw} mW: {} spectral samples over [{:.1}, {:.1}] omega_m, {} windows",
        rows.len(),
        spec.background.0 / omega_m,
        spec.background.1 / omega_m,
        spec.windows.len()
    );
    ctx.write_meta("spectrum", serde_json::json!({ "power_mw": power_mw }))?;
    Ok(())
}

/// The canonical dataset suite: root trajectories with detected onset, gain
/// spectra at the standard pump powers, coincidence series at 1 and 4 mW,
/// and a diagnostic noise spectrum. Runtime is a few seconds on one core.
pub fn run_repro(ctx: &Ctx) -> Result<()> {
    println!("== root trajectories ==");
    run_roots(ctx, "0:20:201", "1:20")?;
    println!("== gain spectra ==");
    run_gain(ctx, &[1.0, 6.9, 20.0, 40.0], 0.5, 1.5, 2001)?;
    println!("== photon correlations ==");
    run_g2(ctx, 1.0, 30.0, 601, 0.0)?;
    run_g2(ctx, 4.0, 30.0, 601, 0.0)?;
    println!("== noise spectrum ==");
    run_spectrum(ctx, 1.0)?;
    ctx.write_meta("repro", serde_json::json!({}))?;
    println!("dataset suite complete in {}", ctx.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("0:0").unwrap(), vec![0.0]);
        assert_eq!(parse_sweep("5").unwrap(), vec![5.0]);
        let grid = parse_sweep("0:20:201").unwrap();
        assert_eq!(grid.len(), 201);
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[200], 20.0);
        assert_eq!(parse_sweep("1:3").unwrap().len(), 201);
        assert!(parse_sweep("3:1:5").is_err());
        assert!(parse_sweep("a:b").is_err());
        assert!(parse_sweep("1:2:3:4").is_err());
    }

    #[test]
    fn power_tags_are_filename_safe() {
        assert_eq!(power_tag(6.9), "6p9");
        assert_eq!(power_tag(20.0), "20");
        assert_eq!(power_tag(0.02), "0p02");
    }
}
