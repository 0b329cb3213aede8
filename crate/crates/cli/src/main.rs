//! `sim`: scenario-driven frontend for the clutter/jamming simulator.
//!
//! Subcommands: eigen, if, spectrum, bounds, validate. Exit codes: 0 on
//! success, 1 on invariant failure, 2 on configuration errors. The
//! `SIM_THREADS` environment variable caps the worker-thread count.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stapsim_core::{
    clutter_rank, eigen_spectrum_db, improvement_factor, jamming_trajectory, monte_carlo_if,
    mvdr_spectrum, optimal_weights, sample_rings, JammerKind, JammingPurpose, ModulationMode,
};

use config::{offset_label, ConfigError, ScenarioConfig};
use output::{fmt, line_plot_script, spectrum_plot_script, OutputDir};

#[derive(Parser)]
#[command(name = "sim", about = "phased-MIMO clutter / FDA jamming simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario config (TOML key-value); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSVs, plot scripts and the manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the config Monte Carlo trial count.
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigen-spectra of the interference covariance per frequency offset.
    Eigen,
    /// Monte Carlo improvement-factor curves per frequency offset.
    If,
    /// Minimum-variance spatial-Doppler spectra per frequency offset.
    Spectrum,
    /// Print the frequency-offset design intervals.
    Bounds,
    /// Run the reduced-scale invariant suite.
    Validate,
}

enum AppError {
    Config(String),
    Invariant(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<stapsim_core::Error> for AppError {
    fn from(e: stapsim_core::Error) -> Self {
        match e {
            stapsim_core::Error::InvalidConfig { .. } => AppError::Config(e.to_string()),
            other => AppError::Invariant(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Invariant(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SIM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Config(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let cfg = match &cli.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    let seed = cli.seed.unwrap_or(cfg.seed);
    let trials = cli.trials.unwrap_or(cfg.trials).max(1);
    match cli.command {
        Command::Eigen => run_eigen(&cli.out, &cfg, seed, trials),
        Command::If => run_if(&cli.out, &cfg, seed, trials),
        Command::Spectrum => run_spectrum(&cli.out, &cfg, seed, trials),
        Command::Bounds => run_bounds(&cfg),
        Command::Validate => run_validate(&cfg),
    }
}

fn offsets(cfg: &ScenarioConfig) -> Vec<Option<f64>> {
    let mut v: Vec<Option<f64>> = vec![None];
    v.extend(cfg.jammer_offsets_khz.iter().map(|k| Some(*k)));
    v
}

fn run_eigen(out: &PathBuf, cfg: &ScenarioConfig, seed: u64, trials: usize) -> Result<(), AppError> {
    let mut dir = OutputDir::create(out)?;
    let kind = cfg.jammer_kind()?;
    let case = cfg.case_label();
    let mut csvs = Vec::new();
    for off in offsets(cfg) {
        let scn = cfg.scenario(off)?;
        let r = scn.clutter_cov()? + scn.jamming_cov()?;
        let spectrum = eigen_spectrum_db(&r, scn.noise_power)?;
        let name = match off {
            None => format!("eigen_{case}_nojam.csv"),
            Some(_) => format!("eigen_{case}_{}_{}.csv", kind_label(kind), offset_label(off)),
        };
        dir.write_csv(
            &name,
            &["index", "eigenvalue_db"],
            spectrum
                .iter()
                .enumerate()
                .map(|(i, v)| [i as f64, *v]),
        )?;
        csvs.push(name);
    }
    dir.write_text(
        "plot_eigen.py",
        &line_plot_script(&csvs, "eigenvalue index", "eigenvalue (dB)", "eigen.png"),
    )?;
    dir.finalize("eigen", cfg, seed, trials)?;
    Ok(())
}

fn run_if(out: &PathBuf, cfg: &ScenarioConfig, seed: u64, trials: usize) -> Result<(), AppError> {
    let mut dir = OutputDir::create(out)?;
    let kind = cfg.jammer_kind()?;
    let mut csvs = Vec::new();
    for off in offsets(cfg) {
        let scn = cfg.scenario(off)?;
        let (v_c, v_j) = scn.snapshot_matrices()?;
        let (mean, std) = monte_carlo_if(
            &scn.array,
            &v_c,
            v_j.as_ref(),
            scn.clutter_power(),
            scn.jamming_power(),
            scn.noise_power,
            scn.u_target(),
            scn.target.range_m,
            cfg.doppler_bins,
            trials,
            seed,
        )?;
        let name = match off {
            None => format!("if_{}_nojam.csv", kind_label(kind)),
            Some(_) => format!("if_{}_{}.csv", kind_label(kind), offset_label(off)),
        };
        dir.write_csv(
            &name,
            &["normalized_doppler", "if_db_mean", "if_db_std"],
            mean.doppler
                .iter()
                .zip(&mean.if_db)
                .zip(&std)
                .map(|((d, m), s)| [*d, *m, *s]),
        )?;
        csvs.push(name);
    }
    dir.write_text(
        "plot_if.py",
        &line_plot_script(&csvs, "normalized Doppler", "IF (dB)", "if.png"),
    )?;
    dir.finalize("if", cfg, seed, trials)?;
    Ok(())
}

fn run_spectrum(
    out: &PathBuf,
    cfg: &ScenarioConfig,
    seed: u64,
    trials: usize,
) -> Result<(), AppError> {
    let mut dir = OutputDir::create(out)?;
    let kind = cfg.jammer_kind()?;
    let mut csvs = Vec::new();
    for off in offsets(cfg) {
        let scn = cfg.scenario(off)?;
        let r_u = scn.total_cov()?;
        let grid = mvdr_spectrum(
            &r_u,
            &scn.array,
            scn.target.range_m,
            cfg.spatial_bins,
            cfg.doppler_bins,
        )?;
        let name = match off {
            None => "spectrum_nojam.csv".to_string(),
            Some(_) => format!("spectrum_{}_{}.csv", kind_label(kind), offset_label(off)),
        };
        // rows = Doppler bins, cols = spatial bins
        let spatial_headers: Vec<String> = (0..cfg.spatial_bins)
            .map(|i| format!("fs_{}", fmt(-0.5 + i as f64 / cfg.spatial_bins as f64)))
            .collect();
        let mut header: Vec<&str> = vec!["doppler"];
        header.extend(spatial_headers.iter().map(|s| s.as_str()));
        dir.write_csv(
            &name,
            &header,
            (0..cfg.doppler_bins).map(|d| {
                let mut row = Vec::with_capacity(cfg.spatial_bins + 1);
                row.push(-0.5 + d as f64 / cfg.doppler_bins as f64);
                row.extend((0..cfg.spatial_bins).map(|s| grid[s][d]));
                row
            }),
        )?;
        csvs.push(name);
    }
    dir.write_text("plot_spectrum.py", &spectrum_plot_script(&csvs))?;
    dir.finalize("spectrum", cfg, seed, trials)?;
    Ok(())
}

fn run_bounds(cfg: &ScenarioConfig) -> Result<(), AppError> {
    let scn = cfg.scenario(Some(0.0))?;
    let jam = scn.jammer.expect("offset given");
    let rt = scn.target.range_m;
    let (ft_lo, ft_hi) = jam.frequency_offset_bounds(&scn.array, rt, JammingPurpose::FalseTargets);
    let (_, dec_hi) = jam.frequency_offset_bounds(&scn.array, rt, JammingPurpose::Deception);
    let sf = stapsim_core::JammerModel { kind: JammerKind::Sf, ..jam };
    let af = stapsim_core::JammerModel { kind: JammerKind::Af, ..jam };
    let (_, zeta_sf) = sf.frequency_offset_bounds(&scn.array, rt, JammingPurpose::ScatteredWave);
    let (_, zeta_af) = af.frequency_offset_bounds(&scn.array, rt, JammingPurpose::ScatteredWave);
    println!("frequency-offset design intervals");
    println!("  false targets        [{:.2} kHz, {:.2} kHz)", ft_lo / 1e3, ft_hi / 1e3);
    println!("  deception            (0 kHz, {:.2} kHz]", dec_hi / 1e3);
    println!("  scattered-wave SF    (0 kHz, {:.2} kHz]   zeta_SF = {:.2} kHz", zeta_sf / 1e3, zeta_sf / 1e3);
    println!("  scattered-wave AF    (0 kHz, {:.2} kHz]   zeta_AF = {:.2} kHz", zeta_af / 1e3, zeta_af / 1e3);
    Ok(())
}

fn run_validate(cfg: &ScenarioConfig) -> Result<(), AppError> {
    let mut failures = Vec::new();
    let mut check = |name: &str, outcome: Result<Option<String>, String>| match outcome {
        Ok(None) => println!("check {name}: ok"),
        Ok(Some(why)) => println!("check {name}: skipped ({why})"),
        Err(why) => {
            println!("check {name}: FAILED ({why})");
            failures.push(name.to_string());
        }
    };
    let offset = cfg.jammer_offsets_khz.iter().copied().find(|k| *k > 0.0);

    // geometry: sampled jamming ring satisfies the sum-of-distances identity
    {
        let scn = cfg.scenario(None)?;
        let outcome = (|| {
            let traj = jamming_trajectory(&scn.geometry).map_err(|e| e.to_string())?;
            let (_, ring) = sample_rings(&scn.geometry, &traj, 4, 121).map_err(|e| e.to_string())?;
            let radar = scn.geometry.radar_position();
            let rt2 = 2.0 * scn.geometry.target_range;
            let worst = ring
                .points
                .iter()
                .map(|p| {
                    (p.position.distance(&radar) + p.position.distance(&scn.geometry.jammer_position)
                        - rt2)
                        .abs()
                        / rt2
                })
                .fold(0.0f64, f64::max);
            if worst < 1e-9 {
                Ok(None)
            } else {
                Err(format!("worst relative residual {worst:.2e}"))
            }
        })();
        check("geometry-sum-identity", outcome);
    }

    // omega dual route + proposition 1
    match offset {
        None => {
            check("omega-dual-route", Ok(Some("no nonzero offset configured".into())));
            check("proposition-1", Ok(Some("no nonzero offset configured".into())));
        }
        Some(khz) => {
            let scn = cfg.scenario(Some(khz))?;
            let jam = scn.jammer.unwrap();
            let dual = match jam.modulation_matrix(&scn.array, scn.target.range_m, ModulationMode::Exact)
            {
                Ok(_) => Ok(None),
                Err(e) => Err(e.to_string()),
            };
            check("omega-dual-route", dual);

            let regime = jam.freq_offset_hz * scn.array.pulse_width_s;
            let outcome = if regime > 0.01 {
                Ok(Some(format!("offset*pulse_width = {regime:.3} outside regime")))
            } else {
                match jam.modulation_matrix(&scn.array, scn.target.range_m, ModulationMode::Exact) {
                    Err(e) => Err(e.to_string()),
                    Ok(m) => {
                        let ptp = jam.antennas as f64 * scn.array.pulse_width_s;
                        let s = scn.array.subarrays;
                        let mut dev: f64 = 0.0;
                        for a in 0..s {
                            for b in 0..s {
                                let ideal = if a == b { ptp } else { 0.0 };
                                dev = dev.max(
                                    (m.d[(a, b)] - num_complex::Complex64::new(ideal, 0.0)).norm(),
                                );
                            }
                        }
                        if dev / ptp < 0.05 {
                            Ok(None)
                        } else {
                            Err(format!("deviation {:.3} >= 0.05", dev / ptp))
                        }
                    }
                }
            };
            check("proposition-1", outcome);
        }
    }

    // PA rank invariance at reduced scale
    {
        let outcome = match offset {
            None => Ok(Some("no nonzero offset configured".into())),
            Some(khz) => (|| {
                let mut small = cfg.clone();
                small.subarrays = 1;
                small.clutter_patches = 121;
                small.jamming_patches = 61;
                let base = small.scenario(None).map_err(|e| e.to_string())?;
                let jammed = small.scenario(Some(khz)).map_err(|e| e.to_string())?;
                let r0 = base.clutter_cov().map_err(|e| e.to_string())?;
                let r1 = (jammed.clutter_cov().map_err(|e| e.to_string())?)
                    + jammed.jamming_cov().map_err(|e| e.to_string())?;
                let a = clutter_rank(&r0, 1.0, 3.0).map_err(|e| e.to_string())?;
                let b = clutter_rank(&r1, 1.0, 3.0).map_err(|e| e.to_string())?;
                if a == b {
                    Ok(None)
                } else {
                    Err(format!("rank changed {a} -> {b}"))
                }
            })(),
        };
        check("pa-rank-invariance", outcome);
    }

    // STAP oracle: quadratic-form IF vs weight-route IF on a reduced scene
    {
        let outcome = (|| {
            let mut small = cfg.clone();
            small.clutter_patches = 61;
            small.jamming_patches = 31;
            let scn = small.scenario(offset).map_err(|e| e.to_string())?;
            let r_u = scn.total_cov().map_err(|e| e.to_string())?;
            let v = scn
                .array
                .target_steering(
                    scn.u_target(),
                    scn.target.doppler,
                    scn.array.range_frequency(scn.target.range_m),
                )
                .map_err(|e| e.to_string())?;
            let if_db = improvement_factor(&r_u, &v, scn.noise_power).map_err(|e| e.to_string())?;
            let w = optimal_weights(&r_u, &v).map_err(|e| e.to_string())?;
            let wrw = (&r_u * &w).dotc(&w).re;
            let oracle = scn.noise_power / wrw;
            let rel = (10f64.powf(if_db / 10.0) - oracle).abs() / oracle;
            if rel < 1e-8 {
                Ok(None)
            } else {
                Err(format!("routes disagree by {rel:.2e}"))
            }
        })();
        check("stap-oracle", outcome);
    }

    if failures.is_empty() {
        Ok(())
    } else {
        Err(AppError::Invariant(format!(
            "validate: {} check(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )))
    }
}

fn kind_label(kind: JammerKind) -> &'static str {
    match kind {
        JammerKind::Sf => "sf",
        JammerKind::Af => "af",
    }
}
