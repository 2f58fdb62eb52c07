//! Scan driver: configuration, CSV output and run manifests.

pub mod args;
pub mod config;
pub mod error;
pub mod manifest;
pub mod scan;
pub mod target;
pub mod validate;

use std::io::Write;
use std::time::Instant;

use twistscat_core::kinematics::wave_number;

use args::Command;
use error::{CliError, CliResult};
use manifest::{InputDigest, RunManifest, TargetInfo};

/// Runs one subcommand; returns whether every validation check passed.
pub fn run(command: &Command) -> CliResult<bool> {
    let start = Instant::now();
    let common = command.common();
    let cfg = common.resolve()?;
    let density = target::load_density(&cfg)?;
    let mut warnings = manifest::energy_warnings(&cfg);
    for w in &warnings {
        log::warn!("{w}");
    }

    if let Command::Validate(_) = command {
        let checks = validate::run_validation(&cfg, density.as_ref())?;
        let mut out = std::io::stdout().lock();
        for c in &checks {
            writeln!(out, "{c}").map_err(|source| CliError::Output { path: "<stdout>".into(), source })?;
        }
        return Ok(checks.iter().all(|c| c.passed));
    }

    let k_max = wave_number(cfg.beam.energies_ev.iter().copied().fold(f64::NAN, f64::max))?;
    let engine = target::build_engine(&cfg, density.as_ref(), k_max, &mut warnings)?;
    let rows = match command {
        Command::Dcs(_) => scan::run_dcs_scan(&cfg, engine.target())?,
        _ => scan::run_tcs_scan(&cfg, engine.target())?,
    };
    let write = |w: &mut dyn Write| match command {
        Command::Dcs(_) => scan::write_dcs_csv(&rows, w),
        _ => scan::write_tcs_csv(&rows, w),
    };

    let Some(path) = &cfg.output.path else {
        let mut out = std::io::stdout().lock();
        write(&mut out).map_err(|source| CliError::Output { path: "<stdout>".into(), source })?;
        return Ok(true);
    };
    let mut buf = Vec::new();
    write(&mut buf).expect("writing to memory");
    std::fs::write(path, buf).map_err(|source| CliError::Output { path: path.clone(), source })?;

    let mut inputs = Vec::new();
    for p in [cfg.density.wfn.as_ref(), common.config.as_ref()].into_iter().flatten() {
        inputs.push(InputDigest { path: p.clone(), sha256: manifest::sha256_file(p)? });
    }
    let samples = engine.direct().samples();
    let m = RunManifest {
        tool: "twistscat",
        version: env!("CARGO_PKG_VERSION"),
        command: command.name().into(),
        config: cfg.clone(),
        inputs,
        normalization: manifest::NORMALIZATION,
        prefactors: manifest::prefactors(&cfg),
        quadrature: manifest::quadrature(&cfg),
        target: TargetInfo {
            engine: engine.label(),
            declared_electrons: density.electron_count(),
            sampled_electrons: samples.raw_electron_count(),
            renormalized: cfg.numerics.renormalize,
        },
        warnings,
        wall_time_s: manifest::wall_time(start.elapsed()),
    };
    manifest::write_manifest(&m, &manifest::manifest_path(path))?;
    Ok(true)
}
