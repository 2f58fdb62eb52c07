//! Command-line interface; every flag overrides the matching config field.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ModeName, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "twistscat", version, about = "Elastic cross sections for plane and twisted electron beams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Differential cross sections over a scattering-angle scan.
    Dcs(Common),
    /// Total cross sections per energy.
    Tcs(Common),
    /// Quadrature, rotation and reduction self-checks.
    Validate(Common),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Dcs(c) | Command::Tcs(c) | Command::Validate(c) => c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Dcs(_) => "dcs",
            Command::Tcs(_) => "tcs",
            Command::Validate(_) => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// AIM .wfn file with the target density.
    #[arg(long, conflicts_with = "analytic")]
    pub wfn: Option<PathBuf>,
    /// Closed-form density: co2-iam, hydrogenic:Z[,N] or iam:label,Z,zeta,x,y,z;...
    #[arg(long)]
    pub analytic: Option<String>,
    /// Incident energies in eV (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub energy: Option<Vec<f64>>,
    /// Cone opening angles in degrees (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta_p: Option<Vec<f64>>,
    /// Topological charges (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ml: Option<Vec<i32>>,
    /// Scattering angles start:stop:step in degrees.
    #[arg(long)]
    pub theta_s: Option<String>,
    /// pw, tw-fixed or tw-avg (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub mode: Option<Vec<ModeName>>,
    #[arg(long, value_enum)]
    pub orientation_average: Option<Switch>,
    /// Euler nodes per angle.
    #[arg(long)]
    pub euler_nodes: Option<usize>,
    #[arg(long)]
    pub quad_n: Option<usize>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    /// Form-factor table for linear molecules.
    #[arg(long, value_enum)]
    pub cache: Option<Switch>,
    /// Scale the sampled density to the declared electron count.
    #[arg(long, value_enum)]
    pub renormalize: Option<Switch>,
    /// Output CSV; stdout when absent (no manifest is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> CliResult<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::config(format!("--theta-s {s:?}: expected start:stop:step in degrees"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
    Ok((v[0], v[1], v[2]))
}

impl Common {
    /// Config file (or defaults) with flags applied on top.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(w) = &self.wfn {
            cfg.density.wfn = Some(w.clone());
            cfg.density.analytic = None;
        }
        if let Some(a) = &self.analytic {
            cfg.density.analytic = Some(a.clone());
            cfg.density.wfn = None;
        }
        if let Some(e) = &self.energy {
            cfg.beam.energies_ev = e.clone();
        }
        if let Some(t) = &self.theta_p {
            cfg.beam.theta_p_deg = t.clone();
        }
        if let Some(m) = &self.ml {
            cfg.beam.ml = m.clone();
        }
        if let Some(r) = &self.theta_s {
            let (a, b, c) = parse_range(r)?;
            cfg.scan.theta_s_start_deg = a;
            cfg.scan.theta_s_stop_deg = b;
            cfg.scan.theta_s_step_deg = c;
        }
        if let Some(m) = &self.mode {
            cfg.scan.modes = m.clone();
        }
        let n = &mut cfg.numerics;
        if let Some(s) = self.orientation_average {
            n.orientation_average = s == Switch::On;
        }
        if let Some(v) = self.euler_nodes {
            n.euler_nodes = v;
        }
        if let Some(v) = self.quad_n {
            n.quad_n = v;
        }
        if let Some(v) = self.rmax {
            n.rmax = v;
        }
        if let Some(v) = self.n_phi {
            n.n_phi = v;
        }
        if let Some(s) = self.cache {
            n.cache = s == Switch::On;
        }
        if let Some(s) = self.renormalize {
            n.renormalize = s == Switch::On;
        }
        if let Some(o) = &self.out {
            cfg.output.path = Some(o.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
