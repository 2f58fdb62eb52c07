//! Provenance record written next to every output file.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};
use twistscat_core::kinematics::BeamParams;
use twistscat_core::scattering::twisted_prefactor;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Below this energy the first Born approximation is unreliable.
pub const LOW_ENERGY_WARNING_EV: f64 = 300.0;

pub const NORMALIZATION: &str = "T_pw = -(2/D^2)(alpha - chi); DCS = |T|^2 in bohr^2/sr with no (2 pi)^(-3/2) factor; \
T_tw = C(kappa) (-i)^m_l (2 pi / n_phi) sum_j exp(i m_l phi_j) T_pw(D_j) with C(kappa) = sqrt(kappa) / ((2 pi)^2 sqrt(2 pi)); \
b-averaged DCS = (1/n_phi) sum_j |T_pw(D_j)|^2 / cos(theta_p)";

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Prefactor {
    pub energy_ev: f64,
    pub theta_p_deg: f64,
    pub kappa: f64,
    pub c_kappa: f64,
}

#[derive(Debug, Serialize)]
pub struct Quadrature {
    pub order: usize,
    pub rmax_bohr: f64,
    pub radial_map: &'static str,
    pub polar_rule: &'static str,
    pub azimuthal_rule: &'static str,
    pub phi_p_rule: &'static str,
    pub n_phi: usize,
    pub euler_grid: Option<[usize; 3]>,
    pub euler_measure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct TargetInfo {
    pub engine: &'static str,
    pub declared_electrons: f64,
    pub sampled_electrons: f64,
    pub renormalized: bool,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub inputs: Vec<InputDigest>,
    pub normalization: &'static str,
    pub prefactors: Vec<Prefactor>,
    pub quadrature: Quadrature,
    pub target: TargetInfo,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input { path: path.to_owned(), message: e.to_string() })?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

pub fn energy_warnings(cfg: &RunConfig) -> Vec<String> {
    cfg.beam
        .energies_ev
        .iter()
        .filter(|e| **e < LOW_ENERGY_WARNING_EV)
        .map(|e| format!("E_i = {e} eV is below {LOW_ENERGY_WARNING_EV} eV; the first Born approximation may not hold"))
        .collect()
}

pub fn prefactors(cfg: &RunConfig) -> Vec<Prefactor> {
    let mut out = Vec::new();
    for &e in &cfg.beam.energies_ev {
        for &tp in &cfg.beam.theta_p_deg {
            if let Ok(b) = BeamParams::new(e, tp.to_radians(), 0) {
                out.push(Prefactor { energy_ev: e, theta_p_deg: tp, kappa: b.kappa, c_kappa: twisted_prefactor(b.kappa) });
            }
        }
    }
    out
}

pub fn quadrature(cfg: &RunConfig) -> Quadrature {
    let n = &cfg.numerics;
    Quadrature {
        order: n.quad_n,
        rmax_bohr: n.rmax,
        radial_map: "linear",
        polar_rule: "gauss-legendre in cos(theta)",
        azimuthal_rule: "gauss-legendre in phi",
        phi_p_rule: "trapezoid",
        n_phi: n.n_phi,
        euler_grid: n.orientation_average.then_some([n.euler_nodes; 3]),
        euler_measure: n.orientation_average.then(|| format!("{:?}", n.measure).to_lowercase()),
    }
}

pub fn wall_time(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// `out.csv` -> `out.csv.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(path, text + "\n").map_err(|source| CliError::Output { path: path.to_owned(), source })
}
