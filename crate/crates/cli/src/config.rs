//! Run configuration: a TOML file, then command-line overrides on top.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistscat_core::scattering::{
    EulerMeasure, DEFAULT_COS_NODES, DEFAULT_DELTA_NODES, DEFAULT_EULER_NODES, DEFAULT_PHI_NODES,
    DEFAULT_THETA_NODES, MIN_COS_NODES, MIN_DELTA_NODES, MIN_EULER_NODES, MIN_PHI_NODES, MIN_THETA_NODES,
};
use twistscat_core::quadrature::{DEFAULT_ORDER, DEFAULT_RADIUS, MAX_ORDER};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Pw,
    TwFixed,
    TwAvg,
}

impl std::str::FromStr for ModeName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pw" => Ok(ModeName::Pw),
            "tw-fixed" | "tw_fixed" => Ok(ModeName::TwFixed),
            "tw-avg" | "tw_avg" | "tw_b_averaged" => Ok(ModeName::TwAvg),
            _ => Err(format!("unknown mode {s:?} (pw, tw-fixed, tw-avg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Haar,
    Uniform,
}

impl From<Measure> for EulerMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::Haar => EulerMeasure::Haar,
            Measure::Uniform => EulerMeasure::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySource {
    /// Path to an AIM `.wfn` file, relative to the config file.
    pub wfn: Option<PathBuf>,
    /// `co2-iam`, `hydrogenic:Z[,N]` or `iam:label,Z,zeta,x,y,z;...`.
    pub analytic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Beam {
    pub energies_ev: Vec<f64>,
    pub theta_p_deg: Vec<f64>,
    pub ml: Vec<i32>,
}

impl Default for Beam {
    fn default() -> Self {
        Beam { energies_ev: vec![1000.0], theta_p_deg: vec![10.0], ml: vec![1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scan {
    pub modes: Vec<ModeName>,
    pub theta_s_start_deg: f64,
    pub theta_s_stop_deg: f64,
    pub theta_s_step_deg: f64,
}

impl Default for Scan {
    fn default() -> Self {
        Scan { modes: vec![ModeName::Pw], theta_s_start_deg: 0.0, theta_s_stop_deg: 180.0, theta_s_step_deg: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub quad_n: usize,
    pub rmax: f64,
    pub n_phi: usize,
    pub orientation_average: bool,
    pub euler_nodes: usize,
    pub measure: Measure,
    /// Scale sampled densities to the declared electron count.
    pub renormalize: bool,
    /// Interpolate form factors from a table (linear molecules only).
    pub cache: bool,
    pub table_delta_nodes: usize,
    pub table_cos_nodes: usize,
    pub tcs_theta_nodes: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            quad_n: DEFAULT_ORDER,
            rmax: DEFAULT_RADIUS,
            n_phi: DEFAULT_PHI_NODES,
            orientation_average: true,
            euler_nodes: DEFAULT_EULER_NODES,
            measure: Measure::Haar,
            renormalize: true,
            cache: true,
            table_delta_nodes: DEFAULT_DELTA_NODES,
            table_cos_nodes: DEFAULT_COS_NODES,
            tcs_theta_nodes: DEFAULT_THETA_NODES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub density: DensitySource,
    pub beam: Beam,
    pub scan: Scan,
    pub numerics: Numerics,
    pub output: Output,
}

impl RunConfig {
    /// Reads a TOML file; relative wfn paths resolve against its directory.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input { path: path.to_owned(), message: e.to_string() })?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if let (Some(wfn), Some(dir)) = (&cfg.density.wfn, path.parent()) {
            if wfn.is_relative() {
                cfg.density.wfn = Some(dir.join(wfn));
            }
        }
        Ok(cfg)
    }

    /// Scattering angles of the scan in degrees, endpoints included.
    pub fn theta_s_deg(&self) -> CliResult<Vec<f64>> {
        let s = &self.scan;
        if !(s.theta_s_step_deg > 0.0) {
            return Err(CliError::config("scan.theta_s_step_deg must be positive"));
        }
        if !(0.0..=180.0).contains(&s.theta_s_start_deg)
            || !(0.0..=180.0).contains(&s.theta_s_stop_deg)
            || s.theta_s_stop_deg < s.theta_s_start_deg
        {
            return Err(CliError::config("scan.theta_s range must satisfy 0 <= start <= stop <= 180"));
        }
        let n = ((s.theta_s_stop_deg - s.theta_s_start_deg) / s.theta_s_step_deg + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| s.theta_s_start_deg + i as f64 * s.theta_s_step_deg).collect())
    }

    pub fn validate(&self) -> CliResult<()> {
        match (&self.density.wfn, &self.density.analytic) {
            (Some(_), Some(_)) => return Err(CliError::config("density: give either wfn or analytic, not both")),
            (None, None) => return Err(CliError::config("density: no wfn path or analytic model given")),
            _ => {}
        }
        let b = &self.beam;
        if b.energies_ev.is_empty() {
            return Err(CliError::config("beam.energies_ev is empty"));
        }
        if let Some(e) = b.energies_ev.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(CliError::config(format!("beam.energies_ev: {e} is not a positive energy")));
        }
        let twisted = self.scan.modes.iter().any(|m| *m != ModeName::Pw);
        if twisted && b.theta_p_deg.is_empty() {
            return Err(CliError::config("beam.theta_p_deg is empty"));
        }
        if let Some(t) = b.theta_p_deg.iter().find(|t| !(**t >= 0.0 && **t < 90.0)) {
            return Err(CliError::config(format!("beam.theta_p_deg: {t} outside [0, 90)")));
        }
        if twisted && b.ml.is_empty() {
            return Err(CliError::config("beam.ml is empty"));
        }
        if self.scan.modes.is_empty() {
            return Err(CliError::config("scan.modes is empty"));
        }
        self.theta_s_deg()?;
        let n = &self.numerics;
        let check = |ok: bool, field: &str, what: String| {
            if ok {
                Ok(())
            } else {
                Err(CliError::config(format!("numerics.{field}: {what}")))
            }
        };
        check((1..=MAX_ORDER).contains(&n.quad_n), "quad_n", format!("must be in 1..={MAX_ORDER}"))?;
        check(n.rmax > 0.0 && n.rmax.is_finite(), "rmax", "must be positive".into())?;
        check(n.n_phi >= MIN_PHI_NODES, "n_phi", format!("must be at least {MIN_PHI_NODES}"))?;
        check(n.euler_nodes >= MIN_EULER_NODES, "euler_nodes", format!("must be at least {MIN_EULER_NODES}"))?;
        check(n.table_delta_nodes >= MIN_DELTA_NODES, "table_delta_nodes", format!("must be at least {MIN_DELTA_NODES}"))?;
        check(n.table_cos_nodes >= MIN_COS_NODES, "table_cos_nodes", format!("must be at least {MIN_COS_NODES}"))?;
        check(n.tcs_theta_nodes >= MIN_THETA_NODES, "tcs_theta_nodes", format!("must be at least {MIN_THETA_NODES}"))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_from_an_empty_file() {
        let c: RunConfig = toml::from_str("[density]\nanalytic = \"co2-iam\"\n").unwrap();
        assert_eq!(c.numerics, Numerics::default());
        assert!(c.numerics.orientation_average && c.numerics.renormalize);
        c.validate().unwrap();
        assert_eq!(c.theta_s_deg().unwrap().len(), 181);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[numerics]\nquad_m = 3\n").is_err());
    }

    #[test]
    fn empty_lists_and_bad_numerics_are_config_errors() {
        let mut c = RunConfig::default();
        c.density.analytic = Some("co2-iam".into());
        c.beam.energies_ev.clear();
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
        c.beam.energies_ev = vec![500.0];
        c.numerics.n_phi = 10;
        let msg = c.validate().unwrap_err().to_string();
        assert!(msg.contains("n_phi"), "{msg}");
    }

    #[test]
    fn half_degree_scan() {
        let mut c = RunConfig::default();
        c.scan.theta_s_step_deg = 0.5;
        let t = c.theta_s_deg().unwrap();
        assert_eq!(t.len(), 361);
        assert_eq!(*t.last().unwrap(), 180.0);
    }
}
