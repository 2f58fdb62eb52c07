//! Density loading and target construction.

use std::path::Path;

use twistscat_core::quadrature::{PolarRule, SphericalGrid};
use twistscat_core::scattering::{DirectTarget, FormFactorTable, Target};
use twistscat_core::wfn::{parse_wfn, AnalyticDensity, AnalyticModel, ElectronDensity, IamAtom};
use twistscat_core::{Error, SphericalGrid64};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub fn load_wfn(path: &Path) -> CliResult<twistscat_core::Wavefunction64> {
    let input = |message: String| CliError::Input { path: path.to_owned(), message };
    let file = std::fs::File::open(path).map_err(|e| input(e.to_string()))?;
    parse_wfn(std::io::BufReader::new(file)).map_err(|e| input(e.to_string()))
}

/// `co2-iam`, `hydrogenic:Z[,N]` or `iam:label,Z,zeta,x,y,z;...` (bohr).
pub fn parse_analytic(spec: &str) -> CliResult<AnalyticDensity<f64>> {
    let bad = |why: &str| CliError::config(format!("analytic model {spec:?}: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let model = match kind.trim() {
        "co2-iam" if rest.is_empty() => return Ok(AnalyticDensity::co2_iam()),
        "hydrogenic" => {
            let parts: Vec<&str> = rest.split(',').collect();
            match parts.as_slice() {
                [z] => AnalyticModel::Hydrogenic { charge: num(z)?, electrons: num(z)? },
                [z, n] => AnalyticModel::Hydrogenic { charge: num(z)?, electrons: num(n)? },
                _ => return Err(bad("expected hydrogenic:Z or hydrogenic:Z,N")),
            }
        }
        "iam" => {
            let atoms = rest
                .split(';')
                .filter(|a| !a.trim().is_empty())
                .map(|a| {
                    let f: Vec<&str> = a.split(',').collect();
                    if f.len() != 6 {
                        return Err(bad("each atom needs label,Z,zeta,x,y,z"));
                    }
                    let charge = num(f[1])?;
                    Ok(IamAtom {
                        label: f[0].trim().to_owned(),
                        position: [num(f[3])?, num(f[4])?, num(f[5])?],
                        charge,
                        electrons: charge,
                        zeta: num(f[2])?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            AnalyticModel::Iam(atoms)
        }
        _ => return Err(bad("unknown model (co2-iam, hydrogenic:Z[,N], iam:...)")),
    };
    AnalyticDensity::new(model).map_err(|e| bad(&e.to_string()))
}

pub fn load_density(cfg: &RunConfig) -> CliResult<Box<dyn ElectronDensity<f64>>> {
    match (&cfg.density.wfn, &cfg.density.analytic) {
        (Some(path), None) => Ok(Box::new(load_wfn(path)?)),
        (None, Some(spec)) => Ok(Box::new(parse_analytic(spec)?)),
        _ => Err(CliError::config("density: give exactly one of wfn or analytic")),
    }
}

pub fn grid(cfg: &RunConfig) -> CliResult<SphericalGrid64> {
    Ok(SphericalGrid::new(cfg.numerics.quad_n, cfg.numerics.rmax, PolarRule::CosTheta)?)
}

/// How amplitudes are evaluated for a run.
pub enum Engine {
    Direct(DirectTarget<f64>),
    Table(Box<FormFactorTable<f64>>),
}

impl Engine {
    pub fn target(&self) -> &dyn Target<f64> {
        match self {
            Engine::Direct(d) => d,
            Engine::Table(t) => t.as_ref(),
        }
    }

    pub fn direct(&self) -> &DirectTarget<f64> {
        match self {
            Engine::Direct(d) => d,
            Engine::Table(t) => t.direct(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Engine::Direct(_) => "direct",
            Engine::Table(_) => "table",
        }
    }
}

/// Samples the density and, when caching is on and the molecule is linear,
/// tabulates its form factor up to `2 k_max`. Non-linear molecules fall back
/// to direct evaluation with a warning.
pub fn build_engine(
    cfg: &RunConfig,
    density: &dyn ElectronDensity<f64>,
    k_max: f64,
    warnings: &mut Vec<String>,
) -> CliResult<Engine> {
    let direct = DirectTarget::with_renormalization(density, &grid(cfg)?, cfg.numerics.renormalize)?;
    if !cfg.numerics.cache {
        return Ok(Engine::Direct(direct));
    }
    let n = &cfg.numerics;
    match FormFactorTable::from_direct(direct.clone(), k_max, n.table_delta_nodes, n.table_cos_nodes) {
        Ok(t) => Ok(Engine::Table(Box::new(t))),
        Err(Error::NotLinear(why)) => {
            warnings.push(format!("form-factor table disabled: {why}"));
            Ok(Engine::Direct(direct))
        }
        Err(e) => Err(e.into()),
    }
}
