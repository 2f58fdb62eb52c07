//! Fast self-checks of a configuration's numerics.

use twistscat_core::kinematics::wave_number;
use twistscat_core::quadrature::{integrate_real, PolarRule, SphericalGrid};
use twistscat_core::scattering::{dcs, DcsSettings, DensitySamples, EulerGrid, Mode};
use twistscat_core::wfn::ElectronDensity;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::target::{build_engine, grid};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, value: f64, limit: f64, what: &str) -> Check {
    Check { name, passed: value < limit, detail: format!("{what} = {value:.3e} (limit {limit:.1e})") }
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn run_validation(cfg: &RunConfig, density: &dyn ElectronDensity<f64>) -> CliResult<Vec<Check>> {
    let n = &cfg.numerics;
    let g = grid(cfg)?;
    let mut out = Vec::new();

    let declared = density.electron_count();
    let samples = DensitySamples::new(density, &g, false)?;
    out.push(check(
        "electron_count",
        relative_change(samples.raw_electron_count(), declared),
        2e-3,
        &format!("|chi(0) - N|/N with chi(0) = {:.8}, N = {declared}", samples.raw_electron_count()),
    ));

    let volume = integrate_real(&g, |_| 1.0)?;
    let exact = 4.0 / 3.0 * std::f64::consts::PI * n.rmax.powi(3);
    out.push(check("quadrature_volume", relative_change(volume, exact), 1e-8, "relative volume error"));

    let euler = EulerGrid::<f64>::cubic(n.euler_nodes, n.measure.into())?;
    let defect = euler
        .samples()
        .iter()
        .map(|(r, _)| r.orthogonality_defect().max((r.determinant() - 1.0).abs()))
        .fold(0.0, f64::max);
    out.push(check("euler_orthogonality", defect, 1e-12, "max |R^T R - I|, |det R - 1|"));

    let energy = cfg.beam.energies_ev.iter().copied().fold(f64::NAN, f64::max);
    let mut warnings = Vec::new();
    let engine = build_engine(cfg, density, wave_number(energy)?, &mut warnings)?;
    let settings = DcsSettings { n_phi: n.n_phi, orientation: None };
    let mut worst = 0.0_f64;
    for deg in [1.0_f64, 5.0, 30.0, 90.0, 150.0] {
        let ts = deg.to_radians();
        let pw = dcs(engine.target(), &Mode::Plane, energy, ts, &settings)?;
        let tw = dcs(engine.target(), &Mode::TwistedAveraged { theta_p: 0.0 }, energy, ts, &settings)?;
        worst = worst.max(relative_change(tw, pw));
    }
    out.push(check("theta_p_zero_reduction", worst, 1e-3, "max relative |b-averaged - plane| at theta_p = 0"));

    let doubled = SphericalGrid::new((2 * n.quad_n).min(twistscat_core::quadrature::MAX_ORDER), n.rmax, PolarRule::CosTheta)?;
    let fine = DensitySamples::new(density, &doubled, false)?;
    let mut change = relative_change(samples.raw_electron_count(), fine.raw_electron_count());
    for d in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.6, 0.8]] {
        let a = samples.form_factor(&d);
        let b = fine.form_factor(&d);
        change = change.max((a - b).norm() / declared);
    }
    out.push(check("quadrature_doubling", change, 5e-3, &format!("max change N = {} -> {}", n.quad_n, doubled.order)));
    Ok(out)
}
