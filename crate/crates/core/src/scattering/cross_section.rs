use rayon::prelude::*;

use super::orientation::{orientation_average, EulerGrid};
use super::target::Target;
use super::twisted::{TwistedKernel, DEFAULT_PHI_NODES};
use crate::error::{Error, Result};
use crate::kinematics::{delta_plane_vector, wave_number, BeamParams};
use crate::quadrature::gauss_legendre;
use crate::real::{pairwise_sum, Real};

pub const MIN_THETA_NODES: usize = 64;
pub const DEFAULT_THETA_NODES: usize = 96;

/// Which cross section a scan point asks for. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode<T> {
    Plane,
    /// Bessel beam centred on the molecule (zero impact parameter).
    TwistedFixed { theta_p: T, ml: i32 },
    /// Bessel beam averaged over impact parameters.
    TwistedAveraged { theta_p: T },
}

impl<T: Real> Mode<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Mode::Plane => "pw",
            Mode::TwistedFixed { .. } => "tw_fixed",
            Mode::TwistedAveraged { .. } => "tw_b_averaged",
        }
    }

    pub fn theta_p(&self) -> T {
        match *self {
            Mode::Plane => T::zero(),
            Mode::TwistedFixed { theta_p, .. } | Mode::TwistedAveraged { theta_p } => theta_p,
        }
    }

    /// Topological charge, zero where it plays no role.
    pub fn ml(&self) -> i32 {
        match *self {
            Mode::TwistedFixed { ml, .. } => ml,
            _ => 0,
        }
    }
}

/// Numerical settings shared by every scan point.
#[derive(Debug, Clone)]
pub struct DcsSettings<T> {
    pub n_phi: usize,
    /// Average over molecular orientations when present.
    pub orientation: Option<EulerGrid<T>>,
}

impl<T: Real> Default for DcsSettings<T> {
    fn default() -> Self {
        DcsSettings { n_phi: DEFAULT_PHI_NODES, orientation: None }
    }
}

/// One output value. `theta_s` is in degrees and is `None` for total cross
/// sections; `value` is bohr^2/sr for a DCS and bohr^2 for a TCS.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionRecord<T> {
    pub energy_ev: T,
    pub theta_s_deg: Option<T>,
    pub mode: Mode<T>,
    pub orientation_averaged: bool,
    pub value: T,
}

/// Differential cross section at one energy and scattering angle (radians).
pub fn dcs<T: Real>(
    target: &dyn Target<T>,
    mode: &Mode<T>,
    energy_ev: T,
    theta_s: T,
    settings: &DcsSettings<T>,
) -> Result<T> {
    enum Eval<T> {
        Plane(crate::kinematics::Vec3<T>),
        Fixed(TwistedKernel<T>),
        Averaged(TwistedKernel<T>),
    }
    if !(theta_s >= T::zero() && theta_s <= T::PI()) {
        return Err(Error::domain(format!("scattering angle {theta_s} rad outside [0, pi]")));
    }
    let eval = match *mode {
        Mode::Plane => Eval::Plane(delta_plane_vector(wave_number(energy_ev)?, theta_s)),
        Mode::TwistedFixed { theta_p, ml } => {
            let beam = BeamParams::new(energy_ev, theta_p, ml)?;
            Eval::Fixed(TwistedKernel::new(&beam, theta_s, settings.n_phi)?)
        }
        Mode::TwistedAveraged { theta_p } => {
            let beam = BeamParams::new(energy_ev, theta_p, 0)?;
            Eval::Averaged(TwistedKernel::new(&beam, theta_s, settings.n_phi)?)
        }
    };
    let one = |t: &dyn Target<T>| -> Result<T> {
        match &eval {
            Eval::Plane(d) => t.amplitude(d).map(|a| a.norm_sqr()),
            Eval::Fixed(k) => k.amplitude(t).map(|a| a.dcs()),
            Eval::Averaged(k) => k.b_averaged(t),
        }
    };
    match &settings.orientation {
        Some(grid) => orientation_average(grid, target, one),
        None => one(target),
    }
}

/// `2 pi int_0^pi sin(theta) f(theta) d theta` by `n_theta`-point
/// Gauss-Legendre; nodes are evaluated in parallel, summed in order.
pub fn total_cross_section<T, F>(n_theta: usize, f: F) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    if n_theta < MIN_THETA_NODES {
        return Err(Error::domain(format!(
            "total cross section needs at least {MIN_THETA_NODES} polar nodes, got {n_theta}"
        )));
    }
    let rule = gauss_legendre::<T>(n_theta)?;
    let nodes: Vec<(T, T)> = rule.mapped(T::zero(), T::PI()).collect();
    let terms = nodes
        .par_iter()
        .map(|&(t, w)| f(t).map(|v| v * w * t.sin()))
        .collect::<Result<Vec<T>>>()?;
    Ok(T::TAU() * pairwise_sum(&terms))
}

/// Total cross section for one mode and energy.
pub fn tcs<T: Real>(
    target: &dyn Target<T>,
    mode: &Mode<T>,
    energy_ev: T,
    settings: &DcsSettings<T>,
    n_theta: usize,
) -> Result<T> {
    total_cross_section(n_theta, |t| dcs(target, mode, energy_ev, t, settings))
}

/// Index of the largest value. Values within 1e-12 relative of the maximum
/// count as ties and the earliest (smallest angle) wins.
pub fn peak_index<T: Real>(values: &[T]) -> Option<usize> {
    let max = values.iter().copied().filter(|v| !v.is_nan()).fold(None, |m: Option<T>, v| {
        Some(m.map_or(v, |m| m.max(v)))
    })?;
    let tol = T::lit(1e-12) * max.abs();
    values.iter().position(|&v| v >= max - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::EulerMeasure;
    use crate::wfn::AnalyticDensity;
    use std::f64::consts::PI;

    #[test]
    fn solid_angle_integrals() {
        let c = 2.5;
        let s = total_cross_section(64, |_| Ok(c)).unwrap();
        assert!((s - 4.0 * PI * c).abs() < 1e-10 * s);
        let s = total_cross_section(64, |t: f64| Ok(c * (t / 2.0).cos().powi(2))).unwrap();
        assert!((s - 2.0 * PI * c).abs() < 1e-8 * s);
        assert!(total_cross_section(63, |_| Ok(1.0_f64)).is_err());
    }

    #[test]
    fn peak_ties_go_to_the_smaller_angle() {
        assert_eq!(peak_index(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(peak_index(&[1.0, 3.0, 3.0 * (1.0 + 1e-13), 2.0]), Some(1));
        assert_eq!(peak_index(&[1.0, 3.0, 3.0 * (1.0 + 1e-9), 2.0]), Some(2));
        assert_eq!(peak_index(&[f64::NAN, 0.5, 0.2]), Some(1));
        assert_eq!(peak_index::<f64>(&[]), None);
    }

    #[test]
    fn modes() {
        let m = Mode::TwistedFixed { theta_p: 0.2_f64, ml: 3 };
        assert_eq!((m.label(), m.ml(), m.theta_p()), ("tw_fixed", 3, 0.2));
        assert_eq!(Mode::<f64>::Plane.label(), "pw");
        assert_eq!(Mode::TwistedAveraged { theta_p: 0.1_f64 }.label(), "tw_b_averaged");
    }

    #[test]
    fn plane_cone_total_cross_sections_agree() {
        let co2 = AnalyticDensity::<f64>::co2_iam();
        let s = DcsSettings::default();
        let pw = tcs(&co2, &Mode::Plane, 1000.0, &s, 96).unwrap();
        let tw = tcs(&co2, &Mode::TwistedAveraged { theta_p: 0.0 }, 1000.0, &s, 96).unwrap();
        assert!((pw - tw).abs() < 1e-3 * pw);
        assert!(pw > 0.0);
    }

    #[test]
    fn cross_sections_are_non_negative() {
        let co2 = AnalyticDensity::<f64>::co2_iam();
        let s = DcsSettings { n_phi: 64, orientation: Some(EulerGrid::cubic(8, EulerMeasure::Haar).unwrap()) };
        for mode in [
            Mode::Plane,
            Mode::TwistedFixed { theta_p: 0.3, ml: 2 },
            Mode::TwistedAveraged { theta_p: 0.3 },
        ] {
            for ts in [0.0, 0.3, 2.0] {
                assert!(dcs(&co2, &mode, 600.0, ts, &s).unwrap() >= 0.0);
            }
        }
        assert!(dcs(&co2, &Mode::Plane, 600.0, -0.1, &s).is_err());
        assert!(dcs(&co2, &Mode::Plane, -5.0, 0.1, &s).is_err());
    }
}
