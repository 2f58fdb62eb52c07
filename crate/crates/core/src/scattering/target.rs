use num_complex::Complex;

use super::amplitude::{nuclear_term_cartesian, t_plane};
use super::samples::DensitySamples;
use crate::error::{Error, Result};
use crate::kinematics::{norm, Rotation, Vec3};
use crate::quadrature::SphericalGrid;
use crate::real::Real;
use crate::wfn::{AnalyticDensity, ElectronDensity, Nucleus};

/// Transfers shorter than this (bohr^-1) use the forward-limit fit.
pub const FORWARD_DELTA_MIN: f64 = 1e-3;

/// Approach direction for an exactly vanishing transfer: the direction a
/// plane-wave transfer takes as the scattering angle goes to zero.
const FORWARD_DIRECTION: [f64; 3] = [-1.0, 0.0, 0.0];

/// Largest |Z - N| accepted as neutral.
const NEUTRALITY_TOLERANCE: f64 = 1e-4;

/// Anything that yields the plane-wave amplitude `T_pw` for a transfer
/// vector given in the laboratory frame.
pub trait Target<T: Real>: Sync {
    /// Amplitude for `D != 0`. Very short transfers are allowed but may be
    /// dominated by cancellation.
    fn amplitude_regular(&self, delta: &Vec3<T>) -> Result<Complex<T>>;

    /// Amplitude for any transfer. Below [`FORWARD_DELTA_MIN`] the value
    /// comes from `a + b D^2` fitted through the amplitudes at twice and four
    /// times the threshold along the same direction.
    fn amplitude(&self, delta: &Vec3<T>) -> Result<Complex<T>> {
        let d = norm(delta);
        let dmin = T::lit(FORWARD_DELTA_MIN);
        if d >= dmin {
            return self.amplitude_regular(delta);
        }
        let dir = if d > T::zero() {
            [delta[0] / d, delta[1] / d, delta[2] / d]
        } else {
            FORWARD_DIRECTION.map(T::lit)
        };
        forward_fit(self, &dir, d)
    }
}

/// `a + b D^2` through the regular amplitudes at twice and four times
/// [`FORWARD_DELTA_MIN`] along the unit vector `dir`, evaluated at `d`.
pub fn forward_fit<T: Real, G: Target<T> + ?Sized>(target: &G, dir: &Vec3<T>, d: T) -> Result<Complex<T>> {
    let dmin = T::lit(FORWARD_DELTA_MIN);
    let at = |s: T| target.amplitude_regular(&dir.map(|c| c * s * dmin));
    let (t1, t2) = (at(T::lit(2.0))?, at(T::lit(4.0))?);
    let m2 = dmin * dmin;
    let b = (t2 - t1) / (T::lit(12.0) * m2);
    let a = t1 - b * (T::lit(4.0) * m2);
    Ok(a + b * (d * d))
}

/// Fails unless the nuclear charge equals the electron count.
pub fn check_neutral<T: Real>(nuclei: &[Nucleus<T>], electrons: T) -> Result<()> {
    let nuclear: T = nuclei.iter().map(|n| n.charge).sum();
    if (nuclear - electrons).abs() > T::lit(NEUTRALITY_TOLERANCE) {
        return Err(Error::NonNeutral {
            nuclear: nuclear.to_f64().unwrap_or(f64::NAN),
            electrons: electrons.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Evaluates the form factor by full quadrature for every transfer.
#[derive(Debug, Clone)]
pub struct DirectTarget<T> {
    nuclei: Vec<Nucleus<T>>,
    samples: DensitySamples<T>,
}

impl<T: Real> DirectTarget<T> {
    /// Samples the density on `grid`, renormalized to its electron count.
    pub fn new<D: ElectronDensity<T> + ?Sized>(density: &D, grid: &SphericalGrid<T>) -> Result<Self> {
        Self::with_renormalization(density, grid, true)
    }

    /// Like [`DirectTarget::new`]; without renormalization the grid's charge
    /// error survives as a net charge seen at small transfers.
    pub fn with_renormalization<D: ElectronDensity<T> + ?Sized>(
        density: &D,
        grid: &SphericalGrid<T>,
        renormalize: bool,
    ) -> Result<Self> {
        check_neutral(density.nuclei(), density.electron_count())?;
        Ok(DirectTarget {
            nuclei: density.nuclei().to_vec(),
            samples: DensitySamples::new(density, grid, renormalize)?,
        })
    }

    pub fn nuclei(&self) -> &[Nucleus<T>] {
        &self.nuclei
    }

    pub fn samples(&self) -> &DensitySamples<T> {
        &self.samples
    }

    pub fn nuclear_term(&self, delta: &Vec3<T>) -> Complex<T> {
        nuclear_term_cartesian(&self.nuclei, delta)
    }

    pub fn form_factor(&self, delta: &Vec3<T>) -> Complex<T> {
        self.samples.form_factor(delta)
    }
}

impl<T: Real> Target<T> for DirectTarget<T> {
    fn amplitude_regular(&self, delta: &Vec3<T>) -> Result<Complex<T>> {
        let alpha = self.nuclear_term(delta);
        let chi = self.form_factor(delta);
        Ok(t_plane(alpha, chi, norm(delta))?.value)
    }
}

/// Closed-form amplitudes of an analytic density; no quadrature involved.
impl<T: Real> Target<T> for AnalyticDensity<T> {
    fn amplitude_regular(&self, delta: &Vec3<T>) -> Result<Complex<T>> {
        check_neutral(self.nuclei(), self.electron_count())?;
        let alpha = nuclear_term_cartesian(self.nuclei(), delta);
        Ok(t_plane(alpha, self.form_factor(delta), norm(delta))?.value)
    }
}

/// A target seen in a rotated frame: every transfer is rotated before it
/// reaches the inner target.
pub struct Oriented<'a, T: Real> {
    pub inner: &'a dyn Target<T>,
    pub rotation: Rotation<T>,
}

impl<T: Real> Target<T> for Oriented<'_, T> {
    fn amplitude_regular(&self, delta: &Vec3<T>) -> Result<Complex<T>> {
        self.inner.amplitude_regular(&self.rotation.apply(delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::PolarRule;
    use crate::wfn::AnalyticDensity;

    fn co2() -> DirectTarget<f64> {
        let grid = SphericalGrid::new(25, 10.0, PolarRule::CosTheta).unwrap();
        DirectTarget::new(&AnalyticDensity::co2_iam(), &grid).unwrap()
    }

    #[test]
    fn screening_vanishes_quadratically() {
        let t = co2();
        let mut prev: Option<f64> = None;
        for d in [4e-3, 2e-3, 1e-3] {
            let v = [0.3 * d, -0.4 * d, (1.0f64 - 0.25).sqrt() * d];
            let diff = (t.nuclear_term(&v) - t.form_factor(&v)).norm();
            assert!(diff < 1e-2 * (d / 1e-3).powi(2), "{diff} at {d}");
            if let Some(p) = prev {
                let ratio = p / diff;
                assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
            }
            prev = Some(diff);
        }
    }

    #[test]
    fn forward_limit_is_finite_and_continuous() {
        let t = co2();
        let a0 = t.amplitude(&[0.0; 3]).unwrap();
        assert!(a0.re.is_finite() && a0.im.is_finite());
        let near = t.amplitude_regular(&[-0.02, 0.0, 0.0]).unwrap();
        assert!((a0 - near).norm() < 1e-2 * near.norm());
        let tiny = t.amplitude(&[-5e-4, 0.0, 0.0]).unwrap();
        assert!((tiny - a0).norm() < 1e-5 * a0.norm());
    }

    #[test]
    fn charged_targets_are_rejected() {
        let ion = AnalyticDensity::hydrogenic(2.0, 1.0).unwrap();
        let grid = SphericalGrid::new(8, 10.0, PolarRule::CosTheta).unwrap();
        assert!(matches!(DirectTarget::new(&ion, &grid), Err(Error::NonNeutral { .. })));
    }
}
