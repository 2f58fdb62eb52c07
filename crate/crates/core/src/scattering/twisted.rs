use num_complex::Complex;

use super::amplitude::{Amplitude, AmplitudeKind};
use super::target::Target;
use crate::error::{Error, Result};
use crate::kinematics::{delta_twisted_vector, BeamParams, Vec3};
use crate::real::{pairwise_sum, Real};

pub const DEFAULT_PHI_NODES: usize = 256;
pub const MIN_PHI_NODES: usize = 64;

/// `sqrt(kappa) / ((2 pi)^2 sqrt(2 pi))`: Bessel-beam weight of each cone
/// component times the azimuthal measure.
pub fn twisted_prefactor<T: Real>(kappa: T) -> T {
    let tau = T::TAU();
    kappa.sqrt() / (tau * tau * tau.sqrt())
}

/// `(-i)^m`
fn minus_i_pow<T: Real>(m: i32) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match m.rem_euclid(4) {
        0 => Complex::new(o, z),
        1 => Complex::new(z, -o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, o),
    }
}

/// Transfers and weights of the azimuthal trapezoid rule for one beam and
/// scattering angle, reusable across target orientations.
#[derive(Debug, Clone)]
pub struct TwistedKernel<T> {
    theta_p: T,
    ml: i32,
    transfers: Vec<Vec3<T>>,
    /// `C(kappa) (-i)^m (2 pi / n) exp(i m phi_j)`
    weights: Vec<Complex<T>>,
}

impl<T: Real> TwistedKernel<T> {
    pub fn new(beam: &BeamParams<T>, theta_s: T, n_phi: usize) -> Result<Self> {
        if n_phi < MIN_PHI_NODES {
            return Err(Error::domain(format!(
                "azimuthal rule needs at least {MIN_PHI_NODES} nodes, got {n_phi}"
            )));
        }
        if !(theta_s >= T::zero() && theta_s <= T::PI()) {
            return Err(Error::domain(format!("scattering angle {theta_s} rad outside [0, pi]")));
        }
        let n = T::from_usize_lossy(n_phi);
        let step = T::TAU() / n;
        let front = minus_i_pow::<T>(beam.ml) * (twisted_prefactor(beam.kappa) * step);
        let m = T::lit(beam.ml as f64);
        let (transfers, weights) = (0..n_phi)
            .map(|j| {
                let phi = step * T::from_usize_lossy(j);
                (
                    delta_twisted_vector(beam.k, beam.theta_p, theta_s, phi),
                    front * Complex::from_polar(T::one(), m * phi),
                )
            })
            .unzip();
        Ok(TwistedKernel {
            theta_p: beam.theta_p,
            ml: beam.ml,
            transfers,
            weights,
        })
    }

    pub fn transfers(&self) -> &[Vec3<T>] {
        &self.transfers
    }

    /// Twisted amplitude at zero impact parameter.
    pub fn amplitude(&self, target: &(impl Target<T> + ?Sized)) -> Result<Amplitude<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        if self.theta_p == T::zero() && self.ml != 0 {
            return Ok(Amplitude { value: zero, kind: AmplitudeKind::Twisted });
        }
        let terms = self
            .transfers
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| target.amplitude(d).map(|a| a * w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Amplitude { value: pairwise_sum(&terms), kind: AmplitudeKind::Twisted })
    }

    /// Impact-parameter averaged cross section: the mean plane-wave cross
    /// section over the cone, divided by `cos theta_p`. The topological
    /// charge never enters.
    pub fn b_averaged(&self, target: &(impl Target<T> + ?Sized)) -> Result<T> {
        let terms = self
            .transfers
            .iter()
            .map(|d| target.amplitude(d).map(|a| a.norm_sqr()))
            .collect::<Result<Vec<_>>>()?;
        let n = T::from_usize_lossy(terms.len());
        Ok(pairwise_sum(&terms) / (n * self.theta_p.cos()))
    }
}

/// Twisted-beam amplitude at zero impact parameter, trapezoid rule over
/// `n_phi` cone azimuths.
pub fn t_twisted<T: Real>(
    target: &(impl Target<T> + ?Sized),
    beam: &BeamParams<T>,
    theta_s: T,
    n_phi: usize,
) -> Result<Amplitude<T>> {
    TwistedKernel::new(beam, theta_s, n_phi)?.amplitude(target)
}

/// Impact-parameter averaged twisted DCS.
pub fn dcs_b_averaged<T: Real>(
    target: &(impl Target<T> + ?Sized),
    beam: &BeamParams<T>,
    theta_s: T,
    n_phi: usize,
) -> Result<T> {
    TwistedKernel::new(beam, theta_s, n_phi)?.b_averaged(target)
}
