use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::SphericalGrid;
use crate::real::{pairwise_sum, Real};
use crate::wfn::ElectronDensity;

/// Density evaluated once on a quadrature grid: positions and `w_i rho(r_i)`.
///
/// With `renormalize` the weights are scaled so that they sum to the
/// declared electron count exactly. The quadrature error in the charge then
/// no longer leaves a net charge that would make the amplitude diverge like
/// `1/D^2` at small momentum transfer.
#[derive(Debug, Clone)]
pub struct DensitySamples<T> {
    positions: Vec<[T; 3]>,
    weighted: Vec<T>,
    raw_electron_count: T,
    scale: T,
}

impl<T: Real> DensitySamples<T> {
    pub fn new<D: ElectronDensity<T> + ?Sized>(
        density: &D,
        grid: &SphericalGrid<T>,
        renormalize: bool,
    ) -> Result<Self> {
        let values: Vec<T> = grid
            .points
            .par_iter()
            .map(|p| p.weight * density.density_at(&p.position))
            .collect();
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            let p = &grid.points[index];
            return Err(Error::Integration {
                index,
                r: p.r.to_f64().unwrap_or(f64::NAN),
                theta: p.theta.to_f64().unwrap_or(f64::NAN),
                phi: p.phi.to_f64().unwrap_or(f64::NAN),
            });
        }
        let raw = pairwise_sum(&values);
        let scale = if renormalize {
            if !(raw > T::zero()) {
                return Err(Error::domain("density integrates to zero on the grid"));
            }
            density.electron_count() / raw
        } else {
            T::one()
        };
        Ok(DensitySamples {
            positions: grid.points.iter().map(|p| p.position).collect(),
            weighted: values.into_iter().map(|v| v * scale).collect(),
            raw_electron_count: raw,
            scale,
        })
    }

    /// Electron count integrated on the grid before any rescaling.
    pub fn raw_electron_count(&self) -> T {
        self.raw_electron_count
    }

    pub fn electron_count(&self) -> T {
        pairwise_sum(&self.weighted)
    }

    /// Factor applied to every weight (1 without renormalization).
    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.weighted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weighted.is_empty()
    }

    /// `sum_i w_i rho_i exp(i D . r_i)` in grid order.
    pub fn form_factor(&self, delta: &[T; 3]) -> Complex<T> {
        let terms: Vec<Complex<T>> = self
            .positions
            .iter()
            .zip(&self.weighted)
            .map(|(r, &w)| {
                Complex::from_polar(w, delta[0] * r[0] + delta[1] * r[1] + delta[2] * r[2])
            })
            .collect();
        pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{MomentumTransfer, TransferKind};
    use crate::quadrature::PolarRule;
    use crate::scattering::form_factor;
    use crate::wfn::AnalyticDensity;

    #[test]
    fn matches_angle_form_of_the_integral() {
        let rho = AnalyticDensity::<f64>::co2_iam();
        let grid = SphericalGrid::new(20, 10.0, PolarRule::CosTheta).unwrap();
        let s = DensitySamples::new(&rho, &grid, false).unwrap();
        for (d, t, p) in [(0.7, 0.4, 0.2), (4.0, 2.0, -1.0)] {
            let m = MomentumTransfer { magnitude: d, theta: t, phi: p, kind: TransferKind::Plane };
            let a = s.form_factor(&m.cartesian());
            let b = form_factor(&rho, &grid, &m).unwrap();
            assert!((a - b).norm() < 1e-12 * 22.0, "{a} {b}");
        }
    }

    #[test]
    fn renormalization_is_exact() {
        let rho = AnalyticDensity::<f64>::co2_iam();
        let grid = SphericalGrid::new(15, 10.0, PolarRule::CosTheta).unwrap();
        let s = DensitySamples::new(&rho, &grid, true).unwrap();
        assert!((s.electron_count() - 22.0).abs() < 1e-12);
        assert!((s.raw_electron_count() - 22.0).abs() > 1e-8);
        assert_eq!(s.form_factor(&[0.0; 3]).re, s.electron_count());
    }
}
