use rayon::prelude::*;

use super::target::{Oriented, Target};
use crate::error::{Error, Result};
use crate::kinematics::{euler_matrix, EulerAngles, Rotation};
use crate::quadrature::gauss_legendre;
use crate::real::{pairwise_sum, Real};

pub const MIN_EULER_NODES: usize = 8;
pub const DEFAULT_EULER_NODES: usize = 16;

/// Weighting of the Euler angle samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EulerMeasure {
    /// Invariant measure `sin(beta) d alpha d beta d gamma / 8 pi^2`.
    #[default]
    Haar,
    /// Flat weight in beta.
    Uniform,
}

/// Product rule over Euler angles: uniform nodes in alpha and gamma,
/// Gauss-Legendre nodes in beta on (0, pi). Weights sum to one.
#[derive(Debug, Clone)]
pub struct EulerGrid<T> {
    pub sizes: (usize, usize, usize),
    pub measure: EulerMeasure,
    samples: Vec<(Rotation<T>, T)>,
}

impl<T: Real> EulerGrid<T> {
    pub fn new(n_alpha: usize, n_beta: usize, n_gamma: usize, measure: EulerMeasure) -> Result<Self> {
        if n_alpha.min(n_beta).min(n_gamma) < MIN_EULER_NODES {
            return Err(Error::domain(format!(
                "Euler grid {n_alpha} x {n_beta} x {n_gamma} below the minimum of {MIN_EULER_NODES} per angle"
            )));
        }
        let beta_rule = gauss_legendre::<T>(n_beta)?;
        // For R = Rx Ry Rz the invariant density is |cos(beta)|; the middle
        // angle on [-pi/2, pi/2] with full alpha and gamma covers SO(3) once.
        let half = T::FRAC_PI_2();
        let betas: Vec<(T, T)> = match measure {
            EulerMeasure::Haar => beta_rule.mapped(-half, half).map(|(b, w)| (b, w * b.cos())).collect(),
            EulerMeasure::Uniform => beta_rule.mapped(T::zero(), T::PI()).collect(),
        };
        let uniform = |n: usize, i: usize| T::TAU() * T::from_usize_lossy(i) / T::from_usize_lossy(n);
        let mut samples = Vec::with_capacity(n_alpha * n_beta * n_gamma);
        for i in 0..n_alpha {
            for &(beta, wb) in &betas {
                for g in 0..n_gamma {
                    let angles = EulerAngles { alpha: uniform(n_alpha, i), beta, gamma: uniform(n_gamma, g) };
                    samples.push((euler_matrix(&angles), wb));
                }
            }
        }
        let weights: Vec<T> = samples.iter().map(|s| s.1).collect();
        let total = pairwise_sum(&weights);
        for s in &mut samples {
            s.1 /= total;
        }
        Ok(EulerGrid { sizes: (n_alpha, n_beta, n_gamma), measure, samples })
    }

    pub fn cubic(n: usize, measure: EulerMeasure) -> Result<Self> {
        Self::new(n, n, n, measure)
    }

    /// Rotations and normalized weights.
    pub fn samples(&self) -> &[(Rotation<T>, T)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Weighted mean of `eval` over the target seen in every rotated frame of
/// the grid. Orientations are evaluated in parallel and summed in grid order.
pub fn orientation_average<T, F>(grid: &EulerGrid<T>, target: &dyn Target<T>, eval: F) -> Result<T>
where
    T: Real,
    F: Fn(&dyn Target<T>) -> Result<T> + Sync,
{
    let terms = grid
        .samples()
        .par_iter()
        .map(|(rotation, w)| {
            let view = Oriented { inner: target, rotation: *rotation };
            eval(&view).map(|v| v * *w)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::delta_plane_vector;
    use crate::wfn::AnalyticDensity;

    #[test]
    fn weights_are_normalized() {
        for m in [EulerMeasure::Haar, EulerMeasure::Uniform] {
            let g = EulerGrid::<f64>::new(8, 9, 10, m).unwrap();
            assert_eq!(g.len(), 720);
            let w: f64 = g.samples().iter().map(|s| s.1).sum();
            assert!((w - 1.0).abs() < 1e-14);
            for (r, _) in g.samples() {
                assert!(r.orthogonality_defect() < 1e-14);
            }
        }
        assert!(EulerGrid::<f64>::new(8, 7, 8, EulerMeasure::Haar).is_err());
    }

    #[test]
    fn haar_rule_gives_one_third_for_squared_matrix_elements() {
        let g = EulerGrid::<f64>::cubic(16, EulerMeasure::Haar).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let m: f64 = g.samples().iter().map(|(r, w)| w * r.0[a][b] * r.0[a][b]).sum();
                assert!((m - 1.0 / 3.0).abs() < 1e-12, "{a}{b}: {m}");
            }
        }
        let u = EulerGrid::<f64>::cubic(16, EulerMeasure::Uniform).unwrap();
        let m: f64 = u.samples().iter().map(|(r, w)| w * r.0[0][2] * r.0[0][2]).sum();
        assert!((m - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spherical_target_is_orientation_independent() {
        let h = AnalyticDensity::<f64>::hydrogenic(1.0, 1.0).unwrap();
        let g = EulerGrid::cubic(8, EulerMeasure::Haar).unwrap();
        for ts in [0.0, 0.3, 1.7] {
            let d = delta_plane_vector(3.0, ts);
            let fixed = h.amplitude(&d).unwrap().norm_sqr();
            let avg = orientation_average(&g, &h, |t| t.amplitude(&d).map(|a| a.norm_sqr())).unwrap();
            assert!((avg - fixed).abs() < 1e-8 * fixed, "{avg} vs {fixed}");
        }
    }

    #[test]
    fn ordered_reduction_is_reproducible() {
        let co2 = AnalyticDensity::<f64>::co2_iam();
        let g = EulerGrid::cubic(10, EulerMeasure::Haar).unwrap();
        let d = delta_plane_vector(6.0, 0.4);
        let f = |t: &dyn Target<f64>| t.amplitude(&d).map(|a| a.norm_sqr());
        let a = orientation_average(&g, &co2, f).unwrap();
        let b = orientation_average(&g, &co2, f).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
