use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kinematics::MomentumTransfer;
use crate::quadrature::{integrate, SphericalGrid};
use crate::real::Real;
use crate::wfn::{ElectronDensity, Nucleus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeKind {
    Plane,
    Twisted,
}

/// Scattering amplitude in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude<T> {
    pub value: Complex<T>,
    pub kind: AmplitudeKind,
}

impl<T: Real> Amplitude<T> {
    /// Differential cross section `|T|^2`.
    pub fn dcs(&self) -> T {
        self.value.norm_sqr()
    }
}

/// Cosine of the angle between directions (theta1, phi1) and (theta2, phi2).
#[inline]
fn angle_cosine<T: Real>(t1: T, p1: T, t2: T, p2: T) -> T {
    t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos()
}

/// `sum_j Z_j exp(i D . l_j)` with each projection built from the polar and
/// azimuthal angles of D and of the nuclear position.
pub fn nuclear_term<T: Real>(nuclei: &[Nucleus<T>], delta: &MomentumTransfer<T>) -> Complex<T> {
    let terms: Vec<Complex<T>> = nuclei
        .iter()
        .map(|n| {
            let [x, y, z] = n.position;
            let l = (x * x + y * y + z * z).sqrt();
            if l == T::zero() {
                return Complex::new(n.charge, T::zero());
            }
            let (tl, pl) = ((z / l).max(-T::one()).min(T::one()).acos(), y.atan2(x));
            let proj = delta.magnitude * l * angle_cosine(delta.theta, delta.phi, tl, pl);
            Complex::from_polar(n.charge, proj)
        })
        .collect();
    crate::real::pairwise_sum(&terms)
}

/// Same sum from a Cartesian transfer vector.
pub fn nuclear_term_cartesian<T: Real>(nuclei: &[Nucleus<T>], delta: &[T; 3]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for n in nuclei {
        let p = &n.position;
        acc += Complex::from_polar(n.charge, delta[0] * p[0] + delta[1] * p[1] + delta[2] * p[2]);
    }
    acc
}

/// Form factor `int exp(i D . r) rho(r) d^3r` over the grid, with `D . r`
/// written as `D r cos(angle)` from the spherical angles of both vectors.
pub fn form_factor<T: Real, D: ElectronDensity<T> + ?Sized>(
    density: &D,
    grid: &SphericalGrid<T>,
    delta: &MomentumTransfer<T>,
) -> Result<Complex<T>> {
    integrate(grid, |p| {
        let proj = delta.magnitude
            * p.r
            * (delta.theta.cos() * p.cos_theta
                + delta.theta.sin() * p.sin_theta * (delta.phi - p.phi).cos());
        Complex::from_polar(density.density_at(&p.position), proj)
    })
}

/// `-(2 / D^2) (alpha - chi)`.
pub fn t_plane<T: Real>(alpha: Complex<T>, chi: Complex<T>, delta: T) -> Result<Amplitude<T>> {
    if delta == T::zero() {
        return Err(Error::ForwardSingularity);
    }
    Ok(Amplitude {
        value: (alpha - chi) * (-T::lit(2.0) / (delta * delta)),
        kind: AmplitudeKind::Plane,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::TransferKind;
    use crate::quadrature::PolarRule;
    use crate::wfn::AnalyticDensity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn co2_nuclei() -> Vec<Nucleus<f64>> {
        [(6.0, 0.0), (8.0, 2.185), (8.0, -2.185)]
            .iter()
            .map(|&(z, pos)| Nucleus { label: "X".into(), charge: z, position: [0.0, 0.0, pos] })
            .collect()
    }

    fn transfer(magnitude: f64, theta: f64, phi: f64) -> MomentumTransfer<f64> {
        MomentumTransfer { magnitude, theta, phi, kind: TransferKind::Plane }
    }

    #[test]
    fn nuclear_term_at_zero_transfer_is_total_charge() {
        let a = nuclear_term(&co2_nuclei(), &transfer(0.0, 0.3, 1.0));
        assert_eq!(a, Complex::new(22.0, 0.0));
    }

    #[test]
    fn nuclear_term_matches_linear_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l1 = 2.185;
        for _ in 0..1000 {
            let d = transfer(rng.gen_range(0.0..25.0), rng.gen_range(0.0..std::f64::consts::PI), rng.gen_range(-3.2..3.2));
            let a = nuclear_term(&co2_nuclei(), &d);
            let closed = 16.0 * (l1 * d.magnitude * d.theta.cos()).cos() + 6.0;
            assert!((a.re - closed).abs() < 1e-12, "{a} vs {closed}");
            assert!(a.im.abs() < 1e-12);
            let c = nuclear_term_cartesian(&co2_nuclei(), &d.cartesian());
            assert!((c - a).norm() < 1e-11);
        }
    }

    #[test]
    fn nuclear_term_full_destructive_phase() {
        let l1 = 2.185;
        let d = transfer(std::f64::consts::PI / l1, 0.0, 0.0);
        let a = nuclear_term(&co2_nuclei(), &d);
        assert!((a.re + 10.0).abs() < 1e-12);
    }

    #[test]
    fn hydrogenic_form_factor() {
        let rho = AnalyticDensity::<f64>::hydrogenic(1.0, 1.0).unwrap();
        let grid = SphericalGrid::new(25, 10.0, PolarRule::CosTheta).unwrap();
        let chi0 = form_factor(&rho, &grid, &transfer(0.0, 0.0, 0.0)).unwrap();
        assert!((chi0.re - 1.0).abs() < 1e-6);
        let chi = form_factor(&rho, &grid, &transfer(2.0, 0.0, 0.0)).unwrap();
        assert!((chi.re - 0.25).abs() < 1e-6);
        assert!(chi.im.abs() < 1e-10);
    }

    #[test]
    fn centrosymmetric_form_factor_is_real() {
        // The azimuthal Gauss-Legendre nodes are mirror symmetric in y but not
        // in x, so the odd part cancels exactly only for transfers in the yz-plane.
        let rho = AnalyticDensity::co2_iam();
        let grid = SphericalGrid::new(25, 10.0, PolarRule::CosTheta).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        for (d, t, p) in [(1.0, 0.4, half_pi), (3.0, 1.2, -half_pi), (0.5, 0.0, 0.0), (9.0, 2.2, half_pi)] {
            let chi = form_factor(&rho, &grid, &transfer(d, t, p)).unwrap();
            assert!(chi.im.abs() < 1e-10, "{chi}");
        }
    }

    #[test]
    fn plane_amplitude_examples() {
        let z = Complex::new(0.0, 0.0);
        let a = t_plane(Complex::new(3.0, 1.0), Complex::new(3.0, 1.0), 1.5).unwrap();
        assert_eq!(a.value, z);
        let a = t_plane(Complex::new(22.0, 0.0), z, 2.0).unwrap();
        assert_eq!(a.value, Complex::new(-11.0, 0.0));
        assert_eq!(a.dcs(), 121.0);
        assert_eq!(t_plane(z, z, 0.0_f64), Err(Error::ForwardSingularity));
        let imag = Amplitude { value: Complex::new(0.0, 3.0_f64), kind: AmplitudeKind::Twisted };
        assert_eq!(imag.dcs(), 9.0);
    }

    #[test]
    fn hydrogenic_amplitude_approaches_rutherford() {
        let rho = AnalyticDensity::<f64>::hydrogenic(1.0, 1.0).unwrap();
        let grid = SphericalGrid::new(25, 10.0, PolarRule::CosTheta).unwrap();
        let mut prev = f64::INFINITY;
        for d in [1.0, 2.0, 4.0, 6.0] {
            let m = transfer(d, 0.0, 0.0);
            let t = t_plane(nuclear_term(rho.nuclei(), &m), form_factor(&rho, &grid, &m).unwrap(), d).unwrap();
            let ratio = t.value.re / (-2.0 / (d * d));
            let screening = 16.0 / (4.0 + d * d).powi(2);
            assert!((ratio - (1.0 - screening)).abs() < 1e-5, "{d}: {ratio}");
            assert!((1.0 - ratio).abs() < prev);
            prev = (1.0 - ratio).abs();
        }
        assert!(prev < 1.1e-2);
    }
}
