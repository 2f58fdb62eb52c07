use super::{cartesian_powers, Nucleus, Wavefunction};
use crate::kinematics::Rotation;
use crate::real::Real;

/// Screening threshold on the Gaussian exponent argument: primitives with
/// `-zeta |r - R|^2 < -46` contribute less than 1e-20 and may be skipped.
pub const DEFAULT_SCREENING_ARG: f64 = -46.0;

/// A molecular target: nuclei plus an electron density in e/bohr^3.
pub trait ElectronDensity<T: Real>: Sync {
    fn density_at(&self, r: &[T; 3]) -> T;

    /// Electron count the density is normalized to.
    fn electron_count(&self) -> T;

    fn nuclei(&self) -> &[Nucleus<T>];
}

#[inline]
fn powi<T: Real>(x: T, n: u8) -> T {
    match n {
        0 => T::one(),
        1 => x,
        2 => x * x,
        3 => x * x * x,
        _ => x.powi(n as i32),
    }
}

impl<T: Real> Wavefunction<T> {
    /// Values of every primitive at `r`. `screen` is the most negative
    /// exponent argument still evaluated; `None` evaluates everything.
    fn primitive_values(&self, r: &[T; 3], screen: Option<T>) -> Vec<T> {
        self.primitives
            .iter()
            .map(|p| {
                let c = &self.nuclei[p.center_index - 1].position;
                let (dx, dy, dz) = (r[0] - c[0], r[1] - c[1], r[2] - c[2]);
                let arg = -p.exponent * (dx * dx + dy * dy + dz * dz);
                if matches!(screen, Some(s) if arg < s) {
                    return T::zero();
                }
                let [a, b, cz] = cartesian_powers(p.type_code).expect("validated at parse");
                powi(dx, a) * powi(dy, b) * powi(dz, cz) * arg.exp()
            })
            .collect()
    }

    fn density_from(&self, basis: &[T]) -> T {
        self.orbitals
            .iter()
            .filter(|mo| mo.occupation != T::zero())
            .map(|mo| {
                let amp: T = mo
                    .coefficients
                    .iter()
                    .zip(basis)
                    .map(|(&c, &b)| c * b)
                    .sum();
                mo.occupation * amp * amp
            })
            .sum()
    }

    /// Electron density with primitives below the screening argument skipped.
    pub fn density_at_screened(&self, r: &[T; 3], screen_arg: T) -> T {
        self.density_from(&self.primitive_values(r, Some(screen_arg)))
    }
}

impl<T: Real> ElectronDensity<T> for Wavefunction<T> {
    /// `sum_i eta_i |sum_mu C_mu,i beta_mu(r)|^2`, no screening.
    fn density_at(&self, r: &[T; 3]) -> T {
        self.density_from(&self.primitive_values(r, None))
    }

    fn electron_count(&self) -> T {
        self.electron_count
    }

    fn nuclei(&self) -> &[Nucleus<T>] {
        &self.nuclei
    }
}

/// A density carried along by a fixed rotation: `rho'(r) = rho(R^T r)`,
/// nuclei moved to `R l_j`.
pub struct RotatedDensity<'a, T, D: ?Sized> {
    inner: &'a D,
    rotation: Rotation<T>,
    inverse: Rotation<T>,
    nuclei: Vec<Nucleus<T>>,
}

impl<'a, T: Real, D: ElectronDensity<T> + ?Sized> RotatedDensity<'a, T, D> {
    pub fn new(inner: &'a D, rotation: Rotation<T>) -> Self {
        let nuclei = inner
            .nuclei()
            .iter()
            .map(|n| Nucleus {
                label: n.label.clone(),
                charge: n.charge,
                position: rotation.apply(&n.position),
            })
            .collect();
        RotatedDensity {
            inner,
            rotation,
            inverse: rotation.transpose(),
            nuclei,
        }
    }

    pub fn rotation(&self) -> &Rotation<T> {
        &self.rotation
    }
}

impl<T: Real, D: ElectronDensity<T> + ?Sized> ElectronDensity<T> for RotatedDensity<'_, T, D> {
    fn density_at(&self, r: &[T; 3]) -> T {
        self.inner.density_at(&self.inverse.apply(r))
    }

    fn electron_count(&self) -> T {
        self.inner.electron_count()
    }

    fn nuclei(&self) -> &[Nucleus<T>] {
        &self.nuclei
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wfn::{parse_wfn, GaussianPrimitive, MolecularOrbital};

    fn single_s(coef: f64, occ: f64) -> Wavefunction<f64> {
        Wavefunction {
            title: "s".into(),
            nuclei: vec![Nucleus {
                label: "H".into(),
                charge: 1.0,
                position: [0.3, -0.2, 0.1],
            }],
            primitives: vec![GaussianPrimitive {
                center_index: 1,
                type_code: 1,
                exponent: 1.7,
            }],
            orbitals: vec![MolecularOrbital {
                occupation: occ,
                energy: -0.5,
                coefficients: vec![coef],
            }],
            electron_count: occ,
            total_energy: None,
            virial_ratio: None,
        }
    }

    #[test]
    fn s_primitive_at_its_centre() {
        let w = single_s(0.37, 2.0);
        assert!((w.density_at(&[0.3, -0.2, 0.1]) - 2.0 * 0.37 * 0.37).abs() < 1e-15);
    }

    #[test]
    fn angular_factor_is_applied() {
        let mut w = single_s(1.0, 1.0);
        w.primitives[0].type_code = 31; // XXYZ
        let (dx, dy, dz) = (0.5, -0.4, 0.3);
        let r = [0.3 + dx, -0.2 + dy, 0.1 + dz];
        let beta = dx * dx * dy * dz * (-1.7 * (dx * dx + dy * dy + dz * dz) as f64).exp();
        assert!((w.density_at(&r) - beta * beta).abs() < 1e-15);
    }

    #[test]
    fn screening_only_drops_negligible_terms() {
        let w: Wavefunction<f64> =
            parse_wfn(include_str!("../../fixtures/co2_model.wfn").as_bytes()).unwrap();
        for r in [[0.0, 0.0, 0.0], [0.4, -1.1, 2.0], [3.0, 3.0, -4.0]] {
            let full = w.density_at(&r);
            let screened = w.density_at_screened(&r, DEFAULT_SCREENING_ARG);
            assert!((full - screened).abs() <= 1e-18 + 1e-15 * full);
        }
        assert_eq!(w.density_at_screened(&[9.0, 9.0, 9.0], DEFAULT_SCREENING_ARG), 0.0);
    }

    #[test]
    fn rotated_density_follows_its_nuclei() {
        let w = single_s(0.5, 2.0);
        let q = Rotation::about_x(0.4).compose(&Rotation::about_z(-1.3));
        let r = RotatedDensity::new(&w, q);
        let moved = r.nuclei()[0].position;
        assert!((r.density_at(&moved) - w.density_at(&w.nuclei[0].position)).abs() < 1e-14);
        let p = [0.2, 0.9, -0.4];
        assert!((r.density_at(&q.apply(&p)) - w.density_at(&p)).abs() < 1e-14);
    }
}
