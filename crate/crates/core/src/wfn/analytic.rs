use num_complex::Complex;

use super::density::ElectronDensity;
use super::Nucleus;
use crate::error::{Error, Result};
use crate::real::Real;

/// One atom of an independent-atom model: a hydrogen-like density
/// `electrons * zeta^3/pi * exp(-2 zeta |r - R|)` around a nucleus of charge
/// `charge`. For a true hydrogenic ion `zeta == charge`.
#[derive(Debug, Clone, PartialEq)]
pub struct IamAtom<T> {
    pub label: String,
    pub position: [T; 3],
    pub charge: T,
    pub electrons: T,
    pub zeta: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticModel<T> {
    /// Single hydrogenic centre at the origin, `zeta = charge`.
    Hydrogenic { charge: T, electrons: T },
    Iam(Vec<IamAtom<T>>),
}

/// Closed-form density used as a test oracle and as a fallback target when
/// no `.wfn` file is available.
#[derive(Debug, Clone)]
pub struct AnalyticDensity<T> {
    atoms: Vec<IamAtom<T>>,
    nuclei: Vec<Nucleus<T>>,
    model: AnalyticModel<T>,
}

impl<T: Real> AnalyticDensity<T> {
    pub fn new(model: AnalyticModel<T>) -> Result<Self> {
        let atoms = match &model {
            AnalyticModel::Hydrogenic { charge, electrons } => vec![IamAtom {
                label: "X".into(),
                position: [T::zero(); 3],
                charge: *charge,
                electrons: *electrons,
                zeta: *charge,
            }],
            AnalyticModel::Iam(atoms) => atoms.clone(),
        };
        if atoms.is_empty() {
            return Err(Error::domain("independent-atom model without atoms"));
        }
        for a in &atoms {
            if !(a.charge > T::zero() && a.electrons > T::zero() && a.zeta > T::zero()) {
                return Err(Error::domain(format!(
                    "atom {}: charge, electron count and exponent must be positive",
                    a.label
                )));
            }
        }
        let nuclei = atoms
            .iter()
            .map(|a| Nucleus {
                label: a.label.clone(),
                charge: a.charge,
                position: a.position,
            })
            .collect();
        Ok(AnalyticDensity {
            atoms,
            nuclei,
            model,
        })
    }

    pub fn hydrogenic(charge: T, electrons: T) -> Result<Self> {
        Self::new(AnalyticModel::Hydrogenic { charge, electrons })
    }

    /// Linear O=C=O on the z axis with O at +/-2.185 bohr and screened
    /// exponents that the default quadrature grid resolves.
    pub fn co2_iam() -> Self {
        let l1 = T::lit(2.185);
        let atom = |label: &str, z: T, q: f64, zeta: f64| IamAtom {
            label: label.into(),
            position: [T::zero(), T::zero(), z],
            charge: T::lit(q),
            electrons: T::lit(q),
            zeta: T::lit(zeta),
        };
        Self::new(AnalyticModel::Iam(vec![
            atom("C", T::zero(), 6.0, 1.4),
            atom("O", l1, 8.0, 1.4),
            atom("O", -l1, 8.0, 1.4),
        ]))
        .expect("valid built-in model")
    }

    pub fn model(&self) -> &AnalyticModel<T> {
        &self.model
    }

    pub fn atoms(&self) -> &[IamAtom<T>] {
        &self.atoms
    }

    /// Closed-form Fourier transform of the density:
    /// `sum_a N_a 16 zeta^4 / (4 zeta^2 + D^2)^2 exp(i D . R_a)`.
    pub fn form_factor(&self, delta: &[T; 3]) -> Complex<T> {
        let d2 = delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2];
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in &self.atoms {
            let z2 = T::lit(4.0) * a.zeta * a.zeta;
            let f = a.electrons * z2 * z2 / ((z2 + d2) * (z2 + d2));
            let phase = delta[0] * a.position[0] + delta[1] * a.position[1] + delta[2] * a.position[2];
            acc += Complex::from_polar(f, phase);
        }
        acc
    }
}

impl<T: Real> ElectronDensity<T> for AnalyticDensity<T> {
    fn density_at(&self, r: &[T; 3]) -> T {
        let two = T::lit(2.0);
        self.atoms
            .iter()
            .map(|a| {
                let d = ((r[0] - a.position[0]).powi(2)
                    + (r[1] - a.position[1]).powi(2)
                    + (r[2] - a.position[2]).powi(2))
                .sqrt();
                a.electrons * a.zeta.powi(3) / T::PI() * (-two * a.zeta * d).exp()
            })
            .sum()
    }

    fn electron_count(&self) -> T {
        self.atoms.iter().map(|a| a.electrons).sum()
    }

    fn nuclei(&self) -> &[Nucleus<T>] {
        &self.nuclei
    }
}
