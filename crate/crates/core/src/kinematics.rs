//! Beam description, momentum-transfer geometry and Euler rotations.
//!
//! Conventions: the beam travels along +z; the scattered wave vector lies in
//! the xz-plane at azimuth 0, `k_s = k (sin th_s, 0, cos th_s)`; each plane-wave
//! component of the Bessel beam is `k (sin th_p cos ph_p, sin th_p sin ph_p, cos th_p)`.
//! Every momentum transfer is `k_i - k_s`.

use crate::error::{Error, Result};
use crate::real::{acos_clamped, Real};

/// Hartree energy in eV.
pub const HARTREE_EV: f64 = 27.211386;

pub type Vec3<T> = [T; 3];

#[inline]
pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm<T: Real>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

/// Wave number in bohr^-1 of an electron with kinetic energy `energy_ev`.
pub fn wave_number<T: Real>(energy_ev: T) -> Result<T> {
    if !(energy_ev > T::zero()) || !energy_ev.is_finite() {
        return Err(Error::domain(format!("energy {energy_ev} eV must be positive")));
    }
    Ok((T::lit(2.0) * energy_ev / T::lit(HARTREE_EV)).sqrt())
}

/// Incident beam at zero impact parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams<T> {
    pub energy_ev: T,
    /// bohr^-1
    pub k: T,
    /// Opening angle, radians in [0, pi/2).
    pub theta_p: T,
    /// Topological charge.
    pub ml: i32,
    /// Transverse wave number `k sin theta_p`, bohr^-1.
    pub kappa: T,
}

impl<T: Real> BeamParams<T> {
    pub fn new(energy_ev: T, theta_p: T, ml: i32) -> Result<Self> {
        let k = wave_number(energy_ev)?;
        if !(theta_p >= T::zero() && theta_p < T::FRAC_PI_2()) {
            return Err(Error::domain(format!(
                "opening angle {theta_p} rad outside [0, pi/2)"
            )));
        }
        Ok(BeamParams {
            energy_ev,
            k,
            theta_p,
            ml,
            kappa: k * theta_p.sin(),
        })
    }

    /// Plane wave: zero opening angle, no twist.
    pub fn plane(energy_ev: T) -> Result<Self> {
        Self::new(energy_ev, T::zero(), 0)
    }

    /// Plane-wave component of the Bessel cone at azimuth `phi_p`.
    pub fn component(&self, phi_p: T) -> Vec3<T> {
        let (sp, cp) = self.theta_p.sin_cos();
        [
            self.k * sp * phi_p.cos(),
            self.k * sp * phi_p.sin(),
            self.k * cp,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransferKind<T> {
    Plane,
    Twisted { phi_p: T },
}

/// Momentum transfer in spherical form. A zero magnitude is the forward
/// singularity; its angles carry the continuity convention only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumTransfer<T> {
    pub magnitude: T,
    pub theta: T,
    pub phi: T,
    pub kind: TransferKind<T>,
}

impl<T: Real> MomentumTransfer<T> {
    pub fn is_forward(&self) -> bool {
        self.magnitude == T::zero()
    }

    pub fn cartesian(&self) -> Vec3<T> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [
            self.magnitude * st * cp,
            self.magnitude * st * sp,
            self.magnitude * ct,
        ]
    }

    /// Spherical form of `v`; zero vectors get theta = pi/2, phi = 0.
    pub fn from_cartesian(v: Vec3<T>, kind: TransferKind<T>) -> Self {
        let magnitude = norm(&v);
        if magnitude == T::zero() {
            return MomentumTransfer {
                magnitude,
                theta: T::FRAC_PI_2(),
                phi: T::zero(),
                kind,
            };
        }
        let theta = acos_clamped(v[2] / magnitude);
        // -0.0 would flip atan2 to -pi on the negative x axis
        let y = if v[1] == T::zero() { T::zero() } else { v[1] };
        let phi = if v[0] == T::zero() && y == T::zero() {
            T::zero()
        } else {
            y.atan2(v[0])
        };
        MomentumTransfer {
            magnitude,
            theta,
            phi,
            kind,
        }
    }
}

fn check_scattering_angle<T: Real>(theta_s: T) -> Result<()> {
    if theta_s >= T::zero() && theta_s <= T::PI() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "scattering angle {theta_s} rad outside [0, pi]"
        )))
    }
}

/// Plane-wave transfer: magnitude `2k sin(th_s/2)`, polar angle
/// `acos[(k/D)(1 - cos th_s)]`. The azimuth is pi: with `k_s` at azimuth 0
/// the transfer points toward -x.
pub fn delta_plane<T: Real>(k: T, theta_s: T) -> Result<MomentumTransfer<T>> {
    check_scattering_angle(theta_s)?;
    let two = T::lit(2.0);
    let half = (theta_s / two).sin();
    let magnitude = two * k * half;
    let theta = if magnitude == T::zero() {
        T::FRAC_PI_2()
    } else {
        // 1 - cos th_s written as 2 sin^2(th_s/2)
        acos_clamped(k / magnitude * two * half * half)
    };
    Ok(MomentumTransfer {
        magnitude,
        theta,
        phi: T::PI(),
        kind: TransferKind::Plane,
    })
}

/// Cartesian `k_i - k_s` for a plane wave along z.
pub fn delta_plane_vector<T: Real>(k: T, theta_s: T) -> Vec3<T> {
    let half = (theta_s / T::lit(2.0)).sin();
    [-k * theta_s.sin(), T::zero(), T::lit(2.0) * k * half * half]
}

/// Angle between a cone component at (th_p, ph_p) and the scattered direction.
pub fn theta_ps<T: Real>(theta_p: T, theta_s: T, phi_p: T) -> T {
    acos_clamped(
        theta_p.cos() * theta_s.cos() + theta_p.sin() * theta_s.sin() * phi_p.cos(),
    )
}

/// Cartesian `k_i^tw(ph_p) - k_s`, with the longitudinal difference written
/// as a product of sines so that near-forward transfers keep full precision.
pub fn delta_twisted_vector<T: Real>(k: T, theta_p: T, theta_s: T, phi_p: T) -> Vec3<T> {
    let two = T::lit(2.0);
    let sp = theta_p.sin();
    let dz = -two * ((theta_p + theta_s) / two).sin() * ((theta_p - theta_s) / two).sin();
    [
        k * (sp * phi_p.cos() - theta_s.sin()),
        k * sp * phi_p.sin(),
        k * dz,
    ]
}

/// Twisted transfer for the cone component at azimuth `phi_p`. Magnitude
/// `2k sin(th_ps/2)`, polar angle `acos[(k/D)(cos th_p - cos th_s)]`, azimuth
/// `acos[k(sin th_p cos ph_p - sin th_s)/(D sin th_D)]` taking the sign of
/// `sin ph_p`; all three are read off the Cartesian difference vector.
pub fn delta_twisted<T: Real>(k: T, theta_p: T, theta_s: T, phi_p: T) -> Result<MomentumTransfer<T>> {
    check_scattering_angle(theta_s)?;
    let v = delta_twisted_vector(k, theta_p, theta_s, phi_p);
    Ok(MomentumTransfer::from_cartesian(v, TransferKind::Twisted { phi_p }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// Proper rotation as a row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T>(pub [[T; 3]; 3]);

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Rotation([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn about_x(a: T) -> Self {
        let (s, c) = a.sin_cos();
        let (o, z) = (T::one(), T::zero());
        Rotation([[o, z, z], [z, c, -s], [z, s, c]])
    }

    pub fn about_y(a: T) -> Self {
        let (s, c) = a.sin_cos();
        let (o, z) = (T::one(), T::zero());
        Rotation([[c, z, s], [z, o, z], [-s, z, c]])
    }

    pub fn about_z(a: T) -> Self {
        let (s, c) = a.sin_cos();
        let (o, z) = (T::one(), T::zero());
        Rotation([[c, -s, z], [s, c, z], [z, z, o]])
    }

    #[inline]
    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Rotation(std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])))
    }

    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        Rotation(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j])
        }))
    }

    pub fn determinant(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entry of |R^T R - I|.
    pub fn orthogonality_defect(&self) -> T {
        let p = self.transpose().compose(self);
        let mut worst = T::zero();
        for (i, row) in p.0.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

/// `R_x(alpha) R_y(beta) R_z(gamma)`, written out entry by entry.
pub fn euler_matrix<T: Real>(e: &EulerAngles<T>) -> Rotation<T> {
    let (sa, ca) = e.alpha.sin_cos();
    let (sb, cb) = e.beta.sin_cos();
    let (sg, cg) = e.gamma.sin_cos();
    Rotation([
        [cb * cg, -cb * sg, sb],
        [ca * sg + sa * sb * cg, ca * cg - sa * sb * sg, -sa * cb],
        [sa * sg - ca * sb * cg, sa * cg + ca * sb * sg, ca * cb],
    ])
}

/// Rotates a transfer through its Cartesian form; magnitude is preserved.
pub fn rotate_transfer<T: Real>(
    delta: &MomentumTransfer<T>,
    rotation: &Rotation<T>,
) -> Result<MomentumTransfer<T>> {
    let defect = rotation.orthogonality_defect();
    if !(defect <= T::loose_eps()) || rotation.determinant() < T::zero() {
        return Err(Error::domain(format!(
            "matrix is not a proper rotation (|R^T R - I| = {defect})"
        )));
    }
    let mut out = MomentumTransfer::from_cartesian(rotation.apply(&delta.cartesian()), delta.kind);
    out.magnitude = delta.magnitude;
    Ok(out)
}
