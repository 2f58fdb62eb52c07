//! Electron scattering of plane and twisted (Bessel) beams from molecular
//! charge densities in the first Born approximation.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod error;
pub mod kinematics;
pub mod quadrature;
pub mod real;
pub mod scattering;
pub mod wfn;

pub use error::{Error, Result};
pub use real::Real;

pub type Wavefunction64 = wfn::Wavefunction<f64>;
pub type AnalyticDensity64 = wfn::AnalyticDensity<f64>;
pub type SphericalGrid64 = quadrature::SphericalGrid<f64>;
pub type BeamParams64 = kinematics::BeamParams<f64>;
pub type MomentumTransfer64 = kinematics::MomentumTransfer<f64>;
pub type Rotation64 = kinematics::Rotation<f64>;
pub type DirectTarget64 = scattering::DirectTarget<f64>;
pub type FormFactorTable64 = scattering::FormFactorTable<f64>;
pub type EulerGrid64 = scattering::EulerGrid<f64>;
pub type Mode64 = scattering::Mode<f64>;
