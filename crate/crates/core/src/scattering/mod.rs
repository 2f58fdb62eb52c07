//! Born amplitudes and cross sections for plane and Bessel beams.
//!
//! A [`Target`] maps a momentum-transfer vector to the plane-wave amplitude
//! `T_pw = -(2/D^2)(alpha - chi)`; everything else (twisted amplitudes,
//! impact-parameter and orientation averages, total cross sections) is
//! built on top of that single call.

mod amplitude;
mod cross_section;
mod orientation;
mod samples;
mod table;
mod target;
mod twisted;

pub use amplitude::{form_factor, nuclear_term, nuclear_term_cartesian, t_plane, Amplitude, AmplitudeKind};
pub use cross_section::{
    dcs, peak_index, tcs, total_cross_section, CrossSectionRecord, DcsSettings, Mode,
    DEFAULT_THETA_NODES, MIN_THETA_NODES,
};
pub use orientation::{orientation_average, EulerGrid, EulerMeasure, DEFAULT_EULER_NODES, MIN_EULER_NODES};
pub use samples::DensitySamples;
pub use table::{
    build_form_factor_table, FormFactorTable, DEFAULT_COS_NODES, DEFAULT_DELTA_NODES, MIN_COS_NODES,
    MIN_DELTA_NODES,
};
pub use target::{check_neutral, forward_fit, DirectTarget, Oriented, Target, FORWARD_DELTA_MIN};
pub use twisted::{dcs_b_averaged, t_twisted, twisted_prefactor, TwistedKernel, DEFAULT_PHI_NODES, MIN_PHI_NODES};
