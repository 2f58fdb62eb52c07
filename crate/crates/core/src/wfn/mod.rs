//! AIM `.wfn` wavefunctions and the electron density they describe.
//!
//! A `.wfn` file carries uncontracted Cartesian Gaussian primitives, the
//! primitive-level MO coefficients (normalization already folded in) and
//! real occupation numbers, so natural orbitals from correlated runs load the
//! same way as Hartree-Fock orbitals.

mod analytic;
mod density;
mod parse;
mod write;

pub use analytic::{AnalyticDensity, AnalyticModel, IamAtom};
pub use density::{ElectronDensity, RotatedDensity, DEFAULT_SCREENING_ARG};
pub use parse::parse_wfn;
pub use write::write_wfn;

use crate::real::Real;

/// Highest AIM type code supported (last Cartesian g function).
pub const MAX_TYPE_CODE: u8 = 35;

/// Cartesian exponents (a, b, c) of x^a y^b z^c for AIM type codes 1..=35,
/// in the ordering used by Gaussian/Multiwfn `.wfn` output.
const CARTESIAN_POWERS: [[u8; 3]; 35] = [
    [0, 0, 0],
    // p
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    // d: XX YY ZZ XY XZ YZ
    [2, 0, 0],
    [0, 2, 0],
    [0, 0, 2],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    // f: XXX YYY ZZZ XXY XXZ YYZ XYY XZZ YZZ XYZ
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [2, 1, 0],
    [2, 0, 1],
    [0, 2, 1],
    [1, 2, 0],
    [1, 0, 2],
    [0, 1, 2],
    [1, 1, 1],
    // g: ZZZZ YZZZ YYZZ YYYZ YYYY XZZZ XYZZ XYYZ XYYY XXZZ XXYZ XXYY XXXZ XXXY XXXX
    [0, 0, 4],
    [0, 1, 3],
    [0, 2, 2],
    [0, 3, 1],
    [0, 4, 0],
    [1, 0, 3],
    [1, 1, 2],
    [1, 2, 1],
    [1, 3, 0],
    [2, 0, 2],
    [2, 1, 1],
    [2, 2, 0],
    [3, 0, 1],
    [3, 1, 0],
    [4, 0, 0],
];

/// Cartesian powers for an AIM type code, or `None` outside 1..=35.
pub fn cartesian_powers(type_code: u8) -> Option<[u8; 3]> {
    if (1..=MAX_TYPE_CODE).contains(&type_code) {
        Some(CARTESIAN_POWERS[type_code as usize - 1])
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nucleus<T> {
    pub label: String,
    /// Nuclear charge in atomic units.
    pub charge: T,
    /// Position in bohr.
    pub position: [T; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPrimitive<T> {
    /// 1-based index into the nucleus list, as written in the file.
    pub center_index: usize,
    pub type_code: u8,
    /// Exponent in bohr^-2.
    pub exponent: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MolecularOrbital<T> {
    pub occupation: T,
    /// Orbital energy in hartree.
    pub energy: T,
    /// One coefficient per primitive.
    pub coefficients: Vec<T>,
}

/// Parsed AIM wavefunction. Immutable once built; evaluation is `Sync`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction<T> {
    pub title: String,
    pub nuclei: Vec<Nucleus<T>>,
    pub primitives: Vec<GaussianPrimitive<T>>,
    pub orbitals: Vec<MolecularOrbital<T>>,
    /// Sum of occupation numbers.
    pub electron_count: T,
    pub total_energy: Option<T>,
    pub virial_ratio: Option<T>,
}

impl<T: Real> Wavefunction<T> {
    pub fn nuclear_charge(&self) -> T {
        self.nuclei.iter().map(|n| n.charge).sum()
    }
}
