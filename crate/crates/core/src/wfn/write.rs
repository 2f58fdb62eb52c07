use std::io::{self, Write};

use super::Wavefunction;
use crate::real::Real;

/// Fortran-style `D` notation with the shortest digits that round-trip.
fn d_format<T: Real>(x: T) -> String {
    let s = format!("{x:e}");
    let (mantissa, exp) = s.split_once('e').expect("LowerExp always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}D{sign}{:02}", exp.abs())
}

fn field<T: Real>(x: T, width: usize) -> String {
    format!(" {:>w$}", d_format(x), w = width - 1)
}

/// Writes `wfn` in AIM layout. Reals are written with enough digits that
/// [`super::parse_wfn`] recovers them exactly.
pub fn write_wfn<T: Real, W: Write>(wfn: &Wavefunction<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", wfn.title)?;
    writeln!(
        out,
        "GAUSSIAN{:15} MOL ORBITALS{:7} PRIMITIVES{:9} NUCLEI",
        wfn.orbitals.len(),
        wfn.primitives.len(),
        wfn.nuclei.len()
    )?;
    for (j, n) in wfn.nuclei.iter().enumerate() {
        write!(out, "  {:<2}{:4}    (CENTRE{:3}) ", n.label, j + 1, j + 1)?;
        for c in n.position {
            write!(out, "{}", field(c, 24))?;
        }
        writeln!(out, "  CHARGE = {}", d_format(n.charge))?;
    }
    for chunk in wfn.primitives.chunks(20) {
        write!(out, "CENTRE ASSIGNMENTS  ")?;
        for p in chunk {
            write!(out, "{:3}", p.center_index)?;
        }
        writeln!(out)?;
    }
    for chunk in wfn.primitives.chunks(20) {
        write!(out, "TYPE ASSIGNMENTS    ")?;
        for p in chunk {
            write!(out, "{:3}", p.type_code)?;
        }
        writeln!(out)?;
    }
    for chunk in wfn.primitives.chunks(5) {
        write!(out, "EXPONENTS ")?;
        for p in chunk {
            write!(out, "{}", field(p.exponent, 24))?;
        }
        writeln!(out)?;
    }
    for (i, mo) in wfn.orbitals.iter().enumerate() {
        writeln!(
            out,
            "MO{:5}     MO 0.0        OCC NO = {:>24}  ORB. ENERGY = {:>24}",
            i + 1,
            d_format(mo.occupation),
            d_format(mo.energy)
        )?;
        for chunk in mo.coefficients.chunks(5) {
            for c in chunk {
                write!(out, "{}", field(*c, 26))?;
            }
            writeln!(out)?;
        }
    }
    writeln!(out, "END DATA")?;
    if wfn.total_energy.is_some() || wfn.virial_ratio.is_some() {
        if let Some(e) = wfn.total_energy {
            write!(out, " THE  HF ENERGY = {}", d_format(e))?;
        }
        if let Some(v) = wfn.virial_ratio {
            write!(out, " THE VIRIAL(-V/T)= {}", d_format(v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}
