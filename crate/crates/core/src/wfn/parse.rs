use std::io::BufRead;
use std::sync::OnceLock;

use regex::Regex;

use super::{GaussianPrimitive, MolecularOrbital, Nucleus, Wavefunction, MAX_TYPE_CODE};
use crate::error::{Error, Result};
use crate::real::Real;

fn float_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[EeDd][-+]?\d+)?").unwrap())
}

fn header_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*\S+\s+(\d+)\s+MOL\s+ORBITALS\s+(\d+)\s+PRIMITIVES\s+(\d+)\s+NUCLEI")
            .unwrap()
    })
}

/// Parses one Fortran real, accepting `D` exponents (`0.1234D+02`).
fn parse_real<T: Real>(token: &str, line: usize) -> Result<T> {
    let normalized = token.replace(['D', 'd'], "E");
    let v: f64 = normalized
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid real `{token}`")))?;
    T::from_f64(v).ok_or_else(|| Error::parse(line, format!("real `{token}` out of range")))
}

/// Every real on a line, including fields that run together (`1.0D+00-2.0D+00`).
fn reals<T: Real>(text: &str, line: usize) -> Result<Vec<T>> {
    float_re()
        .find_iter(text)
        .map(|m| parse_real(m.as_str(), line))
        .collect()
}

/// Integer fields after a 20-column label, read as I3 fields when the layout
/// allows (indices >= 100 leave no separating blank), whitespace-split otherwise.
fn int_fields(text: &str, line: usize) -> Result<Vec<i64>> {
    let rest = text.trim_end();
    let bad = |t: &str| Error::parse(line, format!("invalid integer `{t}`"));
    if rest.len() % 3 == 0 && rest.is_ascii() {
        let chunks: Vec<&str> = (0..rest.len() / 3).map(|i| &rest[3 * i..3 * i + 3]).collect();
        if chunks.iter().all(|c| c.trim().parse::<i64>().is_ok()) {
            return Ok(chunks.iter().map(|c| c.trim().parse().unwrap()).collect());
        }
    }
    rest.split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(t)))
        .collect()
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
    peeked: Option<String>,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R) -> Self {
        Lines {
            inner: reader.lines(),
            number: 0,
            peeked: None,
        }
    }

    fn peek(&mut self) -> Result<Option<&str>> {
        if self.peeked.is_none() {
            match self.inner.next() {
                Some(Ok(l)) => self.peeked = Some(l.trim_end_matches('\r').to_string()),
                Some(Err(e)) => return Err(Error::parse(self.number + 1, e.to_string())),
                None => return Ok(None),
            }
        }
        Ok(self.peeked.as_deref())
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        self.peek()?;
        let l = self.peeked.take();
        if l.is_some() {
            self.number += 1;
        }
        Ok(l)
    }

    fn expect(&mut self, what: &str) -> Result<String> {
        let n = self.number + 1;
        self.next_line()?
            .ok_or_else(|| Error::parse(n, format!("unexpected end of input, expected {what}")))
    }
}

/// Reads an AIM `.wfn` stream.
pub fn parse_wfn<T: Real, R: BufRead>(source: R) -> Result<Wavefunction<T>> {
    let mut lines = Lines::new(source);

    let title = lines.expect("title line")?;

    let header = lines.expect("header line")?;
    let caps = header_re().captures(&header).ok_or_else(|| {
        Error::parse(
            lines.number,
            "malformed header, expected `GAUSSIAN <n> MOL ORBITALS <n> PRIMITIVES <n> NUCLEI`",
        )
    })?;
    let count = |i: usize| -> Result<usize> {
        caps[i]
            .parse()
            .map_err(|_| Error::parse(2, format!("count `{}` out of range", &caps[i])))
    };
    let (n_mo, n_prim, n_nuc) = (count(1)?, count(2)?, count(3)?);

    let mut nuclei = Vec::with_capacity(n_nuc);
    for _ in 0..n_nuc {
        let l = lines.expect("nucleus line")?;
        nuclei.push(parse_nucleus(&l, lines.number)?);
    }

    let centres = read_ints(&mut lines, "CENTRE ASSIGNMENTS")?;
    let types = read_ints(&mut lines, "TYPE ASSIGNMENTS")?;
    let exponents: Vec<(T, usize)> = read_reals(&mut lines, "EXPONENTS")?;
    for (what, got) in [
        ("centre assignments", centres.len()),
        ("type assignments", types.len()),
        ("exponents", exponents.len()),
    ] {
        if got != n_prim {
            return Err(Error::Inconsistent(format!(
                "header declares {n_prim} primitives but {got} {what} were listed"
            )));
        }
    }

    let mut primitives = Vec::with_capacity(n_prim);
    for i in 0..n_prim {
        let (centre, cline) = centres[i];
        let (code, tline) = types[i];
        if centre < 1 || centre as usize > n_nuc {
            return Err(Error::Inconsistent(format!(
                "primitive {} assigned to centre {centre}, but only {n_nuc} nuclei (line {cline})",
                i + 1
            )));
        }
        if code < 1 || code > MAX_TYPE_CODE as i64 {
            return Err(Error::UnsupportedAngularMomentum { code, line: tline });
        }
        let (zeta, eline) = exponents[i];
        if !(zeta > T::zero()) {
            return Err(Error::parse(eline, format!("non-positive exponent {zeta}")));
        }
        primitives.push(GaussianPrimitive {
            center_index: centre as usize,
            type_code: code as u8,
            exponent: zeta,
        });
    }

    let mut orbitals = Vec::with_capacity(n_mo);
    for i in 0..n_mo {
        let head = match lines.peek()? {
            Some(l) if l.trim_start().starts_with("MO") && l.contains("OCC") => {
                lines.expect("MO header")?
            }
            _ => {
                return Err(Error::Inconsistent(format!(
                    "header declares {n_mo} orbitals but only {i} MO blocks precede line {}",
                    lines.number + 1
                )))
            }
        };
        let (occupation, energy) = parse_mo_header::<T>(&head, lines.number)?;
        let mut coefficients = Vec::with_capacity(n_prim);
        while coefficients.len() < n_prim {
            match lines.peek()? {
                Some(l) if !l.trim_start().starts_with("MO") && !l.contains("END DATA") => {
                    let l = lines.expect("coefficients")?;
                    coefficients.extend(reals::<T>(&l, lines.number)?);
                }
                _ => break,
            }
        }
        if coefficients.len() != n_prim {
            return Err(Error::Inconsistent(format!(
                "MO {} lists {} coefficients, header declares {n_prim} primitives",
                i + 1,
                coefficients.len()
            )));
        }
        orbitals.push(MolecularOrbital {
            occupation,
            energy,
            coefficients,
        });
    }

    let end = lines.expect("END DATA")?;
    if !end.contains("END DATA") {
        return Err(if end.trim_start().starts_with("MO") {
            Error::Inconsistent(format!(
                "more MO blocks than the {n_mo} declared in the header (line {})",
                lines.number
            ))
        } else {
            Error::parse(lines.number, "expected END DATA")
        });
    }

    let (mut total_energy, mut virial_ratio) = (None, None);
    if let Some(l) = lines.next_line()? {
        let n = lines.number;
        if let Some(pos) = l.find("ENERGY") {
            let tail = &l[pos..];
            if let Some(eq) = tail.find('=') {
                total_energy = reals::<T>(&tail[eq + 1..], n)?.first().copied();
            }
        }
        if let Some(pos) = l.find("VIRIAL") {
            let tail = &l[pos..];
            if let Some(eq) = tail.find('=') {
                virial_ratio = reals::<T>(&tail[eq + 1..], n)?.first().copied();
            }
        }
    }

    let electron_count = orbitals.iter().map(|o| o.occupation).sum();
    Ok(Wavefunction {
        title,
        nuclei,
        primitives,
        orbitals,
        electron_count,
        total_energy,
        virial_ratio,
    })
}

fn parse_nucleus<T: Real>(l: &str, n: usize) -> Result<Nucleus<T>> {
    let label: String = l
        .split_whitespace()
        .next()
        .unwrap_or("")
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect();
    if label.is_empty() {
        return Err(Error::parse(n, "nucleus line without element label"));
    }
    let charge_at = l
        .find("CHARGE")
        .ok_or_else(|| Error::parse(n, "nucleus line without `CHARGE =`"))?;
    let coord_start = l[..charge_at]
        .find("(CENTRE")
        .and_then(|p| l[p..charge_at].find(')').map(|q| p + q + 1))
        .ok_or_else(|| Error::parse(n, "nucleus line without `(CENTRE n)`"))?;
    let coords: Vec<T> = reals(&l[coord_start..charge_at], n)?;
    if coords.len() != 3 {
        return Err(Error::parse(n, format!("expected 3 coordinates, found {}", coords.len())));
    }
    let after = &l[charge_at..];
    let eq = after
        .find('=')
        .ok_or_else(|| Error::parse(n, "missing `=` after CHARGE"))?;
    let charge = *reals::<T>(&after[eq + 1..], n)?
        .first()
        .ok_or_else(|| Error::parse(n, "missing nuclear charge"))?;
    if !(charge > T::zero()) {
        return Err(Error::parse(n, format!("non-positive nuclear charge {charge}")));
    }
    Ok(Nucleus {
        label,
        charge,
        position: [coords[0], coords[1], coords[2]],
    })
}

fn parse_mo_header<T: Real>(l: &str, n: usize) -> Result<(T, T)> {
    let field = |key: &str| -> Result<T> {
        let pos = l
            .find(key)
            .ok_or_else(|| Error::parse(n, format!("MO header without `{key}`")))?;
        let tail = &l[pos + key.len()..];
        let eq = tail
            .find('=')
            .ok_or_else(|| Error::parse(n, format!("missing `=` after {key}")))?;
        reals::<T>(&tail[eq + 1..], n)?
            .first()
            .copied()
            .ok_or_else(|| Error::parse(n, format!("missing value for {key}")))
    };
    let occ = field("OCC NO")?;
    let energy = field("ORB. ENERGY")?;
    if occ < T::zero() {
        return Err(Error::parse(n, format!("negative occupation {occ}")));
    }
    Ok((occ, energy))
}

fn read_ints<R: BufRead>(lines: &mut Lines<R>, label: &str) -> Result<Vec<(i64, usize)>> {
    let mut out = Vec::new();
    while let Some(l) = lines.peek()? {
        if !l.starts_with(label) {
            break;
        }
        let l = lines.expect(label)?;
        let n = lines.number;
        let body = if l.len() >= 20 { &l[20..] } else { &l[label.len()..] };
        out.extend(int_fields(body, n)?.into_iter().map(|v| (v, n)));
    }
    if out.is_empty() {
        return Err(Error::parse(lines.number + 1, format!("expected `{label}`")));
    }
    Ok(out)
}

fn read_reals<T: Real, R: BufRead>(lines: &mut Lines<R>, label: &str) -> Result<Vec<(T, usize)>> {
    let mut out = Vec::new();
    while let Some(l) = lines.peek()? {
        if !l.starts_with(label) {
            break;
        }
        let l = lines.expect(label)?;
        let n = lines.number;
        out.extend(reals::<T>(&l[label.len()..], n)?.into_iter().map(|v| (v, n)));
    }
    if out.is_empty() {
        return Err(Error::parse(lines.number + 1, format!("expected `{label}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = include_str!("../../fixtures/h_minimal.wfn");

    fn parse(s: &str) -> Result<Wavefunction<f64>> {
        parse_wfn(s.as_bytes())
    }

    #[test]
    fn minimal_hydrogen() {
        let w = parse(MINIMAL).unwrap();
        assert_eq!(w.nuclei.len(), 1);
        assert_eq!(w.nuclei[0].label, "H");
        assert_eq!(w.nuclei[0].charge, 1.0);
        assert_eq!(w.primitives.len(), 1);
        assert_eq!(w.primitives[0].exponent, 1.0);
        assert_eq!(w.orbitals[0].coefficients, vec![0.7127]);
        assert_eq!(w.electron_count, 1.0);
        assert_eq!(w.total_energy, Some(-0.424413181578));
        assert_eq!(w.virial_ratio, Some(2.0));
    }

    #[test]
    fn d_exponent_reals() {
        assert_eq!(parse_real::<f64>("0.1234D+02", 1).unwrap(), 12.34);
        assert_eq!(parse_real::<f64>("-0.5d-01", 1).unwrap(), -0.05);
        let v: Vec<f64> = reals("  0.1D+01-0.2D+01", 1).unwrap();
        assert_eq!(v, vec![1.0, -2.0]);
    }

    #[test]
    fn fixed_width_indices_without_blanks() {
        assert_eq!(int_fields("  1100101", 1).unwrap(), vec![1, 100, 101]);
        assert_eq!(int_fields(" 1 2 3", 1).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn empty_stream_fails_at_line_one() {
        match parse("") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_header() {
        let src = "title\nGAUSSIAN 1 ORBITALS\n";
        match parse(src) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_exponent_is_inconsistent() {
        let src = "\
five primitives, four exponents
GAUSSIAN              1 MOL ORBITALS      5 PRIMITIVES        1 NUCLEI
  H    1    (CENTRE  1)   0.00000000  0.00000000  0.00000000  CHARGE =  1.0
CENTRE ASSIGNMENTS    1  1  1  1  1
TYPE ASSIGNMENTS      1  1  1  1  1
EXPONENTS  0.1000000D+01 0.2000000D+01 0.3000000D+01 0.4000000D+01
MO    1     MO 0.0        OCC NO =    1.0000000  ORB. ENERGY =   -0.500000
  0.10000000D+01  0.10000000D+01  0.10000000D+01  0.10000000D+01  0.10000000D+01
END DATA
";
        assert!(matches!(parse(src), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn unknown_type_code() {
        let src = MINIMAL.replace("TYPE ASSIGNMENTS      1", "TYPE ASSIGNMENTS     36");
        match parse(&src) {
            Err(Error::UnsupportedAngularMomentum { code, line }) => {
                assert_eq!(code, 36);
                assert_eq!(line, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_mo_block() {
        let src = MINIMAL.replace("1 MOL ORBITALS", "2 MOL ORBITALS");
        assert!(matches!(parse(&src), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn extra_mo_block() {
        let src = MINIMAL.replace(
            "END DATA",
            "MO    2     MO 0.0        OCC NO =    0.0000000  ORB. ENERGY =    0.100000\n  0.10000000D+01\nEND DATA",
        );
        assert!(matches!(parse(&src), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn centre_out_of_range() {
        let src = MINIMAL.replace("CENTRE ASSIGNMENTS    1", "CENTRE ASSIGNMENTS    2");
        assert!(matches!(parse(&src), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn trailer_is_optional() {
        let src = MINIMAL.lines().take_while(|l| !l.contains("HF ENERGY")).collect::<Vec<_>>().join("\n");
        let w = parse(&src).unwrap();
        assert_eq!(w.total_energy, None);
    }

    #[test]
    fn co2_fixture() {
        let w = parse(include_str!("../../fixtures/co2_model.wfn")).unwrap();
        assert_eq!(w.nuclei.len(), 3);
        assert_eq!(w.nuclear_charge(), 22.0);
        assert!((w.electron_count - 22.0).abs() < 1e-6);
        assert_eq!(w.nuclei[1].position, [0.0, 0.0, 2.185]);
        assert_eq!(w.primitives[2].type_code, 4);
    }
}
