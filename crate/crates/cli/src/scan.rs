//! Angle and energy scans, and their CSV form.

use std::io::Write;

use rayon::prelude::*;
use twistscat_core::scattering::{dcs, tcs, CrossSectionRecord, DcsSettings, EulerGrid, Mode, Target};

use crate::config::{ModeName, RunConfig};
use crate::error::CliResult;

pub const DCS_HEADER: &str = "mode,E_i_eV,theta_p_deg,m_l,theta_s_deg,dcs_au,orientation_averaged";
pub const TCS_HEADER: &str = "mode,E_i_eV,theta_p_deg,m_l,sigma_au";

/// A cross-section value tagged with the beam it belongs to. `m_l` is kept
/// for impact-parameter averaged rows even though the value ignores it.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub record: CrossSectionRecord<f64>,
    pub theta_p_deg: f64,
    pub ml: i32,
}

/// One beam setting of a scan: mode plus the degree values written out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamPoint {
    pub mode: Mode<f64>,
    pub theta_p_deg: f64,
    pub ml: i32,
}

/// Beam settings in output order: mode, then theta_p, then m_l.
pub fn beam_points(cfg: &RunConfig) -> Vec<BeamPoint> {
    let mut out = Vec::new();
    for m in &cfg.scan.modes {
        match m {
            ModeName::Pw => out.push(BeamPoint { mode: Mode::Plane, theta_p_deg: 0.0, ml: 0 }),
            ModeName::TwFixed | ModeName::TwAvg => {
                for &tp in &cfg.beam.theta_p_deg {
                    for &ml in &cfg.beam.ml {
                        let theta_p = tp.to_radians();
                        let mode = if *m == ModeName::TwFixed {
                            Mode::TwistedFixed { theta_p, ml }
                        } else {
                            Mode::TwistedAveraged { theta_p }
                        };
                        out.push(BeamPoint { mode, theta_p_deg: tp, ml });
                    }
                }
            }
        }
    }
    out
}

pub fn settings(cfg: &RunConfig) -> CliResult<DcsSettings<f64>> {
    let n = &cfg.numerics;
    let orientation = if n.orientation_average {
        Some(EulerGrid::cubic(n.euler_nodes, n.measure.into())?)
    } else {
        None
    };
    Ok(DcsSettings { n_phi: n.n_phi, orientation })
}

/// Rows ordered by beam point, energy, then scattering angle.
pub fn run_dcs_scan(cfg: &RunConfig, target: &dyn Target<f64>) -> CliResult<Vec<Row>> {
    let settings = settings(cfg)?;
    let angles = cfg.theta_s_deg()?;
    let mut rows = Vec::new();
    for p in beam_points(cfg) {
        for &e in &cfg.beam.energies_ev {
            let values = angles
                .par_iter()
                .map(|ts| dcs(target, &p.mode, e, ts.to_radians(), &settings))
                .collect::<Result<Vec<f64>, _>>()?;
            log::info!("{} E={e} theta_p={} m_l={}: {} angles", p.mode.label(), p.theta_p_deg, p.ml, angles.len());
            rows.extend(angles.iter().zip(values).map(|(&ts, value)| Row {
                record: CrossSectionRecord {
                    energy_ev: e,
                    theta_s_deg: Some(ts),
                    mode: p.mode,
                    orientation_averaged: settings.orientation.is_some(),
                    value,
                },
                theta_p_deg: p.theta_p_deg,
                ml: p.ml,
            }));
        }
    }
    Ok(rows)
}

pub fn run_tcs_scan(cfg: &RunConfig, target: &dyn Target<f64>) -> CliResult<Vec<Row>> {
    let settings = settings(cfg)?;
    let mut rows = Vec::new();
    for p in beam_points(cfg) {
        for &e in &cfg.beam.energies_ev {
            let value = tcs(target, &p.mode, e, &settings, cfg.numerics.tcs_theta_nodes)?;
            rows.push(Row {
                record: CrossSectionRecord {
                    energy_ev: e,
                    theta_s_deg: None,
                    mode: p.mode,
                    orientation_averaged: settings.orientation.is_some(),
                    value,
                },
                theta_p_deg: p.theta_p_deg,
                ml: p.ml,
            });
        }
    }
    Ok(rows)
}

pub fn write_dcs_csv(rows: &[Row], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{DCS_HEADER}")?;
    for r in rows {
        let c = &r.record;
        writeln!(
            out,
            "{},{:.16e},{:.16e},{},{:.16e},{:.16e},{}",
            c.mode.label(),
            c.energy_ev,
            r.theta_p_deg,
            r.ml,
            c.theta_s_deg.unwrap_or(f64::NAN),
            c.value,
            c.orientation_averaged
        )?;
    }
    Ok(())
}

pub fn write_tcs_csv(rows: &[Row], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{TCS_HEADER}")?;
    for r in rows {
        let c = &r.record;
        writeln!(out, "{},{:.16e},{:.16e},{},{:.16e}", c.mode.label(), c.energy_ev, r.theta_p_deg, r.ml, c.value)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beam_points_follow_config_order() {
        let mut cfg = RunConfig::default();
        cfg.scan.modes = vec![ModeName::TwAvg, ModeName::Pw];
        cfg.beam.theta_p_deg = vec![6.0, 20.0];
        cfg.beam.ml = vec![1, 20];
        let p = beam_points(&cfg);
        assert_eq!(p.len(), 5);
        assert_eq!((p[1].theta_p_deg, p[1].ml), (6.0, 20));
        assert_eq!(p[4].mode, Mode::Plane);
    }

    #[test]
    fn csv_format() {
        let row = Row {
            record: CrossSectionRecord {
                energy_ev: 1000.0,
                theta_s_deg: Some(0.5),
                mode: Mode::Plane,
                orientation_averaged: true,
                value: 0.125,
            },
            theta_p_deg: 0.0,
            ml: 0,
        };
        let mut buf = Vec::new();
        write_dcs_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "pw,1.0000000000000000e3,0.0000000000000000e0,0,5.0000000000000000e-1,1.2500000000000000e-1,true"
        );
    }
}
