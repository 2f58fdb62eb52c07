use rand::{Rng, SeedableRng};
use twistscat_core::kinematics::wave_number;
use twistscat_core::quadrature::PolarRule;
use twistscat_core::scattering::{build_form_factor_table, DEFAULT_COS_NODES, DEFAULT_DELTA_NODES};
use twistscat_core::wfn::parse_wfn;
use twistscat_core::{SphericalGrid64, Wavefunction64};

const CO2: &str = include_str!("../fixtures/co2_model.wfn");

fn midpoint_error(energy_ev: f64, cubic: bool) -> (f64, f64) {
    let w: Wavefunction64 = parse_wfn(CO2.as_bytes()).unwrap();
    let grid = SphericalGrid64::new(25, 10.0, PolarRule::CosTheta).unwrap();
    let k = wave_number(energy_ev).unwrap();
    let t = build_form_factor_table(&w, &grid, k, DEFAULT_DELTA_NODES, DEFAULT_COS_NODES).unwrap();
    let (dg, cg) = (t.delta_grid().to_vec(), t.cos_grid().to_vec());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let (mut worst_n, mut worst_rel) = (0.0_f64, 0.0_f64);
    for _ in 0..100 {
        let i = rng.gen_range(0..dg.len() - 1);
        let j = rng.gen_range(0..cg.len() - 1);
        let d = 0.5 * (dg[i] + dg[i + 1]);
        let c = 0.5 * (cg[j] + cg[j + 1]);
        let exact = t.direct().form_factor(&t.direction(c).map(|x| x * d));
        let v = if cubic { t.chi_cubic(d, c) } else { t.chi(d, c) };
        let err = (v.unwrap() - exact).norm();
        worst_n = worst_n.max(err / 22.0);
        worst_rel = worst_rel.max(err / exact.norm());
    }
    (worst_n, worst_rel)
}

#[test]
fn cubic_midpoints_against_direct_evaluation() {
    // Error measured against the electron count; |chi| itself has zeros.
    let (n, _) = midpoint_error(500.0, true);
    assert!(n < 1e-3, "{n}");
}

#[test]
#[ignore = "bilinear midpoints miss 1e-3 of N above ~400 eV on the 25-point grid; see notes"]
fn bilinear_midpoints_against_direct_evaluation() {
    for e in [500.0, 1000.0, 1500.0] {
        let (n, rel) = midpoint_error(e, false);
        println!("{e} eV: max |err|/N = {n:.3e}, max |err|/|chi| = {rel:.3e}");
        assert!(n < 1e-3, "{e} eV: {n}");
    }
}
