use num_complex::Complex;
use rayon::prelude::*;

use super::target::{forward_fit, DirectTarget, Target};
use crate::error::{Error, Result};
use crate::kinematics::{dot, norm, Vec3};
use crate::quadrature::SphericalGrid;
use crate::real::Real;
use crate::wfn::ElectronDensity;

pub const DEFAULT_DELTA_NODES: usize = 256;
pub const DEFAULT_COS_NODES: usize = 64;
pub const MIN_DELTA_NODES: usize = 64;
pub const MIN_COS_NODES: usize = 32;

/// Below `BLEND_START` (bohr^-1) amplitudes are interpolated directly; above
/// `BLEND_END` the nuclear term, which oscillates in the axis cosine, is
/// evaluated exactly and only the form factor is interpolated. In between
/// the two estimates are mixed linearly.
const BLEND_START: f64 = 1.5;
const BLEND_END: f64 = 3.0;

/// Form factor of a linear molecule tabulated over `|D|` and the cosine of
/// the angle between `D` and the molecular axis. Valid for densities that
/// are cylindrically symmetric about that axis.
///
/// Next to `chi` the table keeps the screened amplitude `-2 (alpha - chi)/D^2`
/// at every node, with the `D = 0` row taken from the forward-limit fit, so
/// that small transfers never interpolate across the cancellation. The
/// public `chi` accessor is bilinear; amplitudes use bicubic interpolation.
#[derive(Debug, Clone)]
pub struct FormFactorTable<T> {
    delta_grid: Vec<T>,
    cos_grid: Vec<T>,
    chi: Vec<Complex<T>>,
    amplitude: Vec<Complex<T>>,
    axis: Vec3<T>,
    perpendicular: Vec3<T>,
    /// (charge, signed coordinate along the axis) of every nucleus.
    axial_nuclei: Vec<(T, T)>,
    direct: DirectTarget<T>,
}

fn unit_perpendicular<T: Real>(axis: &Vec3<T>) -> Vec3<T> {
    // cross with the coordinate axis least aligned with `axis`
    let abs = axis.map(|c| c.abs());
    let e = if abs[0] <= abs[1] && abs[0] <= abs[2] {
        [T::one(), T::zero(), T::zero()]
    } else if abs[1] <= abs[2] {
        [T::zero(), T::one(), T::zero()]
    } else {
        [T::zero(), T::zero(), T::one()]
    };
    let c = [
        axis[1] * e[2] - axis[2] * e[1],
        axis[2] * e[0] - axis[0] * e[2],
        axis[0] * e[1] - axis[1] * e[0],
    ];
    let n = norm(&c);
    c.map(|x| x / n)
}

/// Axis through the origin that contains every nucleus; `z` for a single
/// atom at the origin.
fn molecular_axis<T: Real>(positions: &[Vec3<T>]) -> Result<Vec3<T>> {
    let far = positions
        .iter()
        .copied()
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap_or(std::cmp::Ordering::Equal));
    let axis = match far {
        Some(p) if norm(&p) > T::zero() => p.map(|c| c / norm(&p)),
        _ => [T::zero(), T::zero(), T::one()],
    };
    let tol = T::loose_eps();
    for p in positions {
        let s = dot(p, &axis);
        let off = [p[0] - s * axis[0], p[1] - s * axis[1], p[2] - s * axis[2]];
        if norm(&off) > tol * (T::one() + norm(p)) {
            return Err(Error::NotLinear(format!(
                "nucleus at ({}, {}, {}) is off the axis through the origin",
                p[0], p[1], p[2]
            )));
        }
    }
    Ok(axis)
}

/// Bracketing cell and fractional offset of `x` on a uniform grid starting
/// at `x0` with spacing `h`. Values within rounding of a node snap to it.
fn locate<T: Real>(x: T, x0: T, h: T, n: usize) -> (usize, T) {
    let u = (x - x0) / h;
    let r = u.round();
    let u = if (u - r).abs() <= T::epsilon() * T::lit(8.0) * (T::one() + r.abs()) { r } else { u };
    let last = n - 2;
    let i = u.floor().to_usize().unwrap_or(0).min(last);
    (i, u - T::from_usize_lossy(i))
}

/// Catmull-Rom weights of the nodes at offsets -1, 0, 1, 2; exactly
/// `[0, 1, 0, 0]` at `t = 0`.
fn catmull_rom<T: Real>(t: T) -> [T; 4] {
    if t == T::zero() {
        return [T::zero(), T::one(), T::zero(), T::zero()];
    }
    let h = T::lit(0.5);
    let (t2, t3) = (t * t, t * t * t);
    [
        h * (-t3 + T::lit(2.0) * t2 - t),
        h * (T::lit(3.0) * t3 - T::lit(5.0) * t2 + T::lit(2.0)),
        h * (-T::lit(3.0) * t3 + T::lit(4.0) * t2 + t),
        h * (t3 - t2),
    ]
}

impl<T: Real> FormFactorTable<T> {
    pub fn delta_grid(&self) -> &[T] {
        &self.delta_grid
    }

    pub fn cos_grid(&self) -> &[T] {
        &self.cos_grid
    }

    pub fn axis(&self) -> Vec3<T> {
        self.axis
    }

    pub fn max_delta(&self) -> T {
        *self.delta_grid.last().expect("non-empty grid")
    }

    /// Exact (untabulated) evaluator built on the same samples.
    pub fn direct(&self) -> &DirectTarget<T> {
        &self.direct
    }

    /// Unit transfer direction used for the column with axis cosine `c`.
    pub fn direction(&self, c: T) -> Vec3<T> {
        let s = (T::one() - c * c).max(T::zero()).sqrt();
        std::array::from_fn(|i| c * self.axis[i] + s * self.perpendicular[i])
    }

    /// Stored node value `chi(D_i, c_j)`.
    pub fn node(&self, i: usize, j: usize) -> Complex<T> {
        self.chi[i * self.cos_grid.len() + j]
    }

    fn check_range(&self, delta: T) -> Result<()> {
        if delta >= T::zero() && delta <= self.max_delta() * (T::one() + T::epsilon() * T::lit(8.0)) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "|D| = {delta} outside the tabulated range [0, {}]",
                self.max_delta()
            )))
        }
    }

    fn bilinear(&self, values: &[Complex<T>], delta: T, c: T) -> Result<Complex<T>> {
        self.check_range(delta)?;
        let nc = self.cos_grid.len();
        let c = c.max(-T::one()).min(T::one());
        let (i, t) = locate(delta, T::zero(), self.delta_grid[1], self.delta_grid.len());
        let (j, s) = locate(c, -T::one(), self.cos_grid[1] - self.cos_grid[0], nc);
        let v = |a: usize, b: usize| values[a * nc + b];
        let lo = if s == T::zero() { v(i, j) } else { v(i, j) * (T::one() - s) + v(i, j + 1) * s };
        if t == T::zero() {
            return Ok(lo);
        }
        let hi = if s == T::zero() {
            v(i + 1, j)
        } else {
            v(i + 1, j) * (T::one() - s) + v(i + 1, j + 1) * s
        };
        Ok(lo * (T::one() - t) + hi * t)
    }

    /// Catmull-Rom bicubic interpolation. Rows below `D = 0` follow from
    /// `f(-D, c) = f(D, -c)`; other ghost nodes are extrapolated linearly.
    fn bicubic(&self, values: &[Complex<T>], delta: T, c: T) -> Result<Complex<T>> {
        self.check_range(delta)?;
        let nd = self.delta_grid.len() as isize;
        let nc = self.cos_grid.len() as isize;
        let c = c.max(-T::one()).min(T::one());
        let (i, t) = locate(delta, T::zero(), self.delta_grid[1], nd as usize);
        let (j, s) = locate(c, -T::one(), self.cos_grid[1] - self.cos_grid[0], nc as usize);
        let get = |a: isize, b: isize| -> Complex<T> {
            let (a, b) = if a < 0 { (-a, nc - 1 - b) } else { (a, b) };
            let col = |a: isize| -> Complex<T> {
                let at = |b: isize| values[(a * nc + b) as usize];
                if b < 0 {
                    at(0) * T::lit(2.0) - at(1)
                } else if b >= nc {
                    at(nc - 1) * T::lit(2.0) - at(nc - 2)
                } else {
                    at(b)
                }
            };
            if a >= nd {
                col(nd - 1) * T::lit(2.0) - col(nd - 2)
            } else {
                col(a)
            }
        };
        let wt = catmull_rom(t);
        let ws = catmull_rom(s);
        let (i, j) = (i as isize, j as isize);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (di, &a) in wt.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            let mut row = Complex::new(T::zero(), T::zero());
            for (dj, &b) in ws.iter().enumerate() {
                if b != T::zero() {
                    row += get(i + di as isize - 1, j + dj as isize - 1) * b;
                }
            }
            acc += row * a;
        }
        Ok(acc)
    }

    /// Bilinear form factor at transfer magnitude `delta` and axis cosine `c`.
    pub fn chi(&self, delta: T, c: T) -> Result<Complex<T>> {
        self.bilinear(&self.chi, delta, c)
    }

    /// Catmull-Rom bicubic form factor; same domain as [`Self::chi`].
    pub fn chi_cubic(&self, delta: T, c: T) -> Result<Complex<T>> {
        self.bicubic(&self.chi, delta, c)
    }

    fn nuclear_term(&self, delta: T, c: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(z, s) in &self.axial_nuclei {
            if s == T::zero() {
                acc.re += z;
            } else {
                acc += Complex::from_polar(z, delta * c * s);
            }
        }
        acc
    }

    /// Plane-wave amplitude at magnitude `delta` and axis cosine `c`.
    pub fn amplitude_at(&self, delta: T, c: T) -> Result<Complex<T>> {
        let (lo, hi) = (T::lit(BLEND_START), T::lit(BLEND_END));
        let interpolated = || self.bicubic(&self.amplitude, delta, c);
        let screened = || -> Result<Complex<T>> {
            let chi = self.bicubic(&self.chi, delta, c)?;
            Ok((self.nuclear_term(delta, c) - chi) * (-T::lit(2.0) / (delta * delta)))
        };
        if delta <= lo {
            interpolated()
        } else if delta >= hi {
            screened()
        } else {
            let w = (delta - lo) / (hi - lo);
            Ok(interpolated()? * (T::one() - w) + screened()? * w)
        }
    }
}

impl<T: Real> Target<T> for FormFactorTable<T> {
    fn amplitude_regular(&self, delta: &Vec3<T>) -> Result<Complex<T>> {
        let d = norm(delta);
        if d == T::zero() {
            return Err(Error::ForwardSingularity);
        }
        self.amplitude_at(d, dot(delta, &self.axis) / d)
    }
}

/// Tabulates the form factor on `n_delta` uniform magnitudes in
/// `[0, 2 k_max]` times `n_cos` uniform axis cosines in `[-1, 1]`.
pub fn build_form_factor_table<T: Real, D: ElectronDensity<T> + ?Sized>(
    density: &D,
    grid: &SphericalGrid<T>,
    k_max: T,
    n_delta: usize,
    n_cos: usize,
) -> Result<FormFactorTable<T>> {
    let direct = DirectTarget::new(density, grid)?;
    FormFactorTable::from_direct(direct, k_max, n_delta, n_cos)
}

impl<T: Real> FormFactorTable<T> {
    pub fn from_direct(direct: DirectTarget<T>, k_max: T, n_delta: usize, n_cos: usize) -> Result<Self> {
        if n_delta < MIN_DELTA_NODES || n_cos < MIN_COS_NODES {
            return Err(Error::domain(format!(
                "table needs at least {MIN_DELTA_NODES} x {MIN_COS_NODES} nodes, got {n_delta} x {n_cos}"
            )));
        }
        if !(k_max > T::zero() && k_max.is_finite()) {
            return Err(Error::domain(format!("k_max = {k_max} must be positive")));
        }
        let positions: Vec<Vec3<T>> = direct.nuclei().iter().map(|n| n.position).collect();
        let axis = molecular_axis(&positions)?;
        let perpendicular = unit_perpendicular(&axis);
        let axial_nuclei = direct
            .nuclei()
            .iter()
            .map(|n| (n.charge, dot(&n.position, &axis)))
            .collect();

        let d_max = T::lit(2.0) * k_max;
        let delta_grid: Vec<T> = (0..n_delta)
            .map(|i| d_max * T::from_usize_lossy(i) / T::from_usize_lossy(n_delta - 1))
            .collect();
        let cos_grid: Vec<T> = (0..n_cos)
            .map(|j| -T::one() + T::lit(2.0) * T::from_usize_lossy(j) / T::from_usize_lossy(n_cos - 1))
            .collect();

        let mut table = FormFactorTable {
            delta_grid,
            cos_grid,
            chi: Vec::new(),
            amplitude: Vec::new(),
            axis,
            perpendicular,
            axial_nuclei,
            direct,
        };
        let nodes: Vec<(usize, usize)> = (0..n_delta)
            .flat_map(|i| (0..n_cos).map(move |j| (i, j)))
            .collect();
        let values: Vec<(Complex<T>, Complex<T>)> = nodes
            .par_iter()
            .map(|&(i, j)| {
                let d = table.delta_grid[i];
                let dir = table.direction(table.cos_grid[j]);
                let v = dir.map(|x| x * d);
                let chi = table.direct.form_factor(&v);
                let amp = if i == 0 {
                    forward_fit(&table.direct, &dir, T::zero())
                } else {
                    let alpha = table.direct.nuclear_term(&v);
                    Ok((alpha - chi) * (-T::lit(2.0) / (d * d)))
                };
                amp.map(|a| (chi, a))
            })
            .collect::<Result<_>>()?;
        table.chi = values.iter().map(|v| v.0).collect();
        table.amplitude = values.iter().map(|v| v.1).collect();
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Rotation;
    use crate::quadrature::PolarRule;
    use crate::wfn::{AnalyticDensity, AnalyticModel, IamAtom, RotatedDensity};

    fn small_table() -> FormFactorTable<f64> {
        let grid = SphericalGrid::new(12, 10.0, PolarRule::CosTheta).unwrap();
        build_form_factor_table(&AnalyticDensity::co2_iam(), &grid, 6.0, 64, 32).unwrap()
    }

    #[test]
    fn nodes_reproduce_direct_evaluation() {
        let t = small_table();
        for &(i, j) in &[(0, 0), (1, 5), (17, 31), (63, 16)] {
            let d = t.delta_grid()[i];
            let c = t.cos_grid()[j];
            let direct = t.direct().form_factor(&t.direction(c).map(|x| x * d));
            assert_eq!(t.chi(d, c).unwrap(), direct);
            assert_eq!(t.node(i, j), direct);
        }
    }

    #[test]
    fn forward_row_is_the_electron_count() {
        let t = small_table();
        for j in 0..t.cos_grid().len() {
            assert!((t.node(0, j).re - 22.0).abs() < 1e-12);
        }
        for i in 0..t.delta_grid().len() {
            for j in 0..t.cos_grid().len() {
                assert!(t.node(i, j).norm() <= 22.0 * 1.005);
            }
        }
    }

    #[test]
    fn axis_cosine_reflection_symmetry() {
        let t = small_table();
        let n = t.cos_grid().len();
        for i in [3, 20, 50] {
            for j in 0..n {
                assert!((t.node(i, j) - t.node(i, n - 1 - j)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn axis_follows_the_nuclei() {
        let q = Rotation::about_y(0.7).compose(&Rotation::about_z(0.2));
        let co2 = AnalyticDensity::co2_iam();
        let rotated = RotatedDensity::new(&co2, q);
        let grid = SphericalGrid::new(8, 10.0, PolarRule::CosTheta).unwrap();
        let t = build_form_factor_table(&rotated, &grid, 3.0, 64, 32).unwrap();
        let expect: [f64; 3] = q.apply(&[0.0, 0.0, 1.0]);
        let a: [f64; 3] = t.axis();
        assert!((dot(&a, &expect).abs() - 1.0).abs() < 1e-12);
        assert!(dot(&t.direction(0.0), &a).abs() < 1e-12);
    }

    #[test]
    fn amplitudes_track_direct_evaluation() {
        let t = small_table();
        for (d, c) in [(0.0005, 0.3), (0.2, -0.7), (1.0, 0.55), (2.2, 0.1), (5.0, -0.95), (11.0, 0.4)] {
            let v = t.direction(c).map(|x| x * d);
            let exact = t.direct().amplitude(&v).unwrap();
            let got = t.amplitude(&v).unwrap();
            let scale = exact.norm().max(2.0 * 22.0 / (d * d).max(1.0) * 0.05);
            assert!((got - exact).norm() < 2e-2 * scale, "{d} {c}: {got} vs {exact}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let grid = SphericalGrid::new(6, 10.0, PolarRule::CosTheta).unwrap();
        let co2 = AnalyticDensity::<f64>::co2_iam();
        assert!(matches!(build_form_factor_table(&co2, &grid, 5.0, 63, 32), Err(Error::Domain(_))));
        assert!(matches!(build_form_factor_table(&co2, &grid, 5.0, 64, 31), Err(Error::Domain(_))));
        let atom = |x: f64, z: f64| IamAtom { label: "O".into(), position: [x, 0.0, z], charge: 8.0, electrons: 8.0, zeta: 1.4 };
        let bent = AnalyticDensity::new(AnalyticModel::Iam(vec![atom(0.0, 2.0), atom(1.0, -1.5)])).unwrap();
        assert!(matches!(build_form_factor_table(&bent, &grid, 5.0, 64, 32), Err(Error::NotLinear(_))));
        let t = build_form_factor_table(&co2, &grid, 5.0, 64, 32).unwrap();
        assert!(matches!(t.chi(10.5, 0.0), Err(Error::Domain(_))));
        assert!(t.chi(10.0, 0.0).is_ok());
    }
}
