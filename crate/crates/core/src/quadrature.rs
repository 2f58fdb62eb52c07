//! Gauss-Legendre rules and the spherical product grid used for every
//! real-space integral over the interaction region.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::real::{pairwise_sum, Real};

pub const MAX_ORDER: usize = 512;
/// Radius of the interaction sphere, bohr.
pub const DEFAULT_RADIUS: f64 = 10.0;
/// Nodes per dimension of the spherical product rule.
pub const DEFAULT_ORDER: usize = 25;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped affinely from (-1, 1) to (a, b).
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(T) -> T>(&self, a: T, b: T, f: F) -> T {
        let terms: Vec<T> = self.mapped(a, b).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

/// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Order-`n` Gauss-Legendre rule on (-1, 1): Newton iteration from
/// Chebyshev-like guesses, weights `2 / ((1 - x^2) P_n'(x)^2)`. Nodes ascend
/// and are exactly antisymmetric.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(Error::domain(format!(
            "Gauss-Legendre order {n} outside 1..={MAX_ORDER}"
        )));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0_f64; n];
    let mut weights = vec![0.0_f64; n];
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes: nodes.into_iter().map(T::lit).collect(),
        weights: weights.into_iter().map(T::lit).collect(),
    })
}

/// How the polar direction is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolarRule {
    /// Gauss-Legendre in cos(theta); the sin(theta) Jacobian is absorbed.
    #[default]
    CosTheta,
    /// Gauss-Legendre in theta on (0, pi) with an explicit sin(theta) factor.
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint<T> {
    pub r: T,
    pub theta: T,
    pub phi: T,
    pub cos_theta: T,
    pub sin_theta: T,
    pub position: [T; 3],
    /// Full volume weight including the r^2 (and sin(theta)) Jacobian.
    pub weight: T,
}

/// Product Gauss-Legendre grid over a sphere centred at the origin.
#[derive(Debug, Clone)]
pub struct SphericalGrid<T> {
    pub radius: T,
    pub order: usize,
    pub polar_rule: PolarRule,
    pub points: Vec<GridPoint<T>>,
}

impl<T: Real> SphericalGrid<T> {
    /// `n^3` points: r linear on (0, R), theta per `polar_rule`, phi on (0, 2 pi).
    pub fn new(n: usize, radius: T, polar_rule: PolarRule) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::domain(format!("grid radius {radius} must be positive")));
        }
        let rule = gauss_legendre::<T>(n)?;
        let radial: Vec<(T, T)> = rule.mapped(T::zero(), radius).collect();
        let polar: Vec<(T, T, T, T)> = match polar_rule {
            // node u = cos(theta); ascending theta means descending u
            PolarRule::CosTheta => rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .rev()
                .map(|(&u, &w)| (u.acos(), u, (T::one() - u * u).sqrt(), w))
                .collect(),
            PolarRule::Theta => rule
                .mapped(T::zero(), T::PI())
                .map(|(t, w)| (t, t.cos(), t.sin(), w * t.sin()))
                .collect(),
        };
        let azimuthal: Vec<(T, T)> = rule.mapped(T::zero(), T::TAU()).collect();

        let mut points = Vec::with_capacity(n * n * n);
        for &(r, wr) in &radial {
            for &(theta, ct, st, wt) in &polar {
                for &(phi, wp) in &azimuthal {
                    points.push(GridPoint {
                        r,
                        theta,
                        phi,
                        cos_theta: ct,
                        sin_theta: st,
                        position: [r * st * phi.cos(), r * st * phi.sin(), r * ct],
                        weight: r * r * wr * wt * wp,
                    });
                }
            }
        }
        Ok(SphericalGrid {
            radius,
            order: n,
            polar_rule,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `sum_i f(p_i) w_i`, evaluated in parallel and reduced in grid order.
pub fn integrate<T, F>(grid: &SphericalGrid<T>, f: F) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(&GridPoint<T>) -> Complex<T> + Sync,
{
    let terms: Vec<Complex<T>> = grid
        .points
        .par_iter()
        .map(|p| f(p) * p.weight)
        .collect();
    if let Some(index) = terms.iter().position(|t| !(t.re.is_finite() && t.im.is_finite())) {
        let p = &grid.points[index];
        return Err(Error::Integration {
            index,
            r: p.r.to_f64().unwrap_or(f64::NAN),
            theta: p.theta.to_f64().unwrap_or(f64::NAN),
            phi: p.phi.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(pairwise_sum(&terms))
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<T, F>(grid: &SphericalGrid<T>, f: F) -> Result<T>
where
    T: Real,
    F: Fn(&GridPoint<T>) -> T + Sync,
{
    integrate(grid, |p| Complex::new(f(p), T::zero())).map(|c| c.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_rule() {
        let q = gauss_legendre::<f64>(2).unwrap();
        let s = 1.0 / 3.0_f64.sqrt();
        assert_relative_eq!(q.nodes[0], -s, epsilon = 1e-15);
        assert_relative_eq!(q.nodes[1], s, epsilon = 1e-15);
        assert_relative_eq!(q.weights[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(q.weights[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn midpoint_rule() {
        let q = gauss_legendre::<f64>(1).unwrap();
        assert_eq!(q.nodes, vec![0.0]);
        assert_relative_eq!(q.weights[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn order_out_of_range() {
        assert!(matches!(gauss_legendre::<f64>(0), Err(Error::Domain(_))));
        assert!(gauss_legendre::<f64>(513).is_err());
        assert!(gauss_legendre::<f64>(512).is_ok());
    }

    #[test]
    fn degree_48_monomial_at_order_25() {
        let q = gauss_legendre::<f64>(25).unwrap();
        let v = q.integrate(-1.0, 1.0, |x| x.powi(48));
        assert!((v - 2.0 / 49.0).abs() < 1e-13);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1, 2, 3, 7, 25, 64, 100, 257, 512] {
            let q = gauss_legendre::<f64>(n).unwrap();
            let s: f64 = q.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n = {n}: {s}");
            for i in 0..n {
                assert_eq!(q.nodes[i], -q.nodes[n - 1 - i]);
                assert!(q.weights[i] > 0.0);
                if i > 0 {
                    assert!(q.nodes[i] > q.nodes[i - 1]);
                }
            }
        }
    }

    #[test]
    fn single_precision_rule() {
        let q = gauss_legendre::<f32>(25).unwrap();
        let v = q.integrate(-1.0, 1.0, |x| x.powi(10));
        assert!((v - 2.0 / 11.0).abs() < 1e-6);
    }

    #[test]
    fn sphere_volume() {
        for rule in [PolarRule::CosTheta, PolarRule::Theta] {
            let g = SphericalGrid::<f64>::new(25, 10.0, rule).unwrap();
            assert_eq!(g.len(), 15625);
            let v = integrate_real(&g, |_| 1.0).unwrap();
            let exact = 4.0 / 3.0 * std::f64::consts::PI * 1000.0;
            assert!(((v - exact) / exact).abs() < 1e-8);
        }
    }

    #[test]
    fn hydrogenic_norm_on_the_default_sphere() {
        // 1 - e^{-2R}(1 + 2R + 2R^2) at R = 10
        let exact = 1.0 - (-20.0_f64).exp() * (1.0 + 20.0 + 200.0);
        let g = SphericalGrid::<f64>::new(25, 10.0, PolarRule::CosTheta).unwrap();
        let v = integrate_real(&g, |p| (-2.0 * p.r).exp() / std::f64::consts::PI).unwrap();
        assert!((v - exact).abs() < 1e-4);
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn zero_and_odd_integrands() {
        let g = SphericalGrid::<f64>::new(25, 10.0, PolarRule::CosTheta).unwrap();
        assert_eq!(integrate(&g, |_| Complex::new(0.0, 0.0)).unwrap(), Complex::new(0.0, 0.0));
        let odd = integrate_real(&g, |p| p.position[2] * (-p.r).exp()).unwrap();
        assert!(odd.abs() < 1e-10);
    }

    #[test]
    fn nan_reports_offending_point() {
        let g = SphericalGrid::<f64>::new(4, 1.0, PolarRule::CosTheta).unwrap();
        let err = integrate_real(&g, |p| if p.r > 0.9 { f64::NAN } else { 1.0 }).unwrap_err();
        match err {
            Error::Integration { r, .. } => assert!(r > 0.9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_is_deterministic() {
        let a = SphericalGrid::<f64>::new(9, 3.0, PolarRule::CosTheta).unwrap();
        let b = SphericalGrid::<f64>::new(9, 3.0, PolarRule::CosTheta).unwrap();
        assert!(a
            .points
            .iter()
            .zip(&b.points)
            .all(|(p, q)| p.weight.to_bits() == q.weight.to_bits()));
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(SphericalGrid::<f64>::new(5, 0.0, PolarRule::CosTheta).is_err());
    }
}
