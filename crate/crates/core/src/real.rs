//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + FromStr
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Tolerance used for orthogonality and clamping decisions.
    #[inline]
    fn loose_eps() -> Self {
        Self::epsilon().sqrt() * Self::lit(10.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `acos` with the argument clamped to `[-1, 1]`.
#[inline]
pub fn acos_clamped<T: Real>(x: T) -> T {
    x.max(-T::one()).min(T::one()).acos()
}

/// Fixed-order pairwise summation. The result depends only on the order of
/// `values`, never on how work was scheduled.
pub fn pairwise_sum<A>(values: &[A]) -> A
where
    A: Copy + std::ops::Add<Output = A> + num_traits::Zero,
{
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = A::zero();
        for &v in values {
            acc = acc + v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamped_acos_survives_drift() {
        assert_eq!(acos_clamped(1.0 + 1e-15_f64), 0.0);
        assert!((acos_clamped(-1.0 - 1e-12_f64) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }
}
