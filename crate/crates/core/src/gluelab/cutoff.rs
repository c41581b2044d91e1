use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Smooth cutoff `Υ` with `Υ = 1` on `[0, 1]` and `Υ = 0` on `[2, ∞)`, built from
/// `f(s) = exp(−1/s)` as `f(2 − x) / (f(2 − x) + f(x − 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    /// `C_l ≥ sup |Υ^(l)|` for `l = 0..=4`.
    pub bounds: [f64; 5],
}

impl Default for CutoffProfile {
    fn default() -> Self {
        Self::standard()
    }
}

fn bump<T: Scalar>(s: T) -> T {
    if s <= T::zero() {
        T::zero()
    } else {
        (-T::one() / s).exp()
    }
}

/// `f'(s) = f(s)/s²`.
fn bump_prime<T: Scalar>(s: T) -> T {
    if s <= T::zero() {
        T::zero()
    } else {
        bump(s) / (s * s)
    }
}

const FD_STEP: f64 = 1e-3;
const BOUND_SAMPLES: usize = 20_000;

impl CutoffProfile {
    /// The default profile, with derivative bounds sampled once per process.
    pub fn standard() -> Self {
        static BOUNDS: OnceLock<[f64; 5]> = OnceLock::new();
        let bounds = *BOUNDS.get_or_init(|| {
            let mut b = [0.0f64; 5];
            for i in 0..=BOUND_SAMPLES {
                let x = 1.0 + i as f64 / BOUND_SAMPLES as f64;
                for (l, slot) in b.iter_mut().enumerate() {
                    *slot = slot.max(Self::derivative_of_order(x, l).abs());
                }
            }
            // margin for the sampling gap and the difference error
            b.map(|v| v * 1.01)
        });
        CutoffProfile { bounds }
    }

    pub fn value<T: Scalar>(&self, x: T) -> T {
        if x <= T::one() {
            return T::one();
        }
        let two = T::lit(2.0);
        if x >= two {
            return T::zero();
        }
        let a = bump(two - x);
        let b = bump(x - T::one());
        a / (a + b)
    }

    /// `Υ'(x)`, in closed form.
    pub fn derivative<T: Scalar>(&self, x: T) -> T {
        let two = T::lit(2.0);
        if x <= T::one() || x >= two {
            return T::zero();
        }
        let a = bump(two - x);
        let b = bump(x - T::one());
        let da = -bump_prime(two - x);
        let db = bump_prime(x - T::one());
        let s = a + b;
        (da * b - a * db) / (s * s)
    }

    /// `Υ^(l)(x)` for `l ≤ 4`: closed form up to `l = 1`, then central
    /// differences of `Υ'`.
    pub fn derivative_of_order(x: f64, l: usize) -> f64 {
        let p = CutoffProfile { bounds: [0.0; 5] };
        let d = |y: f64| p.derivative(y);
        let h = FD_STEP;
        match l {
            0 => p.value(x),
            1 => d(x),
            2 => (d(x + h) - d(x - h)) / (2.0 * h),
            3 => (d(x + h) - 2.0 * d(x) + d(x - h)) / (h * h),
            4 => (d(x + 2.0 * h) - 2.0 * d(x + h) + 2.0 * d(x - h) - d(x - 2.0 * h)) / (2.0 * h * h * h),
            _ => panic!("cutoff derivatives are tabulated up to order 4"),
        }
    }

    /// `Υ(ρ/s)`, the profile rescaled to switch between `s` and `2s`.
    pub fn scaled<T: Scalar>(&self, rho: T, s: T) -> T {
        self.value(rho / s)
    }

    /// Bound for the `l`-th derivative of `Υ(ρ/s)`: `C_l s^{−l}`.
    pub fn scaled_bound(&self, l: usize, s: f64) -> f64 {
        self.bounds[l] * s.powi(-(l as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauss_quad::GaussLegendre;
    use proptest::prelude::*;
    use std::num::NonZeroUsize;

    #[test]
    fn plateaus() {
        let c = CutoffProfile::standard();
        for x in [0.0, 0.3, 0.999, 1.0] {
            assert_eq!(c.value(x), 1.0);
        }
        for x in [2.0, 2.5, 10.0] {
            assert_eq!(c.value(x), 0.0);
        }
        assert!((c.value(1.5f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_integrates_to_minus_one() {
        let c = CutoffProfile::standard();
        let rule = GaussLegendre::new(NonZeroUsize::new(60).unwrap());
        let total = rule.integrate(1.0, 2.0, |x| c.derivative(x));
        assert!((total + 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn closed_derivative_matches_difference_quotient() {
        let c = CutoffProfile::standard();
        for i in 1..40 {
            let x = 1.0 + i as f64 / 40.0;
            let h = 1e-5;
            let fd = (c.value(x + h) - c.value(x - h)) / (2.0 * h);
            assert!((fd - c.derivative(x)).abs() < 1e-7);
        }
    }

    #[test]
    fn bounds_are_ordered_sensibly() {
        let c = CutoffProfile::standard();
        assert_eq!(c.bounds[0], 1.01);
        // the steepest slope is at least the mean slope
        assert!(c.bounds[1] >= 1.0);
        assert!(c.bounds.iter().all(|b| b.is_finite() && *b > 0.0));
        assert!((c.scaled_bound(2, 0.5) - 4.0 * c.bounds[2]).abs() < 1e-12);
    }

    #[test]
    fn f32_agrees() {
        let c = CutoffProfile::standard();
        for i in 0..30 {
            let x = 0.9 + i as f64 / 25.0;
            assert!((c.value(x as f32) as f64 - c.value(x)).abs() < 1e-5);
        }
    }

    proptest! {
        #[test]
        fn derivatives_within_bounds(x in 0.0f64..3.0, l in 0usize..5) {
            let c = CutoffProfile::standard();
            prop_assert!(CutoffProfile::derivative_of_order(x, l).abs() <= c.bounds[l]);
        }

        #[test]
        fn monotone_and_in_range(x in 0.0f64..3.0, dx in 0.0f64..0.5) {
            let c = CutoffProfile::standard();
            let (a, b) = (c.value(x), c.value(x + dx));
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a);
        }
    }
}
