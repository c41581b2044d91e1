//! Central finite differences with one Richardson level.

use serde::{Deserialize, Serialize};

use super::linalg::Point;
use crate::scalar::Scalar;

/// Values that can be linearly combined componentwise.
pub trait Lin<T>: Clone {
    fn axpy(&mut self, a: T, x: &Self);
    fn scaled(&self, a: T) -> Self;
}

impl Lin<f64> for f64 {
    fn axpy(&mut self, a: f64, x: &f64) {
        *self += a * x;
    }
    fn scaled(&self, a: f64) -> f64 {
        self * a
    }
}

impl Lin<f32> for f32 {
    fn axpy(&mut self, a: f32, x: &f32) {
        *self += a * x;
    }
    fn scaled(&self, a: f32) -> f32 {
        self * a
    }
}

impl<T: Copy, A: Lin<T>, const N: usize> Lin<T> for [A; N] {
    fn axpy(&mut self, a: T, x: &Self) {
        for (s, xi) in self.iter_mut().zip(x) {
            s.axpy(a, xi);
        }
    }
    fn scaled(&self, a: T) -> Self {
        std::array::from_fn(|i| self[i].scaled(a))
    }
}

impl<T: Copy, A: Lin<T>> Lin<T> for Vec<A> {
    fn axpy(&mut self, a: T, x: &Self) {
        for (s, xi) in self.iter_mut().zip(x) {
            s.axpy(a, xi);
        }
    }
    fn scaled(&self, a: T) -> Self {
        self.iter().map(|v| v.scaled(a)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    pub step: f64,
    /// Combine steps `h` and `h/2` as `(4 D(h/2) − D(h)) / 3`.
    pub richardson: bool,
}

impl FdScheme {
    pub fn new(step: f64) -> Self {
        FdScheme { step, richardson: true }
    }

    /// `1e-3` in double precision, `ε^{1/5}` for coarser types.
    pub fn default_for<T: Scalar>() -> Self {
        let eps = T::epsilon().to_f64_lossy();
        let step = if eps < 1e-12 { 1e-3 } else { eps.powf(0.2) };
        FdScheme::new(step)
    }

    /// Largest offset from the base point touched by one derivative.
    pub fn reach(&self) -> f64 {
        self.step
    }
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme::new(1e-3)
    }
}

fn shifted<T: Scalar>(p: &Point<T>, k: usize, h: T) -> Point<T> {
    let mut q = *p;
    q[k] = q[k] + h;
    q
}

fn central<T: Scalar, V: Lin<T>, E>(
    f: &dyn Fn(&Point<T>) -> Result<V, E>,
    p: &Point<T>,
    k: usize,
    h: T,
) -> Result<V, E> {
    let mut d = f(&shifted(p, k, h))?;
    d.axpy(-T::one(), &f(&shifted(p, k, -h))?);
    Ok(d.scaled(T::one() / (h + h)))
}

/// `∂_k f(p)`.
pub fn partial<T: Scalar, V: Lin<T>, E>(
    f: &dyn Fn(&Point<T>) -> Result<V, E>,
    p: &Point<T>,
    k: usize,
    scheme: &FdScheme,
) -> Result<V, E> {
    let h = T::lit(scheme.step);
    let coarse = central(f, p, k, h)?;
    if !scheme.richardson {
        return Ok(coarse);
    }
    let fine = central(f, p, k, h * T::lit(0.5))?;
    let mut out = fine.scaled(T::lit(4.0 / 3.0));
    out.axpy(T::lit(-1.0 / 3.0), &coarse);
    Ok(out)
}

/// All four partials `[∂₀f, ∂₁f, ∂₂f, ∂₃f]`.
pub fn gradient<T: Scalar, V: Lin<T>, E>(
    f: &dyn Fn(&Point<T>) -> Result<V, E>,
    p: &Point<T>,
    scheme: &FdScheme,
) -> Result<[V; 4], E> {
    Ok([partial(f, p, 0, scheme)?, partial(f, p, 1, scheme)?, partial(f, p, 2, scheme)?, partial(f, p, 3, scheme)?])
}

/// Derivative of a one-parameter family at `s = 0`.
pub fn derivative_1d<T: Scalar, V: Lin<T>, E>(
    f: &dyn Fn(T) -> Result<V, E>,
    scheme: &FdScheme,
) -> Result<V, E> {
    let one = |h: T| -> Result<V, E> {
        let mut d = f(h)?;
        d.axpy(-T::one(), &f(-h)?);
        Ok(d.scaled(T::one() / (h + h)))
    };
    let h = T::lit(scheme.step);
    let coarse = one(h)?;
    if !scheme.richardson {
        return Ok(coarse);
    }
    let fine = one(h * T::lit(0.5))?;
    let mut out = fine.scaled(T::lit(4.0 / 3.0));
    out.axpy(T::lit(-1.0 / 3.0), &coarse);
    Ok(out)
}
