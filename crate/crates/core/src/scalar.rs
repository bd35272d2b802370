//! Scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`], so the
//! same code runs in `f32` and `f64`. The tolerances quoted throughout the
//! documentation and the test-suite assume `f64`; `f32` is supported for
//! quick sweeps where a few digits are enough.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(v: f64) -> Self {
        // `FromPrimitive::from_f64` cannot fail for f32/f64
        Self::from_f64(v).unwrap()
    }

    /// Converts a count into this type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).unwrap()
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `T::lit`.
#[inline]
pub(crate) fn lit<T: Real>(v: f64) -> T {
    T::lit(v)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `i`
#[inline]
pub(crate) fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{i theta}`
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::from_polar(T::one(), theta)
}

/// `omega = e^{2 pi i / 3}`
#[inline]
pub fn omega<T: Real>() -> Complex<T> {
    cis(lit::<T>(2.0) * T::PI() / lit(3.0))
}

/// Signed magnitude power `|v|^p` for negative reals, the convention used for
/// every fractional power of the (negative) scaled frequency.
#[inline]
pub(crate) fn abs_pow<T: Real>(v: T, p: T) -> T {
    v.abs().powf(p)
}

/// Continuous square root of a sampled complex path.
///
/// `path` must start at a point where the principal root is the intended
/// one. The argument is unwrapped sample by sample so the root stays on one
/// sheet even where the path winds around the origin.
pub fn continued_sqrt<T: Real>(path: &[Complex<T>]) -> Option<Complex<T>> {
    continued_power(path, lit(0.5))
}

/// Continuous power `v^p` along a sampled complex path, see [`continued_sqrt`].
pub fn continued_power<T: Real>(path: &[Complex<T>], p: T) -> Option<Complex<T>> {
    let first = *path.first()?;
    let mut theta = first.arg();
    let mut prev = first;
    for &v in &path[1..] {
        if v.norm() == T::zero() {
            return None;
        }
        let mut step = (v / prev).arg();
        // a jump of more than a quarter turn means the path is undersampled
        if step.abs() > T::FRAC_PI_2() {
            return None;
        }
        if step == -T::PI() {
            step = T::PI();
        }
        theta = theta + step;
        prev = v;
    }
    let last = *path.last()?;
    Some(Complex::from_polar(last.norm().powf(p), theta * p))
}
