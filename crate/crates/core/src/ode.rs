//! Fixed-step classical Runge–Kutta for small complex systems.

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// Integrates `u' = f(s, u)` from `s0` to `s1` with the classical fourth
/// order scheme. The step is shortened so that it divides the interval.
pub fn rk4<T: Real, const N: usize, F>(f: F, u0: [Complex<T>; N], s0: T, s1: T, step: T) -> [Complex<T>; N]
where
    F: Fn(T, &[Complex<T>; N]) -> [Complex<T>; N],
{
    let span = s1 - s0;
    let n = (span.abs() / step).ceil().to_usize().unwrap_or(0);
    if n == 0 {
        return u0;
    }
    let h = span / T::from_count(n);
    let half = h / lit(2.0);
    let mut u = u0;
    let mut s = s0;
    let axpy = |u: &[Complex<T>; N], k: &[Complex<T>; N], c: T| {
        let mut out = *u;
        for (o, kk) in out.iter_mut().zip(k) {
            *o = *o + *kk * c;
        }
        out
    };
    for j in 0..n {
        let k1 = f(s, &u);
        let k2 = f(s + half, &axpy(&u, &k1, half));
        let k3 = f(s + half, &axpy(&u, &k2, half));
        let k4 = f(s + h, &axpy(&u, &k3, h));
        for i in 0..N {
            u[i] = u[i] + (k1[i] + (k2[i] + k3[i]) * lit::<T>(2.0) + k4[i]) * (h / lit(6.0));
        }
        s = s0 + h * T::from_count(j + 1);
    }
    u
}
