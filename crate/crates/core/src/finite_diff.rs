//! Central finite differences with one Richardson extrapolation step.
//!
//! First and second derivatives use five-point stencils, third and fourth
//! derivatives seven-point stencils; all are `O(h^4)`, and combining the
//! results at `h` and `h/2` removes the leading error term.

use num_complex::Complex;

use crate::scalar::{lit, Real};

/// Default step for fourth derivatives.
pub const DEFAULT_STEP: f64 = 3e-2;

fn stencil<T: Real, F>(f: &F, x: T, h: T, order: usize) -> Complex<T>
where
    F: Fn(T) -> Complex<T>,
{
    let at = |j: i32| f(x + h * lit::<T>(j as f64));
    match order {
        0 => at(0),
        1 => (at(-2) - at(2) + (at(1) - at(-1)) * lit::<T>(8.0)) / (h * lit(12.0)),
        2 => ((at(1) + at(-1)) * lit::<T>(16.0) - at(2) - at(-2) - at(0) * lit::<T>(30.0)) / (h * h * lit(12.0)),
        3 => {
            ((at(2) - at(-2)) * lit::<T>(8.0) - at(3) + at(-3) - (at(1) - at(-1)) * lit::<T>(13.0))
                / (h * h * h * lit(8.0))
        }
        4 => {
            ((at(2) + at(-2)) * lit::<T>(12.0) - at(3) - at(-3) - (at(1) + at(-1)) * lit::<T>(39.0)
                + at(0) * lit::<T>(56.0))
                / (h * h * h * h * lit(6.0))
        }
        _ => panic!("derivative order {order} not supported"),
    }
}

/// `d^order f / dx^order` at `x` (order 0 to 4).
///
/// # Panics
/// For orders above 4.
pub fn derivative<T: Real, F>(f: F, x: T, order: usize, h: T) -> Complex<T>
where
    F: Fn(T) -> Complex<T>,
{
    let coarse = stencil(&f, x, h, order);
    if order == 0 {
        return coarse;
    }
    let fine = stencil(&f, x, h / lit(2.0), order);
    (fine * lit::<T>(16.0) - coarse) / lit::<T>(15.0)
}

/// Real-valued convenience wrapper of [`derivative`].
pub fn derivative_real<T: Real, F>(f: F, x: T, order: usize, h: T) -> T
where
    F: Fn(T) -> T,
{
    derivative(|u| Complex::new(f(u), T::zero()), x, order, h).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exponential() {
        for order in 0..=4 {
            let d = derivative_real(|x: f64| x.exp(), 0.3, order, 3e-2);
            // roundoff ~ eps / h^4 dominates the fourth derivative
            let tol = if order == 4 { 1e-6 } else { 1e-8 };
            assert!((d - 0.3f64.exp()).abs() < tol, "order {order}: {d}");
        }
        let d3 = derivative_real(|x: f64| x.powi(3), 1.7, 3, 0.1);
        assert!((d3 - 6.0).abs() < 1e-9);
    }
}
