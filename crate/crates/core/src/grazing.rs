//! The reflected wave on the central ray: the `u`-integral, its large-`k`
//! limit and the closed form `w = (1/2)(1 - x + 2i sqrt x)^{-1/2}`.

use std::fmt;

use num_complex::Complex;

use crate::airy::{airy_ratio, wronskian_constant};
use crate::error::{domain, Error, Result};
use crate::finite_diff::derivative;
use crate::quadrature::{integrate_1d_fallible, DampingProfile, QuadratureResult};
use crate::ray_beam::beam_on_ray;
use crate::scalar::{cis, imag_unit, lit, omega, Real};
use crate::spectral::exact_solution;
use crate::stationary::{c_of, quartic_coefficient, ray_time, z_integral};

const MAX_PANELS: usize = 4_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    UIntegral,
    ZIntegral,
    Spectral,
    ClosedForm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::UIntegral => "u-integral",
            Method::ZIntegral => "z-integral",
            Method::Spectral => "spectral",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u-integral" | "u" => Ok(Method::UIntegral),
            "z-integral" | "z" => Ok(Method::ZIntegral),
            "spectral" => Ok(Method::Spectral),
            "closed-form" | "closed" => Ok(Method::ClosedForm),
            _ => Err(domain(format!("unknown method {s:?}"))),
        }
    }
}

/// `w` on the central ray at height `x`. `k` is infinite for the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrazingResult<T: Real> {
    pub x: T,
    pub k: T,
    pub w_value: Complex<T>,
    pub method: Method,
    pub error_estimate: T,
}

/// `c = (4 pi)^{-3/2} e^{i pi/12} / W(0)`.
pub fn constant_c<T: Real>() -> Complex<T> {
    let four_pi = lit::<T>(4.0) * T::PI();
    cis(T::PI() / lit(12.0)) * four_pi.powf(lit(-1.5)) / wronskian_constant::<T>()
}

/// `int_0^inf u e^{-b u^4} du = (1/4) Gamma(1/2) b^{-1/2}`, principal branch.
pub fn quartic_moment<T: Real>(b: Complex<T>) -> Result<Complex<T>> {
    if !(b.re > T::zero()) {
        return Err(domain(format!("quartic moment needs Re b > 0, got {b}")));
    }
    Ok(b.sqrt().inv() * (T::PI().sqrt() / lit(4.0)))
}

/// `int_R u e^{-b u^4} du`, which vanishes by symmetry.
pub fn quartic_moment_full_line<T: Real>(b: Complex<T>) -> Result<Complex<T>> {
    quartic_moment(b)?;
    Ok(Complex::new(T::zero(), T::zero()))
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("x must be positive, got {x}")))
    }
}

/// Integrand of the `u`-integral without the prefactor `c / x^{1/4}`:
/// `(iu/2 - k^{-1/12} e^{2 pi i/3} Ai'/Ai(e^{-i pi/3} u^2 k^{1/6}/4)) e^{i a(x) u^4}`.
pub fn u_integrand<T: Real>(a: Complex<T>, k: T, u: T) -> Result<Complex<T>> {
    let zeta = cis(-T::PI() / lit(3.0)) * (u * u / lit(4.0) * k.powf(lit(1.0 / 6.0)));
    let ratio = airy_ratio(zeta)?;
    let bracket = imag_unit::<T>() * (u / lit(2.0)) - omega::<T>() * ratio * k.powf(lit(-1.0 / 12.0));
    Ok(bracket * (imag_unit::<T>() * a * (u * u * u * u)).exp())
}

/// `w` on the ray from the `u`-integral at finite `k`, to absolute `tol`.
pub fn u_integral_with<T: Real>(x: T, k: T, tol: T) -> Result<GrazingResult<T>> {
    check_x(x)?;
    if !(k >= lit(10.0)) {
        return Err(domain(format!("u-integral needs k >= 10, got {k}")));
    }
    let a = quartic_coefficient(x)?;
    let pre = constant_c::<T>() / x.powf(lit(0.25));
    let damping = DampingProfile::quartic(a.im).with_envelope(lit(4.0));
    let res: QuadratureResult<T> = integrate_1d_fallible(
        |u| u_integrand(a, k, u),
        &damping,
        T::one(),
        MAX_PANELS,
        tol / pre.norm(),
    )?;
    Ok(GrazingResult {
        x,
        k,
        w_value: res.value * pre,
        method: Method::UIntegral,
        error_estimate: res.error_estimate * pre.norm(),
    })
}

pub fn u_integral<T: Real>(x: T, k: T) -> Result<GrazingResult<T>> {
    u_integral_with(x, k, lit(1e-11))
}

/// `(c / (2 x^{1/4})) int (iu + i|u|) e^{i a(x) u^4} du`, in closed form.
pub fn limit_integral<T: Real>(x: T) -> Result<Complex<T>> {
    check_x(x)?;
    let a = quartic_coefficient(x)?;
    let moment = quartic_moment(-imag_unit::<T>() * a)?;
    Ok(constant_c::<T>() / (lit::<T>(2.0) * x.powf(lit(0.25))) * imag_unit::<T>() * lit::<T>(2.0) * moment)
}

/// `(1/2)(1 - x + 2i sqrt x)^{-1/2}`.
pub fn w_on_ray_closed<T: Real>(x: T) -> Result<Complex<T>> {
    if !(x >= T::zero()) {
        return Err(domain(format!("x must be non-negative, got {x}")));
    }
    let arg = Complex::new(T::one() - x, lit::<T>(2.0) * x.sqrt());
    Ok(arg.sqrt().inv() / lit::<T>(2.0))
}

/// Unsimplified form `3 e^{i pi/3} / (2 (-3 + 3x - 6i sqrt x)^{1/2} (e^{2 pi i/3} - 1))`,
/// with the square root's sign fixed once at `x = 1`.
fn closed_form_unsimplified<T: Real>(x: T, sign: T) -> Complex<T> {
    let three = lit::<T>(3.0);
    let arg = Complex::new(-three + three * x, -lit::<T>(6.0) * x.sqrt());
    cis(T::PI() / three) * three / (arg.sqrt() * sign * lit::<T>(2.0) * (omega::<T>() - T::one()))
}

/// `|unsimplified - simplified|` for the two displays of the closed form.
/// `(-3 + 3x - 6i sqrt x)` stays in the lower half plane for `x > 0`, so the
/// principal root is continuous and one sign serves every `x`.
pub fn closed_form_identity_check<T: Real>(x: T) -> Result<T> {
    check_x(x)?;
    let reference = w_on_ray_closed(T::one())?;
    let sign = if (closed_form_unsimplified(T::one(), T::one()) - reference).norm()
        <= (closed_form_unsimplified(T::one(), -T::one()) - reference).norm()
    {
        T::one()
    } else {
        -T::one()
    };
    Ok((closed_form_unsimplified(x, sign) - w_on_ray_closed(x)?).norm())
}

/// Amplitude `v - w` of the reflected beam on the ray.
pub fn reflected_amplitude<T: Real>(x: T) -> Result<Complex<T>> {
    Ok(beam_on_ray(x)? - w_on_ray_closed(x)?)
}

/// `w` on the central ray by any of the available routes. `tol` is an
/// absolute target; the closed form ignores `k` and `tol`.
pub fn w_on_ray<T: Real>(x: T, k: T, method: Method, tol: T) -> Result<GrazingResult<T>> {
    check_x(x)?;
    match method {
        Method::UIntegral => u_integral_with(x, k, tol),
        Method::ZIntegral => {
            let res = z_integral(x, lit::<T>(2.0) * x.sqrt(), ray_time(x), k, tol)?;
            Ok(GrazingResult {
                x,
                k,
                w_value: res.value,
                method,
                error_estimate: res.error_estimate,
            })
        }
        Method::Spectral => {
            let res = exact_solution(x, lit::<T>(2.0) * x.sqrt(), ray_time(x), k, tol)?;
            Ok(GrazingResult {
                x,
                k,
                w_value: res.value,
                method,
                error_estimate: res.error_estimate,
            })
        }
        Method::ClosedForm => Ok(GrazingResult {
            x,
            k: T::infinity(),
            w_value: w_on_ray_closed(x)?,
            method,
            error_estimate: T::zero(),
        }),
    }
}

/// Derivatives of the `z`-integral representation of `w` on the ray,
/// compared with `ik sqrt x w` and `ik w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeReport<T: Real> {
    pub x: T,
    pub k: T,
    pub w: Complex<T>,
    /// `(d_x w) / (ik sqrt x w)`.
    pub ratio_x: Complex<T>,
    /// `(d_y w) / (ik w)`.
    pub ratio_y: Complex<T>,
    /// `C_x` and `C_y` at `z = 0`, which give the leading phase gradients.
    pub c_x: T,
    pub c_y: T,
    /// `C_xzz` and `C_yzz` on the grazing set. Only the leading order of `w`
    /// is known, so these do not decide whether `w` is a Gaussian beam to
    /// the next order.
    pub c_xzz: T,
    pub c_yzz: T,
}

pub fn derivative_consistency<T: Real>(x: T, k: T) -> Result<DerivativeReport<T>> {
    check_x(x)?;
    let (y, t) = (lit::<T>(2.0) * x.sqrt(), ray_time(x));
    let tol = lit::<T>(1e-10);
    let w = z_integral(x, y, t, k, tol)?.value;
    if w.norm() == T::zero() {
        return Err(Error::Degenerate("w vanishes on the ray".into()));
    }
    let nan = Complex::new(T::nan(), T::nan());
    let h = lit::<T>(0.2) / k;
    let dwx = derivative(|xx| z_integral(xx, y, t, k, tol).map_or(nan, |r| r.value), x, 1, h);
    let dwy = derivative(|yy| z_integral(x, yy, t, k, tol).map_or(nan, |r| r.value), y, 1, h);
    if !(dwx.re.is_finite() && dwy.re.is_finite()) {
        return Err(Error::Degenerate("z-integral failed near the ray".into()));
    }
    let ik = Complex::new(T::zero(), k);
    let hc = lit::<T>(1e-2);
    let real_d = |f: &dyn Fn(T) -> T, at: T, order| crate::finite_diff::derivative_real(f, at, order, hc);
    let c = |xx: T, yy: T, z: T| c_of(xx, yy, z, t).unwrap_or(T::nan());
    let c_zz = |xx: T, yy: T| real_d(&|z| c(xx, yy, z), T::zero(), 2);
    Ok(DerivativeReport {
        x,
        k,
        w,
        ratio_x: dwx / (ik * x.sqrt() * w),
        ratio_y: dwy / (ik * w),
        c_x: real_d(&|xx| c(xx, y, T::zero()), x, 1),
        c_y: real_d(&|yy| c(x, yy, T::zero()), y, 1),
        c_xzz: real_d(&|xx| c_zz(xx, y), x, 1),
        c_yzz: real_d(&|yy| c_zz(x, yy), y, 1),
    })
}

/// `|v - w| / |v|` and `|w| / |v|` on the ray.
pub fn reflected_ratios<T: Real>(x: T) -> Result<(T, T)> {
    let v = beam_on_ray(x)?;
    let w = w_on_ray_closed(x)?;
    Ok(((v - w).norm() / v.norm(), w.norm() / v.norm()))
}

/// `|w| = (1/2)(1 + x)^{-1/2}`.
pub fn closed_form_modulus<T: Real>(x: T) -> T {
    (T::one() + x).sqrt().recip() / lit(2.0)
}
