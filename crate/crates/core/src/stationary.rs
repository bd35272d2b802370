//! Stationary-phase reduction of the reflected wave in `(s, T)` and `nu`.
//!
//! Notation: `d = y - z`, `r` the root of the quartic
//! `r^4 (x^2 + d^2) - r^2 (x/2 + 1) d^2 + d^4/16 = 0`, `q = (1 - r^2)^{1/2}`.
//! The grazing set is `4x = d^2`, where `r = -1`.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::quadrature::{adaptive, truncation_radius, QuadratureResult};
use crate::ray_beam::beam_matrix;
use crate::scalar::{abs_pow, imag_unit, lit, real, Real};
use crate::spectral::amplitude_z_c;

const MAX_PANELS: usize = 4_000;

/// Which of `T = +-|nu|^{1/3} q` solves the stationarity equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBranch {
    /// `4x >= (y-z)^2`.
    Plus,
    /// `4x < (y-z)^2`.
    Minus,
}

impl SignBranch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            SignBranch::Plus => T::one(),
            SignBranch::Minus => -T::one(),
        }
    }
}

/// Stationary point in `(s, T)` for fixed `(t, x, y, z, nu)`, with the phase
/// and Hessian determinant there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryData<T: Real> {
    pub r: T,
    /// `s = mu + nu = nu (1 + r)`.
    pub s: T,
    /// The Airy variable `T`.
    pub tt: T,
    pub sign_branch: SignBranch,
    pub phi_sp: Complex<T>,
    /// Determinant of the `(s, T)` Hessian.
    pub j: T,
    pub b: Complex<T>,
    pub c: T,
}

/// Taylor data about the grazing point `z = y - 2 sqrt x` in the offset `w`,
/// normalized as `f = c0 + c1 w + c2 w^2 + c3 w^3/6 + c4 w^4/24`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients<T: Real> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
    pub c3: T,
    pub c4: T,
    pub base_x: T,
}

impl<T: Real> SeriesCoefficients<T> {
    /// The `n`-th `w`-derivative at the grazing point.
    pub fn derivative(&self, n: usize) -> T {
        match n {
            0 => self.c0,
            1 => self.c1,
            2 => self.c2 * lit(2.0),
            3 => self.c3,
            4 => self.c4,
            _ => T::zero(),
        }
    }
}

fn check_admissible<T: Real>(x: T, d: T) -> Result<()> {
    if !(x.is_finite() && d.is_finite()) {
        return Err(domain(format!("non-finite arguments x = {x}, y - z = {d}")));
    }
    if d * d > lit::<T>(4.0) * (T::one() + x) {
        return Err(domain(format!("need 4 + 4x >= (y-z)^2, got x = {x}, y - z = {d}")));
    }
    if x == T::zero() && d == T::zero() {
        return Err(Error::Degenerate("root r is undefined at x = 0, y = z".into()));
    }
    Ok(())
}

fn root_with<T: Real>(x: T, y: T, z: T, sign: T) -> Result<T> {
    let d = y - z;
    check_admissible(x, d)?;
    let disc = (T::one() + x - d * d / lit(4.0)).max(T::zero()).sqrt();
    let ratio = (x / lit(2.0) + T::one() + sign * disc) / (lit::<T>(2.0) * (x * x + d * d));
    // |r| <= 1 exactly; rounding can push it just past on the grazing set
    Ok((-ratio.max(T::zero()).sqrt() * d).max(-T::one()).min(T::one()))
}

/// The root `r(x, y, z)` used throughout (plus sign in front of the
/// discriminant).
pub fn root_r<T: Real>(x: T, y: T, z: T) -> Result<T> {
    root_with(x, y, z, T::one())
}

/// The other root of the quadratic in `r^2`. It solves the `Minus`-branch
/// stationarity equation where the main root solves the `Plus` one; it is
/// not used by the rest of the pipeline.
pub fn root_r_alternate<T: Real>(x: T, y: T, z: T) -> Result<T> {
    root_with(x, y, z, -T::one())
}

/// Residual of the quartic satisfied by both roots.
pub fn quartic_residual<T: Real>(x: T, y: T, z: T, r: T) -> T {
    let d = y - z;
    let r2 = r * r;
    r2 * r2 * (x * x + d * d) - r2 * (x / lit(2.0) + T::one()) * d * d + d.powi(4) / lit(16.0)
}

pub fn sign_branch<T: Real>(x: T, y: T, z: T) -> SignBranch {
    let d = y - z;
    if lit::<T>(4.0) * x >= d * d {
        SignBranch::Plus
    } else {
        SignBranch::Minus
    }
}

/// `B(z) = -z^3/8 + i z^4/32`.
pub fn b_of_z<T: Real>(z: T) -> Complex<T> {
    let z3 = z * z * z;
    Complex::new(-z3 / lit(8.0), z3 * z / lit(32.0))
}

/// `phi(x, y, z) = -z + r d + d^3/(48 r^3) + r x^2/d`, the part of `C`
/// that depends on the root.
pub fn spatial_phase<T: Real>(x: T, y: T, z: T) -> Result<T> {
    let d = y - z;
    if d == T::zero() {
        return Err(Error::Degenerate("C is not evaluated at y = z".into()));
    }
    let r = root_r(x, y, z)?;
    Ok(-z + r * d + d * d * d / (lit::<T>(48.0) * r * r * r) + r * x * x / d)
}

/// `C = t - z^3/12 + phi(x, y, z)`.
pub fn c_of<T: Real>(x: T, y: T, z: T, t: T) -> Result<T> {
    Ok(t - z * z * z / lit(12.0) + spatial_phase(x, y, z)?)
}

/// `Phi^sp = nu C + B + (i/2)(nu + 1)^2`.
pub fn phi_sp<T: Real>(t: T, x: T, y: T, nu: T, z: T) -> Result<Complex<T>> {
    let c = c_of(x, y, z, t)?;
    Ok(real(nu * c) + b_of_z(z) + Complex::new(T::zero(), (nu + T::one()).powi(2) / lit(2.0)))
}

fn hessian_parts<T: Real>(x: T, r: T) -> Result<(T, T)> {
    if !(r.abs() <= T::one()) {
        return Err(domain(format!("need |r| <= 1, got {r}")));
    }
    let q2 = T::one() - r * r;
    let rad = x + q2;
    if !(rad > T::zero()) {
        return Err(domain(format!("x + 1 - r^2 = {rad} must be positive")));
    }
    let q = q2.sqrt();
    let odd = rad.powf(lit(-0.5)) * r * r * q - rad.sqrt() * q;
    Ok((odd, q2 - r * r))
}

/// `J = 4 |nu|^{-2/3} [(x+q^2)^{-1/2} r^2 q - (x+q^2)^{1/2} q + q^2 - r^2]`.
///
/// This is the determinant on the `Plus` branch; see [`hessian_j_branch`].
pub fn hessian_j<T: Real>(x: T, nu: T, r: T) -> Result<T> {
    hessian_j_branch(x, nu, r, SignBranch::Plus)
}

/// Hessian determinant with the `q`-odd terms signed by `branch`.
pub fn hessian_j_branch<T: Real>(x: T, nu: T, r: T, branch: SignBranch) -> Result<T> {
    if !(nu < T::zero()) {
        return Err(domain(format!("hessian needs nu < 0, got {nu}")));
    }
    let (odd, even) = hessian_parts(x, r)?;
    Ok(lit::<T>(4.0) * abs_pow(nu, lit(-2.0 / 3.0)) * (branch.sign::<T>() * odd + even))
}

pub fn stationary_point<T: Real>(t: T, x: T, y: T, z: T, nu: T) -> Result<StationaryData<T>> {
    if !(nu < T::zero()) {
        return Err(domain(format!("stationary point needs nu < 0, got {nu}")));
    }
    let r = root_r(x, y, z)?;
    let branch = sign_branch(x, y, z);
    let q = (T::one() - r * r).max(T::zero()).sqrt();
    let c = c_of(x, y, z, t)?;
    let b = b_of_z(z);
    Ok(StationaryData {
        r,
        s: nu * (T::one() + r),
        tt: branch.sign::<T>() * abs_pow(nu, lit(1.0 / 3.0)) * q,
        sign_branch: branch,
        phi_sp: real(nu * c) + b + Complex::new(T::zero(), (nu + T::one()).powi(2) / lit(2.0)),
        j: hessian_j_branch(x, nu, r, branch)?,
        b,
        c,
    })
}

/// Leading steepest-descent value of `int amp(nu) e^{ik Phi^sp} dnu`:
/// `(2 pi/k)^{1/2} amp(-1 + iC) e^{ik(B - C) - k C^2/2}`.
pub fn nu_descent<T: Real, F>(x: T, y: T, z: T, t: T, k: T, amp: F) -> Result<Complex<T>>
where
    F: Fn(Complex<T>) -> Complex<T>,
{
    let c = c_of(x, y, z, t)?;
    let nu = Complex::new(-T::one(), c);
    let pre = (lit::<T>(2.0) * T::PI() / k).sqrt();
    Ok(amp(nu) * pre * (descent_exponent(c, b_of_z(z)) * k).exp())
}

fn descent_exponent<T: Real>(c: T, b: Complex<T>) -> Complex<T> {
    imag_unit::<T>() * (b - real(c)) - real(c * c / lit(2.0))
}

/// `i(B - C) - C^2/2` on the frozen boundary data.
pub fn final_exponent<T: Real>(x: T, y: T, z: T, t: T) -> Result<Complex<T>> {
    Ok(descent_exponent(c_of(x, y, z, t)?, b_of_z(z)))
}

/// The same exponent with the exact beam matrix `M(z)` in the boundary
/// data. The `nu` saddle moves to `-1 - z^2 M12/4 + M22 C`, giving
/// `i(B_M - C) - i z^2 M12 C/4 + i M22 C^2/2`, `B_M = -z^3/8 + z^4 M11/32`.
pub fn final_exponent_full<T: Real>(x: T, y: T, z: T, t: T) -> Result<Complex<T>> {
    let c = c_of(x, y, z, t)?;
    let m = beam_matrix(z).m.0;
    let z2 = z * z;
    let b_m = real(-z2 * z / lit(8.0)) + m[0][0] * (z2 * z2 / lit(32.0));
    let i = imag_unit::<T>();
    Ok(i * (b_m - real(c)) - i * m[0][1] * (z2 * c / lit(4.0)) + i * m[1][1] * (c * c / lit(2.0)))
}

/// Time at which the central ray reaches height `x`: `2 sqrt x (1 + x/3)`.
pub fn ray_time<T: Real>(x: T) -> T {
    lit::<T>(2.0) * x.sqrt() * (T::one() + x / lit(3.0))
}

/// The `z`-integrand left after both stationary-phase steps: the amplitude
/// `(2 pi/k) Z (-J)^{-1/2}` continued to `nu = -1 + iC`, times
/// `(2 pi/k)^{1/2} e^{ik(B - C) - k C^2/2}`.
pub fn reduced_integrand<T: Real>(x: T, y: T, t: T, k: T, z: T) -> Result<Complex<T>> {
    if !(x > T::zero()) {
        return Err(domain(format!("reduced integrand needs x > 0, got {x}")));
    }
    if !(k > T::zero()) {
        return Err(domain(format!("k must be positive, got {k}")));
    }
    let r = root_r(x, y, z)?;
    let branch = sign_branch(x, y, z);
    let q = (T::one() - r * r).max(T::zero()).sqrt();
    let j1 = hessian_j_branch(x, -T::one(), r, branch)?;
    let two_pi_k = lit::<T>(2.0) * T::PI() / k;
    nu_descent(x, y, z, t, k, |nu| {
        let m_nu = -nu;
        let cube = m_nu.powf(lit(1.0 / 3.0));
        let tt = cube * (branch.sign::<T>() * q);
        // J(nu) = J(-1) (-nu)^{-2/3}
        let inv_sqrt_j = real(-j1).sqrt().inv() * cube;
        match amplitude_z_c(k, x, nu * r, nu, tt) {
            Ok(zf) => zf * inv_sqrt_j * two_pi_k,
            Err(_) => Complex::new(T::nan(), T::nan()),
        }
    })
    .and_then(|v| {
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Degenerate(format!("amplitude not finite at z = {z}")))
        }
    })
}

/// `int reduced_integrand dz`, truncated where `e^{-k z^4/32}` drops below
/// the tolerance and clipped to the admissible band `|y - z| <= 2 (1+x)^{1/2}`.
pub fn z_integral<T: Real>(x: T, y: T, t: T, k: T, tol: T) -> Result<QuadratureResult<T>> {
    if !(tol > T::zero()) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let radius = truncation_radius(k / lit(32.0), lit(4.0), tol / lit(10.0));
    let band = lit::<T>(2.0) * (T::one() + x).sqrt();
    let lo = (-radius).max(y - band);
    let hi = radius.min(y + band);
    if !(lo < hi) {
        return Err(domain(format!("no admissible z near 0 for y = {y}, x = {x}")));
    }
    let mut res = adaptive(
        |z| reduced_integrand(x, y, t, k, z),
        lo,
        hi,
        tol * lit(0.9),
        T::zero(),
        k * radius.powi(3) / lit(8.0),
        MAX_PANELS,
    )?;
    res.error_estimate = res.error_estimate + tol / lit(10.0);
    res.truncation_radius = radius;
    Ok(res)
}

fn check_x<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("x must be positive, got {x}")))
    }
}

/// Taylor data of `r(x, y, y - 2 sqrt x + w)` in `w`.
pub fn series_r<T: Real>(x: T) -> Result<SeriesCoefficients<T>> {
    check_x(x)?;
    let sx = x.sqrt();
    Ok(SeriesCoefficients {
        c0: -T::one(),
        c1: T::zero(),
        c2: lit(0.125),
        c3: lit::<T>(3.0) / lit(8.0) * (T::one() / sx - sx),
        c4: lit::<T>(15.0) / lit(16.0) * (x - T::one() + T::one() / x),
        base_x: x,
    })
}

/// Taylor data of `phi(x, y, y - 2 sqrt x + w)` in `w`, with the base value
/// taken at `y = 2 sqrt x`.
pub fn series_phi<T: Real>(x: T) -> Result<SeriesCoefficients<T>> {
    check_x(x)?;
    let sx = x.sqrt();
    let d = lit::<T>(2.0) * sx;
    Ok(SeriesCoefficients {
        c0: -d - d * d * d / lit(12.0),
        c1: T::zero(),
        c2: T::zero(),
        c3: lit(-0.25),
        c4: lit::<T>(3.0) / lit(8.0) * (sx - T::one() / sx),
        base_x: x,
    })
}

/// `a(x)`, defined by `24 a(x) = d^4/dz^4 [B - C]` at the ray point with
/// `z = 0`: `[-(3/8)(sqrt x - 1/sqrt x) + 3i/4] / 24`.
pub fn quartic_coefficient<T: Real>(x: T) -> Result<Complex<T>> {
    check_x(x)?;
    let sx = x.sqrt();
    let re = -lit::<T>(3.0) / lit(8.0) * (sx - T::one() / sx);
    Ok(Complex::new(re, lit(0.75)) / lit::<T>(24.0))
}
