//! Airy-quotient representation of the reflected wave.
//!
//! The Dirichlet problem for `(1+x) u_tt = u_xx + u_yy` on `x > 0` with data
//! `f` is solved by
//!
//! ```text
//! w(x,y,t) = (2 pi)^-2 int e^{i(y eta + t tau)} Ai(zeta(x)) / Ai(zeta(0)) f^(eta, tau)
//! ```
//!
//! with `zeta(x, eta, tau) = beta (1 + x - eta^2/tau^2)`, `beta^3 = -tau^2`.
//! Frequencies are stretched as `eta = k mu`, `tau = k nu`; every fractional
//! power of the negative `nu` is taken of `|nu|` (or of `-nu` once `nu` is
//! continued into the complex plane) with explicit phase factors.

use num_complex::Complex;
use rayon::prelude::*;

use crate::airy::{airy_ai_scaled, airy_ratio, wronskian_constant};
use crate::error::{domain, Error, Result};
use crate::quadrature::{
    adaptive, integrate_1d_fallible, trapezoid_window, truncation_radius, DampingProfile, QuadratureResult,
};
use crate::ray_beam::{beam_amplitude, beam_matrix};
use crate::scalar::{cis, imag_unit, lit, omega, real, Real};

const MAX_PANELS: usize = 20_000;
const MAX_TRAPEZOID_NODES: usize = 1 << 16;

/// Which formula produced a [`ZetaValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaRegime {
    /// `beta = |tau|^{2/3} e^{+- i pi/3}` for arbitrary real `tau`.
    ExactBranch,
    /// `(|nu| k)^{2/3} e^{-i pi/3} (1 + x - mu^2/nu^2)` for `nu < 0`.
    ScaledNearNuMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue<T: Real> {
    pub value: Complex<T>,
    /// The `beta` used.
    pub branch_factor: Complex<T>,
    pub regime: ZetaRegime,
    /// `|tau|` (exact branch) or `|nu| k` (scaled form).
    pub magnitude: T,
    /// `1 + x - eta^2/tau^2`
    pub factor: T,
}

/// `zeta(x, eta, tau)` on the bounded branch.
pub fn zeta<T: Real>(x: T, eta: T, tau: T) -> Result<ZetaValue<T>> {
    if tau == T::zero() {
        return Err(domain("zeta is undefined at tau = 0"));
    }
    let third = T::PI() / lit(3.0);
    let beta = cis(if tau > T::zero() { third } else { -third }) * tau.abs().powf(lit(2.0 / 3.0));
    let factor = T::one() + x - (eta / tau).powi(2);
    Ok(ZetaValue {
        value: beta * factor,
        branch_factor: beta,
        regime: ZetaRegime::ExactBranch,
        magnitude: tau.abs(),
        factor,
    })
}

/// Scaled form `zeta(x, k mu, k nu)` for `nu < 0`.
pub fn zeta_scaled<T: Real>(x: T, mu: T, nu: T, k: T) -> Result<ZetaValue<T>> {
    if !(nu < T::zero()) {
        return Err(domain(format!("the scaled zeta needs nu < 0, got {nu}")));
    }
    let m = nu.abs() * k;
    let beta = cis(-T::PI() / lit(3.0)) * m.powf(lit(2.0 / 3.0));
    let factor = T::one() + x - (mu / nu).powi(2);
    Ok(ZetaValue {
        value: beta * factor,
        branch_factor: beta,
        regime: ZetaRegime::ScaledNearNuMinusOne,
        magnitude: m,
        factor,
    })
}

/// `zeta^{3/2} = |nu| k e^{-i pi/2} (1 + x - mu^2/nu^2)^{3/2}`, the power
/// continued from the positive real axis.
pub fn zeta_power_3_2<T: Real>(z: &ZetaValue<T>) -> Result<Complex<T>> {
    if z.regime != ZetaRegime::ScaledNearNuMinusOne {
        return Err(domain("zeta^{3/2} is defined for the scaled form only"));
    }
    if z.factor < T::zero() {
        return Err(Error::Branch(format!(
            "1 + x - mu^2/nu^2 = {} is negative, no real 3/2 power",
            z.factor
        )));
    }
    Ok(-imag_unit::<T>() * (z.magnitude * z.factor.powf(lit(1.5))))
}

fn frozen_exponent<T: Real>(z: T, mu: T, nu: T, k: T) -> Complex<T> {
    let z3 = z * z * z;
    let re = -k * (z3 * z / lit(32.0));
    let im = -k * (z * mu + nu * (z + z3 / lit(12.0)) + z3 / lit(8.0));
    Complex::new(re, im)
}

/// `int e^{-ik[z mu + nu (z + z^3/12) + z^3/8] - k z^4/32} dz`, the
/// `z`-integral of the frozen boundary data without the `nu`-Gaussian.
pub(crate) fn frozen_z_integral<T: Real>(mu: T, nu: T, k: T, abs_tol: T) -> Result<QuadratureResult<T>> {
    let damping = DampingProfile::quartic(k / lit(32.0));
    let r = truncation_radius(damping.coefficient, damping.power, abs_tol / lit(10.0));
    let mut res = trapezoid_window(
        |z| Ok(frozen_exponent(z, mu, nu, k).exp()),
        r,
        abs_tol * lit(0.9),
        MAX_TRAPEZOID_NODES,
    )?;
    res.error_estimate = res.error_estimate + abs_tol / lit(10.0);
    res.truncation_radius = r;
    Ok(res)
}

/// Boundary data `f^(eta, tau)` of the beam with `M` and `a` frozen at
/// their values on the boundary (`M = iI`, `a = 1`), after the explicit
/// `t`-integration:
///
/// ```text
/// (2 pi/k)^{1/2} int e^{-i z eta} exp[-i tau (z + z^3/12) - i k z^3/8 - k z^4/32 - (tau+k)^2/(2k)] dz
/// ```
///
/// `tol` is relative to the undamped scale `(2 pi/k)^{1/2} int e^{-k z^4/32}`.
pub fn boundary_hat_frozen<T: Real>(eta: T, tau: T, k: T, tol: T) -> Result<QuadratureResult<T>> {
    check_k(k)?;
    let (mu, nu) = (eta / k, tau / k);
    let scale = quartic_mass(k);
    let mut res = frozen_z_integral(mu, nu, k, tol * scale)?;
    let pre = (lit::<T>(2.0) * T::PI() / k).sqrt() * (-(tau + k).powi(2) / (lit::<T>(2.0) * k)).exp();
    res.value = res.value * pre;
    res.error_estimate = res.error_estimate * pre;
    Ok(res)
}

/// `int e^{-k z^4/32} dz`
fn quartic_mass<T: Real>(k: T) -> T {
    // 2 Gamma(5/4) (32/k)^{1/4}
    lit::<T>(2.0 * 0.906_402_477_055_477) * (lit::<T>(32.0) / k).powf(lit(0.25))
}

fn check_k<T: Real>(k: T) -> Result<()> {
    if k > T::zero() && k.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("k must be positive and finite, got {k}")))
    }
}

/// `-i rho(z, mu, nu)` with the exact beam matrix `M(z)`:
///
/// ```text
/// rho = nu t(z) + mu z + z^3/8 - z^4 M11/32 + (nu + 1 + z^2 M12/4)^2 / (2 M22)
/// ```
pub fn boundary_exponent_full<T: Real>(z: T, mu: T, nu: T) -> Complex<T> {
    let m = beam_matrix(z).m.0;
    let z2 = z * z;
    let tz = z + z2 * z / lit(12.0);
    let q = real(nu + T::one()) + m[0][1] * (z2 / lit(4.0));
    let rho = real(nu * tz + mu * z + z2 * z / lit(8.0)) - m[0][0] * (z2 * z2 / lit(32.0))
        + q * q / (m[1][1] * lit::<T>(2.0));
    -imag_unit::<T>() * rho
}

/// The same exponent with `M = iI`.
pub fn boundary_exponent_frozen<T: Real>(z: T, mu: T, nu: T) -> Complex<T> {
    frozen_exponent(z, mu, nu, T::one()) - real((nu + T::one()).powi(2) / lit(2.0))
}

/// `(2 pi / (-i M22(z)))^{1/2} a(z)`, equal to `(2 pi)^{1/2}` at `z = 0`.
pub fn boundary_prefactor_full<T: Real>(z: T) -> Complex<T> {
    let m22 = beam_matrix(z).m.0[1][1];
    (real(lit::<T>(2.0) * T::PI()) / (-imag_unit::<T>() * m22)).sqrt() * beam_amplitude(z)
}

/// Boundary data with the exact `M(z)` and `a(z)`:
/// `int (2 pi / (-i k M22))^{1/2} a(z) e^{-i k rho} dz`.
///
/// After the `t`-integration the integrand decays like
/// `exp(-k z^4 / (32 (1 + z^2)))`, i.e. only like a Gaussian for `|z| > 1`.
pub fn boundary_hat_full<T: Real>(eta: T, tau: T, k: T, tol: T) -> Result<QuadratureResult<T>> {
    check_k(k)?;
    let (mu, nu) = (eta / k, tau / k);
    let scale = quartic_mass(k) * (lit::<T>(2.0) * T::PI() / k).sqrt();
    let damping =
        DampingProfile::gaussian(k / lit(64.0)).with_envelope((lit::<T>(2.0) * T::PI() / k).sqrt() * lit(4.0));
    let rk = k.sqrt();
    let osc = k * ((mu + nu).abs() + T::one());
    integrate_1d_fallible(
        |z| Ok(boundary_prefactor_full(z) / rk * (boundary_exponent_full(z, mu, nu) * k).exp()),
        &damping,
        osc,
        MAX_PANELS,
        tol * scale,
    )
}

/// The four-variable phase
///
/// ```text
/// (y-z) mu + t nu - nu (z + z^3/12) - z^3/8 + i[z^4/32 + (nu+1)^2/2]
///   + (2|nu|/3)(1 + x - mu^2/nu^2)^{3/2} - |nu|^{2/3}(1 - mu^2/nu^2) T + T^3/3
/// ```
#[allow(clippy::too_many_arguments)]
pub fn phase_full<T: Real>(t: T, x: T, y: T, z: T, mu: T, nu: T, tt: T) -> Result<Complex<T>> {
    if !(nu < T::zero()) {
        return Err(domain(format!("phase_full needs nu < 0, got {nu}")));
    }
    let rad = T::one() + x - (mu / nu).powi(2);
    if rad < T::zero() {
        return Err(domain(format!("radicand 1 + x - mu^2/nu^2 = {rad} is negative")));
    }
    let z3 = z * z * z;
    let re = (y - z) * mu + t * nu - nu * (z + z3 / lit(12.0)) - z3 / lit(8.0)
        + lit::<T>(2.0) * nu.abs() / lit(3.0) * rad.powf(lit(1.5))
        - nu.abs().powf(lit(2.0 / 3.0)) * (T::one() - (mu / nu).powi(2)) * tt
        + tt * tt * tt / lit(3.0);
    let im = z3 * z / lit(32.0) + (nu + T::one()).powi(2) / lit(2.0);
    Ok(Complex::new(re, im))
}

/// `(Phi_s, Phi_T)` of [`phase_full`] in the variables `s = mu + nu`, `T` at
/// fixed `nu`:
///
/// ```text
/// Phi_s = y - z - nu (x + s(2nu - s)/nu^2)^{1/2} (2nu - 2s)/nu^2 - |nu|^{-4/3}(2nu - 2s) T
/// Phi_T = T^2 - |nu|^{-4/3} s (2nu - s)
/// ```
pub fn phase_full_gradient<T: Real>(x: T, y: T, z: T, s: T, nu: T, tt: T) -> Result<(T, T)> {
    if !(nu < T::zero()) {
        return Err(domain(format!("phase_full_gradient needs nu < 0, got {nu}")));
    }
    let nu2 = nu * nu;
    let rad = x + s * (lit::<T>(2.0) * nu - s) / nu2;
    if rad < T::zero() {
        return Err(domain(format!("radicand x + s(2nu-s)/nu^2 = {rad} is negative")));
    }
    let n43 = nu.abs().powf(lit(-4.0 / 3.0));
    let two = lit::<T>(2.0);
    let ps = y - z - nu * rad.sqrt() * (two * nu - two * s) / nu2 - n43 * (two * nu - two * s) * tt;
    let pt = tt * tt - n43 * s * (two * nu - s);
    Ok((ps, pt))
}

/// `Ai'/Ai` at `zeta(0, k mu, k nu)` for possibly complex `mu`, `nu`, using
/// `(-nu)^{2/3}` in place of `|nu|^{2/3}`.
fn boundary_airy_ratio<T: Real>(mu: Complex<T>, nu: Complex<T>, k: T) -> Result<Complex<T>> {
    let zeta0 = boundary_zeta(mu, nu, k, T::zero());
    airy_ratio(zeta0)
}

fn boundary_zeta<T: Real>(mu: Complex<T>, nu: Complex<T>, k: T, x: T) -> Complex<T> {
    let q = mu / nu;
    (-nu * k).powf(lit(2.0 / 3.0)) * cis(-T::PI() / lit(3.0)) * (real(T::one() + x) - q * q)
}

/// `i k^{1/3} T - e^{2 pi i/3} Ai'(zeta_0) / Ai(zeta_0)` with
/// `zeta_0 = zeta(0, k mu, k nu)`.
///
/// Integrating it against `e^{ik[-|nu|^{2/3}(1 - mu^2/nu^2) T + T^3/3]} k^{1/3}`
/// over `T` and dividing by `2 pi W(0)` gives `1 / Ai(zeta_0)`.
pub fn reciprocal_airy_factor<T: Real>(tt: T, mu: T, nu: T, k: T) -> Result<Complex<T>> {
    if !(nu < T::zero()) {
        return Err(domain(format!("reciprocal_airy_factor needs nu < 0, got {nu}")));
    }
    check_k(k)?;
    reciprocal_factor_c(real(tt), real(mu), real(nu), k)
}

fn reciprocal_factor_c<T: Real>(tt: Complex<T>, mu: Complex<T>, nu: Complex<T>, k: T) -> Result<Complex<T>> {
    let ratio = boundary_airy_ratio(mu, nu, k)?;
    Ok(imag_unit::<T>() * tt * k.powf(lit(1.0 / 3.0)) - omega::<T>() * ratio)
}

/// Leading factor of the amplitude
///
/// ```text
/// Z = k^{11/6} / (sqrt 2 (2 pi)^3 W(0)) (i k^{1/3} T - e^{2 pi i/3} Ai'/Ai(zeta(0))) zeta(x)^{-1/4}
/// ```
pub fn amplitude_z<T: Real>(k: T, x: T, mu: T, nu: T, tt: T) -> Result<Complex<T>> {
    if !(nu < T::zero()) {
        return Err(domain(format!("amplitude_z needs nu < 0, got {nu}")));
    }
    if !(x > T::zero()) {
        return Err(domain(format!("amplitude_z needs x > 0, got {x}")));
    }
    check_k(k)?;
    amplitude_z_c(k, x, real(mu), real(nu), real(tt))
}

/// [`amplitude_z`] continued to complex `mu`, `nu`, `T`.
pub(crate) fn amplitude_z_c<T: Real>(k: T, x: T, mu: Complex<T>, nu: Complex<T>, tt: Complex<T>) -> Result<Complex<T>> {
    let two_pi = lit::<T>(2.0) * T::PI();
    let pre = k.powf(lit(11.0 / 6.0)) / (lit::<T>(2.0).sqrt() * two_pi.powi(3));
    let zx = boundary_zeta(mu, nu, k, x);
    Ok(reciprocal_factor_c(tt, mu, nu, k)? * zx.powf(lit(-0.25)) * pre / wronskian_constant::<T>())
}

/// `Ai(zeta(x)) / Ai(zeta(0))` on the exact branch, through logarithms so
/// neither factor overflows.
pub fn airy_quotient<T: Real>(x: T, eta: T, tau: T) -> Result<Complex<T>> {
    let z1 = zeta(x, eta, tau)?;
    let z0 = zeta(T::zero(), eta, tau)?;
    let a1 = airy_ai_scaled(z1.value)?;
    let a0 = airy_ai_scaled(z0.value)?;
    Ok((a1.ln_value() - a0.ln_value()).exp())
}

/// Number of independent `nu` slabs evaluated in parallel by
/// [`exact_solution`]; fixed so the result does not depend on the thread
/// count.
const NU_SLABS: usize = 16;

/// Residual phase rate (per unit `k`) assumed for the initial panel layout
/// of the `sigma` and `nu` integrals.
const OSC_HINT: f64 = 0.25;

/// Reflected wave `w(x, y, t)` from the exact representation with the frozen
/// boundary data, by nested adaptive quadrature in `(nu, mu, z)`.
///
/// The `t`-integration of the boundary data is done in closed form, so
///
/// ```text
/// w = (k/2 pi)^{3/2} int int e^{ik(y mu + t nu) - k(nu+1)^2/2} Q(mu, nu) F(mu, nu) dmu dnu
/// ```
///
/// with `Q` the Airy quotient and `F` the `z`-integral of the boundary data.
/// `tol` is an absolute target for `w` (whose modulus is at most about 1).
pub fn exact_solution<T: Real>(x: T, y: T, t: T, k: T, tol: T) -> Result<QuadratureResult<T>> {
    exact_solution_with(x, y, t, k, tol, |mu, nu, abs_tol| {
        Ok(frozen_z_integral(mu, nu, k, abs_tol)?.value * (-k * (nu + T::one()).powi(2) / lit(2.0)).exp())
    })
}

/// [`exact_solution`] for arbitrary boundary data. `boundary(mu, nu, abs_tol)`
/// returns `(k/2 pi)^{1/2} f^(k mu, k nu)` to the given absolute accuracy;
/// the data must carry the factor `e^{-k(nu+1)^2/2}` (or faster decay in
/// `nu + 1`) and concentrate where `|mu + nu| <~ (20/k)^{1/2}`.
pub fn exact_solution_with<T: Real, B>(x: T, y: T, t: T, k: T, tol: T, boundary: B) -> Result<QuadratureResult<T>>
where
    B: Fn(T, T, T) -> Result<Complex<T>> + Sync,
{
    if !(x > T::zero()) {
        return Err(domain(format!("exact_solution needs x > 0, got {x}")));
    }
    check_k(k)?;
    if !(tol > T::zero()) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let two_pi = lit::<T>(2.0) * T::PI();
    let pre = (k / two_pi).powf(lit(1.5));
    // w = pre * int g(nu) dnu with |g| <~ (2 pi / k)^{1/2} G and
    // |G| <~ 2 pi / k: split the budget over the three levels
    let tol_nu = tol / pre / lit(2.0);
    let nu_width = (two_pi / k).sqrt();
    let tol_mu = tol_nu / (nu_width * lit(4.0));
    let r_nu = truncation_radius(k / lit(2.0), lit(2.0), tol_nu / lit(10.0));
    let ln_tail = (T::one() / (tol * lit(1e-2))).ln().max(T::one());
    let r_mu = (ln_tail / (lit::<T>(2.0) * k)).sqrt() * lit(1.5);
    let tol_z = tol_mu / (r_mu * lit(8.0));
    let osc_hint = lit::<T>(OSC_HINT);

    // with sigma = mu + nu the fast phases e^{ik y mu} e^{ik t nu} become
    // e^{ik y sigma} e^{ik (t - y) nu}, and near the ray most of e^{ik y sigma}
    // is cancelled by the phases of Q and F
    let g = |nu: T| -> Result<Complex<T>> {
        let inner = adaptive(
            |sigma: T| {
                let mu = sigma - nu;
                let q = airy_quotient(x, mu * k, nu * k)?;
                let f = boundary(mu, nu, tol_z)?;
                Ok(q * f * Complex::from_polar(T::one(), k * y * sigma))
            },
            -r_mu,
            r_mu,
            tol_mu * lit(0.9),
            T::zero(),
            k * osc_hint,
            MAX_PANELS,
        )?;
        Ok(inner.value * Complex::from_polar(T::one(), k * (t - y) * nu))
    };

    let lo = -T::one() - r_nu;
    let width = lit::<T>(2.0) * r_nu / T::from_count(NU_SLABS);
    let slabs: Vec<Result<QuadratureResult<T>>> = (0..NU_SLABS)
        .into_par_iter()
        .map(|j| {
            let a = lo + width * T::from_count(j);
            adaptive(
                &g,
                a,
                a + width,
                tol_nu * lit(0.9) / T::from_count(NU_SLABS),
                T::zero(),
                k * ((t - y).abs() + osc_hint),
                MAX_PANELS,
            )
        })
        .collect();

    let mut value = Complex::new(T::zero(), T::zero());
    let mut err = tol_nu / lit(10.0);
    let mut panels = 0;
    let mut failed = false;
    for s in slabs {
        match s {
            Ok(r) => {
                value = value + r.value;
                err = err + r.error_estimate;
                panels += r.panel_count;
            }
            Err(Error::NonConvergence {
                re,
                im,
                error,
                panels: p,
            }) => {
                value = value + Complex::new(lit(re), lit(im));
                err = err + lit(error);
                panels += p;
                failed = true;
            }
            Err(e) => return Err(e),
        }
    }
    value = value * pre;
    err = err * pre;
    if failed {
        return Err(Error::NonConvergence {
            re: value.re.as_f64(),
            im: value.im.as_f64(),
            error: err.as_f64(),
            panels,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate: err,
        truncation_radius: r_nu,
        panel_count: panels,
    })
}
