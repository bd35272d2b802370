//! Complex Airy function `Ai`, its rotation `A(z) = Ai(omega z)`, the
//! Wronskian of the pair, and the large-argument expansion.
//!
//! Evaluation strategy by region (`R_c` is the crossover radius, default 7):
//!
//! * `|z| <= 2`: Maclaurin series (Taylor expansion of `w'' = z w` about 0).
//! * `2 < |z| < R_c`: Taylor stepping of the Airy equation along the ray
//!   through `z`. Where `Ai` is recessive at infinity (`|arg z| <= pi/3`)
//!   the march starts from the asymptotic value at `R_c` and runs inward;
//!   elsewhere it starts from the series at `|z| = 2` and runs outward. In
//!   both cases `Ai` grows along the direction of travel, which keeps the
//!   march stable.
//! * `|z| >= R_c`, `|arg z| <= 2 pi / 3`: full asymptotic series, truncated
//!   at its smallest term.
//! * `|z| >= R_c`, `|arg z| > 2 pi / 3`: connection formula
//!   `Ai(z) = -omega Ai(omega z) - omega^2 Ai(omega^2 z)`, both terms by the
//!   asymptotic series.
//!
//! [`airy_ai_scaled`] returns `Ai = value * exp(log_scale)` and has no radius
//! limit, so quotients such as `Ai(z1)/Ai(z0)` can be formed for arguments
//! whose individual values overflow.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::scalar::{lit, omega, Real};

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`
pub const AI0: f64 = 0.355_028_053_887_817_239_26;
/// `Ai'(0) = -3^{-1/3} / Gamma(1/3)`
pub const AIP0: f64 = -0.258_819_403_792_806_798_41;

/// Largest `|z|` accepted by the unscaled evaluators.
pub const MAX_RADIUS: f64 = 64.0;

const SERIES_RADIUS: f64 = 2.0;
const STEP: f64 = 0.5;
const MAX_TERMS: usize = 400;

/// `Ai` (or `A`) and its derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue<T: Real> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
}

/// `Ai(z) = value * exp(log_scale)`, `Ai'(z) = derivative * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAiry<T: Real> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
    pub log_scale: Complex<T>,
}

impl<T: Real> ScaledAiry<T> {
    /// `Ai'(z) / Ai(z)`
    pub fn log_derivative(&self) -> Complex<T> {
        self.derivative / self.value
    }

    /// `ln Ai(z)` on the branch `ln(value) + log_scale`.
    pub fn ln_value(&self) -> Complex<T> {
        self.value.ln() + self.log_scale
    }

    /// `ln |Ai(z)|`
    pub fn ln_abs(&self) -> T {
        self.value.norm().ln() + self.log_scale.re
    }

    pub fn unscaled(&self) -> AiryValue<T> {
        let s = self.log_scale.exp();
        AiryValue {
            value: self.value * s,
            derivative: self.derivative * s,
        }
    }
}

/// Tunable parameters of the evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryConfig<T: Real> {
    /// Radius above which the asymptotic series is used.
    pub crossover: T,
    /// `delta` in the sector `|arg z| < pi - delta` accepted by
    /// [`airy_asymptotic`].
    pub sector_margin: T,
    /// `|Ai(z)|` below this makes [`airy_ratio`] refuse the point.
    pub zero_threshold: T,
}

impl<T: Real> Default for AiryConfig<T> {
    fn default() -> Self {
        Self {
            crossover: lit(7.0),
            sector_margin: lit(0.1),
            zero_threshold: lit(1e-12),
        }
    }
}

impl<T: Real> AiryConfig<T> {
    fn validate(&self) -> Result<()> {
        if !(self.crossover > lit(SERIES_RADIUS)) {
            return Err(domain(format!(
                "crossover radius {} must exceed the series radius {SERIES_RADIUS}",
                self.crossover
            )));
        }
        Ok(())
    }
}

fn check_finite<T: Real>(z: Complex<T>) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("Airy argument must be finite, got {z}")))
    }
}

/// Taylor step of `w'' = z w` from `z0` by `h`: returns `(w, w')` at `z0 + h`.
fn taylor_step<T: Real>(z0: Complex<T>, w: Complex<T>, dw: Complex<T>, h: Complex<T>) -> (Complex<T>, Complex<T>) {
    // a_{n+2} (n+2)(n+1) = z0 a_n + a_{n-1}; coefficients carry h^n already
    let zero = Complex::new(T::zero(), T::zero());
    let mut am1 = zero; // a_{n-1} h^{n-1}
    let mut a0 = w; // a_n h^n
    let mut a1 = dw * h; // a_{n+1} h^{n+1}
    let mut val = a0 + a1;
    let mut der = dw; // sum of n a_n h^{n-1}
    let h2 = h * h;
    let eps = T::epsilon();
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nn = T::from_count(n);
        let a2 = (a0 * z0 * h2 + am1 * h2 * h) / ((nn + lit(2.0)) * (nn + lit(1.0)));
        val = val + a2;
        der = der + a2 * (nn + lit(2.0)) / h;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        let size = a2.norm() * (T::one() + nn);
        if size <= eps * (val.norm() + der.norm() * h.norm()) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

fn maclaurin<T: Real>(z: Complex<T>) -> AiryValue<T> {
    let zero = Complex::new(T::zero(), T::zero());
    if z == zero {
        return AiryValue {
            value: Complex::new(lit(AI0), T::zero()),
            derivative: Complex::new(lit(AIP0), T::zero()),
        };
    }
    let (value, derivative) = taylor_step(
        zero,
        Complex::new(lit(AI0), T::zero()),
        Complex::new(lit(AIP0), T::zero()),
        z,
    );
    AiryValue { value, derivative }
}

fn march<T: Real>(
    start: Complex<T>,
    mut w: Complex<T>,
    mut dw: Complex<T>,
    end: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let span = end - start;
    let steps = (span.norm() / lit(STEP)).ceil().to_usize().unwrap_or(1).max(1);
    let h = span / T::from_count(steps);
    let mut z0 = start;
    for _ in 0..steps {
        let (nw, ndw) = taylor_step(z0, w, dw, h);
        w = nw;
        dw = ndw;
        z0 = z0 + h;
    }
    (w, dw)
}

/// `u_k` and `v_k` coefficients of the large-argument expansion.
fn asymptotic_coefficients<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n + 1);
    let mut u = T::one();
    out.push((T::one(), T::one()));
    for k in 1..=n {
        let kk = T::from_count(k);
        let six_k = lit::<T>(6.0) * kk;
        u = u * (six_k - lit(5.0)) * (six_k - lit(3.0)) * (six_k - lit(1.0))
            / ((lit::<T>(2.0) * kk - T::one()) * lit(216.0) * kk);
        let v = -(six_k + T::one()) / (six_k - T::one()) * u;
        out.push((u, v));
    }
    out
}

const ASYMPTOTIC_TERMS: usize = 60;

/// Sums `sum (-1)^k u_k / zeta^k` and the `v_k` analogue, truncated at the
/// smallest term. `limit` caps the number of correction terms.
fn asymptotic_sums<T: Real>(zeta: Complex<T>, limit: usize) -> (Complex<T>, Complex<T>) {
    let coeffs = asymptotic_coefficients::<T>(limit.min(ASYMPTOTIC_TERMS));
    let one = Complex::new(T::one(), T::zero());
    let mut su = one;
    let mut sv = one;
    let mut p = one;
    let mut prev = T::infinity();
    let eps = T::epsilon();
    for &(u, v) in coeffs.iter().skip(1) {
        p = -p / zeta;
        let tu = p * u;
        let tv = p * v;
        let size = tu.norm().max(tv.norm());
        if size > prev {
            break;
        }
        su = su + tu;
        sv = sv + tv;
        prev = size;
        if size < eps * lit(0.1) {
            break;
        }
    }
    (su, sv)
}

/// Scaled asymptotic values; valid for `|arg z| < pi`.
fn asymptotic_scaled<T: Real>(z: Complex<T>, limit: usize) -> ScaledAiry<T> {
    let zeta = z.powf(lit(1.5)) * lit::<T>(2.0 / 3.0);
    let (su, sv) = asymptotic_sums(zeta, limit);
    let q = z.powf(lit(0.25));
    let pref = T::one() / (lit::<T>(2.0) * T::PI().sqrt());
    ScaledAiry {
        value: su * pref / q,
        derivative: -(sv * q * pref),
        log_scale: -zeta,
    }
}

fn scaled_impl<T: Real>(z: Complex<T>, cfg: &AiryConfig<T>) -> Result<ScaledAiry<T>> {
    check_finite(z)?;
    cfg.validate()?;
    let r = z.norm();
    let theta = z.arg();
    let third = T::PI() / lit(3.0);
    let plain = |v: AiryValue<T>| ScaledAiry {
        value: v.value,
        derivative: v.derivative,
        log_scale: Complex::new(T::zero(), T::zero()),
    };
    if r <= lit(SERIES_RADIUS) {
        return Ok(plain(maclaurin(z)));
    }
    let dir = z / r;
    if r < cfg.crossover {
        if theta.abs() <= third {
            let start = dir * cfg.crossover;
            let a = asymptotic_scaled(start, ASYMPTOTIC_TERMS).unscaled();
            let (w, dw) = march(start, a.value, a.derivative, z);
            return Ok(plain(AiryValue {
                value: w,
                derivative: dw,
            }));
        }
        let start = dir * lit::<T>(SERIES_RADIUS);
        let a = maclaurin(start);
        let (w, dw) = march(start, a.value, a.derivative, z);
        return Ok(plain(AiryValue {
            value: w,
            derivative: dw,
        }));
    }
    if theta.abs() <= lit::<T>(2.0) * third {
        return Ok(asymptotic_scaled(z, ASYMPTOTIC_TERMS));
    }
    let w = omega::<T>();
    let w2 = w * w;
    let a1 = asymptotic_scaled(w * z, ASYMPTOTIC_TERMS);
    let a2 = asymptotic_scaled(w2 * z, ASYMPTOTIC_TERMS);
    let (dom, sub, c_dom, c_sub, d_dom, d_sub) = if a1.log_scale.re >= a2.log_scale.re {
        (a1, a2, -w, -w2, -w2, -w)
    } else {
        (a2, a1, -w2, -w, -w, -w2)
    };
    let rel = (sub.log_scale - dom.log_scale).exp();
    Ok(ScaledAiry {
        value: c_dom * dom.value + c_sub * sub.value * rel,
        derivative: d_dom * dom.derivative + d_sub * sub.derivative * rel,
        log_scale: dom.log_scale,
    })
}

/// `Ai(z)` and `Ai'(z)` in scaled form. No radius limit.
pub fn airy_ai_scaled<T: Real>(z: Complex<T>) -> Result<ScaledAiry<T>> {
    scaled_impl(z, &AiryConfig::default())
}

/// [`airy_ai_scaled`] with explicit parameters.
pub fn airy_ai_scaled_with<T: Real>(z: Complex<T>, cfg: &AiryConfig<T>) -> Result<ScaledAiry<T>> {
    scaled_impl(z, cfg)
}

/// `Ai(z)` and `Ai'(z)` for `|z| <= MAX_RADIUS`.
///
/// Relative accuracy is about `1e-13` for `|z| <= 10` away from the zeros on
/// the negative axis, and no worse than `1e-10` elsewhere in the disk.
pub fn airy_ai<T: Real>(z: Complex<T>) -> Result<AiryValue<T>> {
    airy_ai_with(z, &AiryConfig::default())
}

/// [`airy_ai`] with explicit parameters.
pub fn airy_ai_with<T: Real>(z: Complex<T>, cfg: &AiryConfig<T>) -> Result<AiryValue<T>> {
    check_finite(z)?;
    if z.norm() > lit(MAX_RADIUS) {
        return Err(domain(format!(
            "|z| = {} exceeds the Airy evaluation radius {MAX_RADIUS}",
            z.norm()
        )));
    }
    Ok(scaled_impl(z, cfg)?.unscaled())
}

/// `A(z) = Ai(omega z)` and `A'(z) = omega Ai'(omega z)`.
pub fn airy_rotated<T: Real>(z: Complex<T>) -> Result<AiryValue<T>> {
    let w = omega::<T>();
    let a = airy_ai(w * z)?;
    Ok(AiryValue {
        value: a.value,
        derivative: w * a.derivative,
    })
}

/// `A(z) Ai'(z) - A'(z) Ai(z)`.
///
/// For `pi/3 < arg z <= pi` both `Ai(z)` and `A(z)` grow exponentially and the
/// two products cancel to a small constant. There the connection formula
/// `A = -omega^2 Ai - omega B`, `B(z) = Ai(omega^2 z)`, is substituted,
/// which reduces the expression exactly to `-omega (B Ai' - B' Ai)` with a
/// recessive `B`.
pub fn wronskian<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let ai = airy_ai(z)?;
    if z.arg() > T::PI() / lit(3.0) {
        let w = omega::<T>();
        let b = airy_ai(w * w * z)?;
        let db = w * w * b.derivative;
        return Ok(-w * (b.value * ai.derivative - db * ai.value));
    }
    let a = airy_rotated(z)?;
    Ok(a.value * ai.derivative - a.derivative * ai.value)
}

/// `A(z) Ai'(z) - A'(z) Ai(z)` formed directly from the two products, with
/// no reformulation. Loses accuracy where both factors are large.
pub fn wronskian_direct<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let ai = airy_ai(z)?;
    let a = airy_rotated(z)?;
    Ok(a.value * ai.derivative - a.derivative * ai.value)
}

/// The closed form `W(0) = (omega - 1) / (2 pi sqrt 3)` of the Wronskian.
pub fn wronskian_constant<T: Real>() -> Complex<T> {
    (omega::<T>() - T::one()) / (lit::<T>(2.0) * T::PI() * lit::<T>(3.0).sqrt())
}

/// Large-argument expansion of `Ai` keeping `order` correction terms
/// (`order = 0` is the leading term), principal branches throughout.
pub fn airy_asymptotic<T: Real>(z: Complex<T>, order: usize) -> Result<Complex<T>> {
    airy_asymptotic_with(z, order, &AiryConfig::default())
}

/// [`airy_asymptotic`] with an explicit sector margin.
pub fn airy_asymptotic_with<T: Real>(z: Complex<T>, order: usize, cfg: &AiryConfig<T>) -> Result<Complex<T>> {
    check_finite(z)?;
    if z.norm() < lit(SERIES_RADIUS) {
        return Err(domain(format!("asymptotic expansion needs |z| >= 2, got {}", z.norm())));
    }
    if z.arg().abs() >= T::PI() - cfg.sector_margin {
        return Err(domain(format!(
            "arg z = {} lies outside the sector |arg z| < pi - {}",
            z.arg(),
            cfg.sector_margin
        )));
    }
    let zeta = z.powf(lit(1.5)) * lit::<T>(2.0 / 3.0);
    let coeffs = asymptotic_coefficients::<T>(order);
    let one = Complex::new(T::one(), T::zero());
    let mut sum = one;
    let mut p = one;
    for &(u, _) in coeffs.iter().skip(1) {
        p = -p / zeta;
        sum = sum + p * u;
    }
    let pref = T::one() / (lit::<T>(2.0) * T::PI().sqrt());
    Ok(sum * (-zeta).exp() * pref / z.powf(lit(0.25)))
}

/// `Ai'(z) / Ai(z)`.
///
/// Above the crossover radius, inside `|arg z| <= 2 pi / 3`, the
/// differentiated expansion `-z^{1/2} S_v / S_u` is used; no zero of `Ai`
/// lies there. Elsewhere the ratio of the evaluated values is returned,
/// unless `|Ai(z)|` falls below the configured zero threshold.
pub fn airy_ratio<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    airy_ratio_with(z, &AiryConfig::default())
}

/// [`airy_ratio`] with explicit parameters.
pub fn airy_ratio_with<T: Real>(z: Complex<T>, cfg: &AiryConfig<T>) -> Result<Complex<T>> {
    check_finite(z)?;
    cfg.validate()?;
    if z.norm() >= cfg.crossover && z.arg().abs() <= lit::<T>(2.0) * T::PI() / lit(3.0) {
        let zeta = z.powf(lit(1.5)) * lit::<T>(2.0 / 3.0);
        let (su, sv) = asymptotic_sums(zeta, ASYMPTOTIC_TERMS);
        return Ok(-z.sqrt() * sv / su);
    }
    let s = scaled_impl(z, cfg)?;
    if s.ln_abs() < cfg.zero_threshold.ln() {
        return Err(Error::Degenerate(format!(
            "|Ai(z)| = {:e} at z = {z} is below the zero threshold {:e}",
            s.ln_abs().exp(),
            cfg.zero_threshold
        )));
    }
    Ok(s.log_derivative())
}
