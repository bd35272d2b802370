//! Numerical laboratory for a Gaussian beam grazing the boundary `x = 0` of
//! `(1 + x) u_tt - u_xx - u_yy = 0`: Airy functions, the beam itself, the
//! spectral and stationary-phase representations of the reflected wave, and
//! its closed form on the central ray.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod error;
pub mod finite_diff;
pub mod grazing;
pub mod ode;
pub mod quadrature;
pub mod ray_beam;
pub mod scalar;
pub mod spectral;
pub mod stationary;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type AiryValue64 = airy::AiryValue<f64>;
pub type ScaledAiry64 = airy::ScaledAiry<f64>;
pub type PhasePoint64 = ray_beam::PhasePoint<f64>;
pub type Mat2_64 = ray_beam::Mat2<f64>;
pub type BeamFrame64 = ray_beam::BeamFrame<f64>;
pub type ZetaValue64 = spectral::ZetaValue<f64>;
pub type QuadratureResult64 = quadrature::QuadratureResult<f64>;
pub type StationaryData64 = stationary::StationaryData<f64>;
pub type SeriesCoefficients64 = stationary::SeriesCoefficients<f64>;
pub type GrazingResult64 = grazing::GrazingResult<f64>;
