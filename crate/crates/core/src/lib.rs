//! Absolutely continuous copulas obtained by disc-averaging the
//! Fréchet–Hoeffding bounds `W(u,v) = max(u+v-1, 0)` and `M(u,v) = min(u,v)`.
//!
//! Replacing the value of `W` or `M` at each point by its mean over a disc of
//! point-dependent radius `r(w, z)` gives closed forms
//!
//! ```text
//! W̄ = (w + r g(w/r))/√2        M̄ = 1/2 + (w - r g(z/r))/√2
//! ```
//!
//! in the rotated coordinates `w = (u+v-1)/√2`, `z = (v-u)/√2`, with `g` the
//! kernel in [`kernel`]. Whether the result is a copula depends on the radius
//! field; [`validator`] certifies that, [`checker`] verifies the copula axioms
//! on grids, [`oracle`] recomputes every closed form by brute-force
//! quadrature, and [`sampler`] draws pairs by conditional inversion.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar for the common case.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checker;
pub mod cli;
pub mod copulas;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod oracle;
pub mod radius;
pub mod sampler;
pub mod scalar;
pub mod validator;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SquarePointF64 = geometry::SquarePoint<f64>;
pub type DiamondPointF64 = geometry::DiamondPoint<f64>;
pub type KernelJetF64 = kernel::KernelJet<f64>;
pub type RadiusJetF64 = radius::RadiusJet<f64>;
pub type RadiusModelF64 = radius::RadiusModel<f64>;
pub type SupportBandF64 = radius::SupportBand<f64>;
pub type QuadraticCertificateF64 = validator::QuadraticCertificate<f64>;
pub type ValidationReportF64 = validator::ValidationReport<f64>;
pub type CopulaSpecF64 = copulas::CopulaSpec<f64>;
pub type SmoothedEvaluationF64 = copulas::SmoothedEvaluation<f64>;
pub type CopulaCheckReportF64 = checker::CopulaCheckReport<f64>;
pub type SampleBatchF64 = sampler::SampleBatch<f64>;
