//! The averaging kernel.
//!
//! `g(ρ)` is the mean of `|ρ + ζ|` over the unit disc, i.e. the disc average
//! of a distance-to-kink function measured in units of the disc radius:
//!
//! ```text
//! g(ρ) = 2(ρ asin ρ + √(1-ρ²)(2+ρ²)/3)/π    |ρ| < 1
//!      = |ρ|                                |ρ| >= 1
//! ```
//!
//! `g` is C² and convex; `g‴` is unbounded at `ρ = ±1`, which caps the
//! regularity of every smoothed copula built from it.

mod normal;

pub use normal::{erfc, std_normal_cdf, std_normal_pdf, std_normal_quantile};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// `g`, `g′`, `g″` and `h = g - ρ g′` at a band coordinate `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelJet<T> {
    pub rho: T,
    pub g: T,
    pub g1: T,
    pub g2: T,
    pub h: T,
}

pub fn kernel_jet<T: Real>(rho: T) -> KernelJet<T> {
    if rho.abs() >= T::one() {
        return KernelJet {
            rho,
            g: rho.abs(),
            g1: rho.signum(),
            g2: T::zero(),
            h: T::zero(),
        };
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let inv_pi = T::FRAC_1_PI();
    let s = ((T::one() - rho) * (T::one() + rho)).sqrt();
    let asin = rho.asin();
    KernelJet {
        rho,
        g: two * (rho * asin + s * (two + rho * rho) / three) * inv_pi,
        g1: two * (asin + rho * s) * inv_pi,
        g2: T::lit(4.0) * s * inv_pi,
        h: T::lit(4.0) * s * s * s * inv_pi / three,
    }
}

/// `g(ρ)` alone.
#[inline]
pub fn g<T: Real>(rho: T) -> T {
    kernel_jet(rho).g
}
