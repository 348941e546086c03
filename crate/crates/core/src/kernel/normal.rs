//! Standard normal pdf, cdf and quantile.
//!
//! The cdf goes through `erfc`: a positive-term series for moderate
//! arguments and a Lentz continued fraction in the tails, which keeps the
//! lower tail accurate in relative terms. The quantile starts from Acklam's
//! rational approximation and takes one Halley step against the cdf.

use crate::error::{Error, Result};
use crate::scalar::Real;

const SERIES_LIMIT: f64 = 2.5;
const MAX_TERMS: usize = 500;

/// Standard normal density.
pub fn std_normal_pdf<T: Real>(x: T) -> T {
    let inv_sqrt_2pi = T::FRAC_2_SQRT_PI() * T::FRAC_1_SQRT_2() * T::lit(0.5);
    inv_sqrt_2pi * (-x * x * T::lit(0.5)).exp()
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    let limit = T::lit(SERIES_LIMIT);
    if x.abs() < limit {
        T::one() - erf_series(x)
    } else if x > T::zero() {
        erfc_continued_fraction(x)
    } else {
        T::lit(2.0) - erfc_continued_fraction(-x)
    }
}

// erf(x) = 2/√π · exp(-x²) · Σ (2x²)^n x / (2n+1)!!
fn erf_series<T: Real>(x: T) -> T {
    let two_x2 = T::lit(2.0) * x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_TERMS {
        term = term * two_x2 / T::from_usize(2 * n + 1).unwrap();
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * (-x * x).exp() * sum
}

// erfc(x) = exp(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for k in 1..MAX_TERMS {
        let a = T::from_usize(k).unwrap() * T::lit(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    let inv_sqrt_pi = T::FRAC_2_SQRT_PI() * T::lit(0.5);
    (-x * x).exp() * inv_sqrt_pi / f
}

/// Standard normal cumulative distribution function Φ.
pub fn std_normal_cdf<T: Real>(x: T) -> T {
    T::lit(0.5) * erfc(-x * T::FRAC_1_SQRT_2())
}

/// Standard normal quantile Φ⁻¹. `p` must lie strictly inside `(0, 1)`.
pub fn std_normal_quantile<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain {
            what: "probability",
            value: p.as_f64(),
        });
    }
    // 1 - p is exact for p >= 1/2, so the upper half reflects losslessly.
    if p > T::lit(0.5) {
        Ok(-lower_quantile(T::one() - p))
    } else {
        Ok(lower_quantile(p))
    }
}

fn lower_quantile<T: Real>(q: T) -> T {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let lit = T::lit;
    let x = if q < lit(P_LOW) {
        let t = (lit(-2.0) * q.ln()).sqrt();
        (((((lit(C[0]) * t + lit(C[1])) * t + lit(C[2])) * t + lit(C[3])) * t + lit(C[4])) * t
            + lit(C[5]))
            / ((((lit(D[0]) * t + lit(D[1])) * t + lit(D[2])) * t + lit(D[3])) * t + T::one())
    } else {
        let s = q - lit(0.5);
        let r = s * s;
        (((((lit(A[0]) * r + lit(A[1])) * r + lit(A[2])) * r + lit(A[3])) * r + lit(A[4])) * r
            + lit(A[5]))
            * s
            / (((((lit(B[0]) * r + lit(B[1])) * r + lit(B[2])) * r + lit(B[3])) * r + lit(B[4]))
                * r
                + T::one())
    };

    // Halley step on Φ(x) - q.
    let e = std_normal_cdf(x) - q;
    let u = e / std_normal_pdf(x);
    x - u / (T::one() + x * u * lit(0.5))
}
