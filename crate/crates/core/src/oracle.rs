//! Brute-force ground truth for the closed forms: disc averages by
//! quadrature and derivatives by finite differences.
//!
//! Every integrand here is smooth except across one straight kink line
//! (`w′ = 0` or `z′ = 0`). The disc is sliced into chords parallel to that
//! line, so the integrand is smooth along each chord and the kink becomes a
//! breakpoint of the outer integral. The outer variable is written as
//! `x = c + R sin θ`, which removes the square-root endpoint singularity of
//! the chord length, and is integrated by composite Gauss–Legendre with
//! panel doubling. Chords use a fixed high-order rule.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DiamondPoint;
use crate::scalar::Real;

/// Points of the per-panel and per-chord Gauss–Legendre rules.
const GL_ORDER: usize = 12;
/// Panel doublings before giving up.
const MAX_LEVELS: usize = 14;
pub const MIN_REL_TOL: f64 = 1e-12;
pub const MIN_FD_STEP: f64 = 1e-7;
pub const MAX_FD_STEP: f64 = 1e-2;

/// Functions on the plane whose disc averages are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrand {
    /// `|w′|`
    AbsW,
    /// `|z′|`
    AbsZ,
    /// `W = (w′ + |w′|)/√2`
    FhLower,
    /// `M = (w′ - |z′|)/√2 + 1/2`
    FhUpper,
}

impl Integrand {
    pub fn eval<T: Real>(self, w: T, z: T) -> T {
        let s = T::half_diag();
        match self {
            Integrand::AbsW => w.abs(),
            Integrand::AbsZ => z.abs(),
            Integrand::FhLower => (w + w.abs()) * s,
            Integrand::FhUpper => (w - z.abs()) * s + T::lit(0.5),
        }
    }

    fn kink_across_w(self) -> bool {
        matches!(self, Integrand::AbsW | Integrand::FhLower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRequest<T> {
    pub integrand: Integrand,
    pub center: DiamondPoint<T>,
    pub radius: T,
    pub rel_tol: T,
}

impl<T: Real> OracleRequest<T> {
    pub fn new(
        integrand: Integrand,
        center: DiamondPoint<T>,
        radius: T,
        rel_tol: T,
    ) -> Result<Self> {
        if !(radius.is_finite() && radius > T::zero()) {
            return Err(Error::Domain {
                what: "radius",
                value: radius.as_f64(),
            });
        }
        if !(rel_tol >= T::lit(MIN_REL_TOL)) {
            return Err(Error::Domain {
                what: "rel_tol",
                value: rel_tol.as_f64(),
            });
        }
        if !(center.w.is_finite() && center.z.is_finite()) {
            return Err(Error::Argument("center must be finite".into()));
        }
        Ok(Self {
            integrand,
            center,
            radius,
            rel_tol,
        })
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton on `P_n`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// Integral over `[a, b]` with `panels` equal Gauss–Legendre panels.
fn composite<T: Real>(a: T, b: T, panels: usize, f: &mut impl FnMut(T) -> (T, T)) -> (T, T) {
    let rule = gauss_legendre();
    let width = (b - a) / T::from_usize(panels).unwrap();
    let half = width * T::lit(0.5);
    let (mut s, mut s_abs) = (T::zero(), T::zero());
    for k in 0..panels {
        let mid = a + width * (T::from_usize(k).unwrap() + T::lit(0.5));
        for &(x, wt) in rule {
            let (v, va) = f(mid + half * T::lit(x));
            s = s + T::lit(wt) * v;
            s_abs = s_abs + T::lit(wt) * va;
        }
    }
    (s * half, s_abs * half)
}

/// Mean of the integrand over the disc, to relative accuracy `rel_tol`.
pub fn disc_average<T: Real>(req: &OracleRequest<T>) -> Result<T> {
    let OracleRequest {
        integrand,
        center,
        radius,
        rel_tol,
    } = *req;
    // (across, along) = coordinates across and along the kink line.
    let (c_across, c_along) = if integrand.kink_across_w() {
        (center.w, center.z)
    } else {
        (center.z, center.w)
    };
    let f = |across: T, along: T| {
        if integrand.kink_across_w() {
            integrand.eval(across, along)
        } else {
            integrand.eval(along, across)
        }
    };

    let half_pi = T::FRAC_PI_2();
    let mut breaks = vec![-half_pi];
    if c_across.abs() < radius {
        breaks.push((-c_across / radius).asin());
    }
    breaks.push(half_pi);

    // ∫∫ f = ∫ dθ R cos θ ∫_{-R cos θ}^{R cos θ} f(c + R sin θ, c′ + y) dy
    let rule = gauss_legendre();
    let mut slice = |theta: T| {
        let across = c_across + radius * theta.sin();
        let half_chord = radius * theta.cos();
        let (mut s, mut s_abs) = (T::zero(), T::zero());
        for &(y, wt) in rule {
            let v = f(across, c_along + half_chord * T::lit(y));
            s = s + T::lit(wt) * v;
            s_abs = s_abs + T::lit(wt) * v.abs();
        }
        let jac = half_chord * half_chord;
        (s * jac, s_abs * jac)
    };
    let mut integrate = |panels: usize| {
        breaks.windows(2).fold((T::zero(), T::zero()), |acc, ab| {
            let (s, sa) = composite(ab[0], ab[1], panels, &mut slice);
            (acc.0 + s, acc.1 + sa)
        })
    };

    let area = T::PI() * radius * radius;
    let (mut prev, _) = integrate(1);
    for level in 1..=MAX_LEVELS {
        let (cur, cur_abs) = integrate(1 << level);
        let scale = cur.abs().max(cur_abs);
        if (cur - prev).abs() <= rel_tol * T::lit(0.5) * scale {
            return Ok(cur / area);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { levels: MAX_LEVELS })
}

fn check_step<T: Real>(step: T) -> Result<()> {
    if step >= T::lit(MIN_FD_STEP) && step <= T::lit(MAX_FD_STEP) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "step",
            value: step.as_f64(),
        })
    }
}

/// Central first differences `(f_w, f_z)`.
pub fn fd_first_partials<T: Real>(
    f: impl Fn(DiamondPoint<T>) -> Result<T>,
    p: DiamondPoint<T>,
    step: T,
) -> Result<(T, T)> {
    check_step(step)?;
    let two_h = step + step;
    let f_w =
        (f(DiamondPoint::new(p.w + step, p.z))? - f(DiamondPoint::new(p.w - step, p.z))?) / two_h;
    let f_z =
        (f(DiamondPoint::new(p.w, p.z + step))? - f(DiamondPoint::new(p.w, p.z - step))?) / two_h;
    Ok((f_w, f_z))
}

/// Central second differences `(f_ww, f_zz)`.
pub fn fd_second_partials<T: Real>(
    f: impl Fn(DiamondPoint<T>) -> Result<T>,
    p: DiamondPoint<T>,
    step: T,
) -> Result<(T, T)> {
    check_step(step)?;
    let h2 = step * step;
    let two = T::lit(2.0);
    let centre = f(p)?;
    let f_ww = (f(DiamondPoint::new(p.w + step, p.z))? - two * centre
        + f(DiamondPoint::new(p.w - step, p.z))?)
        / h2;
    let f_zz = (f(DiamondPoint::new(p.w, p.z + step))? - two * centre
        + f(DiamondPoint::new(p.w, p.z - step))?)
        / h2;
    Ok((f_ww, f_zz))
}

/// Central third difference of a scalar function.
pub fn fd_third_derivative<T: Real>(f: impl Fn(T) -> T, x: T, step: T) -> T {
    let two = T::lit(2.0);
    (f(x + two * step) - two * f(x + step) + two * f(x - step) - f(x - two * step))
        / (two * step * step * step)
}
