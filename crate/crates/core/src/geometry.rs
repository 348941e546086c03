//! Coordinate change between the unit square `(u, v)` and the rotated
//! diamond `(w, z)`:
//!
//! ```text
//! w = (v + u - 1)/√2      u = (w - z)/√2 + 1/2
//! z = (v - u)/√2          v = (w + z)/√2 + 1/2
//! ```
//!
//! The square maps onto `U = {|w| + |z| <= 1/√2}`. The transform is a
//! rotation plus a translation, so distances are preserved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Slack used for domain membership of round-tripped points.
pub const DOMAIN_TOL: f64 = 1e-12;

/// A point of the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquarePoint<T> {
    pub u: T,
    pub v: T,
}

impl<T: Real> SquarePoint<T> {
    /// Builds a point, clamping overshoot up to `DOMAIN_TOL` back into `[0, 1]`.
    pub fn new(u: T, v: T) -> Result<Self> {
        Ok(Self {
            u: clamp_probability(u, "u")?,
            v: clamp_probability(v, "v")?,
        })
    }

    pub fn to_diamond(self) -> DiamondPoint<T> {
        square_to_diamond(self)
    }
}

fn clamp_probability<T: Real>(x: T, what: &'static str) -> Result<T> {
    let tol = T::lit(DOMAIN_TOL);
    if !x.is_finite() || x < -tol || x > T::one() + tol {
        return Err(Error::Domain {
            what,
            value: x.as_f64(),
        });
    }
    Ok(x.max(T::zero()).min(T::one()))
}

/// A point in rotated coordinates. Unconstrained by itself; membership in
/// the diamond is checked where it matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondPoint<T> {
    pub w: T,
    pub z: T,
}

impl<T: Real> DiamondPoint<T> {
    pub fn new(w: T, z: T) -> Self {
        Self { w, z }
    }

    /// Signed distance (in the `|w| + |z|` norm) to the boundary of the diamond.
    #[inline]
    pub fn margin(self) -> T {
        T::half_diag() - self.w.abs() - self.z.abs()
    }

    pub fn to_square(self) -> Result<SquarePoint<T>> {
        diamond_to_square(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationTag {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainLocation<T> {
    pub tag: LocationTag,
    pub margin: T,
}

pub fn square_to_diamond<T: Real>(p: SquarePoint<T>) -> DiamondPoint<T> {
    let s = T::half_diag();
    DiamondPoint {
        w: (p.v + p.u - T::one()) * s,
        z: (p.v - p.u) * s,
    }
}

/// Inverse of [`square_to_diamond`]. Points further than `DOMAIN_TOL` outside
/// the diamond are rejected.
pub fn diamond_to_square<T: Real>(p: DiamondPoint<T>) -> Result<SquarePoint<T>> {
    if !(p.w.is_finite() && p.z.is_finite()) || p.margin() < -T::lit(DOMAIN_TOL) {
        return Err(Error::OutsideDiamond {
            w: p.w.as_f64(),
            z: p.z.as_f64(),
        });
    }
    let s = T::half_diag();
    let half = T::lit(0.5);
    SquarePoint::new((p.w - p.z) * s + half, (p.w + p.z) * s + half)
}

/// Classifies `p` as interior, boundary or outside with slack `tol`.
pub fn classify<T: Real>(p: DiamondPoint<T>, tol: T) -> DomainLocation<T> {
    let margin = p.margin();
    let tag = if margin > tol {
        LocationTag::Interior
    } else if margin.abs() <= tol {
        LocationTag::Boundary
    } else {
        LocationTag::Outside
    };
    DomainLocation { tag, margin }
}
