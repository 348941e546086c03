//! The Fréchet–Hoeffding bounds and their disc-averaged versions.
//!
//! With `F = r g(w/r)` and `G = r g(z/r)` (the disc averages of `|w|` and
//! `|z|`):
//!
//! ```text
//! W̄ = (w + F)/√2        M̄ = 1/2 + (w - G)/√2
//! ```
//!
//! Partials go through `∂u = (∂w - ∂z)/√2`, `∂v = (∂w + ∂z)/√2` and the
//! density is `(C_ww - C_zz)/2`. Outside the band (`|ρ| >= 1`) the smoothed
//! copula coincides with the bound and the density is exactly zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{diamond_to_square, DiamondPoint, SquarePoint};
use crate::kernel::kernel_jet;
use crate::radius::{RadiusJet, RadiusModel};
use crate::scalar::Real;
use crate::validator::{CrossTerm, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `W(u,v) = max(u+v-1, 0)`
    FhLower,
    /// `M(u,v) = min(u,v)`
    FhUpper,
    /// Disc average of `W`.
    SmoothedLower,
    /// Disc average of `M`.
    SmoothedUpper,
}

impl Family {
    pub fn is_smoothed(self) -> bool {
        matches!(self, Family::SmoothedLower | Family::SmoothedUpper)
    }

    /// The band orientation used by the smoothed families.
    pub fn orientation(self) -> Orientation {
        match self {
            Family::FhLower | Family::SmoothedLower => Orientation::LowerW,
            Family::FhUpper | Family::SmoothedUpper => Orientation::UpperM,
        }
    }
}

/// A copula to evaluate. Smoothed families carry a radius model, the bounds
/// carry none.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct CopulaSpec<T: Real> {
    family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<RadiusModel<T>>,
}

impl<T: Real> CopulaSpec<T> {
    pub fn new(family: Family, model: Option<RadiusModel<T>>) -> Result<Self> {
        match (family.is_smoothed(), model.is_some()) {
            (true, false) => Err(Error::Argument(format!("{family:?} needs a radius model"))),
            (false, true) => Err(Error::Argument(format!("{family:?} takes no radius model"))),
            _ => Ok(Self { family, model }),
        }
    }

    pub fn fh_lower() -> Self {
        Self {
            family: Family::FhLower,
            model: None,
        }
    }

    pub fn fh_upper() -> Self {
        Self {
            family: Family::FhUpper,
            model: None,
        }
    }

    pub fn smoothed_lower(model: RadiusModel<T>) -> Self {
        Self {
            family: Family::SmoothedLower,
            model: Some(model),
        }
    }

    pub fn smoothed_upper(model: RadiusModel<T>) -> Self {
        Self {
            family: Family::SmoothedUpper,
            model: Some(model),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn model(&self) -> Option<&RadiusModel<T>> {
        self.model.as_ref()
    }

    fn smoothed_model(&self) -> Result<&RadiusModel<T>> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Argument(format!("{:?} is not a smoothed family", self.family)))
    }
}

/// Everything the closed forms give at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothedEvaluation<T> {
    pub value: T,
    pub du: T,
    pub dv: T,
    pub density: T,
    /// `F` (lower) or `G` (upper) at the point.
    pub band_average: T,
    pub rho: T,
}

/// `F` or `G` with its first and second partials in `(w, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandAverage<T> {
    pub value: T,
    pub d_w: T,
    pub d_z: T,
    pub d_ww: T,
    pub d_zz: T,
    pub rho: T,
}

/// The bound underlying `family`: `W` for the lower families, `M` for the
/// upper ones.
pub fn fh_value<T: Real>(family: Family, p: SquarePoint<T>) -> T {
    match family.orientation() {
        Orientation::LowerW => (p.u + p.v - T::one()).max(T::zero()),
        Orientation::UpperM => p.u.min(p.v),
    }
}

/// Disc average of the distance to the kink line, `F` for `LowerW` and `G`
/// for `UpperM`, from the closed form `r g(ρ)`.
pub fn band_average<T: Real>(
    jet: RadiusJet<T>,
    p: DiamondPoint<T>,
    o: Orientation,
    cross: CrossTerm,
) -> BandAverage<T> {
    // Work in (along, across) coordinates; "across" is the band variable.
    let j = o.across_band(jet);
    let across = match o {
        Orientation::UpperM => p.z,
        Orientation::LowerW => p.w,
    };
    let rho = across / j.r;
    let k = kernel_jet(rho);
    let value = if rho.abs() >= T::one() {
        across.abs()
    } else {
        j.r * k.g
    };
    let d_along = k.h * j.r_w;
    let d_across = k.h * j.r_z + k.g1;
    let d_along2 = k.g2 * rho * rho * j.r_w * j.r_w / j.r + k.h * j.r_ww;
    let d_across2 = match cross {
        CrossTerm::ChainRule => {
            let t = T::one() - rho * j.r_z;
            k.g2 * t * t / j.r + k.h * j.r_zz
        }
        CrossTerm::Transcribed => {
            k.g2 * rho * j.r_z * (rho * j.r_z - T::one()) / j.r + k.h * j.r_zz + k.g2 / j.r
        }
    };
    let (d_w, d_z, d_ww, d_zz) = match o {
        Orientation::UpperM => (d_along, d_across, d_along2, d_across2),
        Orientation::LowerW => (d_across, d_along, d_across2, d_along2),
    };
    BandAverage {
        value,
        d_w,
        d_z,
        d_ww,
        d_zz,
        rho,
    }
}

/// Full evaluation of a smoothed family at a square point.
pub fn evaluate<T: Real>(spec: &CopulaSpec<T>, p: SquarePoint<T>) -> Result<SmoothedEvaluation<T>> {
    evaluate_with(spec, p, CrossTerm::ChainRule)
}

/// As [`evaluate`], choosing the cross-term of the second `z`-derivative.
/// Only the density depends on it.
pub fn evaluate_with<T: Real>(
    spec: &CopulaSpec<T>,
    p: SquarePoint<T>,
    cross: CrossTerm,
) -> Result<SmoothedEvaluation<T>> {
    let model = spec.smoothed_model()?;
    let o = spec.family.orientation();
    let d = p.to_diamond();
    let s = T::half_diag();
    let fh = fh_value(spec.family, p);

    let jet = match model.radius_jet(d) {
        Ok(jet) => jet,
        // The Gaussian band closes up at the two far corners: r -> 0 there,
        // so the band has collapsed onto the kink and the bound is exact.
        Err(Error::RadiusBracket { .. }) => return Ok(collapsed(d, o, fh)),
        Err(e) => return Err(e),
    };
    let b = band_average(jet, d, o, cross);

    // C = c0 + (w ± B)/√2 with sign -1 for M̄, +1 for W̄.
    let (c0, sign) = match o {
        Orientation::UpperM => (T::lit(0.5), -T::one()),
        Orientation::LowerW => (T::zero(), T::one()),
    };
    let value = if b.rho.abs() >= T::one() {
        fh
    } else {
        c0 + (d.w + sign * b.value) * s
    };
    // du = (C_w - C_z)/√2, dv = (C_w + C_z)/√2 with the 1/√2 factors folded.
    let half = T::lit(0.5);
    Ok(SmoothedEvaluation {
        value,
        du: (T::one() + sign * (b.d_w - b.d_z)) * half,
        dv: (T::one() + sign * (b.d_w + b.d_z)) * half,
        density: sign * (b.d_ww - b.d_zz) * s * half,
        band_average: b.value,
        rho: b.rho,
    })
}

fn collapsed<T: Real>(d: DiamondPoint<T>, o: Orientation, fh: T) -> SmoothedEvaluation<T> {
    let half = T::lit(0.5);
    let sgn = |x: T| {
        if x > T::zero() {
            T::one()
        } else if x < T::zero() {
            -T::one()
        } else {
            T::zero()
        }
    };
    let (across, du, dv) = match o {
        Orientation::UpperM => {
            let s = sgn(d.z);
            (d.z, (T::one() + s) * half, (T::one() - s) * half)
        }
        Orientation::LowerW => {
            let s = sgn(d.w);
            (d.w, (T::one() + s) * half, (T::one() + s) * half)
        }
    };
    SmoothedEvaluation {
        value: fh,
        du,
        dv,
        density: T::zero(),
        band_average: across.abs(),
        rho: if across < T::zero() {
            T::neg_infinity()
        } else {
            T::infinity()
        },
    }
}

pub fn smoothed_value<T: Real>(spec: &CopulaSpec<T>, p: SquarePoint<T>) -> Result<T> {
    Ok(evaluate(spec, p)?.value)
}

/// `(∂C/∂u, ∂C/∂v)`.
pub fn smoothed_partials<T: Real>(spec: &CopulaSpec<T>, p: SquarePoint<T>) -> Result<(T, T)> {
    let e = evaluate(spec, p)?;
    Ok((e.du, e.dv))
}

pub fn smoothed_density<T: Real>(spec: &CopulaSpec<T>, p: SquarePoint<T>) -> Result<T> {
    Ok(evaluate(spec, p)?.density)
}

/// Value of any family.
pub fn copula_value<T: Real>(spec: &CopulaSpec<T>, p: SquarePoint<T>) -> Result<T> {
    if spec.family.is_smoothed() {
        smoothed_value(spec, p)
    } else {
        Ok(fh_value(spec.family, p))
    }
}

/// Value of any family at a diamond point.
pub fn copula_value_at<T: Real>(spec: &CopulaSpec<T>, p: DiamondPoint<T>) -> Result<T> {
    copula_value(spec, diamond_to_square(p)?)
}
