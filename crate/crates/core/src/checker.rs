//! Grid verification of the copula axioms: boundary values, 2-increasingness,
//! density sign and mass, and the Fréchet–Hoeffding ordering.
//!
//! Evaluation failures are not raised; they turn into NaN entries, which
//! fail every comparison and therefore the verdict.

use rayon::prelude::*;
use serde::Serialize;

use crate::copulas::{copula_value, evaluate, fh_value, CopulaSpec, Family};
use crate::error::{Error, Result};
use crate::geometry::SquarePoint;
use crate::scalar::Real;

pub const MIN_GRID_N: usize = 32;
pub const BOUNDARY_TOL: f64 = 1e-8;
pub const VOLUME_TOL: f64 = 1e-10;
pub const DENSITY_TOL: f64 = 1e-10;
pub const INTEGRAL_TOL: f64 = 1e-3;
pub const FRECHET_SLACK: f64 = 1e-12;

/// Findings of [`check_copula`]. The density fields are `None` for the
/// singular bounds, which have no density to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopulaCheckReport<T> {
    pub boundary_max_err: T,
    pub min_rectangle_volume: T,
    pub min_density: Option<T>,
    pub density_integral: Option<T>,
    pub frechet_ok: bool,
    pub grid_n: usize,
    pub verdict: bool,
}

fn value_or_nan<T: Real>(spec: &CopulaSpec<T>, u: T, v: T) -> T {
    SquarePoint::new(u, v)
        .and_then(|p| copula_value(spec, p))
        .unwrap_or_else(|_| T::nan())
}

/// Smallest element, with NaN winning.
fn nan_min<T: Real>(xs: impl Iterator<Item = T>) -> T {
    xs.fold(T::infinity(), |m, x| {
        if x.is_nan() || m.is_nan() {
            T::nan()
        } else {
            m.min(x)
        }
    })
}

fn nan_max<T: Real>(xs: impl Iterator<Item = T>) -> T {
    xs.fold(T::zero(), |m, x| {
        if x.is_nan() || m.is_nan() {
            T::nan()
        } else {
            m.max(x)
        }
    })
}

/// `C(u2,v2) - C(u2,v1) - C(u1,v2) + C(u1,v1)`.
pub fn rectangle_volume<T: Real>(spec: &CopulaSpec<T>, u1: T, u2: T, v1: T, v2: T) -> Result<T> {
    if !(u1 <= u2 && v1 <= v2) {
        return Err(Error::Argument(format!(
            "rectangle needs u1 <= u2 and v1 <= v2, got [{u1}, {u2}] x [{v1}, {v2}]"
        )));
    }
    let c = |u, v| SquarePoint::new(u, v).and_then(|p| copula_value(spec, p));
    Ok(c(u2, v2)? - c(u2, v1)? - c(u1, v2)? + c(u1, v1)?)
}

/// Checks `spec` on a `grid_n × grid_n` lattice (at least [`MIN_GRID_N`]).
pub fn check_copula<T: Real>(spec: &CopulaSpec<T>, grid_n: usize) -> CopulaCheckReport<T> {
    let n = grid_n.max(MIN_GRID_N);
    let nt = T::from_usize(n).unwrap();
    let node = |k: usize| T::from_usize(k).unwrap() / T::from_usize(n - 1).unwrap();

    // Boundary: n points per edge.
    let boundary_max_err = nan_max(
        (0..n)
            .into_par_iter()
            .map(|k| {
                let t = node(k);
                let errs = [
                    value_or_nan(spec, t, T::zero()).abs(),
                    value_or_nan(spec, T::zero(), t).abs(),
                    (value_or_nan(spec, t, T::one()) - t).abs(),
                    (value_or_nan(spec, T::one(), t) - t).abs(),
                ];
                nan_max(errs.into_iter())
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );

    // Lattice values, row i holds u = node(i).
    let lattice: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| value_or_nan(spec, node(i), node(j)))
                .collect()
        })
        .collect();
    let min_rectangle_volume = nan_min((0..n - 1).flat_map(|i| {
        let lattice = &lattice;
        (0..n - 1).map(move |j| {
            lattice[i + 1][j + 1] - lattice[i + 1][j] - lattice[i][j + 1] + lattice[i][j]
        })
    }));
    let slack = T::lit(FRECHET_SLACK);
    let frechet_ok = (0..n).all(|i| {
        (0..n).all(|j| {
            let p = SquarePoint {
                u: node(i),
                v: node(j),
            };
            let c = lattice[i][j];
            c >= fh_value(Family::FhLower, p) - slack && c <= fh_value(Family::FhUpper, p) + slack
        })
    });

    let (min_density, density_integral) = if spec.family().is_smoothed() {
        let mid = |k: usize| (T::from_usize(k).unwrap() + T::lit(0.5)) / nt;
        let rows: Vec<(T, T)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let ds = (0..n).map(|j| {
                    SquarePoint::new(mid(i), mid(j))
                        .and_then(|p| evaluate(spec, p))
                        .map_or(T::nan(), |e| e.density)
                });
                let ds: Vec<T> = ds.collect();
                let sum = ds.iter().fold(T::zero(), |s, &d| s + d);
                (nan_min(ds.into_iter()), sum)
            })
            .collect();
        let min = nan_min(rows.iter().map(|r| r.0));
        let total = rows.iter().fold(T::zero(), |s, r| s + r.1) / (nt * nt);
        (Some(min), Some(total))
    } else {
        (None, None)
    };

    let density_ok = match (min_density, density_integral) {
        (Some(m), Some(i)) => {
            m >= -T::lit(DENSITY_TOL) && (i - T::one()).abs() <= T::lit(INTEGRAL_TOL)
        }
        _ => true,
    };
    let verdict = boundary_max_err <= T::lit(BOUNDARY_TOL)
        && min_rectangle_volume >= -T::lit(VOLUME_TOL)
        && density_ok
        && frechet_ok;

    CopulaCheckReport {
        boundary_max_err,
        min_rectangle_volume,
        min_density,
        density_integral,
        frechet_ok,
        grid_n: n,
        verdict,
    }
}
