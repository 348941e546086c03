//! Certifies that a radius field turns `W̄` or `M̄` into a copula.
//!
//! For the upper orientation the density of `M̄` at a band point is
//! `g″(ρ) p(ρ) / (2√2 r)` with
//!
//! ```text
//! p(ρ) = (r_z² - r_w² - D) ρ² - 2 r_z ρ + 1 + D,   D = r (r_zz - r_ww)/3,
//! ```
//!
//! so the density is nonnegative at every band point iff `p >= 0` on
//! `[-1, 1]`. The lower orientation swaps `w` and `z`. Nonnegativity alone
//! is not enough: the average must also leave the boundary values of `W` or
//! `M` untouched, which holds when the band never reaches `∂U`
//! ([`containment_check`]).
//!
//! Theorem-style sufficient conditions `r_w² <= (1/2 - |r_z|)² + 3/4`,
//! `r_ww <= r_zz` are reported alongside, but they are derived from a
//! cross-term `-r_z ρ` rather than `-2 r_z ρ` and do not gate the verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{DiamondPoint, SquarePoint};
use crate::radius::{RadiusJet, RadiusModel};
use crate::scalar::Real;

/// Noise floor on the quadratic minimum.
pub const QUADRATIC_TOL: f64 = 1e-12;
/// Inward offset of boundary samples in [`containment_check`].
pub const BOUNDARY_OFFSET: f64 = 1e-9;
/// Interior margin for grid points of [`validate_model`].
pub const GRID_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Smoothing of `M`, band `|z| < r`.
    #[serde(rename = "upper_M")]
    UpperM,
    /// Smoothing of `W`, band `|w| < r`.
    #[serde(rename = "lower_W")]
    LowerW,
}

impl Orientation {
    /// Jet expressed in (along-band, across-band) order: for `UpperM` the
    /// band coordinate is `z`, for `LowerW` it is `w`.
    pub(crate) fn across_band<T: Real>(self, jet: RadiusJet<T>) -> RadiusJet<T> {
        match self {
            Orientation::UpperM => jet,
            Orientation::LowerW => jet.swapped(),
        }
    }
}

/// Which cross-term coefficient to use when building `p(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossTerm {
    /// `b = -2 r_z`, from differentiating `G_z = h r_z + g′` once more.
    ChainRule,
    /// `b = -r_z`, the coefficient obtained from the closed form
    /// `G_zz = g″ ρ r_z (ρ r_z - 1)/r + h r_zz + g″/r`.
    Transcribed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCertificate<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub min_value_on_unit_interval: T,
    pub pass: bool,
    pub paper_condition_pass: bool,
}

/// Coefficients `(a, b, c)` of `p(ρ)` for `jet` in orientation `o`.
pub fn quadratic_coefficients<T: Real>(
    jet: RadiusJet<T>,
    o: Orientation,
    form: CrossTerm,
) -> (T, T, T) {
    let j = o.across_band(jet);
    let three = T::lit(3.0);
    let d = j.r * (j.r_zz - j.r_ww) / three;
    let a = j.r_z * j.r_z - j.r_w * j.r_w - d;
    let b = match form {
        CrossTerm::ChainRule => -T::lit(2.0) * j.r_z,
        CrossTerm::Transcribed => -j.r_z,
    };
    (a, b, T::one() + d)
}

/// Exact minimum of `aρ² + bρ + c` over `[-1, 1]`.
pub fn min_on_unit_interval<T: Real>(a: T, b: T, c: T) -> T {
    let at = |x: T| (a * x + b) * x + c;
    let mut m = at(-T::one()).min(at(T::one()));
    if a > T::zero() && b.abs() <= T::lit(2.0) * a {
        m = m.min(c - b * b / (T::lit(4.0) * a));
    }
    m
}

/// The theorem's stated sufficient conditions for orientation `o`.
pub fn paper_sufficient_conditions<T: Real>(jet: RadiusJet<T>, o: Orientation) -> bool {
    let j = o.across_band(jet);
    let half = T::lit(0.5);
    let lhs = j.r_w * j.r_w;
    let rhs = (half - j.r_z.abs()).powi(2) + T::lit(0.75);
    lhs <= rhs && j.r_ww <= j.r_zz
}

/// The sharper vertex condition `c >= b²/(4a)` stated with the transcribed
/// cross-term. `None` where its denominator `4a` is not positive.
pub fn paper_exact_condition<T: Real>(jet: RadiusJet<T>, o: Orientation) -> Option<bool> {
    let (a, b, c) = quadratic_coefficients(jet, o, CrossTerm::Transcribed);
    (a > T::zero()).then(|| c >= b * b / (T::lit(4.0) * a))
}

pub fn certify_pointwise<T: Real>(jet: RadiusJet<T>, o: Orientation) -> QuadraticCertificate<T> {
    let (a, b, c) = quadratic_coefficients(jet, o, CrossTerm::ChainRule);
    let min = min_on_unit_interval(a, b, c);
    QuadraticCertificate {
        a,
        b,
        c,
        min_value_on_unit_interval: min,
        pass: min >= -T::lit(QUADRATIC_TOL),
        paper_condition_pass: paper_sufficient_conditions(jet, o),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentResult<T> {
    pub pass: bool,
    pub worst_margin: T,
    pub worst_point: DiamondPoint<T>,
}

/// Points on the four edges of the diamond, pulled inward by
/// [`BOUNDARY_OFFSET`], `n` per edge including both vertices.
pub fn boundary_samples<T: Real>(n: usize) -> Vec<DiamondPoint<T>> {
    let reach = T::half_diag() - T::lit(BOUNDARY_OFFSET);
    let last = T::from_usize(n.max(2) - 1).unwrap();
    let mut pts = Vec::with_capacity(4 * n);
    for (sw, sz) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        for k in 0..n {
            let t = T::from_usize(k).unwrap() / last;
            let w = T::lit(sw) * reach * (T::one() - t);
            let z = T::lit(sz) * reach * t;
            pts.push(DiamondPoint::new(w, z));
        }
    }
    pts
}

/// Checks that the band stays clear of `∂U`: `|z| >= r` on the boundary for
/// `UpperM`, `|w| >= r` for `LowerW`, with slack [`BOUNDARY_OFFSET`].
pub fn containment_check<T: Real>(
    model: &RadiusModel<T>,
    o: Orientation,
    n: usize,
) -> Result<ContainmentResult<T>> {
    let pts = boundary_samples::<T>(n);
    let margins = pts
        .par_iter()
        .map(|&p| {
            let r = model.radius(p)?;
            let across = match o {
                Orientation::UpperM => p.z,
                Orientation::LowerW => p.w,
            };
            Ok(across.abs() - r)
        })
        .collect::<Result<Vec<T>>>()?;
    let (idx, worst) = argmin(&margins);
    Ok(ContainmentResult {
        pass: worst >= -T::lit(BOUNDARY_OFFSET),
        worst_margin: worst,
        worst_point: pts[idx],
    })
}

fn argmin<T: Real>(xs: &[T]) -> (usize, T) {
    xs.iter()
        .copied()
        .enumerate()
        .fold((0, T::infinity()), |(bi, bv), (i, v)| {
            if v < bv || v.is_nan() && !bv.is_nan() {
                (i, v)
            } else {
                (bi, bv)
            }
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport<T> {
    pub positivity_pass: bool,
    pub quadratic_pass: bool,
    pub paper_sufficient_pass: bool,
    pub containment_pass: bool,
    /// Grid point with the smallest quadratic minimum.
    pub worst_point: DiamondPoint<T>,
    pub worst_margin: T,
    pub grid_n: usize,
    pub containment_worst_point: DiamondPoint<T>,
    pub containment_worst_margin: T,
    pub verdict: bool,
}

impl<T> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.positivity_pass && self.quadratic_pass && self.containment_pass
    }
}

/// Interior lattice used by [`validate_model`]: cell midpoints of a
/// `grid_n × grid_n` partition of the square, mapped to the diamond.
pub fn interior_lattice<T: Real>(grid_n: usize) -> Vec<DiamondPoint<T>> {
    let n = T::from_usize(grid_n).unwrap();
    let mid = |i: usize| (T::from_usize(i).unwrap() + T::lit(0.5)) / n;
    let mut pts = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        for j in 0..grid_n {
            let p = SquarePoint {
                u: mid(i),
                v: mid(j),
            }
            .to_diamond();
            if p.margin() > T::lit(GRID_MARGIN) {
                pts.push(p);
            }
        }
    }
    pts
}

struct PointVerdict<T> {
    positive: bool,
    paper: bool,
    min: T,
}

/// Sweeps the interior lattice and the boundary. Failures become report
/// fields; nothing here returns an error for a bad model.
pub fn validate_model<T: Real>(
    model: &RadiusModel<T>,
    o: Orientation,
    grid_n: usize,
) -> ValidationReport<T> {
    let grid_n = grid_n.max(8);
    let pts = interior_lattice::<T>(grid_n);
    let verdicts: Vec<PointVerdict<T>> = pts
        .par_iter()
        .map(|&p| match model.radius_jet(p) {
            Ok(jet) if jet.r > T::zero() && jet.r.is_finite() => {
                let cert = certify_pointwise(jet, o);
                PointVerdict {
                    positive: true,
                    paper: cert.paper_condition_pass,
                    min: cert.min_value_on_unit_interval,
                }
            }
            _ => PointVerdict {
                positive: false,
                paper: false,
                min: T::neg_infinity(),
            },
        })
        .collect();

    let mins: Vec<T> = verdicts.iter().map(|v| v.min).collect();
    let (idx, worst) = argmin(&mins);
    let containment = containment_check(model, o, 4 * grid_n).unwrap_or(ContainmentResult {
        pass: false,
        worst_margin: T::neg_infinity(),
        worst_point: DiamondPoint::new(T::nan(), T::nan()),
    });

    let mut report = ValidationReport {
        positivity_pass: verdicts.iter().all(|v| v.positive),
        quadratic_pass: worst >= -T::lit(QUADRATIC_TOL),
        paper_sufficient_pass: verdicts.iter().all(|v| v.paper),
        containment_pass: containment.pass,
        worst_point: pts[idx],
        worst_margin: worst,
        grid_n,
        containment_worst_point: containment.worst_point,
        containment_worst_margin: containment.worst_margin,
        verdict: false,
    };
    report.verdict = report.passed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(r: f64, r_w: f64, r_z: f64, r_ww: f64, r_zz: f64) -> RadiusJet<f64> {
        RadiusJet {
            r,
            r_w,
            r_z,
            r_ww,
            r_zz,
        }
    }

    #[test]
    fn constant_certificate() {
        let c = certify_pointwise(RadiusJet::<f64>::constant(0.2), Orientation::UpperM);
        assert_eq!((c.a, c.b, c.c), (0.0, 0.0, 1.0));
        assert_eq!(c.min_value_on_unit_interval, 1.0);
        assert!(c.pass && c.paper_condition_pass);
    }

    #[test]
    fn gaussian_origin_certificate() {
        let model = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        let j = model.radius_jet(DiamondPoint::new(0.0, 0.0)).unwrap();
        let c = certify_pointwise(j, Orientation::UpperM);
        let d = j.r * (-j.r_ww) / 3.0;
        assert!((d - 0.090_638).abs() < 1e-5);
        assert!((c.a + d).abs() < 1e-15 && c.b == 0.0 && (c.c - 1.0 - d).abs() < 1e-15);
        assert!((c.min_value_on_unit_interval - 1.0).abs() < 1e-15);
        assert!(c.pass);
    }

    #[test]
    fn steep_radius_fails() {
        let c = certify_pointwise(jet(0.3, 1.5, 0.0, 0.0, 0.0), Orientation::UpperM);
        assert!((c.min_value_on_unit_interval + 1.25).abs() < 1e-15);
        assert!(!c.pass);
        assert!(!c.paper_condition_pass);
    }

    #[test]
    fn lower_orientation_swaps_roles() {
        let j = jet(0.3, 0.0, 1.5, 0.0, 0.0);
        assert!(!certify_pointwise(j, Orientation::LowerW).pass);
        assert!(certify_pointwise(j, Orientation::UpperM).pass);
        assert_eq!(
            certify_pointwise(j, Orientation::LowerW),
            certify_pointwise(j.swapped(), Orientation::UpperM)
        );
    }

    #[test]
    fn minimum_matches_dense_scan() {
        let cases = [
            (1.0, 0.5, -0.1),
            (2.0, -1.0, 0.2),
            (-1.0, 0.3, 0.9),
            (0.0, 2.0, 1.0),
            (0.3, 1.0, 0.5),
        ];
        for (a, b, c) in cases {
            let scan = (0..=200_000)
                .map(|k| -1.0 + k as f64 * 1e-5)
                .map(|x| (a * x + b) * x + c)
                .fold(f64::INFINITY, f64::min);
            let exact = min_on_unit_interval(a, b, c);
            assert!(exact <= scan + 1e-15 && scan - exact < 1e-9, "{a} {b} {c}");
        }
    }

    #[test]
    fn exact_condition_agrees_with_transcribed_vertex_branch() {
        for r_z in [-0.9, -0.3, 0.0, 0.4, 1.2] {
            for r_w in [0.0, 0.2, 0.7] {
                for r_zz in [-1.0, 0.0, 0.5] {
                    let j = jet(0.25, r_w, r_z, -0.3, r_zz);
                    let (a, b, c) =
                        quadratic_coefficients(j, Orientation::UpperM, CrossTerm::Transcribed);
                    if let Some(v) = paper_exact_condition(j, Orientation::UpperM) {
                        assert_eq!(v, c - b * b / (4.0 * a) >= 0.0);
                    } else {
                        assert!(a <= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn containment_examples() {
        let m = RadiusModel::<f64>::constant(0.2).unwrap();
        let c = containment_check(&m, Orientation::UpperM, 256).unwrap();
        assert!(!c.pass);
        assert!((c.worst_margin + 0.2).abs() < 1e-8);
        assert!(c.worst_point.z.abs() < 1e-8 && c.worst_point.w.abs() > 0.7);

        let c = containment_check(&m, Orientation::LowerW, 256).unwrap();
        assert!(!c.pass);
        assert!(c.worst_point.w.abs() < 1e-8 && c.worst_point.z.abs() > 0.7);

        let g = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        let c = containment_check(&g, Orientation::UpperM, 256).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn validate_examples() {
        let g = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        let r = validate_model(&g, Orientation::UpperM, 64);
        assert!(r.passed() && r.verdict && r.paper_sufficient_pass, "{r:?}");

        let c = RadiusModel::<f64>::constant(0.2).unwrap();
        let r = validate_model(&c, Orientation::UpperM, 64);
        assert!(r.quadratic_pass && r.paper_sufficient_pass && r.positivity_pass);
        assert!(!r.containment_pass && !r.verdict);

        let steep = RadiusModel::<f64>::product(vec![0.6, 0.0, -1.2], vec![1.0]).unwrap();
        let r = validate_model(&steep, Orientation::UpperM, 64);
        assert!(!r.quadratic_pass && !r.verdict);
        assert!(r.worst_margin < 0.0);
        assert!((0.5..=0.71).contains(&r.worst_point.w.abs()));
    }

    #[test]
    fn report_serializes_with_stable_names() {
        let g = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        let r = validate_model(&g, Orientation::UpperM, 8);
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        for key in [
            "positivity_pass",
            "quadratic_pass",
            "paper_sufficient_pass",
            "containment_pass",
            "worst_point",
            "worst_margin",
            "grid_n",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["worst_point"].get("w").is_some() && v["worst_point"].get("z").is_some());
    }
}
