//! Radius fields `r(w, z)` for the disc average, with exact first and second
//! partials.
//!
//! Three families are provided:
//!
//! * `constant`: `r ≡ r0`.
//! * `product`: `r = p(w) q(z)` with polynomial `p`, `q`. The affine skew
//!   `q(z) = 1 + √2 ε z` has its own constructor.
//! * `gaussian_band`: `r(w)` defined implicitly by
//!   `Φ⁻¹((w+r)/√2 + 1/2) - Φ⁻¹((w-r)/√2 + 1/2) = d`, which makes
//!   `(Φ⁻¹(U), Φ⁻¹(V))` a normal pair supported on `|y - x| <= d`.
//!
//! Models are immutable after construction and round-trip through the JSON
//! objects `{"kind":"constant","r0":..}`, `{"kind":"product","p":[..],"epsilon":..}`
//! (or `"q":[..]`) and `{"kind":"gaussian_band","d":..}`. Coefficients are
//! ordered from low to high degree.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{DiamondPoint, DOMAIN_TOL};
use crate::kernel::{std_normal_pdf, std_normal_quantile};
use crate::scalar::{horner, Real};

const SWEEP_POINTS: usize = 1001;
const MAX_SOLVE_ITERS: usize = 200;

/// Value and partials of a radius field at one point. No mixed partial:
/// nothing downstream needs it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusJet<T> {
    pub r: T,
    pub r_w: T,
    pub r_z: T,
    pub r_ww: T,
    pub r_zz: T,
}

impl<T: Real> RadiusJet<T> {
    pub fn constant(r: T) -> Self {
        Self {
            r,
            r_w: T::zero(),
            r_z: T::zero(),
            r_ww: T::zero(),
            r_zz: T::zero(),
        }
    }

    /// Exchanges the roles of `w` and `z`.
    pub fn swapped(self) -> Self {
        Self {
            r: self.r,
            r_w: self.r_z,
            r_z: self.r_w,
            r_ww: self.r_zz,
            r_zz: self.r_ww,
        }
    }
}

/// Polynomial with coefficients from low to high degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != T::zero())
            .unwrap_or(0)
    }

    pub fn eval(&self, x: T) -> T {
        horner(&self.coeffs, x)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::from_usize(k).unwrap())
            .collect();
        Self { coeffs }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ProductField<T> {
    p: [Polynomial<T>; 3],
    q: [Polynomial<T>; 3],
    epsilon: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind<T> {
    Constant { r0: T },
    Product(Box<ProductField<T>>),
    GaussianBand { d: T },
}

/// A validated radius field. See the module docs for the families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RadiusSpec<T>", into = "RadiusSpec<T>", bound = "T: Real")]
pub struct RadiusModel<T: Real> {
    kind: Kind<T>,
}

/// Wire form of [`RadiusModel`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound = "T: Real")]
pub enum RadiusSpec<T> {
    Constant {
        r0: T,
    },
    Product {
        p: Vec<T>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<Vec<T>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        epsilon: Option<T>,
    },
    GaussianBand {
        d: T,
    },
}

impl<T: Real> TryFrom<RadiusSpec<T>> for RadiusModel<T> {
    type Error = Error;

    fn try_from(spec: RadiusSpec<T>) -> Result<Self> {
        match spec {
            RadiusSpec::Constant { r0 } => Self::constant(r0),
            RadiusSpec::GaussianBand { d } => Self::gaussian_band(d),
            RadiusSpec::Product { p, q, epsilon } => match (q, epsilon) {
                (Some(_), Some(_)) => Err(Error::InvalidModel(
                    "product takes either q or epsilon, not both".into(),
                )),
                (Some(q), None) => Self::product(p, q),
                (None, Some(eps)) => Self::affine_skew(p, eps),
                (None, None) => Self::product(p, vec![T::one()]),
            },
        }
    }
}

impl<T: Real> From<RadiusModel<T>> for RadiusSpec<T> {
    fn from(model: RadiusModel<T>) -> Self {
        match model.kind {
            Kind::Constant { r0 } => RadiusSpec::Constant { r0 },
            Kind::GaussianBand { d } => RadiusSpec::GaussianBand { d },
            Kind::Product(f) => {
                let p = f.p[0].coeffs().to_vec();
                match f.epsilon {
                    Some(eps) => RadiusSpec::Product {
                        p,
                        q: None,
                        epsilon: Some(eps),
                    },
                    None => RadiusSpec::Product {
                        p,
                        q: Some(f.q[0].coeffs().to_vec()),
                        epsilon: None,
                    },
                }
            }
        }
    }
}

impl<T: Real> RadiusModel<T> {
    pub fn constant(r0: T) -> Result<Self> {
        if !(r0.is_finite() && r0 > T::zero()) {
            return Err(Error::InvalidModel(format!("r0 must be > 0, got {r0}")));
        }
        Ok(Self {
            kind: Kind::Constant { r0 },
        })
    }

    pub fn gaussian_band(d: T) -> Result<Self> {
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::InvalidModel(format!("d must be > 0, got {d}")));
        }
        Ok(Self {
            kind: Kind::GaussianBand { d },
        })
    }

    /// `r(w, z) = p(w) q(z)`. Both factors must be positive on the open axis
    /// range `(-1/√2, 1/√2)`, checked on a 1001-point sweep.
    pub fn product(p: Vec<T>, q: Vec<T>) -> Result<Self> {
        Self::product_inner(p, q, None)
    }

    /// `r(w, z) = p(w) (1 + √2 ε z)`.
    pub fn affine_skew(p: Vec<T>, epsilon: T) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::InvalidModel("epsilon must be finite".into()));
        }
        let q = vec![T::one(), T::SQRT_2() * epsilon];
        Self::product_inner(p, q, Some(epsilon))
    }

    fn product_inner(p: Vec<T>, q: Vec<T>, epsilon: Option<T>) -> Result<Self> {
        if p.is_empty() || q.is_empty() {
            return Err(Error::InvalidModel(
                "product factors need at least one coefficient".into(),
            ));
        }
        if p.iter().chain(q.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        let p = Polynomial::new(p);
        let q = Polynomial::new(q);
        for (name, poly) in [("p", &p), ("q", &q)] {
            if let Some(x) = first_nonpositive(poly) {
                return Err(Error::InvalidModel(format!(
                    "{name} is not positive at {x} inside the diamond"
                )));
            }
        }
        let jet = |f: Polynomial<T>| {
            let f1 = f.derivative();
            let f2 = f1.derivative();
            [f, f1, f2]
        };
        Ok(Self {
            kind: Kind::Product(Box::new(ProductField {
                p: jet(p),
                q: jet(q),
                epsilon,
            })),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("radius model serializes")
    }

    /// True when `r` does not depend on `z`.
    pub fn is_z_independent(&self) -> bool {
        match &self.kind {
            Kind::Constant { .. } | Kind::GaussianBand { .. } => true,
            Kind::Product(f) => f.q[0].degree() == 0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Constant { .. } => "constant",
            Kind::Product(_) => "product",
            Kind::GaussianBand { .. } => "gaussian_band",
        }
    }

    /// Radius value and partials at `p`.
    ///
    /// Polynomial families extend to the closed diamond. The Gaussian band
    /// needs `|w| < 1/√2`; at the two corners where that fails the solve
    /// cannot bracket and an error naming the point is returned.
    pub fn radius_jet(&self, p: DiamondPoint<T>) -> Result<RadiusJet<T>> {
        if !(p.w.is_finite() && p.z.is_finite()) || p.margin() < -T::lit(DOMAIN_TOL) {
            return Err(Error::OutsideDiamond {
                w: p.w.as_f64(),
                z: p.z.as_f64(),
            });
        }
        match &self.kind {
            Kind::Constant { r0 } => Ok(RadiusJet::constant(*r0)),
            Kind::Product(f) => {
                let [p0, p1, p2] = &f.p;
                let [q0, q1, q2] = &f.q;
                let (pw, qz) = (p0.eval(p.w), q0.eval(p.z));
                Ok(RadiusJet {
                    r: pw * qz,
                    r_w: p1.eval(p.w) * qz,
                    r_z: pw * q1.eval(p.z),
                    r_ww: p2.eval(p.w) * qz,
                    r_zz: pw * q2.eval(p.z),
                })
            }
            Kind::GaussianBand { d } => {
                let sol = solve_gaussian_band(*d, p.w).ok_or(Error::RadiusBracket {
                    w: p.w.as_f64(),
                    z: p.z.as_f64(),
                })?;
                Ok(sol.jet(*d))
            }
        }
    }

    /// Radius value alone.
    pub fn radius(&self, p: DiamondPoint<T>) -> Result<T> {
        Ok(self.radius_jet(p)?.r)
    }

    /// The set `{z : |z| <= r(w, z)}` at fixed `w`, which carries all the
    /// mass of the smoothed upper bound.
    pub fn support_band(&self, w: T) -> Result<SupportBand<T>> {
        let symmetric = |r: T| SupportBand {
            w,
            lower: -r,
            upper: r,
            kappa: Kappa::Finite(T::one()),
        };
        match &self.kind {
            Kind::Constant { r0 } => Ok(symmetric(*r0)),
            Kind::GaussianBand { d } => {
                solve_gaussian_band(*d, w)
                    .map(|s| symmetric(s.r))
                    .ok_or(Error::RadiusBracket {
                        w: w.as_f64(),
                        z: 0.0,
                    })
            }
            Kind::Product(f) => {
                let q = f.q[0].coeffs();
                if f.q[0].degree() > 1 {
                    return Err(Error::UnsupportedBand(
                        "q must be affine for a closed-form band".into(),
                    ));
                }
                let q0 = q[0];
                let q1 = q.get(1).copied().unwrap_or_else(T::zero);
                // |z| <= (q0 + q1 z) p(w)
                let pw = f.p[0].eval(w);
                let den_upper = T::one() - q1 * pw;
                let den_lower = T::one() + q1 * pw;
                if den_upper <= T::zero() || den_lower <= T::zero() {
                    return Err(Error::UnboundedBand { w: w.as_f64() });
                }
                let lower = -q0 * pw / den_lower;
                let upper = q0 * pw / den_upper;
                let kappa = if lower < T::zero() {
                    Kappa::Finite(den_lower / den_upper)
                } else {
                    Kappa::Unbounded
                };
                Ok(SupportBand {
                    w,
                    lower,
                    upper,
                    kappa,
                })
            }
        }
    }
}

impl<T: Real> fmt::Display for RadiusModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

fn first_nonpositive<T: Real>(poly: &Polynomial<T>) -> Option<T> {
    let half = T::half_diag();
    let n = T::from_usize(SWEEP_POINTS).unwrap();
    (0..SWEEP_POINTS)
        .map(|k| -half + T::lit(2.0) * half * (T::from_usize(k).unwrap() + T::lit(0.5)) / n)
        .find(|&x| !(poly.eval(x) > T::zero()))
}

/// Ratio of the upper to the lower band half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa<T> {
    Finite(T),
    /// The band does not extend below zero.
    Unbounded,
}

impl<T: Real> Serialize for Kappa<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(x) => x.serialize(s),
            Kappa::Unbounded => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SupportBand<T> {
    pub w: T,
    pub lower: T,
    pub upper: T,
    pub kappa: Kappa<T>,
}

struct BandSolution<T> {
    r: T,
    x: T,
    y: T,
}

impl<T: Real> BandSolution<T> {
    // r′ = tanh(s), s = -d(x+y)/4; r″ = -d sech²(s) (x′ + y′)/4
    fn jet(&self, d: T) -> RadiusJet<T> {
        let quarter = T::lit(0.25);
        let s = -d * (self.x + self.y) * quarter;
        let r_w = s.tanh();
        let sech2 = s.cosh().powi(-2);
        let sqrt2 = T::SQRT_2();
        let dx = (T::one() - r_w) / (sqrt2 * std_normal_pdf(self.x));
        let dy = (T::one() + r_w) / (sqrt2 * std_normal_pdf(self.y));
        RadiusJet {
            r: self.r,
            r_w,
            r_z: T::zero(),
            r_ww: -d * sech2 * (dx + dy) * quarter,
            r_zz: T::zero(),
        }
    }
}

// Φ⁻¹ of both band edges, or None once an edge leaves (0, 1).
fn band_edges<T: Real>(w: T, r: T) -> Option<(T, T)> {
    let s = T::FRAC_1_SQRT_2();
    let half = T::lit(0.5);
    let lo = (w - r) * s + half;
    let hi = (w + r) * s + half;
    let x = std_normal_quantile(lo).ok()?;
    let y = std_normal_quantile(hi).ok()?;
    Some((x, y))
}

/// Solves the implicit Gaussian band equation for `r` at abscissa `w`.
///
/// The residual is strictly increasing in `r` on `(0, 1/√2 - |w|)`, negative
/// at 0 and unbounded at the upper end. A bracket is kept throughout; Newton
/// steps that leave it fall back to bisection.
fn solve_gaussian_band<T: Real>(d: T, w: T) -> Option<BandSolution<T>> {
    let room = T::half_diag() - w.abs();
    let mut hi = room - T::lit(1e-15);
    if !(hi > T::zero()) {
        return None;
    }
    let mut lo = T::zero();
    let sqrt2 = T::SQRT_2();

    // Linearised guess: r ≈ d φ(x₀)/√2 with x₀ = Φ⁻¹(w/√2 + 1/2).
    let mut r = match std_normal_quantile(w * T::FRAC_1_SQRT_2() + T::lit(0.5)) {
        Ok(x0) => d * std_normal_pdf(x0) / sqrt2,
        Err(_) => hi * T::lit(0.5),
    };
    if !(r > lo && r < hi) {
        r = (lo + hi) * T::lit(0.5);
    }

    let tol = T::lit(1e-14) * d.max(T::one());
    let mut best: Option<BandSolution<T>> = None;
    for _ in 0..MAX_SOLVE_ITERS {
        let Some((x, y)) = band_edges(w, r) else {
            hi = r;
            r = (lo + hi) * T::lit(0.5);
            continue;
        };
        let f = y - x - d;
        best = Some(BandSolution { r, x, y });
        if f.abs() <= tol {
            break;
        }
        if f > T::zero() {
            hi = r;
        } else {
            lo = r;
        }
        let slope = (std_normal_pdf(y).recip() + std_normal_pdf(x).recip()) / sqrt2;
        let newton = r - f / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
        if next == r || hi - lo <= T::epsilon() * hi {
            break;
        }
        r = next;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::std_normal_cdf;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn dp(w: f64, z: f64) -> DiamondPoint<f64> {
        DiamondPoint::new(w, z)
    }

    fn residual(d: f64, w: f64, r: f64) -> f64 {
        let x = std_normal_quantile((w - r) * S + 0.5).unwrap();
        let y = std_normal_quantile((w + r) * S + 0.5).unwrap();
        y - x - d
    }

    #[test]
    fn constant_jet() {
        let m = RadiusModel::<f64>::constant(0.2).unwrap();
        assert_eq!(
            m.radius_jet(dp(0.1, 0.05)).unwrap(),
            RadiusJet::<f64>::constant(0.2)
        );
    }

    #[test]
    fn product_jet_by_hand() {
        let m = RadiusModel::<f64>::affine_skew(vec![0.25, 0.0, -0.2], 0.3).unwrap();
        let j = m.radius_jet(dp(0.0, 0.0)).unwrap();
        assert!((j.r - 0.25).abs() < 1e-15);
        assert_eq!(j.r_w, 0.0);
        assert!((j.r_z - 0.106_066_017_177_982_13).abs() < 1e-15);
        assert!((j.r_ww + 0.4).abs() < 1e-15);
        assert_eq!(j.r_zz, 0.0);
    }

    #[test]
    fn gaussian_band_at_origin() {
        let m = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        let j = m.radius_jet(dp(0.0, 0.0)).unwrap();
        // r(0) = √2 (Φ(1/2) - 1/2) since the band is symmetric at w = 0
        let exact = std::f64::consts::SQRT_2 * (std_normal_cdf(0.5) - 0.5);
        assert!((j.r - 0.270_768_809_419_042_8).abs() < 1e-14);
        assert!((j.r - exact).abs() < 1e-15);
        assert!(j.r_w.abs() < 1e-15);
        // x = -1/2, y = 1/2: r″ = -(x′ + y′)/4 = -1/(2√2 φ(1/2))
        let want = -1.0 / (2.0 * std::f64::consts::SQRT_2 * 0.352_065_326_764_299_5);
        assert!((j.r_ww - want).abs() < 1e-12);
        assert!((j.r_ww + 1.004_226_669_642_962).abs() < 1e-9);
        assert!(residual(1.0, 0.0, j.r).abs() <= 1e-12);
    }

    #[test]
    fn gaussian_residual_is_tiny_inside() {
        for d in [0.5, 1.0, 2.0] {
            let m = RadiusModel::<f64>::gaussian_band(d).unwrap();
            for i in -60..=60 {
                let w = i as f64 * 0.01;
                let r = m.radius(dp(w, 0.0)).unwrap();
                assert!(residual(d, w, r).abs() <= 1e-12, "d={d} w={w}");
            }
        }
    }

    #[test]
    fn gaussian_band_properties() {
        let m = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        for i in -700..=700 {
            let w = i as f64 * 1e-3;
            let j = m.radius_jet(dp(w, 0.0)).unwrap();
            assert!(j.r > 0.0);
            assert!(j.r_w.abs() < 1.0);
            assert!(j.r_ww <= 0.0);
            assert!(j.r + w.abs() < S);
            let mirror = m.radius(dp(-w, 0.0)).unwrap();
            assert!((j.r - mirror).abs() <= 1e-12, "symmetry at {w}");
        }
    }

    #[test]
    fn corner_cannot_bracket() {
        let m = RadiusModel::<f64>::gaussian_band(1.0).unwrap();
        assert!(matches!(
            m.radius_jet(dp(S, 0.0)),
            Err(Error::RadiusBracket { .. })
        ));
    }

    #[test]
    fn partials_match_finite_differences() {
        let models = [
            RadiusModel::<f64>::gaussian_band(1.0).unwrap(),
            RadiusModel::<f64>::gaussian_band(0.5).unwrap(),
            RadiusModel::<f64>::affine_skew(vec![0.25, 0.0, -0.2], 0.3).unwrap(),
            RadiusModel::<f64>::product(vec![0.3, 0.1, -0.2, 0.05], vec![1.0, 0.2, -0.3]).unwrap(),
        ];
        let h = 1e-5;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-2);
        for m in &models {
            for (w, z) in [
                (0.0, 0.0),
                (0.2, -0.1),
                (-0.4, 0.15),
                (0.55, 0.05),
                (-0.1, 0.5),
            ] {
                let p = dp(w, z);
                assert!(p.margin() > 1e-3);
                let j = m.radius_jet(p).unwrap();
                let r = |w: f64, z: f64| m.radius(dp(w, z)).unwrap();
                let fw = (r(w + h, z) - r(w - h, z)) / (2.0 * h);
                let fz = (r(w, z + h) - r(w, z - h)) / (2.0 * h);
                let h2 = 1e-4;
                let fww = (r(w + h2, z) - 2.0 * j.r + r(w - h2, z)) / (h2 * h2);
                let fzz = (r(w, z + h2) - 2.0 * j.r + r(w, z - h2)) / (h2 * h2);
                assert!(
                    rel(fw, j.r_w) <= 1e-6,
                    "{m} r_w at {p:?}: {fw} vs {}",
                    j.r_w
                );
                assert!(rel(fz, j.r_z) <= 1e-6, "{m} r_z at {p:?}");
                assert!(
                    rel(fww, j.r_ww) <= 1e-6,
                    "{m} r_ww at {p:?}: {fww} vs {}",
                    j.r_ww
                );
                assert!(rel(fzz, j.r_zz) <= 1e-6, "{m} r_zz at {p:?}");
            }
        }
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(RadiusModel::<f64>::constant(0.0).is_err());
        assert!(RadiusModel::<f64>::constant(-1.0).is_err());
        assert!(RadiusModel::<f64>::gaussian_band(0.0).is_err());
        assert!(RadiusModel::<f64>::gaussian_band(f64::NAN).is_err());
        // p(w) = 0.1 - w² changes sign inside (-1/√2, 1/√2)
        assert!(RadiusModel::<f64>::product(vec![0.1, 0.0, -1.0], vec![1.0]).is_err());
        // q(z) = 1 + 2√2 z vanishes at z = -1/(2√2)
        assert!(RadiusModel::<f64>::affine_skew(vec![0.2], 2.0).is_err());
        assert!(RadiusModel::<f64>::product(vec![], vec![1.0]).is_err());
        // vanishing only on the closed boundary is allowed
        assert!(RadiusModel::<f64>::product(vec![0.6, 0.0, -1.2], vec![1.0]).is_ok());
    }

    #[test]
    fn json_forms() {
        let m = RadiusModel::<f64>::from_json(r#"{"kind":"constant","r0":0.2}"#).unwrap();
        assert_eq!(m, RadiusModel::<f64>::constant(0.2).unwrap());
        let m =
            RadiusModel::<f64>::from_json(r#"{"kind":"product","p":[0.25,0,-0.2],"epsilon":0.3}"#)
                .unwrap();
        assert_eq!(
            m,
            RadiusModel::<f64>::affine_skew(vec![0.25, 0.0, -0.2], 0.3).unwrap()
        );
        assert_eq!(RadiusModel::<f64>::from_json(&m.to_json()).unwrap(), m);
        let m = RadiusModel::<f64>::from_json(r#"{"kind":"gaussian_band","d":1.0}"#).unwrap();
        assert_eq!(m, RadiusModel::<f64>::gaussian_band(1.0).unwrap());
        let m =
            RadiusModel::<f64>::from_json(r#"{"kind":"product","p":[0.2],"q":[1,0.1]}"#).unwrap();
        assert!(!m.is_z_independent());

        for bad in [
            r#"{"kind":"constant","r0":-1}"#,
            r#"{"kind":"circle","r0":1}"#,
            r#"{"kind":"constant","r0":0.2,"extra":1}"#,
            r#"{"kind":"product","p":[0.2],"q":[1],"epsilon":0.1}"#,
            "not json",
        ] {
            assert!(RadiusModel::<f64>::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn support_band_examples() {
        let b = RadiusModel::<f64>::constant(0.2)
            .unwrap()
            .support_band(0.3)
            .unwrap();
        assert_eq!((b.lower, b.upper, b.kappa), (-0.2, 0.2, Kappa::Finite(1.0)));

        let m = RadiusModel::<f64>::affine_skew(vec![0.25, 0.0, -0.2], 0.3).unwrap();
        let b = m.support_band(0.0).unwrap();
        assert!((b.lower + 0.226_026_291_484_707_43).abs() < 1e-15);
        assert!((b.upper - 0.279_662_709_779_515_1).abs() < 1e-15);
        let Kappa::Finite(k) = b.kappa else { panic!() };
        assert!((k - b.upper / b.lower.abs()).abs() < 1e-14);
        assert!((k - 1.237_301_678_236_120_6).abs() < 1e-12);

        let b = RadiusModel::<f64>::gaussian_band(1.0)
            .unwrap()
            .support_band(0.0)
            .unwrap();
        assert!((b.upper - 0.270_768_809_419_042_8).abs() < 1e-14);
        assert_eq!(b.lower, -b.upper);
    }

    #[test]
    fn support_band_errors() {
        // 1 - √2 ε p(w) <= 0 with ε = 1, p = 0.75: 1 - 1.06 < 0. q itself is
        // positive on the diamond since 1 - √2·(1/√2) = 0 only at the vertex.
        let m = RadiusModel::<f64>::product(vec![0.75], vec![1.0, 1.4]).unwrap();
        assert!(matches!(
            m.support_band(0.0),
            Err(Error::UnboundedBand { .. })
        ));
        let m = RadiusModel::<f64>::product(vec![0.2], vec![1.0, 0.0, -0.1]).unwrap();
        assert!(matches!(
            m.support_band(0.0),
            Err(Error::UnsupportedBand(_))
        ));
    }

    #[test]
    fn kappa_serializes_explicitly() {
        let finite = serde_json::to_string(&Kappa::Finite(1.5f64)).unwrap();
        assert_eq!(finite, "1.5");
        let unbounded = serde_json::to_string(&Kappa::<f64>::Unbounded).unwrap();
        assert_eq!(unbounded, "\"inf\"");
    }

    #[test]
    fn f32_gaussian_band() {
        let m = RadiusModel::<f32>::gaussian_band(1.0).unwrap();
        let r = m.radius(DiamondPoint::new(0.0f32, 0.0)).unwrap();
        assert!((r - 0.270_768_8).abs() < 1e-5);
    }
}
