//! Conditional-inverse sampling from the smoothed copulas.
//!
//! Draw `u` and a level `t` uniformly, then solve `∂C/∂u(u, v) = t` for `v`
//! by bisection. The conditional cdf is flat outside the band, which rules
//! out Newton. Each pair gets its own ChaCha stream keyed by its index, so a
//! batch does not depend on evaluation order.

use std::io::{self, Write};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::copulas::{smoothed_partials, CopulaSpec};
use crate::error::{Error, Result};
use crate::geometry::SquarePoint;
use crate::kernel::std_normal_quantile;
use crate::scalar::{sci17, Real};
use crate::validator::validate_model;

pub const MAX_BISECTIONS: usize = 80;
pub const BISECTION_WIDTH: f64 = 1e-15;
/// Lattice size of the validation run that gates sampling.
pub const GATE_GRID_N: usize = 64;
/// Clamp applied before the normal quantile.
pub const QUANTILE_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SampleBatch<T: Real> {
    pub pairs: Vec<SquarePoint<T>>,
    pub seed: u64,
    pub spec: CopulaSpec<T>,
}

/// Uniform on `[0, 1)` with 53 random bits.
fn unit<T: Real>(rng: &mut ChaCha8Rng) -> T {
    T::lit((rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
}

/// Generator for pair `index` of a batch seeded with `seed`.
pub fn pair_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Solves `∂C/∂u(u, v) = t` for `v ∈ [0, 1]`.
pub fn conditional_inverse<T: Real>(spec: &CopulaSpec<T>, u: T, t: T) -> Result<T> {
    let (mut lo, mut hi) = (T::zero(), T::one());
    let width = T::lit(BISECTION_WIDTH);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) * T::lit(0.5);
        let (du, _) = smoothed_partials(spec, SquarePoint::new(u, mid)?)?;
        if du < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Draws `n` pairs. The model must pass validation for the spec's
/// orientation, otherwise the conditional cdf is not a cdf.
pub fn sample_batch<T: Real>(spec: &CopulaSpec<T>, n: usize, seed: u64) -> Result<SampleBatch<T>> {
    let model = spec
        .model()
        .ok_or_else(|| Error::Argument("sampling needs a smoothed family".into()))?;
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let report = validate_model(model, spec.family().orientation(), GATE_GRID_N);
    if !report.passed() {
        return Err(Error::Validation(format!(
            "{model} fails (positivity {}, quadratic {}, containment {})",
            report.positivity_pass, report.quadratic_pass, report.containment_pass
        )));
    }
    let pairs = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = pair_rng(seed, i);
            let u = unit::<T>(&mut rng);
            let t = unit::<T>(&mut rng);
            let v = conditional_inverse(spec, u, t)?;
            Ok(SquarePoint { u, v })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch {
        pairs,
        seed,
        spec: spec.clone(),
    })
}

/// `(Φ⁻¹(u), Φ⁻¹(v))` for each pair, after clamping into `[1e-15, 1-1e-15]`.
pub fn to_gaussian<T: Real>(pairs: &[SquarePoint<T>]) -> Vec<(T, T)> {
    let lo = T::lit(QUANTILE_CLAMP);
    let hi = T::one() - lo;
    let q = |p: T| std_normal_quantile(p.max(lo).min(hi)).expect("clamped into (0, 1)");
    pairs.iter().map(|p| (q(p.u), q(p.v))).collect()
}

/// One-sample Kolmogorov–Smirnov statistic against the uniform law on `[0, 1]`.
pub fn ks_uniform<T: Real>(samples: &[T]) -> T {
    let mut xs: Vec<T> = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN samples"));
    let n = T::from_usize(xs.len()).unwrap();
    xs.iter().enumerate().fold(T::zero(), |d, (i, &x)| {
        let i = T::from_usize(i).unwrap();
        d.max((i + T::one()) / n - x).max(x - i / n)
    })
}

/// CSV with the given two-column header and 17 significant digits.
pub fn write_csv<T: Real>(
    out: &mut impl Write,
    header: &str,
    rows: impl IntoIterator<Item = (T, T)>,
) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for (a, b) in rows {
        writeln!(out, "{},{}", sci17(a.as_f64()), sci17(b.as_f64()))?;
    }
    Ok(())
}
