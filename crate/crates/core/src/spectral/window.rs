use serde::{Deserialize, Serialize};

use super::field::ScalarField2D;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Separable spatial window applied before transforming a finite map.
///
/// Hann and Blackman–Harris use the periodic definition: the weight is
/// exactly 0 at sample 0 (the periodic boundary) and reaches 1 at sample
/// `n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowSpec {
    None,
    #[default]
    Hann,
    /// 4-term Blackman–Harris (0.35875, 0.48829, 0.14128, 0.01168).
    BlackmanHarris,
    /// Flat top with smooth (C∞) Planck tapers over the outer fraction
    /// `ε ∈ (0, 0.5]` of samples at each end; 0 at both end samples.
    PlanckTaper(f64),
}

impl WindowSpec {
    pub fn validate(&self) -> Result<()> {
        if let WindowSpec::PlanckTaper(eps) = *self {
            if !(eps > 0.0 && eps <= 0.5) {
                return Err(Error::InvalidParameter(format!(
                    "planck-taper fraction must lie in (0, 0.5] (got {eps})"
                )));
            }
        }
        Ok(())
    }
}

/// Planck taper rising from 0 at `d = 0` to 1 at `d = width`.
fn planck_rise<T: Real>(d: T, width: T) -> T {
    if d <= T::zero() {
        T::zero()
    } else if d >= width {
        T::one()
    } else {
        let z = width / d - width / (width - d);
        if z > T::lit(700.0) {
            T::zero()
        } else {
            T::one() / (T::one() + z.exp())
        }
    }
}

const BH: [f64; 4] = [0.35875, 0.48829, 0.14128, 0.01168];

/// Blackman–Harris weight at phase `theta` ∈ [0, 2π], clamped to [0, 1].
pub(crate) fn blackman_harris_at<T: Real>(theta: T) -> T {
    let w = T::lit(BH[0]) - T::lit(BH[1]) * theta.cos() + T::lit(BH[2]) * (theta + theta).cos()
        - T::lit(BH[3]) * (T::lit(3.0) * theta).cos();
    w.max(T::zero()).min(T::one())
}

/// One-dimensional window weights of length `n`.
pub fn window_weights<T: Real>(n: usize, kind: WindowSpec) -> Vec<T> {
    let nn = T::from_usize_lossy(n);
    (0..n)
        .map(|i| {
            let theta = T::TAU() * T::from_usize_lossy(i) / nn;
            match kind {
                WindowSpec::None => T::one(),
                WindowSpec::Hann => {
                    let half = T::lit(0.5);
                    (half - half * theta.cos()).max(T::zero()).min(T::one())
                }
                WindowSpec::BlackmanHarris => blackman_harris_at(theta),
                WindowSpec::PlanckTaper(eps) => {
                    let d = T::from_usize_lossy(i.min(n - 1 - i));
                    planck_rise(d, T::lit(eps) * nn)
                }
            }
        })
        .collect()
}

/// Pointwise product with the separable window `w(x)·w(y)`.
pub fn apply_window<T: Real>(f: &ScalarField2D<T>, kind: WindowSpec) -> ScalarField2D<T> {
    if kind == WindowSpec::None {
        return f.clone();
    }
    let wx = window_weights::<T>(f.nx(), kind);
    let wy = window_weights::<T>(f.ny(), kind);
    let mut out = f.clone();
    let nx = f.nx();
    for (j, row) in out.values_mut().chunks_exact_mut(nx).enumerate() {
        for (v, &w) in row.iter_mut().zip(&wx) {
            *v = *v * w * wy[j];
        }
    }
    out
}
