//! Per-wavenumber 2×2 continuation matrix and its inverse.
//!
//! With `Ĥ = (−Ĥx,M1, Ĥx,M2)ᵀ` and `Ĵ = (Ĵy,S1, Ĵy,S2)ᵀ`, the forward model is
//! `Ĥ = Ĝ·Ĵ` with `Ĝᵢⱼ = sinh(kδⱼ/2)·exp(−k dᵢⱼ)/k`, `dᵢⱼ` the distance from
//! plane `i` to layer `j`.

use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::forward::green_kernel;
use crate::geometry::{Layer, Plane, ValidatedGeometry};
use crate::scalar::{sinhc, Real};

/// Determinant below which a bin is treated as singular (SI units, m²).
pub const SINGULAR_DET: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationMatrix<T> {
    pub k: T,
    pub g11: T,
    pub g12: T,
    pub g21: T,
    pub g22: T,
}

/// Builds `Ĝ(k)`; `k = 0` gives the analytic limits `δⱼ/2`.
pub fn continuation_matrix<T: Real>(k: T, g: &ValidatedGeometry<T>) -> ContinuationMatrix<T> {
    let entry = |p: Plane, l: Layer| green_kernel(k, g.thickness(l), g.distance(p, l));
    ContinuationMatrix {
        k,
        g11: entry(Plane::M1, Layer::S1),
        g12: entry(Plane::M1, Layer::S2),
        g21: entry(Plane::M2, Layer::S1),
        g22: entry(Plane::M2, Layer::S2),
    }
}

impl<T: Real> ContinuationMatrix<T> {
    pub fn det(&self) -> T {
        self.g11 * self.g22 - self.g12 * self.g21
    }

    /// `|det| / (|g11·g22| + |g12·g21|)`: 0 for proportional rows, 1 for a
    /// diagonal matrix.
    pub fn relative_det(&self) -> T {
        let scale = (self.g11 * self.g22).abs() + (self.g12 * self.g21).abs();
        if scale == T::zero() {
            T::zero()
        } else {
            self.det().abs() / scale
        }
    }

    /// 2-norm condition number; infinite when the determinant vanishes.
    pub fn condition_number(&self) -> T {
        let det = self.det().abs();
        if det == T::zero() {
            return T::infinity();
        }
        let fro = self.g11 * self.g11 + self.g12 * self.g12 + self.g21 * self.g21 + self.g22 * self.g22;
        let four = T::lit(4.0);
        let disc = (fro * fro - four * det * det).max(T::zero()).sqrt();
        let smax2 = (fro + disc) / T::lit(2.0);
        smax2 / det
    }

    /// `Ĝ·Ĵ`, i.e. the field vector `(−Ĥx,M1, Ĥx,M2)`.
    pub fn apply(&self, j1: Complex<T>, j2: Complex<T>) -> (Complex<T>, Complex<T>) {
        (j1 * self.g11 + j2 * self.g12, j1 * self.g21 + j2 * self.g22)
    }
}

/// Explicit inverse of a 2×2 continuation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMatrix<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

impl<T: Real> InverseMatrix<T> {
    pub fn apply(&self, h1: Complex<T>, h2: Complex<T>) -> (Complex<T>, Complex<T>) {
        (h1 * self.a11 + h2 * self.a12, h1 * self.a21 + h2 * self.a22)
    }
}

/// Closed-form inverse; fails with [`Error::SingularBin`] when
/// `|det| < 10⁻³⁰`, which always includes `k = 0`.
pub fn invert_matrix<T: Real>(m: &ContinuationMatrix<T>) -> Result<InverseMatrix<T>> {
    let det = m.det();
    if !(det.abs() >= T::lit(SINGULAR_DET)) {
        return Err(Error::SingularBin {
            k: m.k.to_f64_lossy(),
            det: det.to_f64_lossy(),
        });
    }
    Ok(InverseMatrix {
        a11: m.g22 / det,
        a12: -m.g12 / det,
        a21: -m.g21 / det,
        a22: m.g11 / det,
    })
}

/// Coefficients of the explicit two-layer solution,
///
/// ```text
/// Ĵ₁ = −(k/2)·csch(kδ₁/2)·csch(kΔ_S)·(e^{k(Δ₁+Δ_S)}·Ĥx,M1 + e^{kΔ₂}·Ĥx,M2)
/// Ĵ₂ =  (k/2)·csch(kδ₂/2)·csch(kΔ_S)·(e^{k(Δ₂+Δ_S)}·Ĥx,M2 + e^{kΔ₁}·Ĥx,M1)
/// ```
///
/// acting on the raw plane fields `(Ĥx,M1, Ĥx,M2)`. Only defined for `k > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLayerSolution<T> {
    pub c11: T,
    pub c12: T,
    pub c21: T,
    pub c22: T,
}

impl<T: Real> TwoLayerSolution<T> {
    pub fn new(k: T, g: &ValidatedGeometry<T>) -> Self {
        let two = T::lit(2.0);
        let (d1, d2, ds) = (g.dist1(), g.dist2(), g.spacing());
        // (k/2)·csch(kδ/2) = 1/(δ·sinhc(kδ/2))
        let a1 = T::one() / (g.delta1() * sinhc(k * g.delta1() / two));
        let a2 = T::one() / (g.delta2() * sinhc(k * g.delta2() / two));
        // csch(kΔ_S)·e^{x} = 2·e^{x − kΔ_S} / (1 − e^{−2kΔ_S})
        let denom = -(-two * k * ds).exp_m1();
        let growth = |x: T| two * (x - k * ds).exp() / denom;
        TwoLayerSolution {
            c11: -a1 * growth(k * (d1 + ds)),
            c12: -a1 * growth(k * d2),
            c21: a2 * growth(k * d1),
            c22: a2 * growth(k * (d2 + ds)),
        }
    }

    /// `(Ĵ₁, Ĵ₂)` from `(Ĥx,M1, Ĥx,M2)`.
    pub fn apply(&self, h1: Complex<T>, h2: Complex<T>) -> (Complex<T>, Complex<T>) {
        (h1 * self.c11 + h2 * self.c12, h1 * self.c21 + h2 * self.c22)
    }

    pub fn is_finite(&self) -> bool {
        self.c11.is_finite() && self.c12.is_finite() && self.c21.is_finite() && self.c22.is_finite()
    }
}
