//! Error metrics of a reconstruction against ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::ScalarField2D;

/// Fraction of each axis covered by the comparison window.
pub const CENTRAL_FRACTION: f64 = 0.6;
/// Fraction of the y axis whose rows are averaged for the plateau current.
pub const PLATEAU_ROWS_FRACTION: f64 = 0.1;

/// Half-open index range covering the central `fraction` of `n` samples.
pub fn central_range(n: usize, fraction: f64) -> std::ops::Range<usize> {
    let keep = ((n as f64) * fraction).round() as usize;
    let keep = keep.clamp(1, n);
    let lo = (n - keep) / 2;
    lo..lo + keep
}

fn check(a: &ScalarField2D<f64>, b: &ScalarField2D<f64>) -> Result<()> {
    if a.same_lattice(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "{}×{} vs {}×{} grid",
            a.nx(),
            a.ny(),
            b.nx(),
            b.ny()
        )))
    }
}

/// `‖a − t‖ / ‖t‖` over the central `fraction` of the grid. A zero truth
/// gives `‖a‖` instead.
pub fn relative_rms(a: &ScalarField2D<f64>, truth: &ScalarField2D<f64>, fraction: f64) -> Result<f64> {
    check(a, truth)?;
    let (mut num, mut den) = (0.0, 0.0);
    for j in central_range(truth.ny(), fraction) {
        for i in central_range(truth.nx(), fraction) {
            let t = truth.get(i, j);
            num += (a.get(i, j) - t).powi(2);
            den += t * t;
        }
    }
    Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
}

/// Largest `|a − t|` over the central `fraction` of the grid.
pub fn peak_abs_error(a: &ScalarField2D<f64>, truth: &ScalarField2D<f64>, fraction: f64) -> Result<f64> {
    check(a, truth)?;
    let mut peak = 0.0f64;
    for j in central_range(truth.ny(), fraction) {
        for i in central_range(truth.nx(), fraction) {
            peak = peak.max((a.get(i, j) - truth.get(i, j)).abs());
        }
    }
    Ok(peak)
}

/// Current through a layer of thickness `delta` crossing the y = const lines
/// of the central row band, `δ·Σ J_y·dx` over the central x window,
/// averaged over the band.
pub fn plateau_current(jy: &ScalarField2D<f64>, delta: f64) -> f64 {
    let xs = central_range(jy.nx(), CENTRAL_FRACTION);
    let rows = central_range(jy.ny(), PLATEAU_ROWS_FRACTION);
    let count = rows.len() as f64;
    let total: f64 = rows.map(|j| jy.row(j)[xs.clone()].iter().sum::<f64>()).sum();
    total / count * jy.dx() * delta
}

/// Per-layer comparison of a reconstructed `J_y` with its truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerMetrics {
    pub relative_rms: f64,
    pub peak_abs_error: f64,
    pub plateau_current: f64,
    pub truth_plateau_current: f64,
}

impl LayerMetrics {
    pub fn compute(jy: &ScalarField2D<f64>, truth: &ScalarField2D<f64>, delta: f64) -> Result<Self> {
        Ok(LayerMetrics {
            relative_rms: relative_rms(jy, truth, CENTRAL_FRACTION)?,
            peak_abs_error: peak_abs_error(jy, truth, CENTRAL_FRACTION)?,
            plateau_current: plateau_current(jy, delta),
            truth_plateau_current: plateau_current(truth, delta),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub central_fraction: f64,
    pub s1: LayerMetrics,
    pub s2: LayerMetrics,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Component;

    fn field(n: usize, f: impl FnMut(f64, f64) -> f64) -> ScalarField2D<f64> {
        ScalarField2D::from_fn(n, n, 1.0, 1.0, 0.0, Component::Jy, f).unwrap()
    }

    #[test]
    fn central_range_is_centred() {
        assert_eq!(central_range(256, 0.6), 51..205);
        assert_eq!(central_range(10, 1.0), 0..10);
        assert_eq!(central_range(10, 0.0), 4..5);
    }

    #[test]
    fn identical_fields_have_zero_error() {
        let t = field(20, |x, y| x * y + 1.0);
        assert_eq!(relative_rms(&t, &t, 0.6).unwrap(), 0.0);
        assert_eq!(peak_abs_error(&t, &t, 0.6).unwrap(), 0.0);
    }

    #[test]
    fn scaled_field_has_scale_error() {
        let t = field(20, |x, y| 1.0 + x * x + y);
        let a = t.scale(1.1);
        assert!((relative_rms(&a, &t, 0.6).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn error_outside_window_is_ignored() {
        let t = field(20, |_, _| 1.0);
        let a = field(20, |x, _| if x.abs() > 8.0 { 5.0 } else { 1.0 });
        assert_eq!(relative_rms(&a, &t, 0.6).unwrap(), 0.0);
        assert_eq!(peak_abs_error(&a, &t, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn plateau_of_uniform_strip() {
        // 10 columns of 2 A/m² at dx = 1 m and δ = 0.5 m carry 10 A
        let jy = field(40, |x, _| if (-5.0..5.0).contains(&x) { 2.0 } else { 0.0 });
        assert!((plateau_current(&jy, 0.5) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_error() {
        let a = field(10, |_, _| 0.0);
        let b = field(12, |_, _| 0.0);
        assert!(matches!(relative_rms(&a, &b, 0.6), Err(Error::GridMismatch(_))));
    }
}
