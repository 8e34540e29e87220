//! Invertibility diagnosis for arbitrary plane placements.

use serde::Serialize;

use crate::geometry::{Layer, Plane, StackGeometry};
use crate::scalar::Real;

use super::matrix::ContinuationMatrix;

/// Relative determinant at or below which a bin counts as rank-deficient.
pub const RANK_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Invertible,
    RankDeficient,
}

/// Conditioning of the continuation matrix at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinCondition {
    pub k: f64,
    pub det: f64,
    pub relative_det: f64,
    pub condition_number: f64,
    pub rank_deficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankDiagnosis {
    pub verdict: Verdict,
    /// Both planes lie on the same side of the stack.
    pub same_side: bool,
    pub bins: Vec<BinCondition>,
}

/// Continuation matrix for a raw placement, planes on either side allowed.
/// Entry `(i, j)` is `sign(z_Mi − z_Sj)·sinh(kδⱼ/2)·exp(−k|z_Mi − z_Sj|)/k`.
pub fn placement_matrix<T: Real>(k: T, p: &StackGeometry<T>) -> ContinuationMatrix<T> {
    let entry = |plane: Plane, layer: Layer| {
        let dz = p.plane_z(plane) - p.layer_z(layer);
        let delta = p.thickness(layer);
        let magnitude = if k == T::zero() {
            delta / T::lit(2.0)
        } else {
            (k * delta / T::lit(2.0)).sinh() / k * (-k * dz.abs()).exp()
        };
        if dz < T::zero() {
            -magnitude
        } else {
            magnitude
        }
    };
    // sign convention: the field vector negates the plane below, so a
    // two-sided stack gives the all-positive matrix of the validated case
    let side = |plane: Plane| {
        if p.plane_z(plane) < p.layer_z(Layer::S1).min(p.layer_z(Layer::S2)) {
            -T::one()
        } else {
            T::one()
        }
    };
    let (s1, s2) = (side(Plane::M1), side(Plane::M2));
    ContinuationMatrix {
        k,
        g11: s1 * entry(Plane::M1, Layer::S1),
        g12: s1 * entry(Plane::M1, Layer::S2),
        g21: s2 * entry(Plane::M2, Layer::S1),
        g22: s2 * entry(Plane::M2, Layer::S2),
    }
}

/// Both measurement planes lie strictly below, or strictly above, the stack.
pub fn planes_same_side<T: Real>(p: &StackGeometry<T>) -> bool {
    let two = T::lit(2.0);
    let bottom = (p.z_s1 - p.delta1 / two).min(p.z_s2 - p.delta2 / two);
    let top = (p.z_s1 + p.delta1 / two).max(p.z_s2 + p.delta2 / two);
    let below = |z: T| z < bottom;
    let above = |z: T| z > top;
    (below(p.z_m1) && below(p.z_m2)) || (above(p.z_m1) && above(p.z_m2))
}

/// Per-k conditioning and an overall verdict. Same-side placements are
/// rank-deficient analytically (the rows differ by the factor
/// `exp(−k·gap)`); the DC bin of a two-sided stack is singular but does not
/// change the verdict.
pub fn detect_rank_deficiency<T: Real>(p: &StackGeometry<T>, ks: &[T]) -> RankDiagnosis {
    let one_sided = planes_same_side(p);
    let bins: Vec<BinCondition> = ks
        .iter()
        .map(|&k| {
            let m = placement_matrix(k, p);
            let rel = m.relative_det();
            let deficient = one_sided || rel <= T::lit(RANK_TOLERANCE);
            BinCondition {
                k: k.to_f64_lossy(),
                det: m.det().to_f64_lossy(),
                relative_det: rel.to_f64_lossy(),
                condition_number: if deficient {
                    f64::INFINITY
                } else {
                    m.condition_number().to_f64_lossy()
                },
                rank_deficient: deficient,
            }
        })
        .collect();
    let verdict = if one_sided || bins.iter().any(|b| b.k > 0.0 && b.rank_deficient) {
        Verdict::RankDeficient
    } else {
        Verdict::Invertible
    };
    RankDiagnosis {
        verdict,
        same_side: one_sided,
        bins,
    }
}

/// `n` log-spaced wavenumbers between `k_lo` and `k_hi`.
pub fn log_spaced<T: Real>(k_lo: T, k_hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![k_lo];
    }
    let (a, b) = (k_lo.ln(), k_hi.ln());
    (0..n)
        .map(|i| match i {
            0 => k_lo,
            i if i == n - 1 => k_hi,
            i => (a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp(),
        })
        .collect()
}

impl RankDiagnosis {
    pub fn is_invertible(&self) -> bool {
        self.verdict == Verdict::Invertible
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse::continuation_matrix;

    fn reference() -> StackGeometry<f64> {
        StackGeometry::from_separations(11e-3, 14e-3, 13e-3, 1e-3, 1.2e-3)
    }

    #[test]
    fn raw_matrix_matches_validated_matrix_for_two_sided_stack() {
        let g = reference();
        let v = g.validate().unwrap();
        for k in [0.0, 3.0, 80.0, 700.0] {
            let a = placement_matrix(k, &g);
            let b = continuation_matrix(k, &v);
            for (x, y) in [(a.g11, b.g11), (a.g12, b.g12), (a.g21, b.g21), (a.g22, b.g22)] {
                assert!((x - y).abs() <= 1e-12 * y.abs(), "k = {k}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn two_sided_is_invertible_with_diverging_condition_at_dc() {
        let ks = log_spaced(1e-4, 2000.0, 40);
        let d = detect_rank_deficiency(&reference(), &ks);
        assert_eq!(d.verdict, Verdict::Invertible);
        assert!(!d.same_side);
        assert!(d.bins.iter().all(|b| b.condition_number.is_finite()));
        // condition number grows monotonically as k → 0
        for w in d.bins.windows(2).take(10) {
            assert!(w[0].condition_number > w[1].condition_number);
        }
        assert!(d.bins[0].condition_number > 1e5);
        let dc = detect_rank_deficiency(&reference(), &[0.0]);
        assert!(dc.bins[0].condition_number.is_infinite());
        assert_eq!(dc.verdict, Verdict::Invertible);
    }

    #[test]
    fn same_side_planes_are_rank_deficient_everywhere() {
        let mut g = reference();
        g.z_m2 = g.z_m1 - 0.007;
        let ks = log_spaced(1e-3, 3000.0, 50);
        let d = detect_rank_deficiency(&g, &ks);
        assert_eq!(d.verdict, Verdict::RankDeficient);
        assert!(d.bins.iter().all(|b| b.rank_deficient));
        // numerically the rows are proportional too
        for &k in &ks {
            assert!(placement_matrix(k, &g).relative_det() < 1e-13);
        }
        let mut above = reference();
        above.z_m1 = 0.02;
        above.z_m2 = 0.02;
        assert_eq!(detect_rank_deficiency(&above, &ks).verdict, Verdict::RankDeficient);
    }
}
