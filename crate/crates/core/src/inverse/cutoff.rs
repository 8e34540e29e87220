//! Amplification guard for the downward-continuation step.

use crate::error::{Error, Result};
use crate::geometry::ValidatedGeometry;
use crate::scalar::{sinhc, Real};

use super::config::{KCut, ReconstructionConfig};

/// Worst-case gain `(k/2)·csch(kδ_min/2)·csch(kΔ_S)·exp(k(Δ_max + Δ_S))` of
/// the two-layer solution at wavenumber `k > 0`.
pub fn worst_case_gain<T: Real>(k: T, g: &ValidatedGeometry<T>) -> T {
    let two = T::lit(2.0);
    let delta = g.delta1().min(g.delta2());
    let reach = g.dist1().max(g.dist2());
    let ds = g.spacing();
    let a = T::one() / (delta * sinhc(k * delta / two));
    a * two * (k * reach).exp() / -(-two * k * ds).exp_m1()
}

/// Wavenumber of minimum gain; the gain falls as `1/k` near zero and grows
/// exponentially at large `k`.
fn gain_minimum<T: Real>(g: &ValidatedGeometry<T>) -> T {
    let scale = g.spacing().min(g.delta1()).min(g.delta2());
    let (mut lo, mut hi) = ((T::lit(1e-6) / scale).ln(), (T::lit(50.0) / g.dist1().max(g.dist2())).ln());
    let lg = |t: T| worst_case_gain(t.exp(), g).ln();
    let phi = T::lit(0.618_033_988_749_894_8);
    for _ in 0..200 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if lg(a) < lg(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    ((lo + hi) / T::lit(2.0)).exp()
}

/// Largest `k` whose worst-case gain does not exceed `max_gain`.
pub fn auto_k_cut<T: Real>(g: &ValidatedGeometry<T>, max_gain: T) -> Result<T> {
    let k_min = gain_minimum(g);
    let g_min = worst_case_gain(k_min, g);
    if g_min > max_gain {
        return Err(Error::AutoCutoffUnattainable {
            max_gain: max_gain.to_f64_lossy(),
            min_gain: g_min.to_f64_lossy(),
        });
    }
    let mut lo = k_min;
    let mut hi = k_min + k_min;
    while worst_case_gain(hi, g) <= max_gain {
        lo = hi;
        hi = hi + hi;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if worst_case_gain(mid, g) <= max_gain {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Resolves the configured cutoff to rad/m.
pub fn resolve_k_cut<T: Real>(cfg: &ReconstructionConfig, g: &ValidatedGeometry<T>) -> Result<T> {
    match cfg.k_cut {
        KCut::Fixed(k) => Ok(T::lit(k)),
        KCut::Auto => auto_k_cut(g, T::lit(cfg.max_gain)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StackGeometry;

    fn reference() -> ValidatedGeometry<f64> {
        StackGeometry::from_separations(11e-3, 14e-3, 13e-3, 1e-3, 1.2e-3).validate().unwrap()
    }

    #[test]
    fn gain_matches_literal_expression() {
        let g = reference();
        for k in [5.0_f64, 60.0, 300.0] {
            let lit = k / 2.0 / (k * 0.5e-3).sinh() / (k * 0.011).sinh() * (k * 0.025).exp();
            assert!((worst_case_gain(k, &g) - lit).abs() < 1e-12 * lit);
        }
    }

    #[test]
    fn auto_cut_sits_on_the_gain_boundary() {
        let g = reference();
        let k = auto_k_cut(&g, 1e4).unwrap();
        assert!((worst_case_gain(k, &g) - 1e4).abs() < 1e-6 * 1e4);
        assert!(worst_case_gain(k * 1.001, &g) > 1e4);
        // root of gain(k) = 10⁴ found with a 30-digit solver
        assert!((k - 108.033_868_655_367_9).abs() < 1e-6, "k_cut = {k}");
    }

    #[test]
    fn auto_cut_grows_with_max_gain() {
        let g = reference();
        let a = auto_k_cut(&g, 1e4).unwrap();
        let b = auto_k_cut(&g, 1e8).unwrap();
        assert!(b > a);
    }

    #[test]
    fn unattainable_guard_reported() {
        let g = reference();
        assert!(matches!(auto_k_cut(&g, 10.0), Err(Error::AutoCutoffUnattainable { .. })));
    }
}
