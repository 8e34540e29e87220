use serde::{Deserialize, Serialize};

use super::field::ScalarField2D;
use super::transform::Spectrum2D;
use super::window::blackman_harris_at;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Embeds `f` centred in a `(factor·nx) × (factor·ny)` zero grid.
pub fn zero_pad<T: Real>(f: &ScalarField2D<T>, factor: usize) -> Result<ScalarField2D<T>> {
    if factor == 0 {
        return Err(Error::InvalidParameter("padding factor must be at least 1".into()));
    }
    if factor == 1 {
        return Ok(f.clone());
    }
    let (nx, ny) = (f.nx(), f.ny());
    let (px, py) = (nx * factor, ny * factor);
    let (ox, oy) = ((px - nx) / 2, (py - ny) / 2);
    let mut values = vec![T::zero(); px * py];
    for j in 0..ny {
        let dst = (j + oy) * px + ox;
        values[dst..dst + nx].copy_from_slice(f.row(j));
    }
    Ok(ScalarField2D::from_parts_unchecked(f.meta(), px, py, values))
}

/// Extracts the centred `nx × ny` window placed by [`zero_pad`].
pub fn crop_center<T: Real>(f: &ScalarField2D<T>, nx: usize, ny: usize) -> Result<ScalarField2D<T>> {
    if nx > f.nx() || ny > f.ny() || nx == 0 || ny == 0 {
        return Err(Error::ShapeMismatch(format!(
            "cannot crop {nx}×{ny} out of {}×{}",
            f.nx(),
            f.ny()
        )));
    }
    let (ox, oy) = ((f.nx() - nx) / 2, (f.ny() - ny) / 2);
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        values.extend_from_slice(&f.row(j + oy)[ox..ox + nx]);
    }
    Ok(ScalarField2D::from_parts_unchecked(f.meta(), nx, ny, values))
}

/// Shape of the transition band of the low-pass filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Taper {
    #[default]
    Cosine,
    BlackmanHarris,
}

/// Low-pass weight at wavenumber `k`: 1 up to `k_cut·(1 − rolloff)`, 0 from
/// `k_cut` on, tapered in between.
pub fn lowpass_factor<T: Real>(k: T, k_cut: T, rolloff: T, taper: Taper) -> T {
    if k >= k_cut {
        return T::zero();
    }
    let start = k_cut * (T::one() - rolloff);
    if k <= start {
        return T::one();
    }
    let t = (k - start) / (k_cut - start);
    match taper {
        Taper::Cosine => T::lit(0.5) * (T::one() + (T::PI() * t).cos()),
        Taper::BlackmanHarris => {
            let floor = blackman_harris_at(T::zero());
            let w = blackman_harris_at(T::PI() * (T::one() - t));
            ((w - floor) / (T::one() - floor)).max(T::zero()).min(T::one())
        }
    }
}

fn check_lowpass<T: Real>(k_cut: T, rolloff: T) -> Result<()> {
    if !(k_cut > T::zero()) {
        return Err(Error::InvalidParameter(format!("k_cut must be positive (got {k_cut})")));
    }
    if !(rolloff >= T::zero() && rolloff < T::one()) {
        return Err(Error::InvalidParameter(format!("rolloff must lie in [0, 1) (got {rolloff})")));
    }
    Ok(())
}

/// Radial low-pass with a cosine transition band.
pub fn lowpass_filter<T: Real>(s: &Spectrum2D<T>, k_cut: T, rolloff: T) -> Result<Spectrum2D<T>> {
    lowpass_filter_with(s, k_cut, rolloff, Taper::Cosine)
}

pub fn lowpass_filter_with<T: Real>(s: &Spectrum2D<T>, k_cut: T, rolloff: T, taper: Taper) -> Result<Spectrum2D<T>> {
    check_lowpass(k_cut, rolloff)?;
    Ok(s.apply_transfer(|k| lowpass_factor(k, k_cut, rolloff, taper)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, Component};

    fn bumpy(nx: usize, ny: usize) -> ScalarField2D<f64> {
        ScalarField2D::from_fn(nx, ny, 1e-3, 1e-3, 0.0, Component::Bx, |x: f64, y: f64| {
            (x * 900.0).sin() + (y * 1700.0).cos() + 0.3
        })
        .unwrap()
    }

    #[test]
    fn pad_factor_one_is_identity() {
        let f = bumpy(10, 6);
        assert_eq!(zero_pad(&f, 1).unwrap(), f);
        assert!(zero_pad(&f, 0).is_err());
    }

    #[test]
    fn pad_centres_the_original() {
        let f = bumpy(128, 128);
        let p = zero_pad(&f, 2).unwrap();
        assert_eq!((p.nx(), p.ny()), (256, 256));
        assert_eq!(p.dx(), f.dx());
        assert_eq!(p.get(64, 64), f.get(0, 0));
        assert_eq!(p.get(64 + 127, 64 + 127), f.get(127, 127));
        assert_eq!(p.get(63, 100), 0.0);
        // coordinates of the centre sample are unchanged
        assert_eq!(p.x_coord(128), f.x_coord(64));
        assert_eq!(p.sum(), f.sum());
        assert_eq!(crop_center(&p, 128, 128).unwrap(), f);
    }

    #[test]
    fn pad_preserves_sum_for_odd_shapes() {
        let f = bumpy(7, 5);
        let p = zero_pad(&f, 3).unwrap();
        assert_eq!(p.sum(), f.sum());
        assert_eq!(crop_center(&p, 7, 5).unwrap(), f);
    }

    #[test]
    fn cutoff_above_nyquist_is_identity() {
        let s = forward_transform(&bumpy(16, 16)).unwrap();
        let kmax = s.k_magnitudes().into_iter().fold(0.0, f64::max);
        let out = lowpass_filter(&s, kmax * 1.01, 0.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn tiny_cutoff_keeps_only_dc() {
        let s = forward_transform(&bumpy(16, 16)).unwrap();
        let out = lowpass_filter(&s, 1e-9, 0.0).unwrap();
        assert_eq!(out.get(0, 0), s.get(0, 0));
        assert!(out.values()[1..].iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn taper_is_monotone_and_bounded() {
        for taper in [Taper::Cosine, Taper::BlackmanHarris] {
            let mut last = 1.0;
            for i in 0..=1000 {
                let k = i as f64 * 0.2;
                let w = lowpass_factor(k, 150.0, 0.4, taper);
                assert!((0.0..=1.0).contains(&w));
                assert!(w <= last + 1e-15);
                last = w;
            }
            assert_eq!(lowpass_factor(90.0, 150.0, 0.4, taper), 1.0);
            assert_eq!(lowpass_factor(150.0, 150.0, 0.4, taper), 0.0);
        }
    }

    #[test]
    fn filtering_never_increases_bin_magnitude() {
        let s = forward_transform(&bumpy(32, 24)).unwrap();
        let out = lowpass_filter_with(&s, 2000.0, 0.5, Taper::BlackmanHarris).unwrap();
        for (a, b) in out.values().iter().zip(s.values()) {
            assert!(a.norm() <= b.norm());
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        let s = forward_transform(&bumpy(4, 4)).unwrap();
        assert!(lowpass_filter(&s, 0.0, 0.1).is_err());
        assert!(lowpass_filter(&s, 10.0, 1.0).is_err());
    }
}
