use rustfft::num_complex::Complex;

use crate::error::{Error, Result};
use crate::forward::{CurrentLayer, FieldMap};
use crate::geometry::{Layer, Plane, ValidatedGeometry};
use crate::scalar::Real;
use crate::spectral::{
    apply_window, crop_center, forward_transform, inverse_transform, lowpass_factor, zero_pad, Component,
    ScalarField2D, Spectrum2D, Taper,
};

use super::config::{DcPolicy, ReconstructionConfig};
use super::cutoff::resolve_k_cut;
use super::matrix::TwoLayerSolution;

/// Both reconstructed layers and the cutoff that produced them.
#[derive(Debug, Clone)]
pub struct Reconstruction<T> {
    pub s1: CurrentLayer<T>,
    pub s2: CurrentLayer<T>,
    pub k_cut: T,
}

impl<T: Real> Reconstruction<T> {
    pub fn layer(&self, layer: Layer) -> &CurrentLayer<T> {
        match layer {
            Layer::S1 => &self.s1,
            Layer::S2 => &self.s2,
        }
    }
}

fn check_maps<T: Real>(m1: &FieldMap<T>, m2: &FieldMap<T>) -> Result<()> {
    if m1.plane() != Plane::M1 || m2.plane() != Plane::M2 {
        return Err(Error::InvalidPlane(format!(
            "expected maps at (M1, M2), got ({:?}, {:?})",
            m1.plane(),
            m2.plane()
        )));
    }
    let (a, b) = (m1.bx(), m2.bx());
    if !a.same_lattice(b) || !a.same_lattice(m1.by()) || !b.same_lattice(m2.by()) {
        return Err(Error::GridMismatch(format!(
            "M1 {}×{} (dx {}, dy {}) vs M2 {}×{} (dx {}, dy {})",
            a.nx(),
            a.ny(),
            a.dx(),
            a.dy(),
            b.nx(),
            b.ny(),
            b.dx(),
            b.dy()
        )));
    }
    Ok(())
}

/// Windowed, padded H spectrum of one measured component.
fn field_spectrum<T: Real>(b: &ScalarField2D<T>, cfg: &ReconstructionConfig) -> Result<Spectrum2D<T>> {
    let h = apply_window(b, cfg.window).scale(T::one() / T::mu0());
    forward_transform(&zero_pad(&h, cfg.pad_factor)?)
}

/// Solves every bin for one current component from the "x-type" field pair.
/// For `Ĵ_y` the pair is `(Ĥx,M1, Ĥx,M2)`; for `Ĵ_x` it is `(−Ĥy,M1, −Ĥy,M2)`.
fn solve_component<T: Real>(
    h1: &Spectrum2D<T>,
    h2: &Spectrum2D<T>,
    g: &ValidatedGeometry<T>,
    k_cut: T,
    rolloff: T,
    taper: Taper,
    dc: DcPolicy,
) -> Result<(Spectrum2D<T>, Spectrum2D<T>)> {
    let mut j1 = Spectrum2D::zeros(h1.nkx(), h1.nky(), h1.origin());
    let mut j2 = j1.clone();
    let nkx = h1.nkx();
    let zero = Complex::new(T::zero(), T::zero());
    let half = T::lit(0.5);
    for idx in 0..h1.values().len() {
        let k = h1.k(idx % nkx, idx / nkx);
        let (a, b) = (h1.values()[idx], h2.values()[idx]);
        let (u, v) = if k == T::zero() {
            match dc {
                DcPolicy::MinimumNorm => {
                    // the two DC readings of (δ₁/2)Ĵ₁ + (δ₂/2)Ĵ₂
                    let r = (b - a) * half;
                    let (w1, w2) = (g.delta1() * half, g.delta2() * half);
                    let norm = w1 * w1 + w2 * w2;
                    (r * (w1 / norm), r * (w2 / norm))
                }
                // the border policy shifts in space after the inverse transform
                DcPolicy::Zero | DcPolicy::ZeroBorder => (zero, zero),
            }
        } else {
            let w = lowpass_factor(k, k_cut, rolloff, taper);
            if w == T::zero() {
                (zero, zero)
            } else {
                let sol = TwoLayerSolution::new(k, g);
                if !sol.is_finite() {
                    return Err(Error::NonFiniteResult);
                }
                let (u, v) = sol.apply(a, b);
                (u * w, v * w)
            }
        };
        j1.values_mut()[idx] = u;
        j2.values_mut()[idx] = v;
    }
    Ok((j1, j2))
}

/// Mean over samples outside the measured window, or over the outer band
/// of an unpadded grid.
fn border_mean<T: Real>(f: &ScalarField2D<T>, nx: usize, ny: usize) -> T {
    let (px, py) = (f.nx(), f.ny());
    let (x0, x1, y0, y1) = if px > nx || py > ny {
        let (ox, oy) = ((px - nx) / 2, (py - ny) / 2);
        (ox, ox + nx, oy, oy + ny)
    } else {
        let band = (nx.min(ny) / 16).max(1);
        (band, px.saturating_sub(band), band, py.saturating_sub(band))
    };
    let mut sum = T::zero();
    let mut count = 0usize;
    for j in 0..py {
        for i in 0..px {
            if i < x0 || i >= x1 || j < y0 || j >= y1 {
                sum = sum + f.get(i, j);
                count += 1;
            }
        }
    }
    if count == 0 {
        T::zero()
    } else {
        sum / T::from_usize_lossy(count)
    }
}

fn to_layer_field<T: Real>(
    s: &Spectrum2D<T>,
    nx: usize,
    ny: usize,
    z: T,
    component: Component,
    dc: DcPolicy,
) -> Result<ScalarField2D<T>> {
    let mut full = inverse_transform(s)?;
    if dc == DcPolicy::ZeroBorder {
        let m = border_mean(&full, nx, ny);
        full.values_mut().iter_mut().for_each(|v| *v = *v - m);
    }
    let out = crop_center(&full, nx, ny)?;
    if out.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteResult);
    }
    Ok(out.with_z(z).with_component(component))
}

/// Reconstructs the sheet currents of both layers from `B` maps measured at
/// `M1` (below) and `M2` (above).
///
/// The maps are windowed, zero-padded and converted to `H`; each k-bin is
/// solved with the explicit two-layer formula, low-pass filtered at the
/// resolved cutoff, and the singular DC bin is handled by `cfg.dc_policy`.
pub fn reconstruct_two_layer<T: Real>(
    m1: &FieldMap<T>,
    m2: &FieldMap<T>,
    g: &ValidatedGeometry<T>,
    cfg: &ReconstructionConfig,
) -> Result<Reconstruction<T>> {
    cfg.validate()?;
    check_maps(m1, m2)?;
    let k_cut: T = resolve_k_cut(cfg, g)?;
    let rolloff = T::lit(cfg.rolloff);
    let (nx, ny) = (m1.bx().nx(), m1.bx().ny());

    let hx1 = field_spectrum(m1.bx(), cfg)?;
    let hx2 = field_spectrum(m2.bx(), cfg)?;
    let hy1 = field_spectrum(m1.by(), cfg)?;
    let hy2 = field_spectrum(m2.by(), cfg)?;
    let neg = |s: &Spectrum2D<T>| {
        let mut s = s.clone();
        s.values_mut().iter_mut().for_each(|v| *v = -*v);
        s
    };

    let (jy1, jy2) = solve_component(&hx1, &hx2, g, k_cut, rolloff, cfg.k_taper, cfg.dc_policy)?;
    let (jx1, jx2) = solve_component(&neg(&hy1), &neg(&hy2), g, k_cut, rolloff, cfg.k_taper, cfg.dc_policy)?;

    let layer = |which: Layer, jx: &Spectrum2D<T>, jy: &Spectrum2D<T>| -> Result<CurrentLayer<T>> {
        let z = g.layer_z(which);
        CurrentLayer::new(
            which,
            to_layer_field(jx, nx, ny, z, Component::Jx, cfg.dc_policy)?,
            to_layer_field(jy, nx, ny, z, Component::Jy, cfg.dc_policy)?,
        )
    };
    Ok(Reconstruction {
        s1: layer(Layer::S1, &jx1, &jy1)?,
        s2: layer(Layer::S2, &jx2, &jy2)?,
        k_cut,
    })
}
