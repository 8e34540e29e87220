use crate::error::{Error, Result};
use crate::geometry::{Plane, ValidatedGeometry};
use crate::inverse::ReconstructionConfig;
use crate::scalar::{sinhc, Real};
use crate::spectral::{crop_center, forward_transform, inverse_transform, zero_pad, Component, ScalarField2D};

use super::{CurrentLayer, FieldMap};

/// Fourier-domain slab kernel `(1/k)·sinh(kδ/2)·exp(−k·dz)`, equal to
/// `δ/2` at `k = 0`. Maps J (A/m²) to H (A/m).
pub fn green_kernel<T: Real>(k: T, delta: T, dz: T) -> T {
    let half = delta / T::lit(2.0);
    let x = k * half;
    if x < T::one() {
        half * sinhc(x) * (-k * dz).exp()
    } else {
        // dz > δ/2, so both exponents are negative
        ((-k * (dz - half)).exp() - (-k * (dz + half)).exp()) / (k + k)
    }
}

/// Thin-sheet approximation `(δ/2)·exp(−k·dz)` of [`green_kernel`].
pub(crate) fn thin_kernel<T: Real>(k: T, delta: T, dz: T) -> T {
    delta / T::lit(2.0) * (-k * dz).exp()
}

/// Flux density produced at `target` by one layer, via the closed-form
/// kernel. `B_x` follows from `Ĵ_y` and `B_y` from `−Ĵ_x`, both signed by the
/// side of the stack the plane is on.
pub fn forward_spectral<T: Real>(
    layer: &CurrentLayer<T>,
    g: &ValidatedGeometry<T>,
    target: Plane,
    cfg: &ReconstructionConfig,
) -> Result<FieldMap<T>> {
    forward_with_kernel(layer, g, target, cfg.pad_factor, green_kernel)
}

/// [`forward_spectral`] with the thin-sheet kernel, for limit checks.
pub fn forward_spectral_thin<T: Real>(
    layer: &CurrentLayer<T>,
    g: &ValidatedGeometry<T>,
    target: Plane,
    cfg: &ReconstructionConfig,
) -> Result<FieldMap<T>> {
    forward_with_kernel(layer, g, target, cfg.pad_factor, thin_kernel)
}

fn forward_with_kernel<T: Real>(
    layer: &CurrentLayer<T>,
    g: &ValidatedGeometry<T>,
    target: Plane,
    pad_factor: usize,
    kernel: fn(T, T, T) -> T,
) -> Result<FieldMap<T>> {
    if !layer.jx().same_lattice(layer.jy()) {
        return Err(Error::GridMismatch("jx and jy lattices differ".into()));
    }
    let (nx, ny) = (layer.jy().nx(), layer.jy().ny());
    let delta = g.thickness(layer.layer());
    let dz = g.distance(target, layer.layer());
    if !(dz > delta / T::lit(2.0)) {
        return Err(Error::InvalidPlane(format!("{target:?} is not outside the source slab")));
    }
    let sign = g.side(target);
    let mu0 = T::mu0();

    let propagate = |j: &ScalarField2D<T>, factor: T, component: Component| -> Result<ScalarField2D<T>> {
        let spec = forward_transform(&zero_pad(j, pad_factor)?)?;
        let out = spec.apply_transfer(|k| factor * kernel(k, delta, dz));
        let b = crop_center(&inverse_transform(&out)?, nx, ny)?;
        Ok(b.with_component(component).with_z(g.plane_z(target)))
    };

    let bx = propagate(layer.jy(), sign * mu0, Component::Bx)?;
    let by = propagate(layer.jx(), -sign * mu0, Component::By)?;
    FieldMap::new(target, bx, by)
}
