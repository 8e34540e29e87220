//! Forward models: layer currents → measurement-plane flux density.
//!
//! [`forward_spectral`] applies the closed-form slab kernel in k-space;
//! [`forward_direct`] integrates the Biot–Savart law by quadrature and serves
//! as its independent oracle.

mod direct;
mod spectral_model;

pub use direct::{biot_savart_slabs, forward_direct, forward_direct_stack, Slab};
pub use spectral_model::{forward_spectral, forward_spectral_thin, green_kernel};

use crate::error::{Error, Result};
use crate::geometry::{Layer, Plane};
use crate::scalar::Real;
use crate::spectral::{Component, ScalarField2D};

/// Sheet current density (A/m²) of one layer, uniform across its thickness
/// and without a z-component.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentLayer<T> {
    layer: Layer,
    jx: ScalarField2D<T>,
    jy: ScalarField2D<T>,
}

impl<T: Real> CurrentLayer<T> {
    pub fn new(layer: Layer, jx: ScalarField2D<T>, jy: ScalarField2D<T>) -> Result<Self> {
        if !jx.same_lattice(&jy) || jx.z() != jy.z() {
            return Err(Error::GridMismatch("jx and jy of a layer must share one lattice".into()));
        }
        Ok(CurrentLayer {
            layer,
            jx: jx.with_component(Component::Jx),
            jy: jy.with_component(Component::Jy),
        })
    }

    /// Layer carrying only a y-directed current.
    pub fn from_jy(layer: Layer, jy: ScalarField2D<T>) -> Self {
        let jx = jy.map(|_| T::zero()).with_component(Component::Jx);
        CurrentLayer {
            layer,
            jx,
            jy: jy.with_component(Component::Jy),
        }
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }

    pub fn jx(&self) -> &ScalarField2D<T> {
        &self.jx
    }

    pub fn jy(&self) -> &ScalarField2D<T> {
        &self.jy
    }

    pub fn scale(&self, s: T) -> Self {
        CurrentLayer {
            layer: self.layer,
            jx: self.jx.scale(s),
            jy: self.jy.scale(s),
        }
    }
}

/// In-plane flux density (T) sampled at one measurement plane.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap<T> {
    plane: Plane,
    bx: ScalarField2D<T>,
    by: ScalarField2D<T>,
}

impl<T: Real> FieldMap<T> {
    pub fn new(plane: Plane, bx: ScalarField2D<T>, by: ScalarField2D<T>) -> Result<Self> {
        if !bx.same_lattice(&by) || bx.z() != by.z() {
            return Err(Error::GridMismatch("bx and by of a field map must share one lattice".into()));
        }
        Ok(FieldMap {
            plane,
            bx: bx.with_component(Component::Bx),
            by: by.with_component(Component::By),
        })
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn bx(&self) -> &ScalarField2D<T> {
        &self.bx
    }

    pub fn by(&self) -> &ScalarField2D<T> {
        &self.by
    }

    pub fn scale(&self, s: T) -> Self {
        FieldMap {
            plane: self.plane,
            bx: self.bx.scale(s),
            by: self.by.scale(s),
        }
    }
}

/// Componentwise sum of maps taken at the same plane.
pub fn superpose<T: Real>(fields: &[FieldMap<T>]) -> Result<FieldMap<T>> {
    let (first, rest) = fields
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("nothing to superpose".into()))?;
    let mut acc = first.clone();
    for f in rest {
        if f.plane != acc.plane {
            return Err(Error::GridMismatch(format!(
                "cannot superpose maps at {:?} and {:?}",
                acc.plane, f.plane
            )));
        }
        acc.bx = acc.bx.add(&f.bx)?;
        acc.by = acc.by.add(&f.by)?;
    }
    Ok(acc)
}
