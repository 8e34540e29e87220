//! Two-layer / two-plane stack geometry.
//!
//! Every length is in metres. Layer positions refer to the mid-plane of each
//! slab; the measurement planes sit strictly outside the stack, `M1` below and
//! `M2` above. Only separations enter the kernels, so the absolute origin of
//! `z` is free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Current-carrying layer of the stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layer {
    S1,
    S2,
}

impl Layer {
    pub const BOTH: [Layer; 2] = [Layer::S1, Layer::S2];

    pub fn index(self) -> usize {
        match self {
            Layer::S1 => 0,
            Layer::S2 => 1,
        }
    }
}

/// Measurement plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Plane {
    M1,
    M2,
}

impl Plane {
    pub const BOTH: [Plane; 2] = [Plane::M1, Plane::M2];

    pub fn index(self) -> usize {
        match self {
            Plane::M1 => 0,
            Plane::M2 => 1,
        }
    }
}

/// Raw plane and layer placement, possibly invalid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StackGeometry<T> {
    /// Mid-plane of layer S1.
    pub z_s1: T,
    /// Mid-plane of layer S2.
    pub z_s2: T,
    /// Measurement plane M1 (below the stack).
    pub z_m1: T,
    /// Measurement plane M2 (above the stack).
    pub z_m2: T,
    /// Thickness of S1.
    pub delta1: T,
    /// Thickness of S2.
    pub delta2: T,
}

impl<T: Real> StackGeometry<T> {
    /// Builds a centred stack from the separations used throughout the
    /// literature: layer spacing, near-plane distances and thicknesses.
    pub fn from_separations(spacing: T, dist1: T, dist2: T, delta1: T, delta2: T) -> Self {
        let half = spacing / T::lit(2.0);
        StackGeometry {
            z_s1: -half,
            z_s2: half,
            z_m1: -half - dist1,
            z_m2: half + dist2,
            delta1,
            delta2,
        }
    }

    pub fn layer_z(&self, layer: Layer) -> T {
        match layer {
            Layer::S1 => self.z_s1,
            Layer::S2 => self.z_s2,
        }
    }

    pub fn plane_z(&self, plane: Plane) -> T {
        match plane {
            Plane::M1 => self.z_m1,
            Plane::M2 => self.z_m2,
        }
    }

    pub fn thickness(&self, layer: Layer) -> T {
        match layer {
            Layer::S1 => self.delta1,
            Layer::S2 => self.delta2,
        }
    }

    pub fn validate(&self) -> Result<ValidatedGeometry<T>> {
        validate_geometry(self)
    }
}

/// Geometry whose invariants have been checked, with derived separations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedGeometry<T> {
    raw: StackGeometry<T>,
    spacing: T,
    dist1: T,
    dist2: T,
}

/// Checks the stack invariants and derives `Δ_S`, `Δ₁`, `Δ₂`.
pub fn validate_geometry<T: Real>(g: &StackGeometry<T>) -> Result<ValidatedGeometry<T>> {
    let all = [g.z_s1, g.z_s2, g.z_m1, g.z_m2, g.delta1, g.delta2];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    for d in [g.delta1, g.delta2] {
        if d <= T::zero() {
            return Err(Error::NonPositiveThickness(d.to_f64_lossy()));
        }
    }
    let two = T::lit(2.0);
    if g.z_s1 >= g.z_s2 {
        return Err(Error::LayerOverlap(format!(
            "S1 (z = {}) must lie below S2 (z = {})",
            g.z_s1, g.z_s2
        )));
    }
    if g.z_s2 - g.z_s1 <= (g.delta1 + g.delta2) / two {
        return Err(Error::LayerOverlap(format!(
            "spacing {} does not exceed the mean thickness {}",
            g.z_s2 - g.z_s1,
            (g.delta1 + g.delta2) / two
        )));
    }
    let bottom = g.z_s1 - g.delta1 / two;
    let top = g.z_s2 + g.delta2 / two;
    if !(g.z_m1 < bottom) {
        return Err(Error::InvasivePlane(format!(
            "M1 (z = {}) must lie strictly below the stack bottom {}",
            g.z_m1, bottom
        )));
    }
    if !(top < g.z_m2) {
        return Err(Error::InvasivePlane(format!(
            "M2 (z = {}) must lie strictly above the stack top {}",
            g.z_m2, top
        )));
    }
    Ok(ValidatedGeometry {
        raw: *g,
        spacing: g.z_s2 - g.z_s1,
        dist1: g.z_s1 - g.z_m1,
        dist2: g.z_m2 - g.z_s2,
    })
}

impl<T: Real> ValidatedGeometry<T> {
    pub fn raw(&self) -> &StackGeometry<T> {
        &self.raw
    }

    /// Layer spacing `Δ_S = z_s2 − z_s1`.
    pub fn spacing(&self) -> T {
        self.spacing
    }

    /// Distance from M1 to S1.
    pub fn dist1(&self) -> T {
        self.dist1
    }

    /// Distance from S2 to M2.
    pub fn dist2(&self) -> T {
        self.dist2
    }

    pub fn delta1(&self) -> T {
        self.raw.delta1
    }

    pub fn delta2(&self) -> T {
        self.raw.delta2
    }

    pub fn thickness(&self, layer: Layer) -> T {
        self.raw.thickness(layer)
    }

    pub fn layer_z(&self, layer: Layer) -> T {
        self.raw.layer_z(layer)
    }

    pub fn plane_z(&self, plane: Plane) -> T {
        self.raw.plane_z(plane)
    }

    /// Unsigned distance between a plane and a layer mid-plane.
    pub fn distance(&self, plane: Plane, layer: Layer) -> T {
        match (plane, layer) {
            (Plane::M1, Layer::S1) => self.dist1,
            (Plane::M1, Layer::S2) => self.dist1 + self.spacing,
            (Plane::M2, Layer::S1) => self.dist2 + self.spacing,
            (Plane::M2, Layer::S2) => self.dist2,
        }
    }

    /// +1 for the plane above the stack, −1 for the plane below.
    pub fn side(&self, plane: Plane) -> T {
        match plane {
            Plane::M1 => -T::one(),
            Plane::M2 => T::one(),
        }
    }
}
