//! Reconstruction of planar current densities in two stacked layers from
//! magnetic flux density maps measured in one plane below and one plane above
//! the stack.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the element type for the common cases. File I/O and
//! the command-line workflows work in `f64`.

pub mod error;
pub mod forward;
pub mod geometry;
pub mod inverse;
pub mod io;
pub mod scalar;
pub mod scenarios;
pub mod spectral;

pub use error::{Error, Result};
pub use forward::{forward_direct, forward_spectral, green_kernel, superpose};
pub use geometry::{validate_geometry, Layer, Plane};
pub use inverse::{
    continuation_matrix, detect_rank_deficiency, invert_matrix, reconstruct_two_layer, DcPolicy, KCut,
    ReconstructionConfig, Verdict,
};
pub use scalar::Real;
pub use spectral::{Component, WindowSpec};

pub type StackGeometry = geometry::StackGeometry<f64>;
pub type ValidatedGeometry = geometry::ValidatedGeometry<f64>;
pub type ScalarField2D = spectral::ScalarField2D<f64>;
pub type Spectrum2D = spectral::Spectrum2D<f64>;
pub type CurrentLayer = forward::CurrentLayer<f64>;
pub type FieldMap = forward::FieldMap<f64>;
pub type ContinuationMatrix = inverse::ContinuationMatrix<f64>;
pub type Reconstruction = inverse::Reconstruction<f64>;

pub type StackGeometryF32 = geometry::StackGeometry<f32>;
pub type ValidatedGeometryF32 = geometry::ValidatedGeometry<f32>;
pub type ScalarField2DF32 = spectral::ScalarField2D<f32>;
pub type Spectrum2DF32 = spectral::Spectrum2D<f32>;
pub type CurrentLayerF32 = forward::CurrentLayer<f32>;
pub type FieldMapF32 = forward::FieldMap<f32>;
pub type ContinuationMatrixF32 = inverse::ContinuationMatrix<f32>;
