//! Uniform grids, the continuous-convention 2D Fourier transform, windows and
//! k-space filters.

mod field;
mod filter;
mod transform;
mod window;

pub use field::{Component, GridMeta, ScalarField2D};
pub use filter::{crop_center, lowpass_factor, lowpass_filter, lowpass_filter_with, zero_pad, Taper};
pub use transform::{forward_transform, inverse_transform, k_axis, Spectrum2D};
pub use window::{apply_window, window_weights, WindowSpec};
