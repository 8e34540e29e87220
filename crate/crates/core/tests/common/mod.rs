#![allow(dead_code)]

use magstack::forward::{forward_spectral, superpose, CurrentLayer, FieldMap};
use magstack::geometry::{Layer, Plane, StackGeometry, ValidatedGeometry};
use magstack::inverse::ReconstructionConfig;
use magstack::scenarios::{rasterize_layer, GridSpec, StripSpec};

pub fn reference_geometry() -> ValidatedGeometry<f64> {
    StackGeometry::from_separations(11e-3, 14e-3, 13e-3, 1e-3, 1.2e-3).validate().unwrap()
}

pub fn grid(n: usize) -> GridSpec<f64> {
    GridSpec {
        nx: n,
        ny: n,
        extent_x: 0.4,
        extent_y: 0.4,
    }
}

pub fn strip(layer: Layer, current: f64, width: f64, cx: f64, smoothing: f64) -> StripSpec<f64> {
    StripSpec {
        layer,
        total_current: current,
        width_x: width,
        length_y: 0.24,
        center: (cx, 0.0),
        edge_smoothing: smoothing,
    }
}

/// The two strips of the reference experiment with the given edge smoothing.
pub fn two_strips(smoothing: f64) -> Vec<StripSpec<f64>> {
    vec![
        strip(Layer::S1, -0.8, 0.08, -0.03, smoothing),
        strip(Layer::S2, 0.7, 0.12, 0.03, smoothing),
    ]
}

pub fn layers(strips: &[StripSpec<f64>], n: usize, g: &ValidatedGeometry<f64>) -> [CurrentLayer<f64>; 2] {
    [
        rasterize_layer(strips, Layer::S1, &grid(n), g).unwrap(),
        rasterize_layer(strips, Layer::S2, &grid(n), g).unwrap(),
    ]
}

/// Spectral fields of both layers at both planes.
pub fn fields(l: &[CurrentLayer<f64>; 2], g: &ValidatedGeometry<f64>, cfg: &ReconstructionConfig) -> [FieldMap<f64>; 2] {
    let at = |p: Plane| {
        superpose(&[
            forward_spectral(&l[0], g, p, cfg).unwrap(),
            forward_spectral(&l[1], g, p, cfg).unwrap(),
        ])
        .unwrap()
    };
    [at(Plane::M1), at(Plane::M2)]
}

pub fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Single-layer inversion of `B_x` at `M1` for a source in `S1` only: divide
/// each bin by the slab kernel (DC included), then low-pass like the
/// two-layer path. Unpadded and unwindowed.
pub fn single_layer_division(
    m1: &FieldMap<f64>,
    g: &ValidatedGeometry<f64>,
    k_cut: f64,
    rolloff: f64,
) -> magstack::ScalarField2D {
    use magstack::spectral::{forward_transform, inverse_transform, lowpass_factor, Taper};
    use magstack::Real;
    let h = m1.bx().scale(1.0 / f64::mu0());
    let mut s = forward_transform(&h).unwrap();
    let (delta, dz) = (g.delta1(), g.distance(Plane::M1, Layer::S1));
    let nkx = s.nkx();
    for idx in 0..s.values().len() {
        let k = s.k(idx % nkx, idx / nkx);
        let w = lowpass_factor(k, k_cut, rolloff, Taper::Cosine);
        let kernel = -magstack::green_kernel(k, delta, dz);
        s.values_mut()[idx] *= w / kernel;
    }
    inverse_transform(&s).unwrap()
}
