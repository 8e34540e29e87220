//! Synthetic ground truth: smoothed rectangular strips and field noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{CurrentLayer, FieldMap};
use crate::geometry::{Layer, ValidatedGeometry};
use crate::scalar::Real;
use crate::spectral::{Component, ScalarField2D};

/// Name of the noise generator, recorded in run manifests.
pub const NOISE_PRNG: &str = "ChaCha8Rng (rand_chacha 0.9) seeded via seed_from_u64; StandardNormal (rand_distr 0.5)";

/// Uniform lattice descriptor: `n` samples over `extent` metres per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub nx: usize,
    pub ny: usize,
    pub extent_x: T,
    pub extent_y: T,
}

impl<T: Real> GridSpec<T> {
    pub fn dx(&self) -> T {
        self.extent_x / T::from_usize_lossy(self.nx)
    }

    pub fn dy(&self) -> T {
        self.extent_y / T::from_usize_lossy(self.ny)
    }

    pub fn zeros(&self, z: T, component: Component) -> Result<ScalarField2D<T>> {
        ScalarField2D::zeros(self.nx, self.ny, self.dx(), self.dy(), z, component)
    }
}

/// A y-directed current strip with raised-cosine edges. The taper is
/// centred on the nominal edges, so the integral across the strip equals
/// `total_current` regardless of `edge_smoothing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripSpec<T> {
    pub layer: Layer,
    /// Signed current in +y (A).
    pub total_current: T,
    pub width_x: T,
    pub length_y: T,
    pub center: (T, T),
    pub edge_smoothing: T,
}

/// Raised-cosine edge profile of half-width `half`, transition width `s`.
fn edge_profile<T: Real>(u: T, half: T, s: T) -> T {
    let u = u.abs();
    if s == T::zero() {
        return if u < half {
            T::one()
        } else if u == half {
            T::lit(0.5)
        } else {
            T::zero()
        };
    }
    let inner = half - s / T::lit(2.0);
    let outer = half + s / T::lit(2.0);
    if u <= inner {
        T::one()
    } else if u >= outer {
        T::zero()
    } else {
        T::lit(0.5) * (T::one() + (T::PI() * (u - inner) / s).cos())
    }
}

impl<T: Real> StripSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.width_x > T::zero() && self.length_y > T::zero()) {
            return Err(Error::InvalidParameter("strip width and length must be positive".into()));
        }
        let two = T::lit(2.0);
        if !(self.edge_smoothing >= T::zero() && self.edge_smoothing < self.width_x.min(self.length_y) / two) {
            return Err(Error::InvalidParameter(format!(
                "edge smoothing {} must lie in [0, min(width, length)/2)",
                self.edge_smoothing
            )));
        }
        if !self.total_current.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        Ok(())
    }

    /// Current density on the plateau, `I/(w·δ)`.
    pub fn plateau(&self, thickness: T) -> T {
        self.total_current / (self.width_x * thickness)
    }
}

/// Samples a strip's `J_y` onto `grid` in its layer; `J_x ≡ 0`.
pub fn rasterize_strip<T: Real>(
    s: &StripSpec<T>,
    grid: &GridSpec<T>,
    g: &ValidatedGeometry<T>,
) -> Result<CurrentLayer<T>> {
    s.validate()?;
    let template = grid.zeros(g.layer_z(s.layer), Component::Jy)?;
    let two = T::lit(2.0);
    let reach_x = s.width_x / two + s.edge_smoothing / two + s.edge_smoothing;
    let reach_y = s.length_y / two + s.edge_smoothing / two + s.edge_smoothing;
    let (x_lo, x_hi) = (template.x_coord(0), template.x_coord(grid.nx - 1));
    let (y_lo, y_hi) = (template.y_coord(0), template.y_coord(grid.ny - 1));
    let (cx, cy) = s.center;
    if cx - reach_x < x_lo || cx + reach_x > x_hi || cy - reach_y < y_lo || cy + reach_y > y_hi {
        return Err(Error::StripOutOfBounds(format!(
            "strip centred at ({cx}, {cy}) with reach ({reach_x}, {reach_y}) exceeds x ∈ [{x_lo}, {x_hi}], y ∈ [{y_lo}, {y_hi}]"
        )));
    }
    let plateau = s.plateau(g.thickness(s.layer));
    let jy = ScalarField2D::from_fn(grid.nx, grid.ny, grid.dx(), grid.dy(), template.z(), Component::Jy, |x, y| {
        if plateau == T::zero() {
            return T::zero();
        }
        plateau
            * edge_profile(x - cx, s.width_x / two, s.edge_smoothing)
            * edge_profile(y - cy, s.length_y / two, s.edge_smoothing)
    })?;
    Ok(CurrentLayer::from_jy(s.layer, jy))
}

/// Sum of all strips assigned to `layer` (a zero layer when there are none).
pub fn rasterize_layer<T: Real>(
    strips: &[StripSpec<T>],
    layer: Layer,
    grid: &GridSpec<T>,
    g: &ValidatedGeometry<T>,
) -> Result<CurrentLayer<T>> {
    let mut jy = grid.zeros(g.layer_z(layer), Component::Jy)?;
    for s in strips.iter().filter(|s| s.layer == layer) {
        jy = jy.add(rasterize_strip(s, grid, g)?.jy())?;
    }
    Ok(CurrentLayer::from_jy(layer, jy))
}

/// Adds independent N(0, σ²) noise to every sample of both components.
pub fn add_field_noise<T: Real>(f: &FieldMap<T>, sigma: T, seed: u64) -> Result<FieldMap<T>> {
    if !(sigma >= T::zero()) {
        return Err(Error::InvalidParameter(format!("noise sigma must be non-negative (got {sigma})")));
    }
    if sigma == T::zero() {
        return Ok(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noisy = |c: &ScalarField2D<T>| {
        c.map(|v| {
            let n: f64 = StandardNormal.sample(&mut rng);
            v + sigma * T::lit(n)
        })
    };
    let bx = noisy(f.bx());
    let by = noisy(f.by());
    FieldMap::new(f.plane(), bx, by)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Plane, StackGeometry};

    fn reference() -> ValidatedGeometry<f64> {
        StackGeometry::from_separations(11e-3, 14e-3, 13e-3, 1e-3, 1.2e-3).validate().unwrap()
    }

    fn grid() -> GridSpec<f64> {
        GridSpec {
            nx: 256,
            ny: 256,
            extent_x: 0.4,
            extent_y: 0.4,
        }
    }

    fn strip(layer: Layer, current: f64, width: f64, cx: f64) -> StripSpec<f64> {
        StripSpec {
            layer,
            total_current: current,
            width_x: width,
            length_y: 0.24,
            center: (cx, 0.0),
            edge_smoothing: 5e-3,
        }
    }

    #[test]
    fn plateau_value_for_s1() {
        let s = strip(Layer::S1, -0.8, 0.08, 0.0);
        assert!((s.plateau(1e-3) + 10_000.0).abs() < 1e-9);
        let layer = rasterize_strip(&s, &grid(), &reference()).unwrap();
        assert!((layer.jy().get(128, 128) + 10_000.0).abs() < 1e-9);
        assert!(layer.jx().values().iter().all(|&v| v == 0.0));
        assert_eq!(layer.jy().z(), -5.5e-3);
    }

    #[test]
    fn zero_current_gives_zero_layer() {
        let layer = rasterize_strip(&strip(Layer::S2, 0.0, 0.12, 0.0), &grid(), &reference()).unwrap();
        assert!(layer.jy().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn row_integral_recovers_total_current() {
        let g = reference();
        for s in [strip(Layer::S1, -0.8, 0.08, -0.03), strip(Layer::S2, 0.7, 0.12, 0.03)] {
            let layer = rasterize_strip(&s, &grid(), &g).unwrap();
            let row = layer.jy().row(128);
            let total: f64 = row.iter().sum::<f64>() * layer.jy().dx() * g.thickness(s.layer);
            assert!((total - s.total_current).abs() < 0.005 * s.total_current.abs(), "{total}");
        }
    }

    #[test]
    fn out_of_bounds_rejected() {
        let s = strip(Layer::S1, 1.0, 0.08, 0.18);
        assert!(matches!(rasterize_strip(&s, &grid(), &reference()), Err(Error::StripOutOfBounds(_))));
        let mut bad = strip(Layer::S1, 1.0, 0.08, 0.0);
        bad.edge_smoothing = 0.05;
        assert!(rasterize_strip(&bad, &grid(), &reference()).is_err());
    }

    #[test]
    fn rasterization_is_linear() {
        let g = reference();
        let a = strip(Layer::S1, -0.8, 0.08, -0.03);
        let b = strip(Layer::S1, 0.3, 0.05, 0.04);
        let both = rasterize_layer(&[a, b], Layer::S1, &grid(), &g).unwrap();
        let sum = rasterize_strip(&a, &grid(), &g)
            .unwrap()
            .jy()
            .add(rasterize_strip(&b, &grid(), &g).unwrap().jy())
            .unwrap();
        assert_eq!(both.jy().values(), sum.values());
        let none = rasterize_layer(&[a, b], Layer::S2, &grid(), &g).unwrap();
        assert!(none.jy().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn centred_strip_is_mirror_symmetric() {
        // grid with an odd count so x → −x maps samples onto samples
        let grid = GridSpec {
            nx: 101,
            ny: 64,
            extent_x: 0.202,
            extent_y: 0.4,
        };
        let s = strip(Layer::S1, 0.5, 0.08, 0.0);
        let layer = rasterize_strip(&s, &grid, &reference()).unwrap();
        let f = layer.jy();
        // x_i = (i − 50)·dx, mirror of i is 100 − i
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                assert!((f.get(i, j).abs() - f.get(100 - i, j).abs()).abs() < 1e-9);
            }
        }
    }

    fn field(n: usize) -> FieldMap<f64> {
        let bx = ScalarField2D::from_fn(n, n, 1e-3, 1e-3, 0.02, Component::Bx, |x, y| 1e-6 * (x - y)).unwrap();
        FieldMap::new(Plane::M2, bx.clone(), bx.scale(2.0)).unwrap()
    }

    #[test]
    fn zero_sigma_is_bitwise_identity() {
        let f = field(16);
        assert_eq!(add_field_noise(&f, 0.0, 9).unwrap(), f);
    }

    #[test]
    fn noise_has_requested_spread() {
        let f = field(256);
        let sigma = 2.5e-9;
        let n = add_field_noise(&f, sigma, 42).unwrap();
        for (noisy, clean) in [(n.bx(), f.bx()), (n.by(), f.by())] {
            let d: Vec<f64> = noisy.values().iter().zip(clean.values()).map(|(a, b)| a - b).collect();
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (d.len() - 1) as f64;
            assert!((var.sqrt() - sigma).abs() < 0.05 * sigma);
        }
    }

    #[test]
    fn same_seed_same_noise() {
        let f = field(32);
        assert_eq!(add_field_noise(&f, 1e-9, 5).unwrap(), add_field_noise(&f, 1e-9, 5).unwrap());
        assert_ne!(add_field_noise(&f, 1e-9, 5).unwrap(), add_field_noise(&f, 1e-9, 6).unwrap());
    }
}
