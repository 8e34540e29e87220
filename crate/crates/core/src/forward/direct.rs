//! Direct volume quadrature of the Biot–Savart law.
//!
//! Each source cell is a `dx × dy × δ` box with constant current density,
//! split into `q³` subcells evaluated at their midpoints. The slab is
//! integrated in z numerically; nothing here depends on the k-space kernel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Plane, ValidatedGeometry};
use crate::scalar::Real;
use crate::spectral::{Component, ScalarField2D};

use super::{CurrentLayer, FieldMap};

struct SourcePoint<T> {
    x: T,
    y: T,
    z: T,
    /// current density × subcell volume
    wx: T,
    wy: T,
}

fn source_points<T: Real>(layer: &CurrentLayer<T>, z_mid: T, thickness: T, q: usize) -> Vec<SourcePoint<T>> {
    let (jx, jy) = (layer.jx(), layer.jy());
    let (dx, dy) = (jx.dx(), jx.dy());
    let qf = T::from_usize_lossy(q);
    let half = T::lit(0.5);
    let volume = dx * dy * thickness / (qf * qf * qf);
    let offsets: Vec<T> = (0..q).map(|a| (T::from_usize_lossy(a) + half) / qf - half).collect();
    let mut pts = Vec::new();
    for j in 0..jx.ny() {
        for i in 0..jx.nx() {
            let (cx, cy) = (jx.get(i, j), jy.get(i, j));
            if cx == T::zero() && cy == T::zero() {
                continue;
            }
            let (x0, y0) = (jx.x_coord(i), jx.y_coord(j));
            for &oz in &offsets {
                for &oy in &offsets {
                    for &ox in &offsets {
                        pts.push(SourcePoint {
                            x: x0 + ox * dx,
                            y: y0 + oy * dy,
                            z: z_mid + oz * thickness,
                            wx: cx * volume,
                            wy: cy * volume,
                        });
                    }
                }
            }
        }
    }
    pts
}

/// A slab of current: layer samples, mid-plane height and thickness.
#[derive(Debug, Clone, Copy)]
pub struct Slab<'a, T> {
    pub layer: &'a CurrentLayer<T>,
    pub z_mid: T,
    pub thickness: T,
}

/// Biot–Savart quadrature for a single layer; see [`forward_direct_stack`].
pub fn forward_direct<T: Real>(
    layer: &CurrentLayer<T>,
    g: &ValidatedGeometry<T>,
    target: Plane,
    quad_subdiv: usize,
) -> Result<FieldMap<T>> {
    forward_direct_stack(std::slice::from_ref(layer), g, target, quad_subdiv)
}

/// Flux density at the plane `target`, sampled on the lattice of the source
/// layers, from all `layers` integrated together.
pub fn forward_direct_stack<T: Real>(
    layers: &[CurrentLayer<T>],
    g: &ValidatedGeometry<T>,
    target: Plane,
    quad_subdiv: usize,
) -> Result<FieldMap<T>> {
    let slabs: Vec<Slab<'_, T>> = layers
        .iter()
        .map(|layer| Slab {
            layer,
            z_mid: g.layer_z(layer.layer()),
            thickness: g.thickness(layer.layer()),
        })
        .collect();
    let (bx, by) = biot_savart_slabs(&slabs, g.plane_z(target), quad_subdiv)?;
    FieldMap::new(target, bx, by)
}

/// `(B_x, B_y)` at height `z_target` on the slabs' common lattice.
pub fn biot_savart_slabs<T: Real>(
    slabs: &[Slab<'_, T>],
    z_target: T,
    quad_subdiv: usize,
) -> Result<(ScalarField2D<T>, ScalarField2D<T>)> {
    if quad_subdiv == 0 {
        return Err(Error::InvalidParameter("quad_subdiv must be at least 1".into()));
    }
    let first = slabs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no source layers".into()))?
        .layer
        .jy();
    let zt = z_target;
    let mut sources = Vec::new();
    for slab in slabs {
        if !slab.layer.jy().same_lattice(first) {
            return Err(Error::GridMismatch("source layers must share one lattice".into()));
        }
        if (zt - slab.z_mid).abs() <= slab.thickness / T::lit(2.0) {
            return Err(Error::TargetInsideSource { z: zt.to_f64_lossy() });
        }
        sources.extend(source_points(slab.layer, slab.z_mid, slab.thickness, quad_subdiv));
    }

    let (nx, ny) = (first.nx(), first.ny());
    let prefactor = T::mu0() / (T::lit(4.0) * T::PI());
    let samples: Vec<(T, T)> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let xt = first.x_coord(idx % nx);
            let yt = first.y_coord(idx / nx);
            let (mut bx, mut by) = (T::zero(), T::zero());
            for s in &sources {
                let (rx, ry, rz) = (xt - s.x, yt - s.y, zt - s.z);
                let r2 = rx * rx + ry * ry + rz * rz;
                let inv_r3 = T::one() / (r2 * r2.sqrt());
                // (J × R)_x = Jy·Rz − Jz·Ry,  (J × R)_y = Jz·Rx − Jx·Rz, Jz = 0
                bx = bx + s.wy * rz * inv_r3;
                by = by - s.wx * rz * inv_r3;
            }
            (bx * prefactor, by * prefactor)
        })
        .collect();

    let (bx, by): (Vec<T>, Vec<T>) = samples.into_iter().unzip();
    Ok((
        ScalarField2D::new(nx, ny, first.dx(), first.dy(), zt, Component::Bx, bx)?,
        ScalarField2D::new(nx, ny, first.dx(), first.dy(), zt, Component::By, by)?,
    ))
}
