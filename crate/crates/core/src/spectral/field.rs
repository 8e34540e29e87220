use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Semantic label of the quantity stored in a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    Bx,
    By,
    Jx,
    Jy,
}

impl Component {
    pub fn tag(self) -> u8 {
        match self {
            Component::Bx => 0,
            Component::By => 1,
            Component::Jx => 2,
            Component::Jy => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Component::Bx),
            1 => Some(Component::By),
            2 => Some(Component::Jx),
            3 => Some(Component::Jy),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::Bx => "Bx",
            Component::By => "By",
            Component::Jx => "Jx",
            Component::Jy => "Jy",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "Bx" => Some(Component::Bx),
            "By" => Some(Component::By),
            "Jx" => Some(Component::Jx),
            "Jy" => Some(Component::Jy),
            _ => None,
        }
    }
}

/// Grid spacing and plane height carried alongside a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeta<T> {
    pub dx: T,
    pub dy: T,
    pub z: T,
    pub component: Component,
}

/// Real samples on a uniform `nx × ny` lattice at height `z`, stored
/// row-major (`ny` rows of `nx` values).
///
/// Sample `(i, j)` sits at `x = (i − nx/2)·dx`, `y = (j − ny/2)·dy`, so
/// the grid centre is the origin of the in-plane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D<T> {
    nx: usize,
    ny: usize,
    dx: T,
    dy: T,
    z: T,
    component: Component,
    values: Vec<T>,
}

impl<T: Real> ScalarField2D<T> {
    pub fn new(
        nx: usize,
        ny: usize,
        dx: T,
        dy: T,
        z: T,
        component: Component,
        values: Vec<T>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::ShapeMismatch(format!("empty grid {nx}×{ny}")));
        }
        if values.len() != nx * ny {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {nx}×{ny} grid",
                values.len()
            )));
        }
        if !(dx > T::zero() && dy > T::zero()) || !dx.is_finite() || !dy.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive (dx = {dx}, dy = {dy})"
            )));
        }
        if !z.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(ScalarField2D {
            nx,
            ny,
            dx,
            dy,
            z,
            component,
            values,
        })
    }

    pub fn zeros(nx: usize, ny: usize, dx: T, dy: T, z: T, component: Component) -> Result<Self> {
        Self::new(nx, ny, dx, dy, z, component, vec![T::zero(); nx * ny])
    }

    /// Fills the grid from a function of the in-plane coordinates.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        dx: T,
        dy: T,
        z: T,
        component: Component,
        mut f: impl FnMut(T, T) -> T,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = coord(j, ny, dy);
            for i in 0..nx {
                values.push(f(coord(i, nx, dx), y));
            }
        }
        Self::new(nx, ny, dx, dy, z, component, values)
    }

    pub(crate) fn from_parts_unchecked(meta: GridMeta<T>, nx: usize, ny: usize, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), nx * ny);
        ScalarField2D {
            nx,
            ny,
            dx: meta.dx,
            dy: meta.dy,
            z: meta.z,
            component: meta.component,
            values,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn dy(&self) -> T {
        self.dy
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn meta(&self) -> GridMeta<T> {
        GridMeta {
            dx: self.dx,
            dy: self.dy,
            z: self.z,
            component: self.component,
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[T] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }

    pub fn x_coord(&self, i: usize) -> T {
        coord(i, self.nx, self.dx)
    }

    pub fn y_coord(&self, j: usize) -> T {
        coord(j, self.ny, self.dy)
    }

    pub fn with_component(mut self, component: Component) -> Self {
        self.component = component;
        self
    }

    pub fn with_z(mut self, z: T) -> Self {
        self.z = z;
        self
    }

    /// Same shape and spacing (the plane height and label may differ).
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.dx == other.dx && self.dy == other.dy
    }

    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    /// Pointwise sum; lattices must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_lattice(other) {
            return Err(Error::GridMismatch(format!(
                "{}×{} (dx {}, dy {}) vs {}×{} (dx {}, dy {})",
                self.nx, self.ny, self.dx, self.dy, other.nx, other.ny, other.dx, other.dy
            )));
        }
        let mut out = self.clone();
        out.values
            .iter_mut()
            .zip(&other.values)
            .for_each(|(a, b)| *a = *a + *b);
        Ok(out)
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v)
    }

    pub fn sum_sq(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v * v)
    }

    pub fn rms(&self) -> T {
        (self.sum_sq() / T::from_usize_lossy(self.values.len())).sqrt()
    }
}

pub(crate) fn coord<T: Real>(i: usize, n: usize, d: T) -> T {
    (T::from_usize_lossy(i) - T::from_usize_lossy(n / 2)) * d
}
