//! Discrete realisation of the continuous Fourier pair
//!
//! ```text
//! f̂(kx, ky) = ∬ f(x, y) exp(−i(kx·x + ky·y)) dx dy
//! f(x, y)   = (2π)⁻² ∬ f̂(kx, ky) exp(+i(kx·x + ky·y)) dkx dky
//! ```
//!
//! The forward DFT is scaled by `dx·dy`; the inverse by `1/(nx·ny·dx·dy)`,
//! which is `dkx·dky/(2π)²`. Phases are referred to sample `(0, 0)`; kernels
//! that depend only on `|k|` are insensitive to that choice.

use rustfft::num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use super::field::{GridMeta, ScalarField2D};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex samples on the angular-wavenumber lattice of a grid, in standard
/// DFT order along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D<T> {
    kx: Vec<T>,
    ky: Vec<T>,
    values: Vec<Complex<T>>,
    origin: GridMeta<T>,
}

/// Angular wavenumbers `2π·m/(n·d)` in DFT order (`m = 0, 1, …, −1`).
pub fn k_axis<T: Real>(n: usize, d: T) -> Vec<T> {
    let span = T::from_usize_lossy(n) * d;
    let two_pi = T::TAU();
    (0..n)
        .map(|i| {
            let m = if i < n.div_ceil(2) {
                T::from_usize_lossy(i)
            } else {
                T::from_usize_lossy(i) - T::from_usize_lossy(n)
            };
            two_pi * m / span
        })
        .collect()
}

impl<T: Real> Spectrum2D<T> {
    pub fn zeros(nkx: usize, nky: usize, origin: GridMeta<T>) -> Self {
        Spectrum2D {
            kx: k_axis(nkx, origin.dx),
            ky: k_axis(nky, origin.dy),
            values: vec![Complex::new(T::zero(), T::zero()); nkx * nky],
            origin,
        }
    }

    /// Wraps raw values; their count must equal the axis product.
    pub fn from_values(kx: Vec<T>, ky: Vec<T>, values: Vec<Complex<T>>, origin: GridMeta<T>) -> Result<Self> {
        if kx.len() * ky.len() != values.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} spectrum values for {}×{} wavenumbers",
                values.len(),
                kx.len(),
                ky.len()
            )));
        }
        Ok(Spectrum2D {
            kx,
            ky,
            values,
            origin,
        })
    }

    pub fn nkx(&self) -> usize {
        self.kx.len()
    }

    pub fn nky(&self) -> usize {
        self.ky.len()
    }

    pub fn kx_axis(&self) -> &[T] {
        &self.kx
    }

    pub fn ky_axis(&self) -> &[T] {
        &self.ky
    }

    pub fn origin(&self) -> GridMeta<T> {
        self.origin
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.values[j * self.kx.len() + i]
    }

    /// `|k|` of bin `(i, j)`.
    pub fn k(&self, i: usize, j: usize) -> T {
        self.kx[i].hypot(self.ky[j])
    }

    /// `|k|` of every bin, in storage order.
    pub fn k_magnitudes(&self) -> Vec<T> {
        self.ky
            .iter()
            .flat_map(|&ky| self.kx.iter().map(move |&kx| kx.hypot(ky)))
            .collect()
    }

    /// Axis spacing `(dkx, dky)`.
    pub fn dk(&self) -> (T, T) {
        let two_pi = T::TAU();
        (
            two_pi / (T::from_usize_lossy(self.nkx()) * self.origin.dx),
            two_pi / (T::from_usize_lossy(self.nky()) * self.origin.dy),
        )
    }

    /// Multiplies every bin by a real transfer function of `|k|`.
    pub fn apply_transfer(&self, mut h: impl FnMut(T) -> T) -> Self {
        let mut out = self.clone();
        let nkx = self.nkx();
        for (idx, v) in out.values.iter_mut().enumerate() {
            let k = self.k(idx % nkx, idx / nkx);
            *v = *v * h(k);
        }
        out
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        self.kx == other.kx && self.ky == other.ky
    }

    pub fn sum_sq(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a + v.norm_sqr())
    }
}

pub(crate) fn fft2_in_place<T: Real>(nx: usize, ny: usize, data: &mut [Complex<T>], direction: FftDirection) {
    let mut planner = FftPlanner::<T>::new();
    let row_fft = planner.plan_fft(nx, direction);
    let mut scratch = vec![Complex::default(); row_fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(nx) {
        row_fft.process_with_scratch(row, &mut scratch);
    }
    let col_fft = planner.plan_fft(ny, direction);
    scratch.resize(col_fft.get_inplace_scratch_len(), Complex::default());
    let mut column = vec![Complex::default(); ny];
    for i in 0..nx {
        for (j, c) in column.iter_mut().enumerate() {
            *c = data[j * nx + i];
        }
        col_fft.process_with_scratch(&mut column, &mut scratch);
        for (j, c) in column.iter().enumerate() {
            data[j * nx + i] = *c;
        }
    }
}

/// Continuous-convention forward transform of a real field.
pub fn forward_transform<T: Real>(f: &ScalarField2D<T>) -> Result<Spectrum2D<T>> {
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let (nx, ny) = (f.nx(), f.ny());
    let scale = f.dx() * f.dy();
    let mut data: Vec<Complex<T>> = f
        .values()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    fft2_in_place(nx, ny, &mut data, FftDirection::Forward);
    data.iter_mut().for_each(|v| *v = *v * scale);
    Ok(Spectrum2D {
        kx: k_axis(nx, f.dx()),
        ky: k_axis(ny, f.dy()),
        values: data,
        origin: f.meta(),
    })
}

/// Inverse of [`forward_transform`]; returns the real part.
pub fn inverse_transform<T: Real>(s: &Spectrum2D<T>) -> Result<ScalarField2D<T>> {
    inverse_transform_complex(s).map(|(field, _)| field)
}

/// Inverse transform that also reports the RMS of the discarded imaginary
/// part, for Hermitian-symmetry checks.
pub(crate) fn inverse_transform_complex<T: Real>(s: &Spectrum2D<T>) -> Result<(ScalarField2D<T>, T)> {
    let (nx, ny) = (s.nkx(), s.nky());
    if s.values.len() != nx * ny {
        return Err(Error::ShapeMismatch(format!(
            "{} spectrum values for {nx}×{ny} wavenumbers",
            s.values.len()
        )));
    }
    let meta = s.origin;
    let scale = T::one() / (T::from_usize_lossy(nx * ny) * meta.dx * meta.dy);
    let mut data = s.values.clone();
    fft2_in_place(nx, ny, &mut data, FftDirection::Inverse);
    let mut imag_sq = T::zero();
    let values = data
        .iter()
        .map(|v| {
            let v = *v * scale;
            imag_sq = imag_sq + v.im * v.im;
            v.re
        })
        .collect();
    let imag_rms = (imag_sq / T::from_usize_lossy(nx * ny)).sqrt();
    Ok((ScalarField2D::from_parts_unchecked(meta, nx, ny, values), imag_rms))
}
