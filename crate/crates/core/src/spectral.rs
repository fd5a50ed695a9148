//! Fourier-spectral fields on the 2D torus [0, 2pi)^2.
//!
//! Fields are stored as Fourier coefficients (DFT / M^2) on an M x M mode
//! grid with wavevectors k in {-M/2+1, ..., M/2}. Real physical fields
//! keep Hermitian-symmetric spectra; `to_physical` takes the real part
//! after the inverse transform to scrub round-off.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::Real;

/// The M x M spatial mode grid on [0, 2pi)^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpatialGrid {
    m: usize,
}

impl SpatialGrid {
    pub fn new(m: usize) -> Self {
        assert!(m >= 4 && m % 2 == 0, "modes per axis must be even and >= 4");
        Self { m }
    }

    pub fn modes_per_axis(&self) -> usize {
        self.m
    }

    pub fn point_count(&self) -> usize {
        self.m * self.m
    }

    /// Signed wavenumber for a DFT index.
    pub fn wavenumber(&self, index: usize) -> i32 {
        if index <= self.m / 2 {
            index as i32
        } else {
            index as i32 - self.m as i32
        }
    }

    /// Physical coordinate of a grid index.
    pub fn coordinate<T: Real>(&self, index: usize) -> T {
        T::from_f64(2.0 * std::f64::consts::PI).unwrap() * T::from_usize(index).unwrap()
            / T::from_usize(self.m).unwrap()
    }
}

/// Cached forward/inverse FFT plans for an M x M complex grid.
#[derive(Clone)]
pub struct Fft2<T: Real> {
    m: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> Fft2<T> {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let m = self.m;
        debug_assert_eq!(data.len(), m * m);
        // Rows (contiguous), then columns via transpose.
        plan.process(data);
        transpose_square(data, m);
        plan.process(data);
        transpose_square(data, m);
    }

    /// Unnormalized forward 2D DFT in place (row-major m x m).
    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.forward.clone());
    }

    /// Unnormalized inverse 2D DFT in place.
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.inverse.clone());
    }
}

fn transpose_square<T: Copy>(data: &mut [T], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

/// Scalar field stored spectrally.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T: Real> {
    grid: SpatialGrid,
    coeffs: Array2<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: SpatialGrid) -> Self {
        let m = grid.modes_per_axis();
        Self {
            grid,
            coeffs: Array2::from_elem((m, m), Complex::new(T::zero(), T::zero())),
        }
    }

    pub fn grid(&self) -> SpatialGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex<T>> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex<T>> {
        &mut self.coeffs
    }

    /// Transform a physical-space sample array into a spectral field.
    pub fn from_physical(grid: SpatialGrid, phys: &Array2<T>) -> Self {
        let m = grid.modes_per_axis();
        assert_eq!(phys.dim(), (m, m));
        let mut buf: Vec<Complex<T>> = phys.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Fft2::new(m).forward(&mut buf);
        let scale = T::one() / T::from_usize(m * m).unwrap();
        let coeffs =
            Array2::from_shape_vec((m, m), buf.into_iter().map(|c| c * scale).collect()).unwrap();
        Self { grid, coeffs }
    }

    /// Sample a function of (x, y) on the grid and transform.
    pub fn from_fn(grid: SpatialGrid, f: impl Fn(T, T) -> T) -> Self {
        let m = grid.modes_per_axis();
        let phys = Array2::from_shape_fn((m, m), |(i, j)| {
            f(grid.coordinate(i), grid.coordinate(j))
        });
        Self::from_physical(grid, &phys)
    }

    pub fn to_physical(&self) -> Array2<T> {
        let m = self.grid.modes_per_axis();
        let mut buf: Vec<Complex<T>> = self.coeffs.iter().copied().collect();
        Fft2::new(m).inverse(&mut buf);
        Array2::from_shape_vec((m, m), buf.into_iter().map(|c| c.re).collect()).unwrap()
    }

    /// d/dx (first grid axis). The Nyquist mode derivative is zeroed.
    pub fn dx(&self) -> Self {
        self.derivative(0)
    }

    /// d/dy (second grid axis).
    pub fn dy(&self) -> Self {
        self.derivative(1)
    }

    fn derivative(&self, axis: usize) -> Self {
        let m = self.grid.modes_per_axis();
        let mut out = self.clone();
        for i in 0..m {
            for j in 0..m {
                let idx = if axis == 0 { i } else { j };
                let k = self.grid.wavenumber(idx);
                let factor = if idx == m / 2 {
                    Complex::new(T::zero(), T::zero())
                } else {
                    Complex::new(T::zero(), T::from_i32(k).unwrap())
                };
                out.coeffs[(i, j)] = self.coeffs[(i, j)] * factor;
            }
        }
        out
    }

    /// Mean value over the torus (k = 0 coefficient).
    pub fn mean(&self) -> T {
        self.coeffs[(0, 0)].re
    }

    pub fn set_mean_zero(&mut self) {
        self.coeffs[(0, 0)] = Complex::new(T::zero(), T::zero());
    }

    /// Root-mean-square over the torus (Parseval).
    pub fn l2_norm(&self) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter() {
            acc = acc + c.norm_sqr();
        }
        acc.sqrt()
    }

    /// Zero all modes with |k| > M/3 on either axis (2/3-rule dealiasing
    /// for quadratic products).
    pub fn dealias(&mut self) {
        let m = self.grid.modes_per_axis();
        let cut = (m / 3) as i32;
        for i in 0..m {
            for j in 0..m {
                let ki = self.grid.wavenumber(i).abs();
                let kj = self.grid.wavenumber(j).abs();
                if ki > cut || kj > cut {
                    self.coeffs[(i, j)] = Complex::new(T::zero(), T::zero());
                }
            }
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        for x in out.coeffs.iter_mut() {
            *x = *x * c;
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a = *a + *b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a = *a - *b;
        }
        out
    }
}

/// Pointwise product computed in physical space, dealiased.
pub fn product<T: Real>(a: &SpectralField<T>, b: &SpectralField<T>) -> SpectralField<T> {
    let grid = a.grid();
    let pa = a.to_physical();
    let pb = b.to_physical();
    let mut prod = pa;
    for (x, y) in prod.iter_mut().zip(pb.iter()) {
        *x = *x * *y;
    }
    let mut out = SpectralField::from_physical(grid, &prod);
    out.dealias();
    out
}

/// Spectral divergence of a 2-vector field.
pub fn divergence<T: Real>(u: &[SpectralField<T>; 2]) -> SpectralField<T> {
    u[0].dx().add(&u[1].dy())
}

/// Spectral gradient of a scalar field.
pub fn gradient<T: Real>(s: &SpectralField<T>) -> [SpectralField<T>; 2] {
    [s.dx(), s.dy()]
}

/// Advection u . grad s, dealiased.
pub fn advect<T: Real>(u: &[SpectralField<T>; 2], s: &SpectralField<T>) -> SpectralField<T> {
    product(&u[0], &s.dx()).add(&product(&u[1], &s.dy()))
}

/// Leray projection onto the divergence-free part, mode by mode. The k = 0
/// mode passes through.
pub fn leray_project<T: Real>(w: &[SpectralField<T>; 2]) -> [SpectralField<T>; 2] {
    let grid = w[0].grid();
    let m = grid.modes_per_axis();
    let mut out = [w[0].clone(), w[1].clone()];
    for i in 0..m {
        for j in 0..m {
            let kx = T::from_i32(grid.wavenumber(i)).unwrap();
            let ky = T::from_i32(grid.wavenumber(j)).unwrap();
            let k2 = kx * kx + ky * ky;
            if k2 == T::zero() {
                continue;
            }
            let wx = w[0].coeffs()[(i, j)];
            let wy = w[1].coeffs()[(i, j)];
            let kdotw = wx * kx + wy * ky;
            out[0].coeffs_mut()[(i, j)] = wx - kdotw * (kx / k2);
            out[1].coeffs_mut()[(i, j)] = wy - kdotw * (ky / k2);
        }
    }
    out
}
