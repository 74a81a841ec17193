use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::fft::{signed_bin, transpose, Fft2};
use crate::bath::ParticleSpec;
use crate::error::{invalid, Error, Result};
use crate::evolution::{position_coeffs, rho_position, EvolutionPoint};
use crate::observables::{covariance, CovarianceState};
use crate::tolerances::{GRID_HERMITIAN, GRID_TRACE};

/// Square position grid `x_i = -L + i dx`, `dx = 2L / n`, periodic for the
/// spectral operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub n: usize,
    /// Half-extent `L` (m).
    pub half_extent: f64,
    pub dx: f64,
}

impl Grid2D {
    pub fn new(n: usize, half_extent: f64) -> Result<Self> {
        if n < 64 || !n.is_power_of_two() {
            return Err(invalid("n", format!("must be a power of two >= 64, got {n}")));
        }
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(invalid("half_extent", format!("must be positive, got {half_extent}")));
        }
        Ok(Self {
            n,
            half_extent,
            dx: 2.0 * half_extent / n as f64,
        })
    }

    /// `n = 1024`, `L = 10 sigma0 max(1, t / tau0) (1 + |gamma|)`.
    pub fn default_for(p: &ParticleSpec, e: &EvolutionPoint) -> Self {
        let l = 10.0 * p.sigma0 * (e.t / p.tau0()).max(1.0) * (1.0 + p.gamma.abs());
        Self::new(1024, l).expect("default grid is valid")
    }

    /// Smallest grid holding nine standard deviations in position (over the
    /// whole interval `[0, t]`) and in wavenumber at time `t`.
    pub fn fitted(p: &ParticleSpec, e: &EvolutionPoint) -> Self {
        let c0 = covariance(p, &EvolutionPoint { t: 0.0, lambda: e.lambda });
        let c1 = covariance(p, e);
        let sx = p.sigma0 * c0.s11.max(c1.s11).sqrt();
        let sk = c1.s22.sqrt() / p.sigma0;
        let l = 9.0 * sx;
        let k_req = 9.0 * sk;
        let n = ((2.0 * l * k_req / PI).ceil() as usize).max(64).next_power_of_two();
        Self::new(n, l).expect("fitted grid is valid")
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        Self::new(n, self.half_extent)
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.dx
    }

    /// Wavenumber of FFT bin `a` (m^-1).
    pub fn k(&self, a: usize) -> f64 {
        2.0 * PI * signed_bin(a, self.n) / (self.n as f64 * self.dx)
    }

    pub fn k_nyquist(&self) -> f64 {
        PI / self.dx
    }
}

/// Samples `rho(x_i, x_j)` stored row-major.
#[derive(Debug, Clone)]
pub struct GridDensityMatrix {
    pub grid: Grid2D,
    pub values: Vec<Complex64>,
    pub t: f64,
}

impl GridDensityMatrix {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n + j]
    }

    pub fn trace(&self) -> f64 {
        let n = self.grid.n;
        (0..n).map(|i| self.values[i * n + i].re).sum::<f64>() * self.grid.dx
    }

    /// `sum |rho|^2 dx^2`.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx * self.grid.dx
    }

    /// Largest `|rho_ij - conj(rho_ji)|` relative to the largest entry.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.grid.n;
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst / scale.max(f64::MIN_POSITIVE)
    }
}

/// Samples the closed-form density matrix on a grid.
pub fn sample_density(p: &ParticleSpec, e: &EvolutionPoint, g: &Grid2D) -> Result<GridDensityMatrix> {
    let d = position_coeffs(p, e)?;
    let required = 8.0 * p.sigma0 * covariance(p, e).s11.sqrt();
    if g.half_extent < required {
        return Err(Error::GridTooSmall {
            have: g.half_extent,
            required,
        });
    }
    let n = g.n;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let x = g.x(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v = rho_position(x, g.x(j), &d);
        }
    });
    Ok(GridDensityMatrix { grid: *g, values, t: e.t })
}

/// Moments recovered from a sampled density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMoments {
    pub covariance: CovarianceState,
    pub mu: f64,
    pub lx2: f64,
    pub lp2: f64,
    pub trace: f64,
    /// `(<x>, <p>)` in SI units.
    pub first_moments: (f64, f64),
    /// Excess kurtosis of the position and momentum anti-diagonal profiles.
    pub kurtosis: (f64, f64),
}

/// Normalised second central moment and excess kurtosis of a 1-D profile.
/// Samples below `1e-13` of the peak are dropped: they are rounding noise,
/// and the fourth moment weights them by the fourth power of the coordinate.
fn profile_moments(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let all: Vec<(f64, f64)> = points.collect();
    let peak = all.iter().fold(0.0f64, |m, p| m.max(p.1));
    let pts: Vec<(f64, f64)> = all.into_iter().filter(|p| p.1 >= 1e-13 * peak).collect();
    let w: f64 = pts.iter().map(|p| p.1).sum();
    let m1 = pts.iter().map(|p| p.0 * p.1).sum::<f64>() / w;
    let m2 = pts.iter().map(|p| (p.0 - m1).powi(2) * p.1).sum::<f64>() / w;
    let m4 = pts.iter().map(|p| (p.0 - m1).powi(4) * p.1).sum::<f64>() / w;
    (m2, m4 / (m2 * m2) - 3.0)
}

/// Covariance, purity and both coherence lengths of a grid state.
///
/// Position moments come from the diagonal. The momentum diagonal and the
/// momentum anti-diagonal come from the 2-D FFT: with
/// `F(a, b) = sum rho_ij exp(-2 pi i (i a + j b) / n)`, the momentum matrix is
/// `rho(k_a, k_b) ~ F(a, -b)`, so the diagonal is `F(a, -a)` and
/// `rho(k, -k) ~ F(a, a)`. The cross moment uses the spectral derivative
/// `d rho / dx` on the diagonal.
pub fn moments_from_grid(dm: &GridDensityMatrix, p: &ParticleSpec) -> Result<GridMoments> {
    let g = dm.grid;
    let n = g.n;
    let trace = dm.trace();
    if (trace - 1.0).abs() > GRID_TRACE {
        return Err(Error::InvalidState(format!("grid trace {trace} is not 1")));
    }
    let herm = dm.hermiticity_residual();
    if herm > GRID_HERMITIAN {
        return Err(Error::InvalidState(format!("grid is not Hermitian (residual {herm:.3e})")));
    }
    let hbar = p.hbar();
    let s2 = p.sigma0 * p.sigma0;

    let diag: Vec<f64> = (0..n).map(|i| dm.at(i, i).re).collect();
    let mean_x = (0..n).map(|i| g.x(i) * diag[i]).sum::<f64>() * g.dx / trace;
    let var_x = (0..n).map(|i| (g.x(i) - mean_x).powi(2) * diag[i]).sum::<f64>() * g.dx / trace;

    // d rho / dx along the first index, spectrally
    let fft = Fft2::new(n);
    let mut cols = transpose(&dm.values, n);
    fft.rows(&mut cols, false);
    cols.par_chunks_mut(n).for_each(|row| {
        for (a, v) in row.iter_mut().enumerate() {
            let k = if a == n / 2 { 0.0 } else { g.k(a) };
            *v *= Complex64::new(0.0, k / n as f64);
        }
    });
    fft.rows(&mut cols, true);
    // cols[j * n + i] = d rho(x_i, x_j) / dx
    let dd: Vec<f64> = (0..n).map(|i| cols[i * n + i].im).collect();
    let mean_k = dd.iter().sum::<f64>() * g.dx / trace;
    let s12 = (0..n).map(|i| (g.x(i) - mean_x) * dd[i]).sum::<f64>() * g.dx / trace;

    let mut f = dm.values.clone();
    fft.full(&mut f, false);
    let scale = g.dx / n as f64;
    let pdiag: Vec<f64> = (0..n).map(|a| f[a * n + (n - a) % n].re * scale).collect();
    let var_k = (0..n).map(|a| (g.k(a) - mean_k).powi(2) * pdiag[a]).sum::<f64>() / trace;

    let cov = CovarianceState::from_moments(var_x / s2, var_k * s2, s12)?;

    let (lx_var, kurt_x) = profile_moments((1..n).map(|i| (g.x(i), dm.at(i, n - i).norm())));
    let (lk_var, kurt_p) = profile_moments((0..n).map(|a| (g.k(a), f[a * n + a].norm())));

    Ok(GridMoments {
        covariance: cov,
        mu: dm.purity(),
        lx2: lx_var / s2,
        lp2: lk_var * s2,
        trace,
        first_moments: (mean_x, mean_k * hbar),
        kurtosis: (kurt_x, kurt_p),
    })
}
