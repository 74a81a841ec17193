//! Direct propagation of the source state through the density-matrix kernel.
//!
//! For every output point `(x, x')` the integral over `x0'` is Gaussian and
//! is done in closed form; the remaining integral over `x0` is done by the
//! trapezoid rule on a window of twelve standard deviations around the peak
//! of its envelope, with at least sixteen samples per period of its phase.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::grid::{Grid2D, GridDensityMatrix};
use crate::bath::ParticleSpec;
use crate::error::{invalid, Error, Result};
use crate::evolution::EvolutionPoint;

/// Upper bound on the `x0` samples per output point.
pub const MAX_SAMPLES: usize = 1 << 16;
const SAMPLES_PER_PERIOD: f64 = 16.0;
const WINDOW_SIGMAS: f64 = 12.0;

struct Kernel {
    beta: f64,
    lt3: f64,
    il2: f64,
    /// `(1 + i gamma) / (2 sigma0^2)`
    w: Complex64,
    /// Coefficient of `y^2` in the `x0'` integral, as `exp(-a y^2 + b y)`.
    a: Complex64,
    ln_pref: Complex64,
}

impl Kernel {
    fn new(p: &ParticleSpec, e: &EvolutionPoint) -> Self {
        let s2 = p.sigma0 * p.sigma0;
        let beta = p.mass / (2.0 * p.hbar() * e.t);
        let lt3 = e.lt() / 3.0;
        let il2 = p.inv_ell0_sq();
        let w = Complex64::new(1.0, p.gamma) / (2.0 * s2);
        let a = Complex64::new(lt3 + 0.5 * il2, beta) + w;
        let ln_pref = Complex64::new(
            (p.mass / (2.0 * PI * p.hbar() * e.t)).ln() - (PI.sqrt() * p.sigma0).ln(),
            0.0,
        ) + 0.5 * (Complex64::new(PI, 0.0) / a).ln();
        Self { beta, lt3, il2, w, a, ln_pref }
    }

    /// Log of the `x0` integrand after the `x0'` integration.
    fn exponent(&self, x: f64, xp: f64, x0: f64) -> Complex64 {
        let r = x - xp;
        let i = Complex64::i();
        let b = i * (2.0 * self.beta * xp) + (self.lt3 * (2.0 * x0 + r) + self.il2 * x0);
        let e0 = i * (self.beta * ((x - x0).powi(2) - xp * xp))
            - self.lt3 * (r * r + x0 * x0 + r * x0)
            - self.w.conj() * (x0 * x0)
            - 0.5 * self.il2 * x0 * x0;
        self.ln_pref + e0 + b * b / (4.0 * self.a)
    }

    fn point(&self, x: f64, xp: f64) -> Result<Complex64> {
        // The exponent is quadratic in x0: c0 + c1 x0 + c2 x0^2.
        let h = 1.0 / self.beta.sqrt();
        let f0 = self.exponent(x, xp, 0.0);
        let fp = self.exponent(x, xp, h);
        let fm = self.exponent(x, xp, -h);
        let c1 = (fp - fm) / (2.0 * h);
        let c2 = (fp + fm - 2.0 * f0) / (2.0 * h * h);
        if !(c2.re < 0.0) {
            return Err(Error::Domain("x0 integrand is not decaying".into()));
        }
        let center = -c1.re / (2.0 * c2.re);
        let sd = (1.0 / (-2.0 * c2.re)).sqrt();
        let half = WINDOW_SIGMAS * sd;
        let freq = |z: f64| (2.0 * c2.im * z + c1.im).abs();
        let fmax = freq(center - half).max(freq(center + half));
        let step = (2.0 * PI / (SAMPLES_PER_PERIOD * fmax.max(f64::MIN_POSITIVE))).min(sd / 4.0);
        let count = (2.0 * half / step).ceil() as usize;
        if count > MAX_SAMPLES {
            return Err(Error::Undersampled {
                have: MAX_SAMPLES,
                required: count,
            });
        }
        let dz = 2.0 * half / count as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=count {
            let z = center - half + k as f64 * dz;
            let wgt = if k == 0 || k == count { 0.5 } else { 1.0 };
            acc += wgt * self.exponent(x, xp, z).exp();
        }
        Ok(acc * dz)
    }
}

/// `rho(x, x', t)` by integrating kernel times source state over both
/// source coordinates.
pub fn evolve_by_convolution(p: &ParticleSpec, e: &EvolutionPoint, g: &Grid2D) -> Result<GridDensityMatrix> {
    if e.t <= 0.0 {
        return Err(invalid("t", "the propagator is singular at t = 0"));
    }
    let k = Kernel::new(p, e);
    let n = g.n;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| k.point(g.x(i), g.x(j))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(GridDensityMatrix {
        grid: *g,
        values: rows.concat(),
        t: e.t,
    })
}

/// Single point of the convolution, for spot checks.
pub fn convolve_point(p: &ParticleSpec, e: &EvolutionPoint, x: f64, x_prime: f64) -> Result<Complex64> {
    if e.t <= 0.0 {
        return Err(invalid("t", "the propagator is singular at t = 0"));
    }
    Kernel::new(p, e).point(x, x_prime)
}
