//! Strang-split integration of the position-representation master equation
//!
//! ```text
//! d rho / dt = (i hbar / 2m) (d_x^2 - d_x'^2) rho - Lambda (x - x')^2 rho
//! ```
//!
//! Each step is a half decoherence step, an exact spectral kinetic step and
//! another half decoherence step. The kinetic multiplier factorises into a
//! row phase and a column phase.

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::Fft2;
use super::grid::{Grid2D, GridDensityMatrix};
use crate::bath::ParticleSpec;
use crate::error::{invalid, Error, Result};
use crate::evolution::initial_state;
use crate::tolerances::ALIASING;

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub trace: f64,
    pub purity: f64,
}

#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    pub final_state: GridDensityMatrix,
    /// Includes the initial state at `t = 0`.
    pub samples: Vec<TrajectorySample>,
}

/// Fraction of `sum |v|^2` in the outer eighth of either axis, with the axis
/// coordinate of index `i` given by `coord(i)` and edge threshold `edge`.
fn edge_fraction(v: &[Complex64], n: usize, coord: impl Fn(usize) -> f64 + Sync, edge: f64) -> f64 {
    let outer: Vec<bool> = (0..n).map(|i| coord(i).abs() >= edge).collect();
    let mut total = 0.0;
    let mut out = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = v[i * n + j].norm_sqr();
            total += e;
            if outer[i] || outer[j] {
                out += e;
            }
        }
    }
    out / total
}

pub fn integrate_master_equation(
    p: &ParticleSpec,
    lambda: f64,
    t_final: f64,
    g: &Grid2D,
    dt: f64,
) -> Result<MasterTrajectory> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(invalid("t_final", format!("must be positive, got {t_final}")));
    }
    if !(dt > 0.0 && dt <= t_final) {
        return Err(invalid("dt", format!("must lie in (0, t_final], got {dt}")));
    }
    let steps = (t_final / dt).round().max(1.0) as usize;
    let h = t_final / steps as f64;
    let n = g.n;

    let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
    rho.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let x = g.x(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v = initial_state(x, g.x(j), p);
        }
    });

    let decay: Vec<f64> = (0..n)
        .map(|d| {
            // (x_i - x_j)^2 only depends on i - j
            let r = d as f64 * g.dx;
            (-lambda * r * r * h / 2.0).exp()
        })
        .collect();
    let c = p.hbar() * h / (2.0 * p.mass);
    let inv_norm = 1.0 / (n * n) as f64;
    let row_phase: Vec<Complex64> = (0..n).map(|a| Complex64::from_polar(1.0, -c * g.k(a).powi(2))).collect();
    let col_phase: Vec<Complex64> = row_phase.iter().map(|z| z.conj() * inv_norm).collect();

    let k_edge = 0.875 * g.k_nyquist();
    let x_edge = 0.875 * g.half_extent;
    let fft = Fft2::new(n);
    let dx2 = g.dx * g.dx;
    let diag = |v: &[Complex64]| (0..n).map(|i| v[i * n + i].re).sum::<f64>() * g.dx;
    let pur = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx2;

    let mut samples = vec![TrajectorySample { t: 0.0, trace: diag(&rho), purity: pur(&rho) }];
    let apply_decay = |v: &mut [Complex64]| {
        v.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, z) in row.iter_mut().enumerate() {
                *z *= decay[i.abs_diff(j)];
            }
        });
    };

    for step in 1..=steps {
        apply_decay(&mut rho);
        fft.full(&mut rho, false);
        let fk = edge_fraction(&rho, n, |a| g.k(a), k_edge);
        if fk > ALIASING {
            return Err(Error::Aliasing { step, fraction: fk, limit: ALIASING });
        }
        rho.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
            let ra = row_phase[a];
            for (b, z) in row.iter_mut().enumerate() {
                *z *= ra * col_phase[b];
            }
        });
        fft.full(&mut rho, true);
        apply_decay(&mut rho);
        let fx = edge_fraction(&rho, n, |i| g.x(i), x_edge);
        if fx > ALIASING {
            return Err(Error::Aliasing { step, fraction: fx, limit: ALIASING });
        }
        samples.push(TrajectorySample {
            t: step as f64 * h,
            trace: diag(&rho),
            purity: pur(&rho),
        });
    }

    Ok(MasterTrajectory {
        final_state: GridDensityMatrix { grid: *g, values: rho, t: t_final },
        samples,
    })
}
