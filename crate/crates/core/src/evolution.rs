//! Evolved Gaussian density matrix of the correlated source state.
//!
//! The free particle under pure position decoherence keeps a Gaussian density
//! matrix. In position representation
//!
//! ```text
//! rho(x, x', t) = sqrt(2 A1 / pi) exp[-A1 (x^2 + x'^2) - A2 (x - x')^2 + i A3 (x^2 - x'^2)]
//! ```
//!
//! and the same shape with coefficients `C1, C2, C3` (and the opposite chirp
//! sign) in momentum representation. All pointwise evaluators work with the
//! complex logarithm and exponentiate once at the end, so wide grids and large
//! `Lambda t` do not underflow before the final value does.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bath::ParticleSpec;
use crate::error::{invalid, Result};

/// Time and decoherence strength at which the state is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionPoint {
    /// Elapsed time (s).
    pub t: f64,
    /// Decoherence parameter (m^-2 s^-1).
    pub lambda: f64,
}

impl EvolutionPoint {
    pub fn new(t: f64, lambda: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
        }
        Ok(Self { t, lambda })
    }

    /// Accumulated noise `Lambda t` (m^-2).
    pub fn lt(&self) -> f64 {
        self.lambda * self.t
    }
}

/// Position-representation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionCoeffs {
    /// Envelope (m^-2).
    pub a1: f64,
    /// Off-diagonal damping (m^-2).
    pub a2: f64,
    /// Chirp (m^-2).
    pub a3: f64,
    /// Common denominator `B^2` (m^-4).
    pub b_sq: f64,
}

/// Momentum-representation coefficients, all in (kg m/s)^-2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCoeffs {
    pub position: PositionCoeffs,
    pub momentum: MomentumCoeffs,
}

impl DensityCoeffs {
    pub fn new(p: &ParticleSpec, e: &EvolutionPoint) -> Result<Self> {
        let position = position_coeffs(p, e)?;
        Ok(Self {
            position,
            momentum: momentum_coeffs(&position, p.hbar()),
        })
    }

    /// `1 + 2 A2 / A1`, the squared symplectic eigenvalue.
    pub fn mixedness(&self) -> f64 {
        1.0 + 2.0 * self.position.a2 / self.position.a1
    }
}

/// Position coefficients of the evolved state, for `t > 0`.
pub fn position_coeffs(p: &ParticleSpec, e: &EvolutionPoint) -> Result<PositionCoeffs> {
    if e.t <= 0.0 {
        return Err(invalid(
            "t",
            "coefficients are singular at t = 0; use the covariance limits instead",
        ));
    }
    let hbar = p.hbar();
    let m = p.mass;
    let t = e.t;
    let lt = e.lt();
    let s2 = p.sigma0 * p.sigma0;
    let s4 = s2 * s2;
    let il2 = p.inv_ell0_sq();
    let g = p.gamma;
    let free = m / (2.0 * hbar * t);

    let chirp = free + g / (2.0 * s2);
    let b_sq = 1.0 / (4.0 * s4) + il2 / (2.0 * s2) + lt / (3.0 * s2) + chirp * chirp;

    let a1 = m * m / (8.0 * hbar * hbar * t * t * s2 * b_sq);
    let a2 = m * m / (4.0 * hbar * hbar * t * t * b_sq) * (0.5 * il2 + lt)
        + lt / (12.0 * s2 * b_sq) * (1.0 / s2 + 2.0 * il2 + lt)
        + m * e.lambda * g / (4.0 * hbar * s2 * b_sq)
        + lt * g * g / (12.0 * s4 * b_sq);
    let a3 = m / (4.0 * hbar * t * s2 * b_sq) * (1.0 / (2.0 * s2) + il2 + lt)
        + m * g / (8.0 * hbar * t * s2 * b_sq) * (m / (hbar * t) + g / s2);

    Ok(PositionCoeffs { a1, a2, a3, b_sq })
}

/// Fourier-transformed coefficients. Fixes the units by normalising the
/// momentum density over `p` in kg m/s.
pub fn momentum_coeffs(d: &PositionCoeffs, hbar: f64) -> MomentumCoeffs {
    let PositionCoeffs { a1, a2, a3, .. } = *d;
    let c1 = a1 / (4.0 * hbar * hbar * (a1 * a1 + 2.0 * a1 * a2 + a3 * a3));
    MomentumCoeffs {
        c1,
        c2: a2 / a1 * c1,
        c3: a3 / a1 * c1,
    }
}

pub fn ln_rho_position(x: f64, x_prime: f64, d: &PositionCoeffs) -> Complex64 {
    let r = x - x_prime;
    Complex64::new(
        0.5 * (2.0 * d.a1 / PI).ln() - d.a1 * (x * x + x_prime * x_prime) - d.a2 * r * r,
        d.a3 * (x * x - x_prime * x_prime),
    )
}

/// `rho(x, x', t)` in m^-1.
pub fn rho_position(x: f64, x_prime: f64, d: &PositionCoeffs) -> Complex64 {
    ln_rho_position(x, x_prime, d).exp()
}

pub fn ln_rho_momentum(p: f64, p_prime: f64, d: &MomentumCoeffs) -> Complex64 {
    let q = p - p_prime;
    Complex64::new(
        0.5 * (2.0 * d.c1 / PI).ln() - d.c1 * (p * p + p_prime * p_prime) - d.c2 * q * q,
        -d.c3 * (p * p - p_prime * p_prime),
    )
}

/// `rho(p, p', t)` in (kg m/s)^-1.
pub fn rho_momentum(p: f64, p_prime: f64, d: &MomentumCoeffs) -> Complex64 {
    ln_rho_momentum(p, p_prime, d).exp()
}

pub fn ln_initial_state(x0: f64, x0_prime: f64, p: &ParticleSpec) -> Complex64 {
    let s2 = p.sigma0 * p.sigma0;
    let g = p.gamma;
    let r = x0 - x0_prime;
    let a = x0 * x0 / (2.0 * s2);
    let b = x0_prime * x0_prime / (2.0 * s2);
    Complex64::new(
        -(PI.sqrt() * p.sigma0).ln() - a - b - 0.5 * r * r * p.inv_ell0_sq(),
        g * (a - b),
    )
}

/// Source state `rho_0(x0, x0')` (m^-1): a chirped Gaussian damped off the
/// diagonal by the finite source coherence length.
pub fn initial_state(x0: f64, x0_prime: f64, p: &ParticleSpec) -> Complex64 {
    ln_initial_state(x0, x0_prime, p).exp()
}

pub fn ln_propagator_kernel(
    x: f64,
    x_prime: f64,
    x0: f64,
    x0_prime: f64,
    e: &EvolutionPoint,
    mass: f64,
    hbar: f64,
) -> Result<Complex64> {
    if e.t <= 0.0 {
        return Err(invalid("t", "the propagator is singular at t = 0"));
    }
    let t = e.t;
    let r = x - x_prime;
    let r0 = x0 - x0_prime;
    let phase = mass / (2.0 * hbar * t) * ((x - x0).powi(2) - (x_prime - x0_prime).powi(2));
    let damping = e.lt() / 3.0 * (r * r + r0 * r0 + r * r0);
    Ok(Complex64::new((mass / (2.0 * PI * hbar * t)).ln() - damping, phase))
}

/// Density-matrix propagator of the decohering free particle (m^-2).
///
/// The bra side carries the conjugate free kernel, so at `Lambda = 0` this is
/// `K(x, x0) K*(x', x0')`. The damping factor is 1 whenever `x = x'` and
/// `x0 = x0'`.
pub fn propagator_kernel(
    x: f64,
    x_prime: f64,
    x0: f64,
    x0_prime: f64,
    e: &EvolutionPoint,
    mass: f64,
    hbar: f64,
) -> Result<Complex64> {
    Ok(ln_propagator_kernel(x, x_prime, x0, x0_prime, e, mass, hbar)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{Constants, ParticleSpec};
    use approx::assert_relative_eq;

    fn natural(gamma: f64, ell0: f64) -> ParticleSpec {
        ParticleSpec::new(1.0, 1.0, ell0, gamma)
            .unwrap()
            .with_constants(Constants { hbar: 1.0, k_b: 1.0 })
    }

    /// Coefficients of the integrated exponent, obtained independently by
    /// eliminating (x0, x0') from the 4x4 quadratic form of propagator times
    /// source state with a complex Schur complement.
    fn schur_coeffs(p: &ParticleSpec, e: &EvolutionPoint) -> (f64, f64, f64) {
        let h = |v: [f64; 4]| -> Complex64 {
            let e0 = ln_propagator_kernel(v[0], v[1], v[2], v[3], e, p.mass, p.hbar()).unwrap()
                - ln_propagator_kernel(0.0, 0.0, 0.0, 0.0, e, p.mass, p.hbar()).unwrap();
            e0 + ln_initial_state(v[2], v[3], p) - ln_initial_state(0.0, 0.0, p)
        };
        // Bilinear form of a pure quadratic: Q_ij = (f(ei+ej) - f(ei) - f(ej)) / 2.
        let unit = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            v
        };
        let mut q = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = unit(i);
                s[j] += 1.0;
                q[i][j] = (h(s) - h(unit(i)) - h(unit(j))) * 0.5;
            }
        }
        // Integrating exp(v^T Q v) over (x0, x0') leaves Q_aa - Q_ab Q_bb^-1 Q_ba.
        let det = q[2][2] * q[3][3] - q[2][3] * q[3][2];
        let inv = [[q[3][3] / det, -q[2][3] / det], [-q[3][2] / det, q[2][2] / det]];
        let mut eff = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut s = q[a][b];
                for k in 0..2 {
                    for l in 0..2 {
                        s -= q[a][2 + k] * inv[k][l] * q[2 + l][b];
                    }
                }
                eff[a][b] = s;
            }
        }
        // exponent = eff00 x^2 + 2 eff01 x x' + eff11 x'^2
        let a2 = eff[0][1].re;
        let a1 = -eff[0][0].re - a2;
        let a3 = eff[0][0].im;
        (a1, a2, a3)
    }

    #[test]
    fn coefficients_match_direct_integration() {
        for &(g, ell0, lam, t) in &[
            (1.3, 3.0, 0.2, 0.7),
            (1.3, f64::INFINITY, 0.2, 0.7),
            (-2.0, 2.0, 3.0, 1.5),
            (0.0, f64::INFINITY, 0.0, 0.4),
            (40.0, 1.5, 5.0, 2.0),
        ] {
            let p = natural(g, ell0);
            let e = EvolutionPoint::new(t, lam).unwrap();
            let c = position_coeffs(&p, &e).unwrap();
            let (a1, a2, a3) = schur_coeffs(&p, &e);
            assert_relative_eq!(c.a1, a1, max_relative = 1e-11);
            assert_relative_eq!(c.a2, a2, max_relative = 1e-11, epsilon = 1e-14);
            assert_relative_eq!(c.a3, a3, max_relative = 1e-11);
        }
    }

    #[test]
    fn pure_state_at_tau0() {
        // gamma = 0, ell0 = inf, Lambda = 0, t = tau0 = 1 in natural units:
        // B^2 = 1/4 + 1/4 = 1/2, A1 = 1/(8 B^2) = 1/4, A3 = (1/2)/(4 B^2) = 1/4.
        let p = natural(0.0, f64::INFINITY);
        let c = position_coeffs(&p, &EvolutionPoint::new(1.0, 0.0).unwrap()).unwrap();
        assert_relative_eq!(c.a1, 0.25, max_relative = 1e-15);
        assert_eq!(c.a2, 0.0);
        assert_relative_eq!(c.a3, 0.25, max_relative = 1e-15);
        assert_relative_eq!(c.b_sq, 0.5, max_relative = 1e-15);
        let m = momentum_coeffs(&c, 1.0);
        // A1/(4(A1^2 + A3^2)) = (1/4)/(4/8) = 1/2 = sigma0^2/(2 hbar^2)
        assert_relative_eq!(m.c1, 0.5, max_relative = 1e-15);
        assert_eq!(m.c2, 0.0);
    }

    #[test]
    fn no_damping_without_noise_or_incoherence() {
        for g in [-5.0, 0.0, 2.5] {
            for t in [0.1, 1.0, 7.0] {
                let p = natural(g, f64::INFINITY);
                let c = position_coeffs(&p, &EvolutionPoint::new(t, 0.0).unwrap()).unwrap();
                assert_eq!(c.a2, 0.0);
            }
        }
    }

    #[test]
    fn zero_time_rejected() {
        let p = ParticleSpec::fullerene();
        assert!(position_coeffs(&p, &EvolutionPoint::new(0.0, 1e22).unwrap()).is_err());
        assert!(propagator_kernel(0.0, 0.0, 0.0, 0.0, &EvolutionPoint::new(0.0, 0.0).unwrap(), 1.0, 1.0).is_err());
    }

    #[test]
    fn hermiticity_of_evaluators() {
        let p = ParticleSpec::fullerene().with_gamma(3.0);
        let e = EvolutionPoint::new(1e-6, 1e22).unwrap();
        let d = DensityCoeffs::new(&p, &e).unwrap();
        let (x, y) = (3.1e-9, -11.7e-9);
        let a = rho_position(x, y, &d.position);
        let b = rho_position(y, x, &d.position).conj();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, b.im, max_relative = 1e-14);
        let pu = p.hbar() / p.sigma0;
        let a = rho_momentum(0.3 * pu, 1.9 * pu, &d.momentum);
        let b = rho_momentum(1.9 * pu, 0.3 * pu, &d.momentum).conj();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, b.im, max_relative = 1e-14);
        let a = initial_state(x, y, &p);
        let b = initial_state(y, x, &p).conj();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, b.im, max_relative = 1e-14);
    }

    fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * f(lo + i as f64 * h)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn diagonals_are_normalised() {
        let p = ParticleSpec::fullerene().with_gamma(-3.0);
        let e = EvolutionPoint::new(5e-7, 1e21).unwrap();
        let d = DensityCoeffs::new(&p, &e).unwrap();
        let wx = (1.0 / (4.0 * d.position.a1)).sqrt();
        let nx = trapezoid(|x| rho_position(x, x, &d.position).re, -12.0 * wx, 12.0 * wx, 4000);
        assert!((nx - 1.0).abs() < 1e-8, "position trace {nx}");
        let wp = (1.0 / (4.0 * d.momentum.c1)).sqrt();
        let np = trapezoid(|q| rho_momentum(q, q, &d.momentum).re, -12.0 * wp, 12.0 * wp, 4000);
        assert!((np - 1.0).abs() < 1e-8, "momentum trace {np}");
    }

    #[test]
    fn momentum_density_is_fourier_transform() {
        // rho(p, p') = (1 / 2 pi hbar) Int Int exp(-i p x / hbar) rho(x, x') exp(i p' x' / hbar)
        let p = natural(1.5, 2.0);
        let e = EvolutionPoint::new(0.8, 0.3).unwrap();
        let d = DensityCoeffs::new(&p, &e).unwrap();
        let w = (1.0 / (4.0 * d.position.a1)).sqrt();
        let (n, half) = (600usize, 10.0 * w);
        let h = 2.0 * half / n as f64;
        for &(pp, qq) in &[(0.0, 0.0), (0.7, -0.4), (1.1, 0.9)] {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let x = -half + (i as f64 + 0.5) * h;
                for j in 0..n {
                    let y = -half + (j as f64 + 0.5) * h;
                    let ph = Complex64::new(0.0, -pp * x + qq * y).exp();
                    s += ph * rho_position(x, y, &d.position);
                }
            }
            s *= h * h / (2.0 * PI);
            let want = rho_momentum(pp, qq, &d.momentum);
            assert!((s - want).norm() < 1e-10 * (1.0 + want.norm()), "{s} vs {want}");
        }
    }

    #[test]
    fn pure_initial_diagonal() {
        let p = ParticleSpec::fullerene().with_ell0(f64::INFINITY);
        let x = 4.0e-9;
        let v = initial_state(x, x, &p);
        let want = (-(x * x) / (p.sigma0 * p.sigma0)).exp() / (PI.sqrt() * p.sigma0);
        assert_relative_eq!(v.re, want, max_relative = 1e-14);
        assert!(v.im.abs() < 1e-14 * want);
    }

    #[test]
    fn initial_purity_by_quadrature() {
        // Int Int |rho0|^2 over a wide box; closed form (1 + 2 sigma0^2 / ell0^2)^(-1/2).
        let p = ParticleSpec::fullerene().with_gamma(2.0);
        let (n, half) = (800usize, 9.0 * p.sigma0);
        let h = 2.0 * half / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let x = -half + (i as f64 + 0.5) * h;
            for j in 0..n {
                let y = -half + (j as f64 + 0.5) * h;
                s += initial_state(x, y, &p).norm_sqr();
            }
        }
        s *= h * h;
        let want = (1.0 + 2.0 * p.incoherence()).powf(-0.5);
        assert_relative_eq!(s, want, max_relative = 1e-10);
    }

    #[test]
    fn free_kernel_modulus_and_diagonal_immunity() {
        let (m, hbar) = (1.2e-24, crate::bath::HBAR);
        let e0 = EvolutionPoint::new(1e-6, 0.0).unwrap();
        let want = m / (2.0 * PI * hbar * 1e-6);
        for &(x, y, a, b) in &[(0.0, 0.0, 0.0, 0.0), (1e-8, -3e-8, 2e-8, 5e-9), (7e-8, 7e-8, -4e-8, 1e-8)] {
            let k = propagator_kernel(x, y, a, b, &e0, m, hbar).unwrap();
            assert_relative_eq!(k.norm(), want, max_relative = 1e-12);
        }
        let e = EvolutionPoint::new(1e-6, 1e25).unwrap();
        let k = propagator_kernel(3e-8, 3e-8, -2e-8, -2e-8, &e, m, hbar).unwrap();
        assert_relative_eq!(k.norm(), want, max_relative = 1e-12);
        let k = propagator_kernel(3e-8, -3e-8, -2e-8, -2e-8, &e, m, hbar).unwrap();
        assert!(k.norm() < want);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ratio_identity(g in -50.0..50.0f64, lam in 0.0..1e24f64, t in 1e-8..5e-6f64,
                              ell0 in prop_oneof![Just(f64::INFINITY), 1e-8..1e-6f64]) {
                let p = ParticleSpec::fullerene().with_gamma(g).with_ell0(ell0);
                let d = DensityCoeffs::new(&p, &EvolutionPoint::new(t, lam).unwrap()).unwrap();
                let (pa, ma) = (d.position, d.momentum);
                prop_assert!(pa.a1 > 0.0 && pa.b_sq > 0.0 && ma.c1 > 0.0);
                prop_assert!(pa.a2 >= 0.0 && ma.c2 >= 0.0);
                let lhs = pa.a2 / pa.a1;
                let rhs = ma.c2 / ma.c1;
                prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
                prop_assert!(((ma.c3 / ma.c1) - pa.a3 / pa.a1).abs() <= 1e-12 * (pa.a3 / pa.a1).abs());
            }
        }
    }
}
