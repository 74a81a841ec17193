//! Covariance matrix, entropy, coherence, coherence lengths and purity of the
//! evolved state.
//!
//! Everything is dimensionless: positions in units of `sigma0`, momenta in
//! units of `hbar / sigma0`, times through `u = t / tau0`. With
//! `a = sigma0^2 / ell0^2` and `q = Lambda t sigma0^2` the second moments are
//!
//! ```text
//! s11 = (1 + gamma u)^2 / 2 + u^2 (1/2 + a + 2q/3)
//! s22 = (1 + gamma^2) / 2 + a + 2q
//! s12 = gamma / 2 + u ((1 + gamma^2) / 2 + a) + q u
//! ```
//!
//! and the symplectic eigenvalue is `nu = 2 sqrt(s11 s22 - s12^2)`. The
//! determinant is evaluated from its expanded polynomial, which has no
//! cancellation, instead of from the difference of products.

use crate::bath::ParticleSpec;
use crate::error::{Error, Result};
use crate::evolution::EvolutionPoint;
use crate::tolerances::PHYSICALITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
    /// First moments `(<x>/sigma0, <p> sigma0/hbar)`; zero for this model.
    pub d: (f64, f64),
    pub nu: f64,
    pub nbar: f64,
}

impl CovarianceState {
    /// Builds a state from raw second moments, with `nu` from the plain
    /// determinant. Used for grids and hand-made states.
    pub fn from_moments(s11: f64, s22: f64, s12: f64) -> Result<Self> {
        let det = s11 * s22 - s12 * s12;
        if !(s11 > 0.0 && s22 > 0.0 && det > 0.0) {
            return Err(Error::InvalidState(format!(
                "covariance not positive definite: s11={s11}, s22={s22}, s12={s12}"
            )));
        }
        Ok(Self {
            s11,
            s22,
            s12,
            d: (0.0, 0.0),
            nu: 2.0 * det.sqrt(),
            nbar: (s11 + s22 - 1.0) / 2.0,
        })
    }

    pub fn det(&self) -> f64 {
        self.nu * self.nu / 4.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport {
    /// Relative entropy of coherence (nats).
    pub c: f64,
    /// Von Neumann entropy (nats).
    pub s: f64,
    pub lx2: f64,
    pub lp2: f64,
    pub mu: f64,
    /// Denominator of the coherence lengths (kg^2 m^4 s^-2); infinite for a
    /// fully coherent source.
    pub dbar: f64,
}

struct Reduced {
    u: f64,
    a: f64,
    q: f64,
    g: f64,
}

fn reduced(p: &ParticleSpec, e: &EvolutionPoint) -> Reduced {
    let s2 = p.sigma0 * p.sigma0;
    Reduced {
        u: e.t / p.tau0(),
        a: p.incoherence(),
        q: e.lt() * s2,
        g: p.gamma,
    }
}

/// `nu^2 = 4 det`, expanded. Every term is non-negative except the
/// `gamma u q` one, which the `q^2 u^2` and `u^2 q` terms dominate.
fn nu_sq(r: &Reduced) -> f64 {
    let Reduced { u, a, q, g } = *r;
    let pp = (1.0 + g * g) / 2.0 + a;
    1.0 + 2.0 * a + 4.0 * q + 4.0 * g * u * q + (8.0 / 3.0) * u * u * pp * q
        + (4.0 / 3.0) * q * q * u * u
}

/// Dimensionless second moments. `t = 0` is the source state itself.
pub fn covariance(p: &ParticleSpec, e: &EvolutionPoint) -> CovarianceState {
    let r = reduced(p, e);
    let Reduced { u, a, q, g } = r;
    let pp = (1.0 + g * g) / 2.0 + a;
    let s11 = 0.5 * (1.0 + g * u).powi(2) + u * u * (0.5 + a + 2.0 * q / 3.0);
    let s22 = pp + 2.0 * q;
    let s12 = g / 2.0 + u * pp + q * u;
    CovarianceState {
        s11,
        s22,
        s12,
        d: (0.0, 0.0),
        nu: nu_sq(&r).sqrt(),
        nbar: (s11 + s22 - 1.0) / 2.0,
    }
}

pub fn symplectic_nu(c: &CovarianceState) -> Result<f64> {
    let det = c.s11 * c.s22 - c.s12 * c.s12;
    if !(det > 0.0) {
        return Err(Error::InvalidState(format!("non-positive determinant {det}")));
    }
    let nu = 2.0 * det.sqrt();
    if nu < 1.0 - PHYSICALITY {
        return Err(Error::InvalidState(format!("nu = {nu} below the uncertainty bound")));
    }
    Ok(nu)
}

/// `(x + 1) ln(x + 1) - x ln x`, continuous at 0.
pub(crate) fn bose_entropy(x: f64) -> f64 {
    if x <= 1e-300 {
        return 0.0;
    }
    x.ln_1p() + x * (1.0 / x).ln_1p()
}

fn excess(nu: f64) -> Result<f64> {
    if !(nu >= 1.0 - PHYSICALITY) {
        return Err(Error::InvalidState(format!("nu = {nu} below the uncertainty bound")));
    }
    Ok(((nu - 1.0) / 2.0).max(0.0))
}

pub fn von_neumann_entropy(nu: f64) -> Result<f64> {
    Ok(bose_entropy(excess(nu)?))
}

/// Relative entropy of coherence against the thermal state with the same
/// mean excitation number.
pub fn relative_entropy_coherence(c: &CovarianceState) -> Result<f64> {
    let x = excess(c.nu)?;
    let nbar = c.nbar;
    if nbar < x - PHYSICALITY * (1.0 + x) {
        return Err(Error::InvalidState(format!(
            "mean excitation {nbar} below the thermal bound {x}"
        )));
    }
    Ok((bose_entropy(nbar.max(x)) - bose_entropy(x)).max(0.0))
}

fn bracket_x(r: &Reduced) -> f64 {
    // Position-length numerator divided by ell0^2 and by 2 t^2 hbar^2 / sigma0^2.
    let Reduced { u, a, q, g } = *r;
    1.5 * a + q + 0.75 * (1.0 + g * g) + 0.75 / u * (2.0 * g + 1.0 / u)
}

/// `Dbar / ell0^2` in SI units; finite for every source.
pub fn dbar_over_ell0_sq(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    let (m, h, s2, t, lam, g) = (p.mass, p.hbar(), p.sigma0 * p.sigma0, e.t, e.lambda, p.gamma);
    let il2 = p.inv_ell0_sq();
    4.0 * h * h * lam * lam * s2 * t.powi(4)
        + 12.0
            * t
            * lam
            * (m * m * s2 * s2
                + t * h * s2 * (m * g + 2.0 * t * h * il2 / 3.0)
                + t * t * h * h * (g * g + 1.0) / 3.0)
        + 3.0 * m * m * s2 * (1.0 + 2.0 * s2 * il2)
}

pub fn dbar(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    if p.ell0.is_infinite() {
        f64::INFINITY
    } else {
        dbar_over_ell0_sq(p, e) * p.ell0 * p.ell0
    }
}

/// Squared position coherence length, in units of `sigma0^2`.
pub fn coherence_length_x(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    let r = reduced(p, e);
    if e.t == 0.0 {
        return 1.0 / (2.0 * (1.0 + 2.0 * r.a));
    }
    let h = p.hbar();
    let num = 2.0 * e.t * e.t * h * h / (p.sigma0 * p.sigma0) * bracket_x(&r);
    num / dbar_over_ell0_sq(p, e)
}

/// Squared momentum coherence length, in units of `(hbar / sigma0)^2`.
pub fn coherence_length_p(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    let s2 = p.sigma0 * p.sigma0;
    let num = 1.5
        * p.mass
        * p.mass
        * s2
        * s2
        * (2.0 * p.inv_ell0_sq() + (1.0 + p.gamma * p.gamma) / s2 + 4.0 * e.lt());
    num / dbar_over_ell0_sq(p, e)
}

/// `tr(rho^2) = 1 / nu`.
pub fn purity(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    1.0 / nu_sq(&reduced(p, e)).sqrt()
}

/// Purity polynomial transcribed term by term from its published form. Kept
/// for comparison only: its `gamma^2` and `sigma0^2/ell0^2` coefficients
/// disagree with the covariance determinant, and [`purity`] is the value used
/// everywhere else.
pub fn purity_published(p: &ParticleSpec, e: &EvolutionPoint) -> f64 {
    let (m, h, t, lam, g) = (p.mass, p.hbar(), e.t, e.lambda, p.gamma);
    let s2 = p.sigma0 * p.sigma0;
    let a4 = 4.0 * p.incoherence();
    let inv = 1.0 + a4 + 4.0 * s2 * lam * t + 4.0 * g * lam * h / m * t * t
        + 2.0 * h * lam * (3.0 * g * g + 2.0 + a4) / (3.0 * p.tau0() * m) * t.powi(3)
        + 4.0 * lam * lam * h * h / (3.0 * m * m) * t.powi(4);
    inv.powf(-0.5)
}

/// Coherence from purity and the two coherence lengths.
///
/// Algebraically identical to [`relative_entropy_coherence`] through
/// `s11 = lx2 / mu^2`, `s22 = lp2 / mu^2`, `nu = 1 / mu`. The `mu = 1`
/// endpoint is the pure-state limit.
pub fn coherence_from_purity(mu: f64, lx2: f64, lp2: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain(format!("purity must lie in (0, 1], got {mu}")));
    }
    let x = lx2 + lp2;
    let mu2 = mu * mu;
    if !(x > mu2) {
        return Err(Error::Domain(format!(
            "lx2 + lp2 = {x} must exceed mu^2 = {mu2}"
        )));
    }
    if mu == 1.0 {
        return Ok(bose_entropy(x / 2.0 - 0.5));
    }
    let t1 = 0.5
        * (4f64.ln() + 2.0 * mu.ln() + (1.0 - mu) / mu * (-mu).ln_1p()
            - (1.0 + mu) / mu * mu.ln_1p());
    let y = x / (2.0 * mu2);
    let t2 = y * (2.0 * mu2 / (x - mu2)).ln_1p();
    let t3 = 0.5 * ((y - 0.5).ln() + (y + 0.5).ln());
    Ok((t1 + t2 + t3).max(0.0))
}

pub fn coherence_report(p: &ParticleSpec, e: &EvolutionPoint) -> Result<CoherenceReport> {
    let cov = covariance(p, e);
    Ok(CoherenceReport {
        c: relative_entropy_coherence(&cov)?,
        s: von_neumann_entropy(cov.nu)?,
        lx2: coherence_length_x(p, e),
        lp2: coherence_length_p(p, e),
        mu: 1.0 / cov.nu,
        dbar: dbar(p, e),
    })
}
