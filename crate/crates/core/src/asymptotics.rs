//! Strong-decoherence and strong-correlation limits, the coherence-purity
//! parametrisation and its inversion for `Lambda`.

use crate::bath::ParticleSpec;
use crate::error::{invalid, Error, Result};
use crate::evolution::EvolutionPoint;

/// Large-`Lambda` behaviour at fixed `t`.
///
/// The lengths and purity vanish as powers of `Lambda`, so they are stored as
/// the coefficients of those powers; use the `*_at` methods for values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReport {
    /// `lim lx2 * Lambda` (m^2 s).
    pub lx2_inf: f64,
    /// `lim lp2 * Lambda` (m^2 s).
    pub lp2_inf: f64,
    /// `lim mu^2 * Lambda^2` (m^4 s^2).
    pub mu2_inf: f64,
    /// Plateau of the relative entropy of coherence (nats).
    pub c_frozen: f64,
}

impl AsymptoticReport {
    pub fn lx2_at(&self, lambda: f64) -> f64 {
        self.lx2_inf / lambda
    }

    pub fn lp2_at(&self, lambda: f64) -> f64 {
        self.lp2_inf / lambda
    }

    pub fn mu_at(&self, lambda: f64) -> f64 {
        self.mu2_inf.sqrt() / lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub epsilon: f64,
    pub theta: f64,
    /// Residual sum of squares (nats^2).
    pub rss: f64,
    pub n_points: usize,
}

pub fn asymptotic_limits(p: &ParticleSpec, t: f64) -> Result<AsymptoticReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let s2 = p.sigma0 * p.sigma0;
    let tau0 = p.tau0();
    let r = 3f64.sqrt() * tau0 / t;
    Ok(AsymptoticReport {
        lx2_inf: 1.0 / (2.0 * t * s2),
        lp2_inf: 1.5 * tau0 * tau0 / (s2 * t.powi(3)),
        mu2_inf: 0.75 * tau0 * tau0 / (s2 * s2 * t.powi(4)),
        c_frozen: (r + 1.0 / r).ln(),
    })
}

fn require_noise(e: &EvolutionPoint) -> Result<()> {
    if e.lt() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "needs Lambda t > 0, got Lambda = {}, t = {}",
            e.lambda, e.t
        )))
    }
}

/// `(lx2, lp2)` in the limit of large `gamma`.
pub fn gamma_infinity_lengths(p: &ParticleSpec, e: &EvolutionPoint) -> Result<(f64, f64)> {
    require_noise(e)?;
    let base = 3.0 / (8.0 * p.sigma0 * p.sigma0 * e.lt());
    let r = p.tau0() / e.t;
    Ok((base, base * r * r))
}

/// Scale of the coherence-purity relation at large `gamma`.
pub fn theta(p: &ParticleSpec, e: &EvolutionPoint) -> Result<f64> {
    require_noise(e)?;
    let tau0 = p.tau0();
    Ok((tau0 * tau0 / (2.0 * p.sigma0 * p.sigma0 * e.t.powi(3) * e.lambda)).sqrt())
}

/// `(1 + epsilon) ln(theta / mu)`.
pub fn coherence_approx(mu: f64, theta: f64, epsilon: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < theta) {
        return Err(Error::Domain(format!("need 0 < mu < theta, got mu = {mu}, theta = {theta}")));
    }
    Ok((1.0 + epsilon) * (theta / mu).ln())
}

/// Least-squares `epsilon` for `C = (1 + epsilon) ln(theta / mu)`, linear in
/// `L = ln(theta / mu)`.
pub fn fit_epsilon(points: &[(f64, f64)], theta: f64) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::Domain(format!(
            "fit is underdetermined with {} point(s)",
            points.len()
        )));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(mu, _) in points {
        if !(mu > 0.0 && mu < theta) {
            return Err(Error::Domain(format!("point mu = {mu} outside (0, theta = {theta})")));
        }
        logs.push((theta / mu).ln());
    }
    let scl: f64 = points.iter().zip(&logs).map(|(&(_, c), l)| c * l).sum();
    let sll: f64 = logs.iter().map(|l| l * l).sum();
    let slope = scl / sll;
    let rss = points
        .iter()
        .zip(&logs)
        .map(|(&(_, c), l)| (c - slope * l).powi(2))
        .sum();
    Ok(FitResult {
        epsilon: slope - 1.0,
        theta,
        rss,
        n_points: points.len(),
    })
}

/// `Lambda` from measured purity and coherence.
///
/// Without `epsilon` this is the bare inversion of `C = ln(theta / mu)`; it
/// underestimates `Lambda` by [`lambda_bias_factor`] when the data follow the
/// fitted law.
pub fn estimate_lambda(mu: f64, c: f64, p: &ParticleSpec, t: f64, epsilon: Option<f64>) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Domain(format!("purity must lie in (0, 1), got {mu}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("coherence must be positive, got {c}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let eps = epsilon.unwrap_or(0.0);
    if !(eps > -1.0) {
        return Err(invalid("epsilon", format!("must exceed -1, got {eps}")));
    }
    let x = p.tau0() / (t * mu * (c / (1.0 + eps)).exp());
    Ok(x * x / (2.0 * t * p.sigma0 * p.sigma0))
}

/// Ratio of the corrected to the bare `Lambda` estimate, `exp(2 eps C / (1 + eps))`.
pub fn lambda_bias_factor(c: f64, epsilon: f64) -> f64 {
    (2.0 * epsilon * c / (1.0 + epsilon)).exp()
}

/// `l1` coherence and purity `|r|` of a qubit with Bloch vector `r`.
pub fn qubit_demo(r: [f64; 3]) -> Result<(f64, f64)> {
    let norm2 = r.iter().map(|v| v * v).sum::<f64>();
    if !(norm2 <= 1.0 + 1e-12) {
        return Err(Error::InvalidState(format!("Bloch vector of length {} > 1", norm2.sqrt())));
    }
    let mu = norm2.sqrt();
    Ok(((r[0] * r[0] + r[1] * r[1]).sqrt(), mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{coherence_length_p, coherence_length_x, coherence_report};
    use approx::assert_relative_eq;

    fn at(t: f64, lambda: f64) -> EvolutionPoint {
        EvolutionPoint::new(t, lambda).unwrap()
    }

    #[test]
    fn frozen_coherence_value() {
        let p = ParticleSpec::fullerene();
        let a = asymptotic_limits(&p, 1e-6).unwrap();
        let u = 1e-6 / p.tau0();
        let want = (3f64.sqrt() / u + u / 3f64.sqrt()).ln();
        assert_relative_eq!(a.c_frozen, want, max_relative = 1e-14);
        assert!((a.c_frozen - 0.710).abs() < 5e-4);
        let sym = asymptotic_limits(&p, 3f64.sqrt() * p.tau0()).unwrap();
        assert_relative_eq!(sym.c_frozen, 2f64.ln(), max_relative = 1e-14);
        assert_eq!(a, asymptotic_limits(&p.with_gamma(9.0).with_ell0(1e-7), 1e-6).unwrap());
        assert!(asymptotic_limits(&p, 0.0).is_err());
    }

    #[test]
    fn limits_match_full_forms() {
        let p = ParticleSpec::fullerene().with_gamma(3.0);
        let a = asymptotic_limits(&p, 1e-6).unwrap();
        let lam = 1e30;
        let e = at(1e-6, lam);
        let r = coherence_report(&p, &e).unwrap();
        assert_relative_eq!(r.lx2, a.lx2_at(lam), max_relative = 1e-3);
        assert_relative_eq!(r.lp2, a.lp2_at(lam), max_relative = 1e-3);
        assert_relative_eq!(r.mu, a.mu_at(lam), max_relative = 1e-3);
        assert!((r.c - a.c_frozen).abs() < 1e-4);
    }

    #[test]
    fn gamma_infinity_closed_forms() {
        let p = ParticleSpec::fullerene();
        let e = at(1e-6, 1e22);
        let (lx, lp) = gamma_infinity_lengths(&p, &e).unwrap();
        assert!((lx - 0.6164).abs() < 1e-4, "{lx}");
        assert!((lp - 0.2954).abs() < 1e-4, "{lp}");
        assert_relative_eq!(lp / lx, (p.tau0() / 1e-6).powi(2), max_relative = 1e-14);
        let (lx2, lp2) = gamma_infinity_lengths(&p, &at(1e-6, 2e22)).unwrap();
        assert_relative_eq!(lx2, lx / 2.0, max_relative = 1e-14);
        assert_relative_eq!(lp2, lp / 2.0, max_relative = 1e-14);
        let big = p.with_gamma(1e6);
        assert_relative_eq!(coherence_length_x(&big, &e), lx, max_relative = 1e-4);
        assert_relative_eq!(coherence_length_p(&big, &e), lp, max_relative = 1e-4);
        assert!(gamma_infinity_lengths(&p, &at(1e-6, 0.0)).is_err());
    }

    #[test]
    fn theta_values() {
        let p = ParticleSpec::fullerene();
        let th = theta(&p, &at(1e-6, 1e22)).unwrap();
        assert!((th - 0.6276).abs() < 1e-4, "{th}");
        let th4 = theta(&p, &at(1e-6, 4e22)).unwrap();
        assert_relative_eq!(th4, th / 2.0, max_relative = 1e-14);
        assert!(theta(&p, &at(0.0, 1e22)).is_err());
        // mu e^C -> theta with the large-gamma forms C = ln gamma, mu^2 = theta^2 / gamma^2
        let g: f64 = 1e6;
        let mu = th / g;
        assert_relative_eq!(mu * g.ln().exp(), th, max_relative = 1e-12);
    }

    #[test]
    fn approx_examples() {
        assert_relative_eq!(coherence_approx(1f64.exp().recip(), 1.0, 0.0).unwrap(), 1.0, max_relative = 1e-15);
        let th = 0.6276;
        assert!((coherence_approx(2.6e-3, th, 0.069).unwrap() - 5.86).abs() < 0.01);
        assert!((coherence_approx(15.1e-3, th, 0.069).unwrap() - 3.98).abs() < 0.01);
        assert!(coherence_approx(0.7, th, 0.0).is_err());
    }

    #[test]
    fn fit_recovers_exact_model() {
        let th = 0.6;
        let pts: Vec<_> = [1e-3, 5e-3, 2e-2, 0.1]
            .iter()
            .map(|&mu| (mu, coherence_approx(mu, th, 0.0).unwrap()))
            .collect();
        let f = fit_epsilon(&pts, th).unwrap();
        assert!(f.epsilon.abs() < 1e-14);
        assert!(f.rss < 1e-26);
        assert_eq!(f.n_points, 4);
        assert!(fit_epsilon(&pts[..1], th).is_err());
        assert!(fit_epsilon(&[(0.7, 1.0), (1e-3, 5.0)], th).is_err());
    }

    #[test]
    fn inversion_round_trip() {
        let p = ParticleSpec::fullerene();
        for &(lam, eps) in &[(1e22, 0.0), (3e21, 0.069), (7e23, 0.1)] {
            let th = theta(&p, &at(1e-6, lam)).unwrap();
            let mu = th / 300.0;
            let c = coherence_approx(mu, th, eps).unwrap();
            let back = estimate_lambda(mu, c, &p, 1e-6, Some(eps)).unwrap();
            assert_relative_eq!(back, lam, max_relative = 1e-12);
        }
        let raw = estimate_lambda(2.6e-3, 5.9, &p, 1e-6, None).unwrap();
        assert!((raw / 4.4e21 - 1.0).abs() < 0.02, "{raw}");
        let fixed = estimate_lambda(2.6e-3, 5.9, &p, 1e-6, Some(0.069)).unwrap();
        assert_relative_eq!(fixed / raw, lambda_bias_factor(5.9, 0.069), max_relative = 1e-12);
        assert!(estimate_lambda(1.0, 5.9, &p, 1e-6, None).is_err());
        assert!(estimate_lambda(0.1, -1.0, &p, 1e-6, None).is_err());
    }

    #[test]
    fn qubit_paths() {
        let (c, mu) = qubit_demo([0.0, 0.0, 0.6]).unwrap();
        assert_eq!((c, mu), (0.0, 0.6));
        let (c, mu) = qubit_demo([0.8, 0.0, 0.0]).unwrap();
        assert_eq!((c, mu), (0.8, 0.8));
        assert_eq!(qubit_demo([0.0; 3]).unwrap(), (0.0, 0.0));
        assert!(qubit_demo([0.9, 0.0, 0.9]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn inversion_is_exact(lam in 1e18..1e26f64, frac in 1e-4..0.99f64, eps in 0.0..0.2f64, t in 1e-7..1e-5f64) {
                let p = ParticleSpec::fullerene();
                let th = theta(&p, &EvolutionPoint::new(t, lam).unwrap()).unwrap();
                let mu = (th * frac).min(0.999);
                prop_assume!(mu < th);
                let c = coherence_approx(mu, th, eps).unwrap();
                prop_assume!(c > 0.0);
                let back = estimate_lambda(mu, c, &p, t, Some(eps)).unwrap();
                prop_assert!((back / lam - 1.0).abs() < 1e-10);
            }

            #[test]
            fn frozen_at_least_ln2(t in 1e-9..1e-3f64) {
                let a = asymptotic_limits(&ParticleSpec::fullerene(), t).unwrap();
                prop_assert!(a.c_frozen >= 2f64.ln() - 1e-15);
            }
        }
    }
}
