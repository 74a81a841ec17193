use std::str::FromStr;

use crate::bath::ParticleSpec;
use crate::error::{Error, Result};
use crate::evolution::EvolutionPoint;
use crate::observables::{coherence_length_p, coherence_length_x, covariance, purity};
use crate::oracle::{compare, integrate_master_equation, moments_from_grid, sample_density, Grid2D, GridMoments, OracleReport};
use crate::tolerances::{PDE, PDE_ORDER_RATIO, QUADRATURE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    /// Sampled closed form only.
    Quick,
    /// Adds master-equation integration.
    Full,
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            o => Err(Error::Config { line: 0, msg: format!("level must be quick or full, got `{o}`") }),
        }
    }
}

pub const STANDARD_GAMMA: [f64; 3] = [-3.0, 0.0, 3.0];
pub const STANDARD_LAMBDA: [f64; 3] = [0.0, 1e21, 1e22];
pub const STANDARD_T: [f64; 3] = [0.25e-6, 0.5e-6, 1e-6];
const PDE_STEPS: usize = 16;

fn failed(name: &str, tol: f64) -> OracleReport {
    let mut r = compare(name, f64::NAN, f64::NAN, tol);
    r.pass = false;
    r
}

fn moment_reports(prefix: &str, p: &ParticleSpec, e: &EvolutionPoint, m: Result<GridMoments>, tol: f64) -> Vec<OracleReport> {
    let names = ["s11", "s22", "s12", "mu", "lx2", "lp2"];
    let at = |r: OracleReport| r.at(p.gamma, e.lambda, e.t);
    match m {
        Ok(m) => {
            let c = covariance(p, e);
            let pairs = [
                (c.s11, m.covariance.s11),
                (c.s22, m.covariance.s22),
                (c.s12, m.covariance.s12),
                (purity(p, e), m.mu),
                (coherence_length_x(p, e), m.lx2),
                (coherence_length_p(p, e), m.lp2),
            ];
            names
                .iter()
                .zip(pairs)
                .map(|(n, (a, v))| at(compare(&format!("{prefix}_{n}"), a, v, tol)))
                .collect()
        }
        Err(_) => names.iter().map(|n| at(failed(&format!("{prefix}_{n}"), tol))).collect(),
    }
}

/// Runs the oracle suite over the standard `(gamma, Lambda, t)` grid.
///
/// `n` overrides the points per axis of every grid; without it the sampled
/// route uses the default grid and the master equation the fitted one.
/// Oracle errors become failed reports so the whole grid is always covered.
pub fn verify(level: VerifyLevel, n: Option<usize>) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let regrid = |g: Grid2D| match n {
        Some(n) => g.with_n(n),
        None => Ok(g),
    };
    for &g in &STANDARD_GAMMA {
        let p = ParticleSpec::fullerene().with_gamma(g);
        for &lambda in &STANDARD_LAMBDA {
            for &t in &STANDARD_T {
                let e = EvolutionPoint::new(t, lambda)?;
                let grid = regrid(Grid2D::default_for(&p, &e))?;
                let m = sample_density(&p, &e, &grid).and_then(|dm| moments_from_grid(&dm, &p));
                out.extend(moment_reports("quadrature", &p, &e, m, QUADRATURE));
                if level == VerifyLevel::Full {
                    let grid = regrid(Grid2D::fitted(&p, &e))?;
                    let m = integrate_master_equation(&p, lambda, t, &grid, t / PDE_STEPS as f64)
                        .and_then(|tr| moments_from_grid(&tr.final_state, &p));
                    out.extend(moment_reports("pde", &p, &e, m, PDE).into_iter().take(3));
                }
            }
        }
    }
    if level == VerifyLevel::Full {
        out.push(order_report(n)?);
    }
    Ok(out)
}

/// Error ratio of `s11` on halving the step, reported against the middle of
/// the accepted window.
fn order_report(n: Option<usize>) -> Result<OracleReport> {
    let p = ParticleSpec::fullerene();
    let (lambda, t) = (1e21, 0.5e-6);
    let e = EvolutionPoint::new(t, lambda)?;
    let grid = Grid2D::fitted(&p, &e).with_n(n.unwrap_or(512))?;
    let want = covariance(&p, &e).s11;
    let err = |steps: usize| -> Result<f64> {
        let tr = integrate_master_equation(&p, lambda, t, &grid, t / steps as f64)?;
        Ok((moments_from_grid(&tr.final_state, &p)?.covariance.s11 / want - 1.0).abs())
    };
    let mid = 0.5 * (PDE_ORDER_RATIO.0 + PDE_ORDER_RATIO.1);
    let half = 0.5 * (PDE_ORDER_RATIO.1 - PDE_ORDER_RATIO.0) / mid;
    let r = match (err(4), err(8)) {
        (Ok(a), Ok(b)) => compare("pde_order_ratio", mid, a / b, half),
        _ => failed("pde_order_ratio", half),
    };
    Ok(r.at(p.gamma, lambda, t))
}
