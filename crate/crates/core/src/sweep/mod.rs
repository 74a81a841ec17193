//! Parameter sweeps, figure and table data, oracle verification and
//! inversion reports, all emitted as CSV.
//!
//! Floats are written with 17 significant digits and rows come out in
//! lexicographic `(gamma, lambda, t)` order whatever the thread count, so an
//! identical configuration gives a byte-identical file.

mod config;
mod figures;
mod verify;

use std::io::Write;

use rayon::prelude::*;

use crate::asymptotics::{estimate_lambda, lambda_bias_factor};
use crate::bath::ParticleSpec;
use crate::error::{Error, Result};
use crate::evolution::EvolutionPoint;
use crate::observables::{coherence_length_p, coherence_length_x, covariance, relative_entropy_coherence, von_neumann_entropy};
use crate::tolerances::PHYSICALITY;

pub use config::{Axis, Quantity, Spacing, SweepConfig};
pub use figures::{figure_data, figure_table, table1, write_table1, FigureId, Table1Row, TABLE1};
pub use verify::{verify, VerifyLevel};

/// Default correction exponent for [`infer`].
pub const DEFAULT_EPSILON: f64 = 0.069;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "DECOGAUSS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub lambda: f64,
    pub t: f64,
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
    pub nu: f64,
    pub mu: f64,
    pub lx2: f64,
    pub lp2: f64,
    pub c: f64,
    pub s: f64,
}

impl SweepRow {
    pub fn compute(p: &ParticleSpec, e: &EvolutionPoint) -> Result<Self> {
        let cov = covariance(p, e);
        let row = Self {
            gamma: p.gamma,
            lambda: e.lambda,
            t: e.t,
            s11: cov.s11,
            s22: cov.s22,
            s12: cov.s12,
            nu: cov.nu,
            mu: 1.0 / cov.nu,
            lx2: coherence_length_x(p, e),
            lp2: coherence_length_p(p, e),
            c: relative_entropy_coherence(&cov)?,
            s: von_neumann_entropy(cov.nu)?,
        };
        row.validate()?;
        Ok(row)
    }

    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::S11 => self.s11,
            Quantity::S22 => self.s22,
            Quantity::S12 => self.s12,
            Quantity::Nu => self.nu,
            Quantity::Mu => self.mu,
            Quantity::Lx2 => self.lx2,
            Quantity::Lp2 => self.lp2,
            Quantity::C => self.c,
            Quantity::S => self.s,
        }
    }

    /// Physicality checks applied before a row is written.
    pub fn validate(&self) -> Result<()> {
        let all = Quantity::ALL.map(|q| self.get(q));
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite value in {self:?}")));
        }
        if self.nu < 1.0 - PHYSICALITY || self.mu > 1.0 + PHYSICALITY || self.c < 0.0 || self.s < 0.0 {
            return Err(Error::Validation(format!("unphysical row {self:?}")));
        }
        if !(self.lx2 > 0.0 && self.lp2 > 0.0 && self.s11 > 0.0 && self.s22 > 0.0) {
            return Err(Error::Validation(format!("non-positive width in {self:?}")));
        }
        Ok(())
    }
}

/// Runs `f` on a pool sized by `DECOGAUSS_THREADS` when set.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Config { line: 0, msg: format!("{THREADS_ENV} must be a positive integer, got `{v}`") })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config { line: 0, msg: e.to_string() })?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut points = Vec::new();
    for g in cfg.gamma.values() {
        for l in cfg.lambda.values() {
            for t in cfg.t.values() {
                points.push((g, l, t));
            }
        }
    }
    let p0 = cfg.particle;
    with_thread_limit(|| {
        points
            .par_iter()
            .map(|&(g, l, t)| {
                let p = p0.with_gamma(g);
                p.validate()?;
                SweepRow::compute(&p, &EvolutionPoint::new(t, l)?)
            })
            .collect::<Result<Vec<_>>>()
    })?
}

pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `gamma,lambda,t` followed by the selected quantities.
pub fn write_rows<W: Write>(rows: &[SweepRow], quantities: &[Quantity], mut w: W) -> Result<()> {
    let mut header = vec!["gamma", "lambda", "t"];
    header.extend(quantities.iter().map(|q| q.name()));
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        r.validate()?;
        let mut cols = vec![fmt(r.gamma), fmt(r.lambda), fmt(r.t)];
        cols.extend(quantities.iter().map(|&q| fmt(r.get(q))));
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferReport {
    pub raw: f64,
    pub corrected: f64,
    pub epsilon: f64,
    /// `corrected / raw = exp(2 eps C / (1 + eps))`.
    pub bias_factor: f64,
}

/// Bare and corrected `Lambda` estimates from a measured `(mu, C)` pair.
pub fn infer(mu: f64, c: f64, t: f64, p: &ParticleSpec, epsilon: Option<f64>) -> Result<InferReport> {
    let eps = epsilon.unwrap_or(DEFAULT_EPSILON);
    Ok(InferReport {
        raw: estimate_lambda(mu, c, p, t, None)?,
        corrected: estimate_lambda(mu, c, p, t, Some(eps))?,
        epsilon: eps,
        bias_factor: lambda_bias_factor(c, eps),
    })
}
