use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::config::{Axis, Quantity, Spacing, SweepConfig};
use super::{fmt, run_sweep, SweepRow};
use crate::asymptotics::{coherence_approx, fit_epsilon, gamma_infinity_lengths, theta};
use crate::bath::ParticleSpec;
use crate::error::{Error, Result};
use crate::evolution::EvolutionPoint;
use crate::observables::{coherence_from_purity, purity_published};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Position coherence length against `Lambda`.
    F2a,
    /// Momentum coherence length against `Lambda`.
    F2b,
    /// Purity against `Lambda`.
    F2c,
    /// Coherence against `Lambda`, with `|dC/dLambda|`.
    F2d,
    /// Purity and coherence over the `(gamma, Lambda)` plane.
    F3,
    /// All quantifiers against `gamma`.
    F4a,
    /// Coherence against purity in the large-`gamma` limit.
    F4b,
    /// Exact and fitted coherence-purity points at large `gamma`.
    F5,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F2c,
        FigureId::F2d,
        FigureId::F3,
        FigureId::F4a,
        FigureId::F4b,
        FigureId::F5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::F2a => "2a",
            FigureId::F2b => "2b",
            FigureId::F2c => "2c",
            FigureId::F2d => "2d",
            FigureId::F3 => "3",
            FigureId::F4a => "4a",
            FigureId::F4b => "4b",
            FigureId::F5 => "5",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config { line: 0, msg: format!("unknown figure id `{s}`") })
    }
}

const T_REF: f64 = 1e-6;
const LAMBDA_REF: f64 = 1e22;

fn lambda_decades() -> Axis {
    Axis::Range { min: 1e19, max: 1e24, count: 60, spacing: Spacing::Log }
}

fn fig2_config() -> SweepConfig {
    SweepConfig {
        gamma: Axis::List(vec![-3.0, 0.0, 3.0]),
        lambda: lambda_decades(),
        t: Axis::List(vec![T_REF]),
        ..SweepConfig::default()
    }
}

fn write_table<W: Write>(mut w: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        let cols: Vec<String> = r.iter().map(|&v| fmt(v)).collect();
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

/// `|dC/dLambda|` along one `gamma` block: central differences inside,
/// one-sided at the ends.
fn slope(rows: &[SweepRow]) -> Vec<f64> {
    let n = rows.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1.min(n - 1)),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            if a == b {
                return 0.0;
            }
            ((rows[b].c - rows[a].c) / (rows[b].lambda - rows[a].lambda)).abs()
        })
        .collect()
}

/// Rows for one figure, as `(header, rows)`.
pub fn figure_table(id: FigureId) -> Result<(Vec<&'static str>, Vec<Vec<f64>>)> {
    let p = ParticleSpec::fullerene();
    let pick = |cfg: &SweepConfig, qs: &[Quantity]| -> Result<Vec<Vec<f64>>> {
        Ok(run_sweep(cfg)?
            .iter()
            .map(|r| {
                let mut v = vec![r.gamma, r.lambda, r.t];
                v.extend(qs.iter().map(|&q| r.get(q)));
                v
            })
            .collect())
    };
    Ok(match id {
        FigureId::F2a => (vec!["gamma", "lambda", "t", "lx2"], pick(&fig2_config(), &[Quantity::Lx2])?),
        FigureId::F2b => (vec!["gamma", "lambda", "t", "lp2"], pick(&fig2_config(), &[Quantity::Lp2])?),
        FigureId::F2c => (vec!["gamma", "lambda", "t", "mu"], pick(&fig2_config(), &[Quantity::Mu])?),
        FigureId::F2d => {
            let rows = run_sweep(&fig2_config())?;
            let mut out = Vec::new();
            for block in rows.chunks(fig2_config().lambda.values().len()) {
                for (r, d) in block.iter().zip(slope(block)) {
                    out.push(vec![r.gamma, r.lambda, r.t, r.c, d]);
                }
            }
            (vec!["gamma", "lambda", "t", "C", "dC_dLambda_abs"], out)
        }
        FigureId::F3 => {
            let cfg = SweepConfig {
                gamma: Axis::Range { min: -6.0, max: 6.0, count: 49, spacing: Spacing::Lin },
                lambda: Axis::Range { min: 1e20, max: 1e23, count: 40, spacing: Spacing::Log },
                t: Axis::List(vec![T_REF]),
                ..SweepConfig::default()
            };
            (vec!["gamma", "lambda", "t", "mu", "C"], pick(&cfg, &[Quantity::Mu, Quantity::C])?)
        }
        FigureId::F4a => {
            let cfg = SweepConfig {
                gamma: Axis::Range { min: -10.0, max: 10.0, count: 201, spacing: Spacing::Lin },
                lambda: Axis::List(vec![LAMBDA_REF]),
                t: Axis::List(vec![T_REF]),
                ..SweepConfig::default()
            };
            let qs = [Quantity::C, Quantity::Lx2, Quantity::Lp2, Quantity::Mu];
            (vec!["gamma", "lambda", "t", "C", "lx2", "lp2", "mu"], pick(&cfg, &qs)?)
        }
        FigureId::F4b => {
            let mut out = Vec::new();
            for lambda in [1e21, 1e22, 1e23] {
                let e = EvolutionPoint::new(T_REF, lambda)?;
                let (lx2, lp2) = gamma_infinity_lengths(&p, &e)?;
                let bound = (lx2 + lp2).sqrt().min(1.0);
                let mus = Axis::Range { min: 1e-4, max: 0.999 * bound, count: 100, spacing: Spacing::Log };
                for mu in mus.values() {
                    out.push(vec![lambda, T_REF, mu, coherence_from_purity(mu, lx2, lp2)?]);
                }
            }
            (vec!["lambda", "t", "mu", "C"], out)
        }
        FigureId::F5 => {
            let cfg = SweepConfig {
                gamma: Axis::Range { min: 50.0, max: 300.0, count: 26, spacing: Spacing::Lin },
                lambda: Axis::List(vec![LAMBDA_REF]),
                t: Axis::List(vec![T_REF]),
                ..SweepConfig::default()
            };
            let rows = run_sweep(&cfg)?;
            let th = theta(&p, &EvolutionPoint::new(T_REF, LAMBDA_REF)?)?;
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.mu, r.c)).collect();
            let fit = fit_epsilon(&pts, th)?;
            let out = rows
                .iter()
                .map(|r| {
                    Ok(vec![
                        r.gamma,
                        r.mu,
                        r.c,
                        coherence_approx(r.mu, th, fit.epsilon)?,
                        coherence_approx(r.mu, th, 0.0)?,
                        fit.epsilon,
                    ])
                })
                .collect::<Result<_>>()?;
            (vec!["gamma", "mu", "C", "C_fit", "C_approx", "epsilon"], out)
        }
    })
}

/// Writes `fig<id>.csv` into `dir` and returns its path.
pub fn figure_data(id: FigureId, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let (header, rows) = figure_table(id)?;
    let path = dir.join(format!("fig{}.csv", id.name()));
    let mut w = BufWriter::new(File::create(&path)?);
    write_table(&mut w, &header, &rows)?;
    w.flush()?;
    Ok(path)
}

/// Tabulated `(gamma, mu, C)` at `Lambda = 1e22`, `t = 1 us`.
pub const TABLE1: [(f64, f64, f64); 6] = [
    (50.0, 15.1e-3, 4.1),
    (105.6, 7.2e-3, 4.8),
    (147.2, 5.2e-3, 5.2),
    (202.8, 3.8e-3, 5.5),
    (258.3, 3.0e-3, 5.7),
    (300.0, 2.6e-3, 5.9),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub gamma: f64,
    pub mu_printed: f64,
    pub c_printed: f64,
    pub mu: f64,
    pub c: f64,
    /// `mu / mu_printed - 1`.
    pub mu_rel_dev: f64,
    /// `C - C_printed` (nats).
    pub c_dev: f64,
    /// Purity from the term-by-term published polynomial, for reference.
    pub mu_published_formula: f64,
    /// Strict ordering of the computed column down the whole table.
    pub monotone: bool,
}

/// Recomputes every tabulated row under `Lambda = 1e22`, `t = 1 us`.
pub fn table1() -> Result<Vec<Table1Row>> {
    let e = EvolutionPoint::new(T_REF, LAMBDA_REF)?;
    let base = ParticleSpec::fullerene();
    let mut rows = TABLE1
        .iter()
        .map(|&(g, mu_p, c_p)| {
            let p = base.with_gamma(g);
            let r = SweepRow::compute(&p, &e)?;
            Ok(Table1Row {
                gamma: g,
                mu_printed: mu_p,
                c_printed: c_p,
                mu: r.mu,
                c: r.c,
                mu_rel_dev: r.mu / mu_p - 1.0,
                c_dev: r.c - c_p,
                mu_published_formula: purity_published(&p, &e),
                monotone: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| w[1].mu < w[0].mu && w[1].c > w[0].c);
    for r in rows.iter_mut() {
        r.monotone = monotone;
    }
    Ok(rows)
}

pub fn write_table1<W: Write>(rows: &[Table1Row], mut w: W) -> Result<()> {
    writeln!(w, "gamma,mu_printed,C_printed,mu,C,mu_rel_dev,C_dev,mu_published_formula,monotone")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt(r.gamma),
            fmt(r.mu_printed),
            fmt(r.c_printed),
            fmt(r.mu),
            fmt(r.c),
            fmt(r.mu_rel_dev),
            fmt(r.c_dev),
            fmt(r.mu_published_formula),
            r.monotone
        )?;
    }
    Ok(())
}
