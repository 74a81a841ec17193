use std::io::Write;

use crate::tolerances::REL_FLOOR;

/// One analytic-versus-numeric comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub gamma: f64,
    pub lambda: f64,
    pub t: f64,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn at(mut self, gamma: f64, lambda: f64, t: f64) -> Self {
        self.gamma = gamma;
        self.lambda = lambda;
        self.t = t;
        self
    }
}

/// `|a - n| / max(|a|, 1e-300)` against `tolerance`.
pub fn compare(quantity: &str, analytic: f64, numeric: f64, tolerance: f64) -> OracleReport {
    let rel_err = (analytic - numeric).abs() / analytic.abs().max(REL_FLOOR);
    OracleReport {
        quantity: quantity.to_string(),
        gamma: f64::NAN,
        lambda: f64::NAN,
        t: f64::NAN,
        analytic,
        numeric,
        rel_err,
        tol: tolerance,
        pass: rel_err <= tolerance,
    }
}

/// Report with the largest `rel_err / tol`.
pub fn worst(reports: &[OracleReport]) -> Option<&OracleReport> {
    reports
        .iter()
        .max_by(|a, b| (a.rel_err / a.tol).total_cmp(&(b.rel_err / b.tol)))
}

pub const CSV_HEADER: &str = "quantity,gamma,lambda,t,analytic,numeric,rel_err,tol,pass";

pub fn write_csv<W: Write>(reports: &[OracleReport], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.quantity, r.gamma, r.lambda, r.t, r.analytic, r.numeric, r.rel_err, r.tol, r.pass
        )?;
    }
    Ok(())
}
