//! Flat `key = value` sweep configuration.
//!
//! ```text
//! # fullerene, three correlations, 60 decades of noise
//! [particle]
//! mass = 1.2e-24
//! sigma0 = 7.8e-9
//! ell0 = 50e-9        # or inf
//!
//! [sweep]
//! gamma = -3, 0, 3
//! lambda = range(1e19, 1e24, 60, log)
//! t = 1e-6
//!
//! [output]
//! quantities = mu, C, lx2, lp2
//! path = fig2.csv
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use crate::bath::ParticleSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// A parameter axis: explicit values or an evenly spaced range.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        count: usize,
        spacing: Spacing,
    },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Axis::List(ref v) => v.clone(),
            Axis::Range { min, max, count, spacing } => {
                if count == 1 {
                    return vec![min];
                }
                let last = (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        let f = i as f64 / last;
                        match spacing {
                            Spacing::Lin => min + f * (max - min),
                            Spacing::Log => (min.ln() + f * (max.ln() - min.ln())).exp(),
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Columns available in sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    S11,
    S22,
    S12,
    Nu,
    Mu,
    Lx2,
    Lp2,
    C,
    S,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::S11,
        Quantity::S22,
        Quantity::S12,
        Quantity::Nu,
        Quantity::Mu,
        Quantity::Lx2,
        Quantity::Lp2,
        Quantity::C,
        Quantity::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::S11 => "s11",
            Quantity::S22 => "s22",
            Quantity::S12 => "s12",
            Quantity::Nu => "nu",
            Quantity::Mu => "mu",
            Quantity::Lx2 => "lx2",
            Quantity::Lp2 => "lp2",
            Quantity::C => "C",
            Quantity::S => "S",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub particle: ParticleSpec,
    pub gamma: Axis,
    pub lambda: Axis,
    pub t: Axis,
    pub outputs: Vec<Quantity>,
    pub path: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            particle: ParticleSpec::fullerene(),
            gamma: Axis::List(vec![0.0]),
            lambda: Axis::List(vec![0.0]),
            t: Axis::List(vec![1e-6]),
            outputs: Quantity::ALL.to_vec(),
            path: None,
        }
    }
}

fn number(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        v => v.parse::<f64>().map_err(|_| format!("`{v}` is not a number")),
    }
}

fn axis(s: &str) -> std::result::Result<Axis, String> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("range(").and_then(|b| b.strip_suffix(')')) {
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err("range takes (min, max, count, lin|log)".into());
        }
        let min = number(parts[0])?;
        let max = number(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("`{}` is not a count", parts[2]))?;
        let spacing = match parts[3] {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            o => return Err(format!("spacing must be lin or log, got `{o}`")),
        };
        if count == 0 {
            return Err("range count must be positive".into());
        }
        if !(min.is_finite() && max.is_finite()) {
            return Err("range endpoints must be finite".into());
        }
        if spacing == Spacing::Log && !(min > 0.0 && max > 0.0) {
            return Err("log range needs positive endpoints".into());
        }
        return Ok(Axis::Range { min, max, count, spacing });
    }
    let vals = s.split(',').map(number).collect::<std::result::Result<Vec<_>, _>>()?;
    if vals.is_empty() || s.is_empty() {
        return Err("empty list".into());
    }
    Ok(Axis::List(vals))
}

impl FromStr for SweepConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut section = String::new();
        let (mut mass, mut sigma0, mut ell0) = (cfg.particle.mass, cfg.particle.sigma0, cfg.particle.ell0);
        let mut particle_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| Error::Config { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if !matches!(section.as_str(), "particle" | "sweep" | "output") {
                    return Err(err(format!("unknown section [{section}]")));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match (section.as_str(), key) {
                ("particle", "mass") => mass = number(value).map_err(err)?,
                ("particle", "sigma0") => sigma0 = number(value).map_err(err)?,
                ("particle", "ell0") => ell0 = number(value).map_err(err)?,
                ("sweep", "gamma") => cfg.gamma = axis(value).map_err(err)?,
                ("sweep", "lambda") => cfg.lambda = axis(value).map_err(err)?,
                ("sweep", "t") => cfg.t = axis(value).map_err(err)?,
                ("output", "quantities") => {
                    cfg.outputs = value
                        .split(',')
                        .map(|q| q.trim().parse())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?;
                }
                ("output", "path") => cfg.path = Some(PathBuf::from(value)),
                ("", _) => return Err(err(format!("key `{key}` outside any section"))),
                (s, k) => return Err(err(format!("unknown key `{k}` in [{s}]"))),
            }
            if section == "particle" {
                particle_line = line_no;
            }
        }
        cfg.particle = ParticleSpec::new(mass, sigma0, ell0, 0.0)
            .map_err(|e| Error::Config { line: particle_line, msg: e.to_string() })?;
        Ok(cfg)
    }
}

impl SweepConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_example() {
        let cfg: SweepConfig = "
            # comment
            [particle]
            mass = 1.2e-24
            sigma0 = 7.8e-9
            ell0 = inf   # coherent source

            [sweep]
            gamma = -3, 0, 3
            lambda = range(1e19, 1e24, 6, log)
            t = 1e-6

            [output]
            quantities = mu, C
            path = out.csv
        "
        .parse()
        .unwrap();
        assert!(cfg.particle.ell0.is_infinite());
        assert_eq!(cfg.gamma, Axis::List(vec![-3.0, 0.0, 3.0]));
        let l = cfg.lambda.values();
        assert_eq!(l.len(), 6);
        assert!((l[1] / 1e20 - 1.0).abs() < 1e-12);
        assert_eq!(cfg.outputs, vec![Quantity::Mu, Quantity::C]);
        assert_eq!(cfg.path, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn reports_line_numbers() {
        let cases = [
            ("[sweep]\ngamma = 1\nbogus = 2\n", 3),
            ("[sweep]\n\nlambda = range(0, 1e20, 5, log)\n", 3),
            ("[nope]\n", 1),
            ("gamma = 1\n", 1),
            ("[sweep]\nt = abc\n", 2),
            ("[sweep]\nt\n", 2),
            ("[output]\nquantities = mu, xyz\n", 2),
            ("[particle]\nmass = -1\n", 2),
        ];
        for (text, line) in cases {
            match text.parse::<SweepConfig>() {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn linear_range_endpoints() {
        let a = axis("range(-6, 6, 5, lin)").unwrap();
        assert_eq!(a.values(), vec![-6.0, -3.0, 0.0, 3.0, 6.0]);
        assert_eq!(axis("range(2, 9, 1, lin)").unwrap().values(), vec![2.0]);
        assert!(axis("range(1, 2, 0, lin)").is_err());
        assert!(axis("").is_err());
    }
}
