use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use decogauss::oracle::{worst, write_csv};
use decogauss::sweep::{self, FigureId, SweepConfig, VerifyLevel};
use decogauss::{DensityCoeffs, Error, EvolutionPoint, ParticleSpec};

#[derive(Parser)]
#[command(name = "decogauss", version, about = "Coherence of a decohering correlated Gaussian packet")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone, Copy)]
struct Particle {
    /// Particle mass (kg)
    #[arg(long, default_value_t = 1.2e-24)]
    mass: f64,
    /// Initial packet width (m)
    #[arg(long, default_value_t = 7.8e-9)]
    sigma0: f64,
    /// Source coherence length (m), or `inf`
    #[arg(long, default_value_t = 50e-9)]
    ell0: f64,
}

impl Particle {
    fn spec(self, gamma: f64) -> decogauss::Result<ParticleSpec> {
        ParticleSpec::new(self.mass, self.sigma0, self.ell0, gamma)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate every observable over a configured parameter grid
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; overrides the config `path`, stdout when neither is set
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data behind one figure (2a, 2b, 2c, 2d, 3, 4a, 4b, 5 or all)
    Figure {
        #[arg(long)]
        id: String,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the tabulated purity and coherence values
    Table1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the numerical oracles against the closed forms
    Verify {
        #[arg(long, default_value = "quick")]
        level: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Points per grid axis for every oracle run
        #[arg(long)]
        n: Option<usize>,
    },
    /// Estimate Lambda from a measured purity and coherence
    Infer {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        coherence: f64,
        /// Evolution time (s)
        #[arg(long)]
        t: f64,
        /// Correction exponent; 0.069 when omitted
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        particle: Particle,
    },
    /// Print the density-matrix coefficients at one point
    Coeffs {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        particle: Particle,
    },
}

enum Failure {
    Validation(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. } | Error::InvalidParameter { .. } | Error::Io(_) => Failure::Config(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Sweep { config, out } => {
            let cfg = SweepConfig::from_path(&config)?;
            let rows = sweep::run_sweep(&cfg)?;
            let mut w = sink(out.as_ref().or(cfg.path.as_ref()))?;
            sweep::write_rows(&rows, &cfg.outputs, &mut w)?;
            w.flush()?;
        }
        Cmd::Figure { id, out } => {
            let ids = if id == "all" {
                FigureId::ALL.to_vec()
            } else {
                vec![id.parse::<FigureId>()?]
            };
            for id in ids {
                let path = sweep::figure_data(id, &out)?;
                eprintln!("wrote {}", path.display());
            }
        }
        Cmd::Table1 { out } => {
            let rows = sweep::table1()?;
            let mut w = sink(out.as_ref())?;
            sweep::write_table1(&rows, &mut w)?;
            w.flush()?;
        }
        Cmd::Verify { level, out, n } => {
            let level: VerifyLevel = level.parse()?;
            let reports = sweep::with_thread_limit(|| sweep::verify(level, n))??;
            let mut w = sink(out.as_ref())?;
            write_csv(&reports, &mut w)?;
            w.flush()?;
            let bad = reports.iter().filter(|r| !r.pass).count();
            if bad > 0 {
                let w = worst(&reports).expect("non-empty");
                return Err(Failure::Validation(format!(
                    "{bad} of {} checks failed; worst {} (rel_err {:e}, tol {:e})",
                    reports.len(),
                    w.quantity,
                    w.rel_err,
                    w.tol
                )));
            }
            eprintln!("{} checks passed", reports.len());
        }
        Cmd::Infer { mu, coherence, t, epsilon, particle } => {
            let r = sweep::infer(mu, coherence, t, &particle.spec(0.0)?, epsilon)?;
            println!("lambda_raw = {:.6e}", r.raw);
            println!("lambda_corrected = {:.6e}", r.corrected);
            println!("epsilon = {}", r.epsilon);
            println!("bias_factor = {:.6}  # exp(2 eps C / (1 + eps)), corrected / raw", r.bias_factor);
        }
        Cmd::Coeffs { gamma, lambda, t, particle } => {
            let d = DensityCoeffs::new(&particle.spec(gamma)?, &EvolutionPoint::new(t, lambda)?)?;
            let (a, c) = (d.position, d.momentum);
            println!("A1 = {:.16e}", a.a1);
            println!("A2 = {:.16e}", a.a2);
            println!("A3 = {:.16e}", a.a3);
            println!("Bsq = {:.16e}", a.b_sq);
            println!("C1 = {:.16e}", c.c1);
            println!("C2 = {:.16e}", c.c2);
            println!("C3 = {:.16e}", c.c3);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
