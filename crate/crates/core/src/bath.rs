//! Particle, source and environment parameters.
//!
//! Everything dimensional is SI. The source coherence length `ell0` may be
//! `f64::INFINITY`, which denotes a fully coherent source; every formula in the
//! crate reads it through [`ParticleSpec::inv_ell0_sq`], which is exactly zero
//! in that case.

use crate::error::{invalid, Result};

/// Reduced Planck constant, CODATA 2018 (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, exact SI value (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Physical constants used by a computation. Overridable so that tests can run
/// in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub k_b: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            hbar: HBAR,
            k_b: K_B,
        }
    }
}

/// Particle and source description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    /// Mass (kg).
    pub mass: f64,
    /// Initial packet width (m).
    pub sigma0: f64,
    /// Source coherence length (m); `f64::INFINITY` for a fully coherent source.
    pub ell0: f64,
    /// Dimensionless position-momentum correlation, `sigma_xp = hbar * gamma / 2`.
    pub gamma: f64,
    pub constants: Constants,
}

impl ParticleSpec {
    pub fn new(mass: f64, sigma0: f64, ell0: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            mass,
            sigma0,
            ell0,
            gamma,
            constants: Constants::default(),
        };
        p.validate()?;
        Ok(p)
    }

    /// C60 molecule with a 7.8 nm packet and a 50 nm source coherence length.
    pub fn fullerene() -> Self {
        Self {
            mass: 1.2e-24,
            sigma0: 7.8e-9,
            ell0: 50e-9,
            gamma: 0.0,
            constants: Constants::default(),
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_ell0(mut self, ell0: f64) -> Self {
        self.ell0 = ell0;
        self
    }

    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = constants;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(invalid("mass", format!("must be finite and > 0, got {}", self.mass)));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(invalid("sigma0", format!("must be finite and > 0, got {}", self.sigma0)));
        }
        if self.ell0.is_nan() || self.ell0 <= 0.0 {
            return Err(invalid("ell0", format!("must be > 0 (or inf), got {}", self.ell0)));
        }
        if !self.gamma.is_finite() {
            return Err(invalid("gamma", "must be finite"));
        }
        let c = self.constants;
        if !(c.hbar.is_finite() && c.hbar > 0.0 && c.k_b.is_finite() && c.k_b > 0.0) {
            return Err(invalid("constants", "hbar and k_b must be finite and > 0"));
        }
        Ok(())
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }

    /// `1/ell0^2`, exactly zero for a fully coherent source.
    pub fn inv_ell0_sq(&self) -> f64 {
        if self.ell0.is_infinite() {
            0.0
        } else {
            1.0 / (self.ell0 * self.ell0)
        }
    }

    /// `sigma0^2 / ell0^2`, the source incoherence in packet units.
    pub fn incoherence(&self) -> f64 {
        self.sigma0 * self.sigma0 * self.inv_ell0_sq()
    }

    pub fn tau0(&self) -> f64 {
        tau0(self).tau0
    }
}

/// Intrinsic spreading time of the packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    /// `m sigma0^2 / hbar` (s).
    pub tau0: f64,
}

pub fn tau0(p: &ParticleSpec) -> TimeScales {
    TimeScales {
        tau0: p.mass * p.sigma0 * p.sigma0 / p.hbar(),
    }
}

/// Dilute gas of scatterers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringGas {
    /// Temperature (K).
    pub temperature: f64,
    /// Gas-molecule mass (kg).
    pub gas_mass: f64,
    /// Number density (m^-3).
    pub number_density: f64,
    /// Size of the scattered system (m).
    pub size: f64,
}

/// Oscillator bath with a Lorentz-Drude regularised Ohmic spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicBath {
    /// Coupling `lambda0` (s^-1).
    pub coupling: f64,
    /// Cutoff frequency (s^-1).
    pub cutoff: f64,
    /// Central oscillator frequency (s^-1); zero selects the free particle.
    pub omega: f64,
    /// Temperature (K).
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicCoefficients {
    /// Relaxation rate (s^-1).
    pub relaxation: f64,
    /// Decoherence parameter (m^-2 s^-1).
    pub decoherence: f64,
}

/// Environment description. Exactly one way of fixing the decoherence parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathSpec {
    Direct { lambda: f64 },
    Scattering(ScatteringGas),
    Ohmic(OhmicBath),
}

impl BathSpec {
    /// Decoherence parameter `Lambda` (m^-2 s^-1) seen by a particle of mass `mass`.
    pub fn lambda(&self, mass: f64, constants: &Constants) -> Result<f64> {
        match self {
            BathSpec::Direct { lambda } => {
                if !(lambda.is_finite() && *lambda >= 0.0) {
                    return Err(invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
                }
                Ok(*lambda)
            }
            BathSpec::Scattering(gas) => lambda_from_scattering(gas, constants),
            BathSpec::Ohmic(bath) => Ok(ohmic_coefficients(bath, mass, constants)?.decoherence),
        }
    }
}

/// Scattering constant of a thermal gas,
/// `(8 / 3 hbar^2) sqrt(2 pi M) (k_B T)^(3/2) N w^2`.
pub fn lambda_from_scattering(gas: &ScatteringGas, constants: &Constants) -> Result<f64> {
    let fields = [
        ("temperature", gas.temperature),
        ("gas_mass", gas.gas_mass),
        ("number_density", gas.number_density),
        ("size", gas.size),
    ];
    for (name, v) in fields {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
        }
    }
    let hbar = constants.hbar;
    let kt = constants.k_b * gas.temperature;
    Ok(8.0 / (3.0 * hbar * hbar)
        * (2.0 * std::f64::consts::PI * gas.gas_mass).sqrt()
        * kt.powf(1.5)
        * gas.number_density
        * gas.size
        * gas.size)
}

/// Relaxation and decoherence coefficients of the Ohmic bath.
///
/// For `omega > 0` the full expressions are used, with `Lambda` carrying the
/// `1/hbar` that makes it m^-2 s^-1. For `omega == 0` the high-temperature
/// free-particle branch applies: `lambda = lambda0`, `Lambda = 2 m lambda0 k_B T / hbar^2`,
/// which is also the `omega -> 0+` limit of the full expression.
pub fn ohmic_coefficients(
    bath: &OhmicBath,
    mass: f64,
    constants: &Constants,
) -> Result<OhmicCoefficients> {
    let OhmicBath {
        coupling,
        cutoff,
        omega,
        temperature,
    } = *bath;
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(invalid("cutoff", format!("must be finite and > 0, got {cutoff}")));
    }
    for (name, v) in [("coupling", coupling), ("omega", omega), ("temperature", temperature)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
        }
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(invalid("mass", format!("must be finite and > 0, got {mass}")));
    }
    let hbar = constants.hbar;
    if omega == 0.0 {
        if temperature == 0.0 {
            return Err(invalid(
                "temperature",
                "the free-particle branch needs k_B T >> hbar Omega, T = 0 is undefined",
            ));
        }
        return Ok(OhmicCoefficients {
            relaxation: coupling,
            decoherence: 2.0 * mass * coupling * constants.k_b * temperature / (hbar * hbar),
        });
    }
    let lorentz = cutoff * cutoff / (cutoff * cutoff + omega * omega);
    let thermal = if temperature == 0.0 {
        1.0
    } else {
        let x = hbar * omega / (2.0 * constants.k_b * temperature);
        1.0 / x.tanh()
    };
    Ok(OhmicCoefficients {
        relaxation: lorentz * coupling,
        decoherence: mass * coupling * omega * lorentz * thermal / hbar,
    })
}
