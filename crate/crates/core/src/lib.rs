//! Decoherence of a correlated Gaussian wave packet under a Markovian bath.
//!
//! The crate evaluates the closed-form evolution of a free particle prepared
//! by a partially coherent, chirped source and exposed to position
//! decoherence of strength `Lambda`, and the quantifiers built on it: the
//! covariance matrix, purity, von Neumann entropy, relative entropy of
//! coherence and the coherence lengths in position and momentum. Independent
//! numerical oracles check every closed form on a grid.
//!
//! ```
//! use decogauss::{coherence_report, EvolutionPoint, ParticleSpec};
//!
//! let p = ParticleSpec::fullerene().with_gamma(3.0);
//! let r = coherence_report(&p, &EvolutionPoint::new(1e-6, 1e22).unwrap()).unwrap();
//! assert!(r.mu < 1.0 && r.c > 0.0);
//! ```

pub mod asymptotics;
pub mod bath;
pub mod error;
pub mod evolution;
pub mod observables;
pub mod oracle;
pub mod sweep;
pub mod tolerances;

pub use bath::{BathSpec, Constants, ParticleSpec};
pub use error::{Error, Result};
pub use evolution::{DensityCoeffs, EvolutionPoint, MomentumCoeffs, PositionCoeffs};
pub use observables::{
    coherence_from_purity, coherence_length_p, coherence_length_x, coherence_report, covariance,
    purity, relative_entropy_coherence, symplectic_nu, von_neumann_entropy, CoherenceReport,
    CovarianceState,
};
pub use asymptotics::{
    asymptotic_limits, coherence_approx, estimate_lambda, fit_epsilon, gamma_infinity_lengths, lambda_bias_factor,
    qubit_demo, theta, AsymptoticReport, FitResult,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
