//! Frozen numerical tolerances shared by the test suites, the oracle
//! comparisons and the `verify` command. Changing any of these is a visible
//! diff, so regressions stay attributable.

/// Closed-form identities between covariance, purity and coherence lengths.
pub const IDENTITY: f64 = 1e-9;
/// Ratio identity between position and momentum coefficients.
pub const COEFF_RATIO: f64 = 1e-12;
/// Slack allowed below the physical bounds `nu >= 1` and `nbar >= (nu-1)/2`.
pub const PHYSICALITY: f64 = 1e-12;

/// Sampled closed form versus closed-form moments.
pub const QUADRATURE: f64 = 1e-6;
/// Convolution of propagator and source state versus closed form.
pub const CONVOLUTION: f64 = 1e-6;
/// Split-step master-equation integration versus closed form.
pub const PDE: f64 = 1e-3;
/// Accepted window for the error ratio on halving the time step.
pub const PDE_ORDER_RATIO: (f64, f64) = (3.5, 4.5);

/// Trace of a sampled or propagated grid.
pub const GRID_TRACE: f64 = 1e-6;
/// Hermiticity residual of a grid density matrix.
pub const GRID_HERMITIAN: f64 = 1e-10;
/// Excess kurtosis allowed for the anti-diagonal slice.
pub const SLICE_KURTOSIS: f64 = 1e-6;
/// Spectral or spatial edge energy fraction that aborts a PDE run.
pub const ALIASING: f64 = 1e-8;
/// Trace drift along a PDE trajectory.
pub const PDE_TRACE: f64 = 1e-8;
/// Purity drift along a unitary PDE trajectory.
pub const PDE_UNITARY_PURITY: f64 = 1e-10;

/// Freezing plateau at large `Lambda`.
pub const FREEZING: f64 = 1e-3;
/// Bound on `|dC/dLambda|` at the plateau.
pub const FREEZING_SLOPE: f64 = 1e-31;
/// Relative bound for the `gamma -> inf` closed forms at `gamma = 1e6`.
pub const GAMMA_INFINITY: f64 = 1e-4;

/// Tabulated purity versus computed (relative).
pub const TABLE_MU: f64 = 0.30;
/// Tabulated coherence versus computed (nats).
pub const TABLE_C: f64 = 0.3;
/// Window for the fitted exponent on exact data.
pub const EPSILON_WINDOW: (f64, f64) = (0.05, 0.09);
/// Reference exponent and tolerance for the tabulated points.
pub const EPSILON_TABLE: (f64, f64) = (0.069, 0.015);
/// Corrected inversion relative error.
pub const INVERSION: f64 = 0.10;

/// Floor used in relative-error denominators.
pub const REL_FLOOR: f64 = 1e-300;
