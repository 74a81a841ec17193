//! Brute-force checks of the closed forms.
//!
//! Three routes produce a density matrix on a grid: sampling the closed form
//! ([`sample_density`]), convolving the kernel with the source state
//! ([`evolve_by_convolution`]) and integrating the master equation
//! ([`integrate_master_equation`]). [`moments_from_grid`] reduces any of them
//! to covariance, purity and coherence lengths for comparison.

mod convolution;
mod fft;
mod grid;
mod pde;
mod report;

pub use convolution::{convolve_point, evolve_by_convolution, MAX_SAMPLES};
pub use grid::{moments_from_grid, sample_density, Grid2D, GridDensityMatrix, GridMoments};
pub use pde::{integrate_master_equation, MasterTrajectory, TrajectorySample};
pub use report::{compare, worst, write_csv, OracleReport, CSV_HEADER};
