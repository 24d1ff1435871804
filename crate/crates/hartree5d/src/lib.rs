//! Radial numerical laboratory for the focusing Hartree equation
//! i u_t + Lap u + (|x|^{-3} * |u|^2) u = 0 in R^5.
//!
//! The crate provides, for radial fields on a uniform mesh:
//!
//! - [`grid`]: the 5D-measure quadrature, radial derivative and Laplacian;
//! - [`potential`]: the nonlocal potential |x|^{-3} * rho in O(N) via the
//!   mean-value reduction, and the interaction quartic;
//! - [`functionals`]: mass/kinetic/interaction/energy, the normalized
//!   gradient indicator eta, the cubic threshold roots and the regime
//!   classifier;
//! - [`ground_state`]: the positive ground state Q, its scaling identities
//!   and sharp interaction constant, the modulation fit, and a disk cache;
//! - [`evolution`]: Strang splitting with Crank-Nicolson linear substeps,
//!   adaptive stepping, trajectory recording, and divergence detectors;
//! - [`virial`]: variance diagnostics, the cutoff profile, remainder bounds
//!   and the three blow-up-time estimators.

pub mod error;
pub mod evolution;
pub mod functionals;
pub mod grid;
pub mod ground_state;
mod linalg;
pub mod potential;
pub mod virial;

pub use error::{CacheError, CutoffError, FunctionalsError, GridError, GroundStateError, VirialError};
pub use evolution::{
    detect_blowup, dichotomy_persists, evolve, evolve_observed, strang_step, BlowupReason,
    EvolutionConfig, RunOutcome, TrajectorySample, VirialProbe,
};
pub use functionals::{
    classify, conserved_set, eta, mass_energy_ratio, threshold_roots, ConservedSet, Regime,
    ThresholdRoots, CLASSIFY_TOL,
};
pub use grid::{ball_indicator_density, RadialField, RadialGrid, OMEGA_S4};
pub use ground_state::{
    modulated_ground_state, pohozaev_residuals, proximity_fit, solve_ground_state, GroundState,
    ModulationFit, SolverParams,
};
pub use potential::{lv_quartic, newton_potential, tail_lv_quartic, PotentialField};
pub use virial::{
    a_r_bound, build_cutoff, radial_sobolev_quotient, tb_finite_variance, tb_localized,
    tb_radial, variance, variance_rate, z_r, z_r_rate, CutoffBlend, CutoffProfile, TbEstimate,
    TbOutcome, VirialConfig,
};
