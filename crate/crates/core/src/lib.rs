//! Mode solver and perturbation-analysis toolkit for PT-symmetric coupled
//! optical waveguides.
//!
//! The crate models a directional coupler built from one gain-guiding and one
//! loss-guiding slab (refractive index satisfying n(x) = n*(−x)), solves the
//! TE wave equation in a sine basis as a Schrödinger-analog eigenproblem,
//! locates the exceptional point where the two guided modes coalesce as the
//! gain/loss contrast grows, and runs the Rayleigh–Schrödinger machinery that
//! ties that critical point to the radius of convergence of the perturbation
//! series.
//!
//! Modules:
//! - [`linalg`]: complex-symmetric eigensolver and c-product conventions
//! - [`waveguide`]: coupler geometry, index profile, Schrödinger-analog potential
//! - [`spectral`]: sine-basis Hamiltonian assembly and guided-mode extraction
//! - [`ep`]: gain/loss sweeps, exceptional-point bisection, square-root fits
//! - [`perturbation`]: Rayleigh–Schrödinger expansion, parity bookkeeping,
//!   radius-of-convergence estimates
//! - [`propagation`]: beat lengths and sum-field power maps

pub mod error;
pub mod linalg;
pub mod waveguide;
pub mod spectral;
pub mod ep;
pub mod perturbation;
pub mod propagation;

pub use error::{Error, Result};
pub use linalg::{
    c_normalize, c_product, eig_complex_symmetric, ComplexMatrix, EigenSolution, Normalization,
};
pub use waveguide::{
    build_index_profile, check_pt_symmetry, kappa_from_delta_alpha, potential_from_index,
    CouplerGeometry, IndexProfile, PotentialProfile,
};
pub use spectral::{
    assemble_hamiltonian, solve_modes, solve_modes_targeted, track_modes, Mode, ModeSet, Parity,
    SineBasis,
};
pub use ep::{find_critical_alpha, fit_square_root, sweep_alpha, EpReport, SweepResult};
pub use perturbation::{
    estimate_radius, rs_expand, sum_series, verify_parity_and_oddness, HermitianSplit,
    PerturbationExpansion,
};
pub use propagation::{beat_length, export_power_map, sum_field_power, PowerMap};
