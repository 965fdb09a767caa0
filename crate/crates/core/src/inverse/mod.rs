//! Reconstruction of `(q, h, H)` from simple spectral data through the
//! discrete main equation.

pub mod kernels;
mod reconstruct;
mod system;

pub use reconstruct::{
    inverse_solve_simple, reconstruct_from_epsilon, resolve_omega, InverseConfig, Reconstruction,
};
pub use system::{build_system, operator_norm_profile, recover_phi, solve_system, MainSystem, NormMode, NormProfile, SystemSolution};

pub(crate) use reconstruct::epsilon_at as epsilon_at_pairs;
pub(crate) use system::PairData;
pub(crate) use system::assemble as assemble_pairs;
