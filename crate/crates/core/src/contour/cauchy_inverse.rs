//! Reconstruction from Cauchy data: the spectral data are recovered from
//! the characteristic functions the data define, then the contour method
//! is applied.

use num_complex::Complex64;

use super::block::{inverse_solve_multiple, ContourConfig};
use crate::direct::{assign_weights, find_eigenvalues_with, weight_numbers_residue, CauchyCharacteristic, CauchyData};
use crate::direct::EigenOptions;
use crate::error::Result;
use crate::inverse::Reconstruction;
use crate::spectral::SpectralData;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyInverseConfig {
    /// Number of eigenvalues recovered and used in the main equation.
    pub n_trunc: usize,
    pub contour: ContourConfig,
    pub eigen: EigenOptions,
    /// Samples per circle for Laurent coefficients at multiple eigenvalues.
    pub laurent_nodes: usize,
}

impl Default for CauchyInverseConfig {
    fn default() -> Self {
        Self { n_trunc: 30, contour: ContourConfig::default(), eigen: EigenOptions::default(), laurent_nodes: 64 }
    }
}

/// Spectral data `(ρₙ, αₙ)`, `n ≤ n_trunc`, determined by Cauchy data.
pub fn spectral_from_cauchy(data: &CauchyData, cfg: &CauchyInverseConfig) -> Result<SpectralData> {
    let ch = CauchyCharacteristic::new(data);
    let set = find_eigenvalues_with(&ch, cfg.n_trunc, &cfg.eigen)?;
    let alpha: Vec<Complex64> = assign_weights(&ch, &set, cfg.laurent_nodes, |rho| weight_numbers_residue(&ch, rho))?;
    SpectralData::with_structure(set.rho.clone(), alpha, Some(data.omega), set.multiplicity())
}

/// Reconstructs `(q, h, H)` from Cauchy data.
pub fn inverse_from_cauchy(data: &CauchyData, cfg: &CauchyInverseConfig) -> Result<Reconstruction> {
    let s = spectral_from_cauchy(data, cfg)?;
    let mut contour = cfg.contour;
    contour.n_trunc = Some(cfg.n_trunc.min(s.len()));
    if contour.omega.is_none() {
        contour.omega = Some(data.omega);
    }
    inverse_solve_multiple(&s, &contour)
}
