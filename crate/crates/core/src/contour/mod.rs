//! Contour block operator for spectral data with multiple eigenvalues and
//! reconstruction from Cauchy data.
//!
//! The first `N` eigenvalues are handled through the Weyl-function
//! difference `M̂ = M_N − M̃_N` on the circle `Γ_N: |θ| = N − ½`; the
//! remaining ones enter through the discrete main equation.

mod block;
mod cauchy_inverse;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{model_alpha, SpectralData};

pub use block::{auto_contour_index, build_block_system, inverse_solve_multiple, BlockSystem, ContourConfig};
pub use cauchy_inverse::{inverse_from_cauchy, spectral_from_cauchy, CauchyInverseConfig};

/// Poles closer than this to the contour (in `ρ`) are rejected.
pub const POLE_GUARD: f64 = 1e-3;

/// Trapezoid nodes on `Γ_N` with weights for `∮ f(θ) dθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourGrid {
    pub index: usize,
    pub radius: f64,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl ContourGrid {
    pub fn new(index: usize, count: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidArgument("contour index must be positive".into()));
        }
        if count < 8 || count % 2 != 0 {
            return Err(Error::InvalidArgument(format!("contour node count must be even and at least 8, got {count}")));
        }
        let radius = index as f64 - 0.5;
        let nodes: Vec<Complex64> =
            (0..count).map(|j| Complex64::from_polar(radius, 2.0 * PI * j as f64 / count as f64)).collect();
        let weights = nodes.iter().map(|t| Complex64::new(0.0, 2.0 * PI / count as f64) * t).collect();
        Ok(Self { index, radius, nodes, weights })
    }

    /// Representatives of the node pairs `±θ` (the half with
    /// `arg θ ∈ [−π/2, π/2)`).
    pub(crate) fn half_nodes(&self) -> Vec<Complex64> {
        let k = self.nodes.len();
        let start = k / 4;
        (0..k / 2).map(|i| self.nodes[(k - start + i) % k]).collect()
    }
}

/// Where `M̂` comes from.
#[derive(Debug, Clone, Copy)]
pub enum WeylSource<'a> {
    /// Rational `M_N − M̃_N` built from the first `N` data entries.
    Spectral(&'a SpectralData),
    /// Samples of the full Weyl function `M(θ²)` at the grid nodes.
    Samples(&'a [Complex64]),
}

/// `M̃(λ) = cot(ρπ)/ρ`.
pub fn model_weyl(theta: Complex64) -> Complex64 {
    (theta * PI).cos() / ((theta * PI).sin() * theta)
}

/// Checks that the first `N` eigenvalues lie inside `Γ_N`, the others
/// outside, and that no multiplicity group straddles the split.
pub fn check_split(s: &SpectralData, index: usize) -> Result<()> {
    if index > s.len() {
        return Err(Error::ContourSplit(format!("contour index {index} exceeds the data length {}", s.len())));
    }
    let radius = index as f64 - 0.5;
    for (start, m) in s.groups() {
        if start < index && start + m > index {
            return Err(Error::ContourSplit(format!("group starting at {} straddles the contour", start + 1)));
        }
        let r = s.rho()[start].norm();
        let gap = (r - radius).abs();
        if gap < POLE_GUARD {
            return Err(Error::PoleNearContour { distance: gap });
        }
        if (start < index) != (r < radius) {
            return Err(Error::ContourSplit(format!(
                "rho_{} = {} lies on the wrong side of |rho| = {radius}",
                start + 1,
                s.rho()[start]
            )));
        }
    }
    Ok(())
}

/// `M_N(θ²) − M̃_N(θ²)` from the first `N` entries of the data.
pub fn weyl_hat_rational(s: &SpectralData, index: usize, theta: Complex64) -> Complex64 {
    let lambda = theta * theta;
    let mut m = Complex64::new(0.0, 0.0);
    for (start, mult) in s.groups().into_iter().filter(|g| g.0 < index) {
        let d = lambda - s.rho()[start] * s.rho()[start];
        let mut pow = d;
        for nu in 0..mult {
            m += s.alpha()[start + nu] / pow;
            pow *= d;
        }
    }
    for n in 1..=index {
        m -= model_alpha(n) / (lambda - ((n - 1) * (n - 1)) as f64);
    }
    m
}

/// `M̂` at every node of the grid.
pub fn weyl_hat_on_contour(source: WeylSource<'_>, grid: &ContourGrid) -> Result<Vec<Complex64>> {
    match source {
        WeylSource::Spectral(s) => {
            check_split(s, grid.index)?;
            Ok(grid.nodes.iter().map(|&t| weyl_hat_rational(s, grid.index, t)).collect())
        }
        WeylSource::Samples(v) => {
            if v.len() != grid.nodes.len() {
                return Err(Error::LengthMismatch { left: v.len(), right: grid.nodes.len() });
            }
            Ok(v.iter().zip(&grid.nodes).map(|(m, &t)| m - model_weyl(t)).collect())
        }
    }
}
