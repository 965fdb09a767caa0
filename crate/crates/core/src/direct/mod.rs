//! Forward problem: characteristic functions, eigenvalues, weight numbers,
//! Weyl function and Cauchy data.

mod cauchy;
mod eigen;
pub mod ode;
pub mod roots;
mod weights;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::ProblemTriple;

pub use cauchy::{cauchy_data, cauchy_data_with, CauchyCharacteristic, CauchyData, CauchyOptions};
pub use eigen::{find_eigenvalues, find_eigenvalues_with, EigenOptions, EigenSet};
pub use ode::{integrate_solution, OdeOptions, Propagator, Solution, SolutionSample};
pub(crate) use weights::assign_weights;
pub use weights::{
    forward, forward_with, laurent_coefficients, sample_circle, weight_numbers_residue, weight_numbers_simple,
    weyl_function, ForwardOptions, WeightMethod,
};

/// A characteristic function pair `Δ(ρ)`, `Δ₀(ρ)` with the asymptotic
/// constant `ω`.
pub trait Characteristic: Sync {
    fn delta(&self, rho: Complex64) -> Result<Complex64>;
    fn delta0(&self, rho: Complex64) -> Result<Complex64>;
    fn omega(&self) -> Complex64;
}

/// ODE-based evaluation of the forward quantities for one problem triple.
#[derive(Debug, Clone)]
pub struct DirectSolver {
    triple: ProblemTriple,
    prop: Propagator,
    opts: OdeOptions,
}

impl DirectSolver {
    pub fn new(triple: &ProblemTriple, opts: OdeOptions) -> Self {
        Self { prop: Propagator::new(&triple.q), triple: triple.clone(), opts }
    }

    pub fn triple(&self) -> &ProblemTriple {
        &self.triple
    }

    pub fn options(&self) -> &OdeOptions {
        &self.opts
    }

    /// `φ(x, ρ)` on the grid with `φ(0) = 1`, `φ'(0) = h`.
    pub fn phi(&self, rho: Complex64) -> Result<Vec<SolutionSample>> {
        self.prop.check(rho, &self.opts)?;
        Ok(self.prop.trajectory(rho * rho, Complex64::new(1.0, 0.0), self.triple.h))
    }

    fn end_value(&self, rho: Complex64, y0: Complex64, dy0: Complex64) -> Result<Complex64> {
        self.prop.check(rho, &self.opts)?;
        let (y, dy) = self.prop.propagate(rho * rho, y0, dy0);
        Ok(dy + self.triple.big_h * y)
    }
}

impl Characteristic for DirectSolver {
    fn delta(&self, rho: Complex64) -> Result<Complex64> {
        self.end_value(rho, Complex64::new(1.0, 0.0), self.triple.h)
    }

    fn delta0(&self, rho: Complex64) -> Result<Complex64> {
        self.end_value(rho, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    fn omega(&self) -> Complex64 {
        self.triple.omega()
    }
}

/// `Δ(ρ) = φ'(π, ρ) + H φ(π, ρ)`.
pub fn char_delta(p: &ProblemTriple, rho: Complex64) -> Result<Complex64> {
    DirectSolver::new(p, OdeOptions::default()).delta(rho)
}

/// `Δ₀(ρ) = ψ'(π, ρ) + H ψ(π, ρ)` with `ψ(0) = 0`, `ψ'(0) = 1`.
pub fn char_delta0(p: &ProblemTriple, rho: Complex64) -> Result<Complex64> {
    DirectSolver::new(p, OdeOptions::default()).delta0(rho)
}

/// `ω = h + H + ½∫q`.
pub fn omega_direct(p: &ProblemTriple) -> Complex64 {
    p.omega()
}
