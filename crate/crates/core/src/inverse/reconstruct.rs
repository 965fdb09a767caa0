use num_complex::Complex64;
use rayon::prelude::*;

use super::system::{assemble, check_simple, solve_system, NormMode, PairData};
use crate::error::Result;
use crate::grid::GridFunction;
use crate::spectral::{estimate_omega, shift_normalize, ProblemTriple, SpectralData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseConfig {
    /// Number of data pairs used; defaults to all.
    pub n_trunc: Option<usize>,
    /// Intervals of the output grid.
    pub grid_nodes: usize,
    /// Solve the differentiated main equation for `ε'` instead of
    /// differencing `ε` numerically.
    pub with_derivative: bool,
    pub norm: NormMode,
    /// Reconstruct from the `ω = 0` shifted data and add the constant back.
    pub shift: bool,
    /// Overrides the asymptotic constant used for the shift.
    pub omega: Option<Complex64>,
}

impl Default for InverseConfig {
    fn default() -> Self {
        Self { n_trunc: None, grid_nodes: 1024, with_derivative: true, norm: NormMode::Estimate, shift: true, omega: None }
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub triple: ProblemTriple,
    /// Largest residual of the linear solves over all nodes.
    pub residual_max: f64,
    /// Largest `‖(I + R̃)⁻¹‖` over all nodes, when requested.
    pub inv_norm: Option<f64>,
    pub n_trunc: usize,
    pub grid_nodes: usize,
    /// Asymptotic constant used for the shift.
    pub omega: Complex64,
    /// Constant added back to the potential.
    pub shift: Complex64,
    pub epsilon: GridFunction,
    /// L2 gap between the solved `ε'` and a finite-difference derivative of
    /// `ε`, when the derivative system was used.
    pub fd_crosscheck: Option<f64>,
}

/// `ω` from the override, the data, a tail estimate (eight or more
/// entries), or zero, in that order.
pub fn resolve_omega(s: &SpectralData, omega: Option<Complex64>) -> Complex64 {
    omega
        .or(s.omega())
        .or_else(|| estimate_omega(s.rho()).ok().map(|e| e.omega))
        .unwrap_or(Complex64::new(0.0, 0.0))
}

/// `q = −2ε'`, `h = −ε(0)`, `H = ε(π)`; `ε'` is differenced from `ε` when
/// not given.
pub fn reconstruct_from_epsilon(epsilon: &GridFunction, epsilon_prime: Option<&GridFunction>) -> Result<ProblemTriple> {
    let derivative = match epsilon_prime {
        Some(d) => d.clone(),
        None => epsilon.derivative(),
    };
    let v = epsilon.values();
    ProblemTriple::new(derivative.map(|d| -2.0 * d), -v[0], v[v.len() - 1])
}

struct NodeOut {
    eps: Complex64,
    eps_prime: Option<Complex64>,
    residual: f64,
    inv_norm: Option<f64>,
}

/// Reconstructs `(q, h, H)` from simple spectral data.
pub fn inverse_solve_simple(s: &SpectralData, cfg: &InverseConfig) -> Result<Reconstruction> {
    let n_trunc = cfg.n_trunc.unwrap_or(s.len());
    check_simple(s, n_trunc)?;
    let m = cfg.grid_nodes.max(2);
    let omega = resolve_omega(s, cfg.omega);
    let (data, shift) = if cfg.shift {
        shift_normalize(s, omega)?
    } else {
        (s.clone(), Complex64::new(0.0, 0.0))
    };
    let pairs = PairData::new(&data, 0, n_trunc);
    let h = std::f64::consts::PI / m as f64;
    let nodes: Vec<Result<NodeOut>> = (0..=m)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 * h;
            let sys = assemble(&pairs, x, cfg.with_derivative);
            let sol = solve_system(&sys, cfg.norm)?;
            let (eps, eps_prime) = epsilon_at(&pairs, x, &sol.psi, sol.psi_prime.as_deref());
            Ok(NodeOut { eps, eps_prime, residual: sol.residual, inv_norm: sol.inv_norm })
        })
        .collect();
    let nodes: Vec<NodeOut> = nodes.into_iter().collect::<Result<_>>()?;
    let epsilon = GridFunction::new(nodes.iter().map(|n| n.eps).collect())?;
    let eps_prime = if cfg.with_derivative {
        Some(GridFunction::new(nodes.iter().map(|n| n.eps_prime.expect("derivative requested")).collect())?)
    } else {
        None
    };
    let fd_crosscheck = eps_prime.as_ref().map(|d| d.l2_distance(&epsilon.derivative()));
    let base = reconstruct_from_epsilon(&epsilon, eps_prime.as_ref())?;
    let inv_norm = cfg.norm.ne(&NormMode::None).then(|| nodes.iter().filter_map(|n| n.inv_norm).fold(0.0, f64::max));
    Ok(Reconstruction {
        triple: base.shifted(shift),
        residual_max: nodes.iter().map(|n| n.residual).fold(0.0, f64::max),
        inv_norm,
        n_trunc,
        grid_nodes: m,
        omega,
        shift,
        epsilon,
        fd_crosscheck,
    })
}

/// `ε(x) = Σ α_{k0}φ_{k0} cos ρ_{k0}x − α_{k1}φ_{k1} cos ρ_{k1}x` and its
/// derivative.
pub(crate) fn epsilon_at(
    p: &PairData,
    x: f64,
    psi: &[Complex64],
    psi_prime: Option<&[Complex64]>,
) -> (Complex64, Option<Complex64>) {
    let mut eps = Complex64::new(0.0, 0.0);
    let mut deps = Complex64::new(0.0, 0.0);
    for k in 0..p.len() {
        let hat = p.hat(k);
        let (r0, r1) = (p.rho0[k], p.rho1[k]);
        let (c0, c1) = ((r0 * x).cos(), (r1 * x).cos());
        let phi0 = hat * psi[2 * k] + psi[2 * k + 1];
        let phi1 = psi[2 * k + 1];
        eps += p.alpha0[k] * phi0 * c0 - p.alpha1[k] * phi1 * c1;
        if let Some(d) = psi_prime {
            let dphi0 = hat * d[2 * k] + d[2 * k + 1];
            let dphi1 = d[2 * k + 1];
            let (s0, s1) = ((r0 * x).sin(), (r1 * x).sin());
            deps += p.alpha0[k] * (dphi0 * c0 - phi0 * r0 * s0) - p.alpha1[k] * (dphi1 * c1 - phi1 * r1 * s1);
        }
    }
    (eps, psi_prime.map(|_| deps))
}
