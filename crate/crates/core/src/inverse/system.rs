//! Assembly and solution of the modified main equation
//! `(I + R̃(x)) ψ(x) = ψ̃(x)` at one point `x`.
//!
//! Unknowns are interleaved: index `2(n−1)` holds `ψ_{n0}` and `2(n−1)+1`
//! holds `ψ_{n1}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::kernels::{cos_divided, dtilde, dtilde_divided, dtilde_dx, msin_divided};
use crate::error::{Error, Result};
use crate::linalg::{Lu, LuError, Matrix};
use crate::spectral::{model_alpha, model_rho, SpectralData};

/// Parameters `ρ_{n0}, ρ_{n1}, α_{n0}, α_{n1}` of the first `N` pairs.
#[derive(Debug, Clone)]
pub(crate) struct PairData {
    pub rho0: Vec<Complex64>,
    pub rho1: Vec<Complex64>,
    pub alpha0: Vec<Complex64>,
    pub alpha1: Vec<Complex64>,
}

impl PairData {
    pub fn new(s: &SpectralData, start: usize, end: usize) -> Self {
        let range = start..end;
        Self {
            rho0: s.rho()[range.clone()].to_vec(),
            rho1: range.clone().map(|k| Complex64::new(model_rho(k + 1), 0.0)).collect(),
            alpha0: s.alpha()[range.clone()].to_vec(),
            alpha1: range.map(|k| Complex64::new(model_alpha(k + 1), 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rho0.len()
    }

    pub fn hat(&self, k: usize) -> Complex64 {
        self.rho0[k] - self.rho1[k]
    }

    /// `ψ̃_{n0}, ψ̃_{n1}` and their `x`-derivatives.
    pub fn rhs(&self, x: f64, n: usize) -> ([Complex64; 2], [Complex64; 2]) {
        let (a, b) = (self.rho0[n], self.rho1[n]);
        let value = [cos_divided(x, a, b), (b * x).cos()];
        let slope = [msin_divided(x, a, b), -b * (b * x).sin()];
        (value, slope)
    }

    /// Row block of the operator for row pair `n` against column pair `k`,
    /// given the kernel values at the four parameter combinations.
    /// `kernel(i, θ)` evaluates row `i` (0 divided, 1 plain) at `θ`.
    pub fn block(&self, k: usize, kernel: impl Fn(usize, Complex64) -> Complex64) -> [[Complex64; 2]; 2] {
        let hat = self.hat(k);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            let k0 = self.alpha0[k] * kernel(i, self.rho0[k]);
            let k1 = self.alpha1[k] * kernel(i, self.rho1[k]);
            row[0] = hat * k0;
            row[1] = k0 - k1;
        }
        out
    }
}

/// The assembled system at one point.
#[derive(Debug, Clone)]
pub struct MainSystem {
    pub x: f64,
    pub n_trunc: usize,
    pub matrix: Matrix,
    pub rhs: Vec<Complex64>,
    /// `R̃'(x)` and `ψ̃'(x)` for the derivative system.
    pub derivative: Option<(Matrix, Vec<Complex64>)>,
}

pub(crate) fn check_simple(s: &SpectralData, n_trunc: usize) -> Result<()> {
    if !s.is_simple() {
        return Err(Error::MultiplicityPresent);
    }
    if n_trunc == 0 || n_trunc > s.len() {
        return Err(Error::TooFewEntries { needed: n_trunc.max(1), got: s.len() });
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=PI * (1.0 + 1e-14)).contains(&x) {
        return Err(Error::InvalidArgument(format!("x = {x} lies outside [0, pi]")));
    }
    Ok(())
}

pub(crate) fn assemble(p: &PairData, x: f64, with_derivative: bool) -> MainSystem {
    let n = p.len();
    let dim = 2 * n;
    let mut matrix = Matrix::identity(dim);
    let mut rhs = vec![Complex64::new(0.0, 0.0); dim];
    let mut dm = with_derivative.then(|| Matrix::zeros(dim));
    let mut drhs = vec![Complex64::new(0.0, 0.0); dim];
    for row in 0..n {
        let (a, b) = (p.rho0[row], p.rho1[row]);
        let (v, s) = p.rhs(x, row);
        rhs[2 * row] = v[0];
        rhs[2 * row + 1] = v[1];
        drhs[2 * row] = s[0];
        drhs[2 * row + 1] = s[1];
        for k in 0..n {
            let blk = p.block(k, |i, theta| if i == 0 { dtilde_divided(x, a, b, theta) } else { dtilde(x, b, theta) });
            for i in 0..2 {
                for j in 0..2 {
                    matrix.add(2 * row + i, 2 * k + j, blk[i][j]);
                }
            }
            if let Some(dm) = dm.as_mut() {
                let blk = p.block(k, |i, theta| {
                    if i == 0 {
                        cos_divided(x, a, b) * (theta * x).cos()
                    } else {
                        dtilde_dx(x, b, theta)
                    }
                });
                for i in 0..2 {
                    for j in 0..2 {
                        dm.set(2 * row + i, 2 * k + j, blk[i][j]);
                    }
                }
            }
        }
    }
    MainSystem { x, n_trunc: n, matrix, rhs, derivative: dm.map(|m| (m, drhs)) }
}

/// Assembles `I + R̃(x)` and `ψ̃(x)` (and optionally their derivatives)
/// from the first `n_trunc` entries of simple data.
pub fn build_system(s: &SpectralData, x: f64, n_trunc: usize, with_derivative: bool) -> Result<MainSystem> {
    check_simple(s, n_trunc)?;
    check_x(x)?;
    Ok(assemble(&PairData::new(s, 0, n_trunc), x, with_derivative))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// No norm is computed.
    None,
    /// Hager-Higham estimate of `‖(I + R̃)⁻¹‖`.
    Estimate,
    /// Exact norm from the explicit inverse.
    Explicit,
}

#[derive(Debug, Clone)]
pub struct SystemSolution {
    pub psi: Vec<Complex64>,
    pub psi_prime: Option<Vec<Complex64>>,
    /// `max |(I + R̃)ψ − ψ̃|`.
    pub residual: f64,
    pub inv_norm: Option<f64>,
}

pub(crate) fn lu_error(x: f64, e: LuError) -> Error {
    match e {
        LuError::Singular { column, pivot } => Error::SingularSystem { x, index: column, pivot },
        other => Error::InvalidArgument(other.to_string()),
    }
}

/// Solves the system with LU; the derivative system reuses the factors.
pub fn solve_system(sys: &MainSystem, norm: NormMode) -> Result<SystemSolution> {
    let lu = Lu::factor(sys.matrix.clone()).map_err(|e| lu_error(sys.x, e))?;
    let psi = lu.solve(&sys.rhs).map_err(|e| lu_error(sys.x, e))?;
    let check = sys.matrix.mul_vec(&psi);
    let residual = check.iter().zip(&sys.rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let psi_prime = match &sys.derivative {
        Some((dm, drhs)) => {
            let corr = dm.mul_vec(&psi);
            let rhs: Vec<Complex64> = drhs.iter().zip(&corr).map(|(a, b)| a - b).collect();
            Some(lu.solve(&rhs).map_err(|e| lu_error(sys.x, e))?)
        }
        None => None,
    };
    let inv_norm = match norm {
        NormMode::None => None,
        NormMode::Estimate => Some(lu.inverse_norm_inf_estimate()),
        NormMode::Explicit => Some(lu.inverse_norm_inf()),
    };
    Ok(SystemSolution { psi, psi_prime, residual, inv_norm })
}

/// `φ_{n0} = ρ̂ₙψ_{n0} + ψ_{n1}`, `φ_{n1} = ψ_{n1}`.
pub fn recover_phi(psi: &[Complex64], s: &SpectralData) -> Result<Vec<[Complex64; 2]>> {
    if psi.len() % 2 != 0 || psi.len() / 2 > s.len() {
        return Err(Error::LengthMismatch { left: psi.len(), right: 2 * s.len() });
    }
    Ok(psi
        .chunks(2)
        .enumerate()
        .map(|(k, c)| {
            let hat = s.rho()[k] - model_rho(k + 1);
            [hat * c[0] + c[1], c[1]]
        })
        .collect())
}

/// `sup_x ‖(I + R̃(x))⁻¹‖` over the given nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NormProfile {
    pub sup: f64,
    pub per_node: Vec<f64>,
    /// First node index where the system is singular.
    pub singular_at: Option<usize>,
}

pub fn operator_norm_profile(s: &SpectralData, n_trunc: usize, x_nodes: &[f64]) -> Result<NormProfile> {
    check_simple(s, n_trunc)?;
    let p = PairData::new(s, 0, n_trunc);
    let mut per_node = Vec::with_capacity(x_nodes.len());
    let mut singular_at = None;
    for (i, &x) in x_nodes.iter().enumerate() {
        check_x(x)?;
        let sys = assemble(&p, x, false);
        match Lu::factor(sys.matrix) {
            Ok(lu) => per_node.push(lu.inverse_norm_inf()),
            Err(LuError::Singular { .. }) => {
                per_node.push(f64::INFINITY);
                singular_at.get_or_insert(i);
            }
            Err(e) => return Err(lu_error(x, e)),
        }
    }
    let sup = per_node.iter().copied().fold(0.0, f64::max);
    Ok(NormProfile { sup, per_node, singular_at })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_data_give_the_identity() {
        let s = SpectralData::model(6).unwrap();
        let sys = build_system(&s, 1.3, 6, true).unwrap();
        assert_eq!(sys.matrix, Matrix::identity(12));
        let sol = solve_system(&sys, NormMode::Estimate).unwrap();
        assert!((sol.inv_norm.unwrap() - 1.0).abs() < 1e-14);
        let phi = recover_phi(&sol.psi, &s).unwrap();
        for (k, p) in phi.iter().enumerate() {
            assert!((p[0] - (k as f64 * 1.3).cos()).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let s = SpectralData::model(3).unwrap();
        assert!(matches!(build_system(&s, 1.0, 4, false), Err(Error::TooFewEntries { .. })));
        assert!(build_system(&s, 4.0, 3, false).is_err());
    }
}
