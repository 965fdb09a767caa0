//! Block operator `[[I + R_CC, R_CD], [R_DC, I + R_DD]]` at one point `x`.
//!
//! Continuous unknowns are `φ(x, θ_j)` on one representative of each node
//! pair `±θ_j` of `Γ_N`; discrete unknowns are the interleaved
//! `ψ_{n0}, ψ_{n1}` for `N < n ≤ N_trunc`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_split, weyl_hat_rational, ContourGrid};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::inverse::kernels::{cos_divided, dtilde, dtilde_divided, dtilde_dx};
use crate::inverse::{epsilon_at_pairs, reconstruct_from_epsilon, resolve_omega, solve_system, PairData};
use crate::inverse::{MainSystem, NormMode, Reconstruction};
use crate::linalg::Matrix;
use crate::spectral::{shift_normalize, SpectralData};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Contour index `N`; chosen automatically when `None`.
    pub contour_index: Option<usize>,
    /// Trapezoid nodes on `Γ_N`.
    pub contour_nodes: usize,
    pub n_trunc: Option<usize>,
    pub grid_nodes: usize,
    pub with_derivative: bool,
    pub norm: NormMode,
    pub shift: bool,
    pub omega: Option<Complex64>,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            contour_index: None,
            contour_nodes: 64,
            n_trunc: None,
            grid_nodes: 1024,
            with_derivative: true,
            norm: NormMode::Estimate,
            shift: true,
            omega: None,
        }
    }
}

/// Quadrature nodes and weights `2θ_j² M̂(θ_j²)/K` of the contour part.
#[derive(Debug, Clone)]
pub(crate) struct ContourPart {
    nodes: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl ContourPart {
    fn new(s: &SpectralData, grid: &ContourGrid) -> Self {
        let k = grid.nodes.len() as f64;
        let nodes = grid.half_nodes();
        let weights = nodes.iter().map(|&t| 2.0 * t * t * weyl_hat_rational(s, grid.index, t) / k).collect();
        Self { nodes, weights }
    }

    fn empty() -> Self {
        Self { nodes: Vec::new(), weights: Vec::new() }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// The assembled block system together with its layout.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub system: MainSystem,
    /// Number of continuous unknowns.
    pub continuous: usize,
    /// Contour index `N`.
    pub contour_index: usize,
}

fn assemble(c: &ContourPart, d: &PairData, x: f64, with_derivative: bool) -> MainSystem {
    let kc = c.len();
    let nd = d.len();
    let dim = kc + 2 * nd;
    let mut matrix = Matrix::identity(dim);
    let mut rhs = vec![Complex64::new(0.0, 0.0); dim];
    let mut dm = with_derivative.then(|| Matrix::zeros(dim));
    let mut drhs = vec![Complex64::new(0.0, 0.0); dim];

    // Continuous rows.
    for i in 0..kc {
        let t = c.nodes[i];
        rhs[i] = (t * x).cos();
        drhs[i] = -t * (t * x).sin();
        for j in 0..kc {
            let s = c.nodes[j];
            matrix.add(i, j, c.weights[j] * dtilde(x, t, s));
            if let Some(dm) = dm.as_mut() {
                dm.set(i, j, c.weights[j] * dtilde_dx(x, t, s));
            }
        }
        for k in 0..nd {
            let blk = d.block(k, |_, theta| dtilde(x, t, theta));
            matrix.add(i, kc + 2 * k, blk[0][0]);
            matrix.add(i, kc + 2 * k + 1, blk[0][1]);
            if let Some(dm) = dm.as_mut() {
                let blk = d.block(k, |_, theta| dtilde_dx(x, t, theta));
                dm.set(i, kc + 2 * k, blk[0][0]);
                dm.set(i, kc + 2 * k + 1, blk[0][1]);
            }
        }
    }
    // Discrete rows.
    for n in 0..nd {
        let (a, b) = (d.rho0[n], d.rho1[n]);
        let (v, sl) = d.rhs(x, n);
        let r0 = kc + 2 * n;
        rhs[r0] = v[0];
        rhs[r0 + 1] = v[1];
        drhs[r0] = sl[0];
        drhs[r0 + 1] = sl[1];
        let kernel = |i: usize, theta: Complex64| if i == 0 { dtilde_divided(x, a, b, theta) } else { dtilde(x, b, theta) };
        let dkernel = |i: usize, theta: Complex64| {
            if i == 0 {
                cos_divided(x, a, b) * (theta * x).cos()
            } else {
                dtilde_dx(x, b, theta)
            }
        };
        for j in 0..kc {
            let s = c.nodes[j];
            for i in 0..2 {
                matrix.add(r0 + i, j, c.weights[j] * kernel(i, s));
                if let Some(dm) = dm.as_mut() {
                    dm.set(r0 + i, j, c.weights[j] * dkernel(i, s));
                }
            }
        }
        for k in 0..nd {
            let blk = d.block(k, kernel);
            let dblk = dm.is_some().then(|| d.block(k, dkernel));
            for i in 0..2 {
                for j in 0..2 {
                    matrix.add(r0 + i, kc + 2 * k + j, blk[i][j]);
                    if let (Some(dm), Some(db)) = (dm.as_mut(), dblk.as_ref()) {
                        dm.set(r0 + i, kc + 2 * k + j, db[i][j]);
                    }
                }
            }
        }
    }
    MainSystem { x, n_trunc: d.len(), matrix, rhs, derivative: dm.map(|m| (m, drhs)) }
}

fn parts(s: &SpectralData, index: usize, nodes: usize, n_trunc: usize) -> Result<(ContourPart, PairData)> {
    if n_trunc > s.len() || n_trunc < index {
        return Err(Error::TooFewEntries { needed: n_trunc.max(index), got: s.len() });
    }
    let prefix = s.prefix(n_trunc)?;
    if index == 0 {
        if !prefix.is_simple() {
            return Err(Error::MultiplicityPresent);
        }
        return Ok((ContourPart::empty(), PairData::new(s, 0, n_trunc)));
    }
    check_split(&prefix, index)?;
    let grid = ContourGrid::new(index, nodes)?;
    Ok((ContourPart::new(s, &grid), PairData::new(s, index, n_trunc)))
}

/// Assembles the block system at `x` for contour index `N`.
pub fn build_block_system(
    s: &SpectralData,
    x: f64,
    contour_index: usize,
    contour_nodes: usize,
    n_trunc: usize,
    with_derivative: bool,
) -> Result<BlockSystem> {
    let (c, d) = parts(s, contour_index, contour_nodes, n_trunc)?;
    Ok(BlockSystem { continuous: c.len(), contour_index, system: assemble(&c, &d, x, with_derivative) })
}

/// Smallest admissible contour index covering every multiple eigenvalue.
pub fn auto_contour_index(s: &SpectralData, n_trunc: usize) -> Result<usize> {
    let prefix = s.prefix(n_trunc)?;
    let minimum = prefix.groups().iter().filter(|g| g.1 > 1).map(|g| g.0 + g.1).max().unwrap_or(0);
    if minimum == 0 {
        return Ok(0);
    }
    (minimum..=n_trunc)
        .find(|&n| check_split(&prefix, n).is_ok() && separation(&prefix, n) > 0.05)
        .or_else(|| (minimum..=n_trunc).find(|&n| check_split(&prefix, n).is_ok()))
        .ok_or_else(|| Error::ContourSplit("no circle |rho| = N - 1/2 separates the data".into()))
}

fn separation(s: &SpectralData, index: usize) -> f64 {
    let r = index as f64 - 0.5;
    s.rho().iter().map(|z| (z.norm() - r).abs()).fold(f64::INFINITY, f64::min)
}

/// Reconstructs `(q, h, H)` from data that may contain multiple
/// eigenvalues.
pub fn inverse_solve_multiple(s: &SpectralData, cfg: &ContourConfig) -> Result<Reconstruction> {
    let n_trunc = cfg.n_trunc.unwrap_or(s.len());
    let m = cfg.grid_nodes.max(2);
    let omega = resolve_omega(s, cfg.omega);
    let (data, shift) = if cfg.shift {
        shift_normalize(s, omega)?
    } else {
        (s.clone(), Complex64::new(0.0, 0.0))
    };
    let index = match cfg.contour_index {
        Some(n) => n,
        None => auto_contour_index(&data, n_trunc)?,
    };
    let (c, d) = parts(&data, index, cfg.contour_nodes, n_trunc)?;
    let h = std::f64::consts::PI / m as f64;
    let nodes: Vec<Result<(Complex64, Option<Complex64>, f64, Option<f64>)>> = (0..=m)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 * h;
            let sys = assemble(&c, &d, x, cfg.with_derivative);
            let sol = solve_system(&sys, cfg.norm)?;
            let (eps, deps) = epsilon_at(&c, &d, x, &sol.psi, sol.psi_prime.as_deref());
            Ok((eps, deps, sol.residual, sol.inv_norm))
        })
        .collect();
    let nodes: Vec<_> = nodes.into_iter().collect::<Result<_>>()?;
    let epsilon = GridFunction::new(nodes.iter().map(|n| n.0).collect())?;
    let eps_prime = if cfg.with_derivative {
        Some(GridFunction::new(nodes.iter().map(|n| n.1.expect("derivative requested")).collect())?)
    } else {
        None
    };
    let fd_crosscheck = eps_prime.as_ref().map(|d| d.l2_distance(&epsilon.derivative()));
    let base = reconstruct_from_epsilon(&epsilon, eps_prime.as_ref())?;
    let inv_norm = (cfg.norm != NormMode::None).then(|| nodes.iter().filter_map(|n| n.3).fold(0.0, f64::max));
    Ok(Reconstruction {
        triple: base.shifted(shift),
        residual_max: nodes.iter().map(|n| n.2).fold(0.0, f64::max),
        inv_norm,
        n_trunc,
        grid_nodes: m,
        omega,
        shift,
        epsilon,
        fd_crosscheck,
    })
}

fn epsilon_at(
    c: &ContourPart,
    d: &PairData,
    x: f64,
    sol: &[Complex64],
    sol_prime: Option<&[Complex64]>,
) -> (Complex64, Option<Complex64>) {
    let kc = c.len();
    let mut eps = Complex64::new(0.0, 0.0);
    let mut deps = Complex64::new(0.0, 0.0);
    for j in 0..kc {
        let t = c.nodes[j];
        let (co, si) = ((t * x).cos(), (t * x).sin());
        eps += c.weights[j] * sol[j] * co;
        if let Some(dp) = sol_prime {
            deps += c.weights[j] * (dp[j] * co - sol[j] * t * si);
        }
    }
    let (e, de) = epsilon_at_pairs(d, x, &sol[kc..], sol_prime.map(|p| &p[kc..]));
    (eps + e, de.map(|v| v + deps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_data_give_the_identity_block() {
        let s = SpectralData::model(6).unwrap();
        let b = build_block_system(&s, 1.1, 2, 16, 6, false).unwrap();
        assert_eq!(b.continuous, 8);
        assert!((b.system.matrix.max_abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn data_split_by_a_group_is_rejected() {
        let m = SpectralData::model(5).unwrap();
        let mut rho = m.rho().to_vec();
        rho[2] = rho[1];
        let s = SpectralData::with_structure(
            rho,
            m.alpha().to_vec(),
            None,
            Some(crate::spectral::Multiplicity::new(vec![1, 2, 4, 5], vec![1, 2, 1, 1]).unwrap()),
        )
        .unwrap();
        assert!(build_block_system(&s, 1.0, 2, 16, 5, false).is_err());
        assert!(build_block_system(&s, 1.0, 3, 16, 5, false).is_ok());
        assert_eq!(auto_contour_index(&s, 5).unwrap(), 3);
    }
}
