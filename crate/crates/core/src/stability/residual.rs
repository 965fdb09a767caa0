use num_complex::Complex64;
use rayon::prelude::*;

use crate::direct::{DirectSolver, OdeOptions};
use crate::error::{Error, Result};
use crate::inverse::{assemble_pairs, resolve_omega, PairData};
use crate::spectral::{shift_normalize, ProblemTriple, SpectralData};

/// Below this `|ρ_{n0} − ρ_{n1}|` the divided difference of `φ` comes from
/// a Cauchy integral instead of a quotient that would amplify roundoff.
const CLOSE_PAIR: f64 = 1e-2;
/// Radius and node count of that Cauchy integral.
const CIRCLE_RADIUS: f64 = 0.05;
const CIRCLE_NODES: usize = 16;

/// Substitutes the solutions `φ(x, ρ)` of `P` into the main equation built
/// from `S` and returns the largest residual over the first `n_trunc` row
/// pairs and the given points. Every entry of `S` contributes a column;
/// each point is moved to the nearest node of the grid of `P`.
pub fn residual_check(p: &ProblemTriple, s: &SpectralData, n_trunc: usize, x_nodes: &[f64]) -> Result<f64> {
    if !s.is_simple() {
        return Err(Error::MultiplicityPresent);
    }
    if n_trunc == 0 || n_trunc > s.len() {
        return Err(Error::TooFewEntries { needed: n_trunc.max(1), got: s.len() });
    }
    let (data, c) = shift_normalize(s, resolve_omega(s, None))?;
    let solver = DirectSolver::new(&p.shifted(-c), OdeOptions::default());
    let m = p.grid_nodes();
    let step = p.q.step();
    let nodes: Vec<usize> = x_nodes
        .iter()
        .map(|&x| {
            if !(0.0..=std::f64::consts::PI + 1e-12).contains(&x) {
                return Err(Error::InvalidArgument(format!("point {x} outside [0, pi]")));
            }
            Ok(((x / step).round() as usize).min(m))
        })
        .collect::<Result<_>>()?;
    let pairs = PairData::new(&data, 0, data.len());
    let values = |rho: Complex64| -> Result<Vec<Complex64>> {
        let traj = solver.phi(rho)?;
        Ok(nodes.iter().map(|&j| traj[j].value).collect())
    };
    // psi[k][node] for the interleaved unknowns.
    let psi: Vec<[Vec<Complex64>; 2]> = (0..pairs.len())
        .into_par_iter()
        .map(|k| {
            let (a, b) = (pairs.rho0[k], pairs.rho1[k]);
            let phi1 = values(b)?;
            let hat = a - b;
            let divided = if hat.norm() >= CLOSE_PAIR {
                let phi0 = values(a)?;
                phi0.iter().zip(&phi1).map(|(u, v)| (u - v) / hat).collect()
            } else {
                // φ[a, b] = (1/2πi)∮ φ(z) dz / ((z − a)(z − b)).
                let mid = 0.5 * (a + b);
                let mut d = vec![Complex64::new(0.0, 0.0); nodes.len()];
                for j in 0..CIRCLE_NODES {
                    let e = Complex64::from_polar(CIRCLE_RADIUS, 2.0 * std::f64::consts::PI * j as f64 / CIRCLE_NODES as f64);
                    let z = mid + e;
                    let v = values(z)?;
                    let w = e / ((z - a) * (z - b) * CIRCLE_NODES as f64);
                    d.iter_mut().zip(&v).for_each(|(acc, f)| *acc += f * w);
                }
                d
            };
            Ok([divided, phi1])
        })
        .collect::<Result<_>>()?;
    let residuals: Vec<f64> = nodes
        .par_iter()
        .enumerate()
        .map(|(i, &j)| {
            let x = j as f64 * step;
            let sys = assemble_pairs(&pairs, x, false);
            let v: Vec<Complex64> = psi.iter().flat_map(|p| [p[0][i], p[1][i]]).collect();
            let av = sys.matrix.mul_vec(&v);
            av.iter().zip(&sys.rhs).take(2 * n_trunc).map(|(l, r)| (l - r).norm()).fold(0.0, f64::max)
        })
        .collect();
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_problem_has_no_residual() {
        let p = ProblemTriple::from_fn(256, |_| Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let s = SpectralData::model(12).unwrap().with_omega(Some(Complex64::new(0.0, 0.0)));
        let r = residual_check(&p, &s, 12, &[0.0, 0.7, 2.0, std::f64::consts::PI]).unwrap();
        assert!(r < 1e-12, "{r}");
    }
}
