use std::f64::consts::PI;

use num_complex::Complex64;

use super::eigen::{find_eigenvalues_with, EigenOptions, EigenSet};
use super::roots::central_derivative;
use super::{Characteristic, DirectSolver, OdeOptions};
use crate::error::{Error, Result};
use crate::grid::simpson;
use crate::spectral::{canonical_sqrt, ProblemTriple, SpectralData};

/// Below this `|ρ|` the residue formula is evaluated in the `λ` variable.
const SMALL_RHO: f64 = 1e-3;

/// `αₙ = 1 / ∫₀^π φ²(x, ρₙ) dx`.
pub fn weight_numbers_simple(solver: &DirectSolver, rho: Complex64) -> Result<Complex64> {
    let phi = solver.phi(rho)?;
    let sq: Vec<Complex64> = phi.iter().map(|s| s.value * s.value).collect();
    let integral = simpson(&sq, PI / (sq.len() - 1) as f64);
    if integral.norm() < 1e-12 {
        return Err(Error::DegenerateNormalization { rho, modulus: integral.norm() });
    }
    Ok(integral.inv())
}

/// `αₙ = Res_{λ=λₙ} M(λ) = −2ρₙ Δ₀(ρₙ) / Δ̇(ρₙ)`.
pub fn weight_numbers_residue<C: Characteristic + ?Sized>(ch: &C, rho: Complex64) -> Result<Complex64> {
    let d0 = ch.delta0(rho)?;
    if rho.norm() >= SMALL_RHO {
        let step = 1e-5 * (1.0 + rho.norm());
        let f = |r: Complex64| ch.delta(r);
        let dd = central_derivative(&f, rho, step)?;
        if dd.norm() < 1e-12 * (1.0 + rho.norm()) {
            return Err(Error::MultipleRoot { rho });
        }
        Ok(-2.0 * rho * d0 / dd)
    } else {
        let lambda = rho * rho;
        let f = |l: Complex64| ch.delta(canonical_sqrt(l));
        let dd = central_derivative(&f, lambda, 1e-5)?;
        if dd.norm() < 1e-12 {
            return Err(Error::MultipleRoot { rho });
        }
        Ok(-d0 / dd)
    }
}

/// `M(λ) = −Δ₀(ρ)/Δ(ρ)` at `λ = ρ²`.
pub fn weyl_function<C: Characteristic + ?Sized>(ch: &C, rho: Complex64) -> Result<Complex64> {
    let d = ch.delta(rho)?;
    if d.norm() <= 1e-12 * (1.0 + rho.norm_sqr()) {
        return Err(Error::NearEigenvalue { rho });
    }
    Ok(-ch.delta0(rho)? / d)
}

/// Samples `f` at `K` equispaced points of `|λ − center| = radius`.
pub fn sample_circle<F>(f: F, center: Complex64, radius: f64, count: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    (0..count)
        .map(|j| f(center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / count as f64)))
        .collect()
}

/// `α_{n+ν} = (1/2πi)∮ M(λ)(λ − λₙ)^ν dλ`, `ν = 0..multiplicity`, from
/// samples taken by [`sample_circle`] around the center `λₙ`.
pub fn laurent_coefficients(
    samples: &[Complex64],
    _center: Complex64,
    radius: f64,
    multiplicity: usize,
) -> Result<Vec<Complex64>> {
    if samples.len() < 16 {
        return Err(Error::TooFewEntries { needed: 16, got: samples.len() });
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let k = samples.len();
    Ok((0..multiplicity)
        .map(|nu| {
            samples
                .iter()
                .enumerate()
                .map(|(j, m)| m * Complex64::from_polar(radius, 2.0 * PI * j as f64 / k as f64).powu(nu as u32 + 1))
                .sum::<Complex64>()
                / k as f64
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardOptions {
    pub ode: OdeOptions,
    pub eigen: EigenOptions,
    /// How weight numbers of simple eigenvalues are computed.
    pub weights: WeightMethod,
    /// Circle samples for Laurent coefficients of multiple eigenvalues.
    pub laurent_nodes: usize,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        Self { ode: OdeOptions::default(), eigen: EigenOptions::default(), weights: WeightMethod::Residue, laurent_nodes: 64 }
    }
}

/// Spectral data `{ρₙ, αₙ}` for `n ≤ n_max`, with `ω` attached.
pub fn forward(p: &ProblemTriple, n_max: usize) -> Result<SpectralData> {
    forward_with(p, n_max, &ForwardOptions::default())
}

/// Route to the weight number of a simple eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMethod {
    /// `1/∫φ²` by Simpson's rule on the solver grid.
    Integral,
    /// Residue of the Weyl function. Its error does not grow with `ρ` like
    /// the quadrature error of `∫φ²` does.
    Residue,
}

/// Weight numbers for every group of `set`: `simple` for simple
/// eigenvalues, Laurent coefficients of the Weyl function otherwise.
pub(crate) fn assign_weights<C: Characteristic + ?Sized>(
    ch: &C,
    set: &EigenSet,
    laurent_nodes: usize,
    simple: impl Fn(Complex64) -> Result<Complex64>,
) -> Result<Vec<Complex64>> {
    let mut alpha = vec![Complex64::new(0.0, 0.0); set.rho.len()];
    let lambdas: Vec<Complex64> = set.groups.iter().map(|g| set.rho[g.0] * set.rho[g.0]).collect();
    for (gi, &(start, m)) in set.groups.iter().enumerate() {
        if m == 1 {
            alpha[start] = simple(set.rho[start])?;
        } else {
            let center = lambdas[gi];
            let sep = lambdas
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != gi)
                .map(|(_, l)| (l - center).norm())
                .fold(f64::INFINITY, f64::min);
            let radius = (0.25 * sep).min(0.5);
            let samples = sample_circle(|l| weyl_function(ch, canonical_sqrt(l)), center, radius, laurent_nodes)?;
            let coeffs = laurent_coefficients(&samples, center, radius, m)?;
            alpha[start..start + m].copy_from_slice(&coeffs);
        }
    }
    Ok(alpha)
}

pub fn forward_with(p: &ProblemTriple, n_max: usize, opts: &ForwardOptions) -> Result<SpectralData> {
    let mut ode = opts.ode;
    if ode.rho_cap.is_none() {
        ode.rho_cap = Some(10.0 * n_max.max(1) as f64);
    }
    let solver = DirectSolver::new(p, ode);
    let set = find_eigenvalues_with(&solver, n_max, &opts.eigen)?;
    let alpha = assign_weights(&solver, &set, opts.laurent_nodes, |rho| match opts.weights {
        WeightMethod::Integral => weight_numbers_simple(&solver, rho),
        WeightMethod::Residue => weight_numbers_residue(&solver, rho),
    })?;
    SpectralData::with_structure(set.rho.clone(), alpha, Some(p.omega()), set.multiplicity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laurent_coefficients_of_a_double_pole() {
        let center = c(1.0, 0.5);
        let m = |l: Complex64| -> Result<Complex64> { Ok(c(3.0, 0.0) / (l - center) + c(2.0, 0.0) / (l - center).powu(2) + l) };
        let s = sample_circle(m, center, 0.3, 64).unwrap();
        let a = laurent_coefficients(&s, center, 0.3, 2).unwrap();
        assert!((a[0] - 3.0).norm() < 1e-13);
        assert!((a[1] - 2.0).norm() < 1e-13);
        assert!(laurent_coefficients(&s[..8], center, 0.3, 2).is_err());
        assert!(laurent_coefficients(&s, center, 0.0, 2).is_err());
    }

    #[test]
    fn model_weights_by_both_formulas() {
        let p = ProblemTriple::new(GridFunction::zeros(1024).unwrap(), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let solver = DirectSolver::new(&p, OdeOptions::default());
        for n in 1..=5usize {
            let rho = c((n - 1) as f64, 0.0);
            let expected = if n == 1 { 1.0 / PI } else { 2.0 / PI };
            assert!((weight_numbers_simple(&solver, rho).unwrap() - expected).norm() < 1e-10);
            assert!((weight_numbers_residue(&solver, rho).unwrap() - expected).norm() < 1e-8);
        }
    }

    #[test]
    fn weyl_function_of_the_model_problem() {
        let p = ProblemTriple::new(GridFunction::zeros(512).unwrap(), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let solver = DirectSolver::new(&p, OdeOptions::default());
        let rho = c(1.5, 0.3);
        let expected = (rho * PI).cos() / (rho * (rho * PI).sin());
        assert!((weyl_function(&solver, rho).unwrap() - expected).norm() < 1e-11);
        assert!(matches!(weyl_function(&solver, c(2.0, 0.0)), Err(Error::NearEigenvalue { .. })));
    }
}
