use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Characteristic, DirectSolver, OdeOptions};
use crate::error::{Error, Result};
use crate::grid::{simpson_weights, GridFunction};
use crate::spectral::ProblemTriple;

/// Kernels `𝒩`, `𝒩₀` of the integral representations
/// `Δ(ρ) = −ρ sin ρπ + ω cos ρπ + ∫𝒩(t) cos ρt dt` and
/// `Δ₀(ρ) = cos ρπ + ω₀ sin ρπ/ρ + ∫𝒩₀(t) sin ρt/ρ dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub n: GridFunction,
    pub n0: GridFunction,
    pub omega: Complex64,
    pub omega0: Complex64,
}

impl CauchyData {
    pub fn new(n: GridFunction, n0: GridFunction, omega: Complex64, omega0: Complex64) -> Result<Self> {
        if n.node_count() != n0.node_count() {
            return Err(Error::LengthMismatch { left: n.node_count(), right: n0.node_count() });
        }
        Ok(Self { n, n0, omega, omega0 })
    }

    pub fn grid_nodes(&self) -> usize {
        self.n.node_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyOptions {
    /// Number of Fourier modes `K`.
    pub fourier_modes: usize,
    /// Output grid; defaults to the grid of `q`.
    pub grid_nodes: Option<usize>,
    /// Adds the closed-form sum of the fitted `1/k²` coefficient tail.
    pub tail_completion: bool,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self { fourier_modes: 64, grid_nodes: None, tail_completion: true }
    }
}

pub fn cauchy_data(p: &ProblemTriple, fourier_modes: usize) -> Result<CauchyData> {
    cauchy_data_with(p, &CauchyOptions { fourier_modes, ..CauchyOptions::default() })
}

/// Computes `𝒩` from its cosine coefficients `Δ(k) − ω(−1)^k` and `𝒩₀`
/// from its half-integer sine coefficients `ρΔ₀(ρ) − ω₀(−1)^k`,
/// `ρ = k + ½`.
pub fn cauchy_data_with(p: &ProblemTriple, opts: &CauchyOptions) -> Result<CauchyData> {
    let k_max = opts.fourier_modes;
    if k_max < 4 {
        return Err(Error::InvalidArgument(format!("at least 4 Fourier modes are needed, got {k_max}")));
    }
    let m = opts.grid_nodes.unwrap_or(p.grid_nodes());
    let solver = DirectSolver::new(p, OdeOptions::default());
    let omega = p.omega();
    let omega0 = p.omega0();
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let a: Vec<Complex64> = (0..=k_max)
        .map(|k| Ok(solver.delta(Complex64::new(k as f64, 0.0))? - omega * sign(k)))
        .collect::<Result<_>>()?;
    let b: Vec<Complex64> = (0..=k_max)
        .map(|k| {
            let rho = Complex64::new(k as f64 + 0.5, 0.0);
            Ok(rho * solver.delta0(rho)? - omega0 * sign(k))
        })
        .collect::<Result<_>>()?;

    // Tail models: k² aₖ ≈ u(−1)^k + v and ν² bₖ ≈ u₀(−1)^k + v₀ ν.
    let kk = k_max as f64;
    let (ua, ub) = (a[k_max] * kk * kk, a[k_max - 1] * (kk - 1.0) * (kk - 1.0));
    let tail_alt = (ua - ub) * 0.5 * sign(k_max);
    let tail_flat = (ua + ub) * 0.5;
    let (nu, nu1) = (kk + 0.5, kk - 0.5);
    let (wa, wb) = (b[k_max] * nu * nu, b[k_max - 1] * nu1 * nu1);
    // wa = s u₀ + v₀ ν, wb = −s u₀ + v₀ ν₁ with s = (−1)^K.
    let v0 = (wa + wb) / (nu + nu1);
    let u0 = (wa - v0 * nu) * sign(k_max);

    let n = GridFunction::from_fn(m, |t| {
        let mut s = a[0] / PI;
        let mut alt = Complex64::new(0.0, 0.0);
        let mut flat = Complex64::new(0.0, 0.0);
        for k in 1..=k_max {
            let ck = (k as f64 * t).cos();
            s += a[k] * (2.0 / PI) * ck;
            let k2 = (k * k) as f64;
            alt += sign(k) * ck / k2;
            flat += ck / k2;
        }
        if opts.tail_completion {
            let alt_tail = t * t / 4.0 - PI * PI / 12.0 - alt.re;
            let flat_tail = PI * PI / 6.0 - PI * t / 2.0 + t * t / 4.0 - flat.re;
            s += (tail_alt * alt_tail + tail_flat * flat_tail) * (2.0 / PI);
        }
        s
    })?;
    let n0 = GridFunction::from_fn(m, |t| {
        let mut s = Complex64::new(0.0, 0.0);
        let mut alt = 0.0;
        let mut flat = 0.0;
        for (k, bk) in b.iter().enumerate() {
            let nu = k as f64 + 0.5;
            let sk = (nu * t).sin();
            s += bk * (2.0 / PI) * sk;
            alt += sign(k) * sk / (nu * nu);
            flat += sk / nu;
        }
        if opts.tail_completion && t > 0.0 {
            let alt_tail = PI * t / 2.0 - alt;
            let flat_tail = PI / 2.0 - flat;
            s += (u0 * alt_tail + v0 * flat_tail) * (2.0 / PI);
        }
        s
    })?;
    CauchyData::new(n, n0, omega, omega0)
}

/// Characteristic functions evaluated from Cauchy data by quadrature.
#[derive(Debug, Clone)]
pub struct CauchyCharacteristic {
    data: CauchyData,
    nodes: Vec<f64>,
    wn: Vec<Complex64>,
    wn0: Vec<Complex64>,
}

impl CauchyCharacteristic {
    pub fn new(data: &CauchyData) -> Self {
        let m = data.grid_nodes();
        let w = simpson_weights(m, PI / m as f64);
        let nodes = data.n.nodes();
        let wn = data.n.values().iter().zip(&w).map(|(v, w)| v * w).collect();
        let wn0 = data.n0.values().iter().zip(&w).zip(&nodes).map(|((v, w), t)| v * w * t).collect();
        Self { data: data.clone(), nodes, wn, wn0 }
    }

    pub fn data(&self) -> &CauchyData {
        &self.data
    }
}

fn sinc(u: Complex64) -> Complex64 {
    if u.norm() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

impl Characteristic for CauchyCharacteristic {
    fn delta(&self, rho: Complex64) -> Result<Complex64> {
        let mut s = -rho * (rho * PI).sin() + self.data.omega * (rho * PI).cos();
        for (t, w) in self.nodes.iter().zip(&self.wn) {
            s += w * (rho * *t).cos();
        }
        Ok(s)
    }

    fn delta0(&self, rho: Complex64) -> Result<Complex64> {
        let mut s = (rho * PI).cos() + self.data.omega0 * PI * sinc(rho * PI);
        for (t, w) in self.nodes.iter().zip(&self.wn0) {
            s += w * sinc(rho * *t);
        }
        Ok(s)
    }

    fn omega(&self) -> Complex64 {
        self.data.omega
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn robin_only_problem_has_vanishing_kernels() {
        let p = ProblemTriple::new(GridFunction::zeros(512).unwrap(), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let d = cauchy_data(&p, 32).unwrap();
        assert!(d.n.max_abs() < 1e-9, "{}", d.n.max_abs());
        assert!(d.n0.max_abs() < 1e-9, "{}", d.n0.max_abs());
        assert_eq!(d.omega, c(1.0, 0.0));
        assert_eq!(d.omega0, c(0.0, 0.0));
    }

    #[test]
    fn constant_potential_kernels_reproduce_the_characteristic_functions() {
        let p = ProblemTriple::new(GridFunction::constant(1024, c(0.4, 0.2)).unwrap(), c(0.3, 0.0), c(-0.2, 0.1)).unwrap();
        let d = cauchy_data(&p, 64).unwrap();
        let ch = CauchyCharacteristic::new(&d);
        let solver = DirectSolver::new(&p, OdeOptions::default());
        for rho in [c(0.7, 0.0), c(10.37, 0.0), c(3.2, 0.8)] {
            let e = (ch.delta(rho).unwrap() - solver.delta(rho).unwrap()).norm();
            let e0 = (ch.delta0(rho).unwrap() - solver.delta0(rho).unwrap()).norm();
            assert!(e < 1e-6 && e0 < 1e-6, "rho {rho}: {e} {e0}");
        }
    }
}
