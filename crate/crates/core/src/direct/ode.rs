//! Fourth-order Magnus integrator for `y'' = (q(x) − ρ²) y`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{lagrange4, GridFunction};

/// Minimum number of grid nodes per period of `cos ρx`.
pub const NODES_PER_PERIOD: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Largest admissible `|ρ|`; `None` disables the cap.
    pub rho_cap: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rho_cap: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub x: f64,
    pub value: Complex64,
    pub derivative: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub samples: Vec<SolutionSample>,
    /// Richardson estimate of the global error, when the grid allows it.
    pub error_estimate: Option<f64>,
}

/// Potential values at the two Gauss points of every cell.
#[derive(Debug, Clone)]
pub struct Propagator {
    m: usize,
    h: f64,
    gauss: Vec<(Complex64, Complex64)>,
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3) / 6

impl Propagator {
    pub fn new(q: &GridFunction) -> Self {
        Self::from_values(q.values(), q.step())
    }

    fn from_values(v: &[Complex64], h: f64) -> Self {
        let m = v.len() - 1;
        let gauss = (0..m)
            .map(|j| {
                let (t1, t2) = (j as f64 + 0.5 - GAUSS_OFFSET, j as f64 + 0.5 + GAUSS_OFFSET);
                if m < 3 {
                    let lin = |t: f64| v[j] + (v[j + 1] - v[j]) * (t - j as f64);
                    return (lin(t1), lin(t2));
                }
                let start = j.saturating_sub(1).min(m - 3);
                let w = &v[start..start + 4];
                (lagrange4(w, t1 - start as f64), lagrange4(w, t2 - start as f64))
            })
            .collect();
        Self { m, h, gauss }
    }

    pub fn intervals(&self) -> usize {
        self.m
    }

    /// Checks the resolution and cap rules for `ρ`.
    pub fn check(&self, rho: Complex64, opts: &OdeOptions) -> Result<()> {
        let modulus = rho.norm();
        if let Some(cap) = opts.rho_cap {
            if modulus > cap {
                return Err(Error::RhoOverCap { modulus, cap });
            }
        }
        if 2.0 * self.m as f64 / NODES_PER_PERIOD < modulus {
            return Err(Error::GridTooCoarse { nodes: self.m, modulus });
        }
        Ok(())
    }

    #[inline]
    fn step(&self, j: usize, lambda: Complex64, y: Complex64, dy: Complex64) -> (Complex64, Complex64) {
        let h = self.h;
        let (q1, q2) = self.gauss[j];
        let (a1, a2) = (q1 - lambda, q2 - lambda);
        let p = (a1 - a2) * (3f64.sqrt() * h * h / 12.0);
        let s = (a1 + a2) * (h / 2.0);
        let w2 = p * p + s * h;
        let (ch, shc) = cosh_sinhc(w2);
        let ny = (ch + shc * p) * y + shc * h * dy;
        let ndy = shc * s * y + (ch - shc * p) * dy;
        (ny, ndy)
    }

    /// Values `(y(π), y'(π))` for the given initial data.
    pub fn propagate(&self, lambda: Complex64, y0: Complex64, dy0: Complex64) -> (Complex64, Complex64) {
        let (mut y, mut dy) = (y0, dy0);
        for j in 0..self.m {
            (y, dy) = self.step(j, lambda, y, dy);
        }
        (y, dy)
    }

    pub fn trajectory(&self, lambda: Complex64, y0: Complex64, dy0: Complex64) -> Vec<SolutionSample> {
        let mut out = Vec::with_capacity(self.m + 1);
        let (mut y, mut dy) = (y0, dy0);
        out.push(SolutionSample { x: 0.0, value: y, derivative: dy });
        for j in 0..self.m {
            (y, dy) = self.step(j, lambda, y, dy);
            out.push(SolutionSample { x: (j + 1) as f64 * self.h, value: y, derivative: dy });
        }
        out
    }
}

/// `cosh(w)` and `sinh(w)/w` as functions of `w²`.
#[inline]
fn cosh_sinhc(w2: Complex64) -> (Complex64, Complex64) {
    if w2.norm() < 1e-6 {
        let ch = 1.0 + w2 / 2.0 + w2 * w2 / 24.0;
        let shc = 1.0 + w2 / 6.0 + w2 * w2 / 120.0;
        return (ch, shc);
    }
    let w = w2.sqrt();
    let e = w.exp();
    let ei = e.inv();
    ((e + ei) * 0.5, (e - ei) * 0.5 / w)
}

/// Solves `-y'' + q y = ρ² y` with `y(0) = init_value`, `y'(0) = init_slope`.
pub fn integrate_solution(
    q: &GridFunction,
    init_value: Complex64,
    init_slope: Complex64,
    rho: Complex64,
    opts: &OdeOptions,
) -> Result<Solution> {
    let prop = Propagator::new(q);
    prop.check(rho, opts)?;
    let lambda = rho * rho;
    let samples = prop.trajectory(lambda, init_value, init_slope);
    let m = q.node_count();
    let error_estimate = if m % 2 == 0 && m >= 8 {
        let coarse: Vec<Complex64> = q.values().iter().step_by(2).copied().collect();
        let cp = Propagator::from_values(&coarse, 2.0 * q.step());
        let cs = cp.trajectory(lambda, init_value, init_slope);
        let diff = cs
            .iter()
            .enumerate()
            .map(|(k, c)| (c.value - samples[2 * k].value).norm())
            .fold(0.0, f64::max);
        Some(diff / 15.0)
    } else {
        None
    };
    Ok(Solution { samples, error_estimate })
}
