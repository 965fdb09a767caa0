use std::f64::consts::PI;

use num_complex::Complex64;

use super::roots::{newton, rect_count, winding_count_circle, zeros_in_rect, Rect, Zero};
use super::{Characteristic, DirectSolver, OdeOptions};
use crate::error::{Error, Result};
use crate::spectral::{canonical_sqrt, Multiplicity, ProblemTriple};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EigenOptions {
    /// Fixes the contour index instead of searching for the smallest
    /// certified one.
    pub contour_index: Option<usize>,
    /// Upper bound for the contour index search; defaults to `n_max + 4`.
    pub max_contour_index: Option<usize>,
}

/// Eigenvalue square roots with their grouping and the contour index `N`
/// whose circle `|ρ| = N − ½` was certified to enclose exactly `N`
/// eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    pub rho: Vec<Complex64>,
    pub groups: Vec<(usize, usize)>,
    pub contour_index: usize,
}

impl EigenSet {
    pub fn multiplicity(&self) -> Option<Multiplicity> {
        if self.groups.iter().all(|g| g.1 == 1) {
            None
        } else {
            Some(Multiplicity::from_groups(&self.groups))
        }
    }
}

/// Eigenvalues of `p` for indices `1..=n_max`.
pub fn find_eigenvalues(p: &ProblemTriple, n_max: usize) -> Result<EigenSet> {
    let opts = OdeOptions { rho_cap: Some(10.0 * n_max.max(1) as f64) };
    find_eigenvalues_with(&DirectSolver::new(p, opts), n_max, &EigenOptions::default())
}

fn lambda_tol(lambda: Complex64) -> f64 {
    1e-11 * (1.0 + lambda.norm())
}

/// Generic eigenvalue search for any characteristic function.
pub fn find_eigenvalues_with<C: Characteristic + ?Sized>(ch: &C, n_max: usize, opts: &EigenOptions) -> Result<EigenSet> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let omega = ch.omega();
    let f = |lambda: Complex64| ch.delta(canonical_sqrt(lambda));
    let guess = |n: usize| ((n - 1) * (n - 1)) as f64 + 2.0 * omega / PI;
    let (first, last) = match opts.contour_index {
        Some(n) => (n.max(1), n.max(1)),
        None => (1, opts.max_contour_index.unwrap_or(n_max + 4)),
    };
    let mut last_err = Error::Certification("no contour index tried".into());
    for big_n in first..=last {
        match try_contour(ch, &f, &guess, big_n, n_max) {
            Ok(set) => return Ok(set),
            Err(e @ (Error::GridTooCoarse { .. } | Error::RhoOverCap { .. })) => return Err(e),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

fn try_contour<C, F>(ch: &C, f: &F, guess: &dyn Fn(usize) -> Complex64, big_n: usize, n_max: usize) -> Result<EigenSet>
where
    C: Characteristic + ?Sized,
    F: Fn(Complex64) -> Result<Complex64>,
{
    let radius = big_n as f64 - 0.5;
    let delta = |rho: Complex64| ch.delta(rho);
    let count = winding_count_circle(&delta, Complex64::new(0.0, 0.0), radius, 32 * (big_n + 1))?;
    if count != 2 * big_n {
        return Err(Error::Certification(format!(
            "circle |rho| = {radius} encloses {} eigenvalues instead of {big_n}",
            count as f64 / 2.0
        )));
    }
    let inner = inner_zeros(f, guess, big_n, radius)?;
    let mut zeros: Vec<(Complex64, usize)> =
        inner.into_iter().map(|z| (canonical_sqrt(z.value), z.multiplicity)).collect();
    zeros.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut rho = Vec::with_capacity(n_max.max(big_n));
    let mut groups = Vec::new();
    for (r, m) in zeros {
        groups.push((rho.len(), m));
        rho.extend(std::iter::repeat(r).take(m));
    }
    for n in big_n + 1..=n_max {
        let g = guess(n);
        let target = canonical_sqrt(g);
        let found = newton(f, g, 1, lambda_tol, 50)
            .map(canonical_sqrt)
            .filter(|r| (r - target).norm() < 0.5 && r.norm() > radius);
        let r = found.ok_or(Error::NewtonNonConvergence { index: n })?;
        if let Some(prev) = rho.last() {
            if (r - prev).norm() < 1e-6 * (1.0 + r.norm()) {
                return Err(Error::Certification(format!("eigenvalue {n} coincides with its predecessor")));
            }
        }
        groups.push((rho.len(), 1));
        rho.push(r);
    }
    if rho.len() > n_max {
        rho.truncate(n_max);
        groups.retain(|g| g.0 < n_max);
        if let Some(g) = groups.last_mut() {
            g.1 = g.1.min(n_max - g.0);
        }
    }
    Ok(EigenSet { rho, groups, contour_index: big_n })
}

/// The `count` zeros (in `λ`) inside `|ρ| < radius`.
fn inner_zeros<F>(f: &F, guess: &dyn Fn(usize) -> Complex64, count: usize, radius: f64) -> Result<Vec<Zero>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let r2 = radius * radius;
    let mut quick: Vec<Complex64> = Vec::new();
    for n in 1..=count {
        match newton(f, guess(n), 1, lambda_tol, 50) {
            Some(z) if z.norm() < r2 && quick.iter().all(|q| (q - z).norm() > 1e-6 * (1.0 + z.norm())) => quick.push(z),
            _ => break,
        }
    }
    if quick.len() == count {
        return Ok(quick.into_iter().map(|value| Zero { value, multiplicity: 1 }).collect());
    }
    let half = 1.0123 * r2;
    let rect = Rect { x0: -half + 0.0071 * r2, x1: half + 0.0071 * r2, y0: -half - 0.0053 * r2, y1: half - 0.0053 * r2 };
    let total = rect_count(f, &rect)?;
    let zeros: Vec<Zero> = zeros_in_rect(f, rect, total)?.into_iter().filter(|z| z.value.norm() < r2).collect();
    let found: usize = zeros.iter().map(|z| z.multiplicity).sum();
    if found != count {
        return Err(Error::Certification(format!("found {found} zeros inside the contour, expected {count}")));
    }
    Ok(zeros)
}
