use std::f64::consts::PI;

use num_complex::Complex64;

use super::{model_alpha, model_rho, SpectralData};
use crate::error::{Error, Result};

/// Minimum number of entries for estimating `ω` from the data alone.
pub const OMEGA_ESTIMATE_MIN_LEN: usize = 8;

/// `ρₙ = n − 1 + ω/(πn) + ϰₙ/n`, `αₙ = α̃ₙ + sₙ/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailDecomposition {
    pub omega: Complex64,
    pub varkappa: Vec<Complex64>,
    pub s: Vec<Complex64>,
    /// Uncertainty of `omega` when it was estimated from the data.
    pub omega_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaEstimate {
    pub omega: Complex64,
    pub tolerance: f64,
}

/// Extrapolates `πn(ρₙ − n + 1)` to `n → ∞` over the last quartile of the
/// data with Neville's scheme in `1/n`.
pub fn estimate_omega(rho: &[Complex64]) -> Result<OmegaEstimate> {
    let n_max = rho.len();
    if n_max < OMEGA_ESTIMATE_MIN_LEN {
        return Err(Error::TooFewEntries { needed: OMEGA_ESTIMATE_MIN_LEN, got: n_max });
    }
    let first = n_max - n_max / 4 + 1;
    let available: Vec<usize> = (first..=n_max).collect();
    let count = available.len().min(4);
    let picks: Vec<usize> = (0..count)
        .map(|i| {
            if count == 1 {
                n_max
            } else {
                available[i * (available.len() - 1) / (count - 1)]
            }
        })
        .collect();
    let t: Vec<f64> = picks.iter().map(|&n| 1.0 / n as f64).collect();
    let v: Vec<Complex64> = picks
        .iter()
        .map(|&n| PI * n as f64 * (rho[n - 1] - model_rho(n)))
        .collect();
    // Neville table evaluated at t = 0.
    let mut p = v.clone();
    let mut previous = p[p.len() - 1];
    let mut best = previous;
    for level in 1..p.len() {
        for i in 0..p.len() - level {
            let (ti, tj) = (t[i], t[i + level]);
            p[i] = (p[i] * (0.0 - tj) - p[i + 1] * (0.0 - ti)) / (ti - tj);
        }
        previous = best;
        best = p[0];
    }
    Ok(OmegaEstimate { omega: best, tolerance: (best - previous).norm() })
}

/// Splits data into the asymptotic constant and the `ℓ²` remainders.
pub fn decompose_asymptotics(s: &SpectralData, omega_hint: Option<Complex64>) -> Result<TailDecomposition> {
    let (omega, omega_tolerance) = match omega_hint.or(s.omega()) {
        Some(w) => (w, None),
        None => {
            let e = estimate_omega(s.rho())?;
            (e.omega, Some(e.tolerance))
        }
    };
    let varkappa = s
        .rho()
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let n = (k + 1) as f64;
            n * (r - model_rho(k + 1)) - omega / PI
        })
        .collect();
    let sv = s
        .alpha()
        .iter()
        .enumerate()
        .map(|(k, a)| (k + 1) as f64 * (a - model_alpha(k + 1)))
        .collect();
    Ok(TailDecomposition { omega, varkappa, s: sv, omega_tolerance })
}

/// Inverse of [`decompose_asymptotics`].
pub fn recompose(d: &TailDecomposition) -> Result<SpectralData> {
    if d.varkappa.len() != d.s.len() {
        return Err(Error::LengthMismatch { left: d.varkappa.len(), right: d.s.len() });
    }
    let rho = d
        .varkappa
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let n = (k + 1) as f64;
            model_rho(k + 1) + d.omega / (PI * n) + x / n
        })
        .collect();
    let alpha = d
        .s
        .iter()
        .enumerate()
        .map(|(k, x)| model_alpha(k + 1) + x / (k + 1) as f64)
        .collect();
    SpectralData::with_structure(rho, alpha, Some(d.omega), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_read_from_exact_asymptotics() {
        let rho: Vec<Complex64> =
            (1..=20).map(|n| Complex64::new((n - 1) as f64 + 1.0 / (PI * n as f64), 0.0)).collect();
        let alpha = (1..=20).map(|n| Complex64::new(model_alpha(n), 0.0)).collect();
        let s = SpectralData::new(rho, alpha).unwrap();
        let d = decompose_asymptotics(&s, None).unwrap();
        assert!((d.omega - 1.0).norm() < 1e-8);
        assert!(d.varkappa.iter().all(|v| v.norm() < 1e-8));
    }

    #[test]
    fn estimate_handles_smooth_corrections() {
        let w = Complex64::new(0.7, -0.3);
        let rho: Vec<Complex64> = (1..=40)
            .map(|n| {
                let n = n as f64;
                n - 1.0 + w / (PI * n) + Complex64::new(0.2, 0.1) / (n * n) - 0.3 / (n * n * n)
            })
            .collect();
        let e = estimate_omega(&rho).unwrap();
        assert!((e.omega - w).norm() < 1e-5, "{:?}", e);
    }

    #[test]
    fn short_data_without_omega_is_rejected() {
        let s = SpectralData::model(5).unwrap().with_omega(None);
        assert!(matches!(decompose_asymptotics(&s, None), Err(Error::TooFewEntries { .. })));
        assert!(decompose_asymptotics(&s, Some(Complex64::new(0.0, 0.0))).is_ok());
    }
}
