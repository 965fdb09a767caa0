use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectral::{canonical_sqrt, Multiplicity, SpectralData};

/// Which part of a data entry a single-entry perturbation moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    Rho,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// `ρₙ += σ gₙ/n` with real `gₙ`, `αₙ += σ (g'ₙ + i g''ₙ)/n`.
    GaussianTail,
    /// Moves one entry (1-based `index`) by `±magnitude`, the sign drawn
    /// from the seed.
    SingleEntry { index: usize, entry: Entry },
    /// Splits the first double eigenvalue into a pair of simple ones with
    /// weights of order `1/δ`, `δ = magnitude`.
    PairSplit,
    /// Sets `α_index := magnitude`.
    AlphaDegenerate { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationScheme {
    pub kind: SchemeKind,
    pub magnitude: f64,
    pub seed: u64,
}

impl PerturbationScheme {
    pub fn new(kind: SchemeKind, magnitude: f64, seed: u64) -> Result<Self> {
        if !(magnitude >= 0.0 && magnitude.is_finite()) {
            return Err(Error::InvalidArgument(format!("magnitude must be nonnegative, got {magnitude}")));
        }
        Ok(Self { kind, magnitude, seed })
    }

    pub fn with_magnitude(self, magnitude: f64) -> Result<Self> {
        Self::new(self.kind, magnitude, self.seed)
    }
}

fn check_index(index: usize, len: usize) -> Result<usize> {
    if index == 0 || index > len {
        return Err(Error::InvalidArgument(format!("index {index} outside 1..={len}")));
    }
    Ok(index - 1)
}

/// Applies the scheme to `s`. Magnitude zero returns `s` unchanged.
pub fn perturb(s: &SpectralData, scheme: &PerturbationScheme) -> Result<SpectralData> {
    if !(scheme.magnitude >= 0.0 && scheme.magnitude.is_finite()) {
        return Err(Error::InvalidArgument(format!("magnitude must be nonnegative, got {}", scheme.magnitude)));
    }
    if let SchemeKind::PairSplit = scheme.kind {
        return pair_split(s, scheme.magnitude);
    }
    if scheme.magnitude == 0.0 {
        return Ok(s.clone());
    }
    let sigma = scheme.magnitude;
    let mut rng = ChaCha8Rng::seed_from_u64(scheme.seed);
    let mut rho = s.rho().to_vec();
    let mut alpha = s.alpha().to_vec();
    match scheme.kind {
        SchemeKind::GaussianTail => {
            // Group members share one eigenvalue shift.
            for (start, m) in s.groups() {
                let g: f64 = rng.sample(StandardNormal);
                let shift = sigma * g / (start + 1) as f64;
                for r in &mut rho[start..start + m] {
                    *r += shift;
                }
            }
            for (k, a) in alpha.iter_mut().enumerate() {
                let (g1, g2): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                *a += Complex64::new(g1, g2) * (sigma / (k + 1) as f64 / std::f64::consts::SQRT_2);
            }
        }
        SchemeKind::SingleEntry { index, entry } => {
            let k = check_index(index, s.len())?;
            let step = if rng.random::<bool>() { sigma } else { -sigma };
            match entry {
                Entry::Rho => {
                    if !s.is_simple() {
                        return Err(Error::MultiplicityPresent);
                    }
                    rho[k] += step;
                }
                Entry::Alpha => alpha[k] += step,
            }
        }
        SchemeKind::AlphaDegenerate { index } => {
            let k = check_index(index, s.len())?;
            alpha[k] = Complex64::new(sigma, 0.0);
        }
        SchemeKind::PairSplit => unreachable!("handled above"),
    }
    let rho = rho.into_iter().map(|r| canonical_sqrt(r * r)).collect();
    SpectralData::with_structure(rho, alpha, s.omega(), s.multiplicity().cloned())
}

/// `λ₁ = λ₂` with weights `α₁` (simple pole) and `α₂` (double pole) goes
/// to `λ₁ + δ`, `λ₁ − δ + cδ²` with weights `a/δ`, `−a/δ`, where
/// `a = α₂/2` and `c = α₁/a`.
fn pair_split(s: &SpectralData, delta: f64) -> Result<SpectralData> {
    let groups = s.groups();
    let (start, _) = groups
        .iter()
        .copied()
        .find(|g| g.1 == 2)
        .ok_or_else(|| Error::InvalidArgument("pair splitting needs a double eigenvalue".into()))?;
    if delta == 0.0 {
        return Ok(s.clone());
    }
    let lambda = s.rho()[start] * s.rho()[start];
    let (a1, a2) = (s.alpha()[start], s.alpha()[start + 1]);
    let a = a2 / 2.0;
    let c = a1 / a;
    let mut rho = s.rho().to_vec();
    let mut alpha = s.alpha().to_vec();
    rho[start] = canonical_sqrt(lambda + delta);
    rho[start + 1] = canonical_sqrt(lambda - delta + c * delta * delta);
    alpha[start] = a / delta;
    alpha[start + 1] = -a / delta;
    let mut split = Vec::with_capacity(groups.len() + 1);
    for &(g, m) in &groups {
        if g == start {
            split.push((g, 1));
            split.push((g + 1, 1));
        } else {
            split.push((g, m));
        }
    }
    SpectralData::with_structure(rho, alpha, s.omega(), Some(Multiplicity::from_groups(&split)))
}
