//! Spectral data types, asymptotics, distances and set membership.

mod asymptotics;
mod distance;
mod membership;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;

pub use asymptotics::{decompose_asymptotics, estimate_omega, recompose, OmegaEstimate, TailDecomposition};
pub use distance::{distance_d, distance_dn, xi_sequence};
pub use membership::{validate_membership, MembershipInput, MembershipReport, SetSpec, TauSign, Violation};

/// Relative tolerance under which two eigenvalues count as equal.
pub const EQUAL_EIGENVALUE_TOL: f64 = 1e-9;

/// Square root with `arg ∈ [-π/2, π/2)`. Roots within roundoff of the
/// imaginary axis are snapped onto its lower half.
pub fn canonical_sqrt(lambda: Complex64) -> Complex64 {
    let s = lambda.sqrt();
    if s.re.abs() <= 1e-14 * s.norm() {
        Complex64::new(0.0, -s.im.abs())
    } else {
        s
    }
}

fn is_canonical(rho: Complex64) -> bool {
    let tol = 1e-12 * (1.0 + rho.norm());
    rho.re >= -tol && !(rho.re == 0.0 && rho.im > 0.0)
}

pub(crate) fn same_eigenvalue(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= EQUAL_EIGENVALUE_TOL * (1.0 + a.norm().max(b.norm()))
}

/// A boundary value problem `(q, h, H)` with `q` sampled on `[0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemTriple {
    pub q: GridFunction,
    pub h: Complex64,
    pub big_h: Complex64,
}

impl ProblemTriple {
    pub fn new(q: GridFunction, h: Complex64, big_h: Complex64) -> Result<Self> {
        if !(h.re.is_finite() && h.im.is_finite() && big_h.re.is_finite() && big_h.im.is_finite()) {
            return Err(Error::NonFinite("boundary coefficients".into()));
        }
        Ok(Self { q, h, big_h })
    }

    /// Triple with `q(x) = f(x)` sampled on `m` intervals.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> Complex64, h: Complex64, big_h: Complex64) -> Result<Self> {
        Self::new(GridFunction::from_fn(m, f)?, h, big_h)
    }

    pub fn grid_nodes(&self) -> usize {
        self.q.node_count()
    }

    /// `ω = h + H + ½∫q`.
    pub fn omega(&self) -> Complex64 {
        self.h + self.big_h + 0.5 * self.q.integral()
    }

    /// `ω₀ = H + ½∫q`.
    pub fn omega0(&self) -> Complex64 {
        self.big_h + 0.5 * self.q.integral()
    }

    /// The triple `(q + c, h, H)`.
    pub fn shifted(&self, c: Complex64) -> ProblemTriple {
        ProblemTriple { q: self.q.map(|v| v + c), h: self.h, big_h: self.big_h }
    }

    /// `‖q − q'‖ + |h − h'| + |H − H'|` with `q'` resampled when needed.
    pub fn distance(&self, other: &ProblemTriple) -> f64 {
        self.q.l2_distance(&other.q) + (self.h - other.h).norm() + (self.big_h - other.big_h).norm()
    }
}

/// Grouping of equal eigenvalues: group `j` starts at the 1-based index
/// `index_set[j]` and has `multiplicities[j]` members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicity {
    index_set: Vec<usize>,
    multiplicities: Vec<usize>,
}

impl Multiplicity {
    pub fn new(index_set: Vec<usize>, multiplicities: Vec<usize>) -> Result<Self> {
        if index_set.len() != multiplicities.len() {
            return Err(Error::LengthMismatch { left: index_set.len(), right: multiplicities.len() });
        }
        if index_set.first() != Some(&1) {
            return Err(Error::InvalidArgument("index set must start at 1".into()));
        }
        for j in 0..index_set.len() {
            if multiplicities[j] == 0 {
                return Err(Error::InvalidArgument("multiplicities must be positive".into()));
            }
            if j + 1 < index_set.len() && index_set[j + 1] != index_set[j] + multiplicities[j] {
                return Err(Error::InvalidArgument(format!(
                    "index set entry {} is inconsistent with the multiplicities",
                    index_set[j + 1]
                )));
            }
        }
        Ok(Self { index_set, multiplicities })
    }

    /// All-simple structure for `n` eigenvalues.
    pub fn simple(n: usize) -> Self {
        Self { index_set: (1..=n).collect(), multiplicities: vec![1; n] }
    }

    pub fn from_groups(groups: &[(usize, usize)]) -> Self {
        Self {
            index_set: groups.iter().map(|g| g.0 + 1).collect(),
            multiplicities: groups.iter().map(|g| g.1).collect(),
        }
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Groups as `(0-based start, multiplicity)`.
    pub fn groups(&self) -> Vec<(usize, usize)> {
        self.index_set.iter().zip(&self.multiplicities).map(|(&i, &m)| (i - 1, m)).collect()
    }

    pub fn is_all_simple(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }
}

/// Eigenvalue square roots `ρₙ` and weight numbers `αₙ` (Laurent
/// coefficients for multiple eigenvalues).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    rho: Vec<Complex64>,
    alpha: Vec<Complex64>,
    omega: Option<Complex64>,
    multiplicity: Option<Multiplicity>,
}

impl SpectralData {
    pub fn new(rho: Vec<Complex64>, alpha: Vec<Complex64>) -> Result<Self> {
        Self::with_structure(rho, alpha, None, None)
    }

    pub fn with_structure(
        rho: Vec<Complex64>,
        alpha: Vec<Complex64>,
        omega: Option<Complex64>,
        multiplicity: Option<Multiplicity>,
    ) -> Result<Self> {
        if rho.len() != alpha.len() {
            return Err(Error::LengthMismatch { left: rho.len(), right: alpha.len() });
        }
        if rho.is_empty() {
            return Err(Error::TooFewEntries { needed: 1, got: 0 });
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !rho.iter().chain(&alpha).all(finite) || !omega.iter().all(finite) {
            return Err(Error::NonFinite("spectral data".into()));
        }
        if let Some((n, _)) = rho.iter().enumerate().find(|(_, r)| !is_canonical(**r)) {
            return Err(Error::InvalidArgument(format!(
                "rho_{} = {} is outside arg in [-pi/2, pi/2)",
                n + 1,
                rho[n]
            )));
        }
        let multiplicity = match multiplicity {
            Some(m) if m.is_all_simple() && m.total() == rho.len() => None,
            Some(m) => {
                if m.total() != rho.len() {
                    return Err(Error::LengthMismatch { left: m.total(), right: rho.len() });
                }
                for (start, mult) in m.groups() {
                    for k in start + 1..start + mult {
                        if !same_eigenvalue(rho[start], rho[k]) {
                            return Err(Error::InvalidArgument(format!(
                                "rho_{} differs from rho_{} inside one multiplicity group",
                                k + 1,
                                start + 1
                            )));
                        }
                    }
                }
                Some(m)
            }
            None => None,
        };
        Ok(Self { rho, alpha, omega, multiplicity })
    }

    /// Data of the model problem `q = 0, h = H = 0`.
    pub fn model(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewEntries { needed: 1, got: 0 });
        }
        Ok(Self {
            rho: (0..n).map(|k| Complex64::new(k as f64, 0.0)).collect(),
            alpha: (0..n).map(|k| Complex64::new(model_alpha(k + 1), 0.0)).collect(),
            omega: Some(Complex64::new(0.0, 0.0)),
            multiplicity: None,
        })
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn rho(&self) -> &[Complex64] {
        &self.rho
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn lambda(&self) -> Vec<Complex64> {
        self.rho.iter().map(|r| r * r).collect()
    }

    pub fn omega(&self) -> Option<Complex64> {
        self.omega
    }

    pub fn multiplicity(&self) -> Option<&Multiplicity> {
        self.multiplicity.as_ref()
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity.is_none()
    }

    /// Groups as `(0-based start, multiplicity)`, all simple when no
    /// structure is attached.
    pub fn groups(&self) -> Vec<(usize, usize)> {
        match &self.multiplicity {
            Some(m) => m.groups(),
            None => (0..self.len()).map(|k| (k, 1)).collect(),
        }
    }

    pub fn with_omega(mut self, omega: Option<Complex64>) -> Self {
        self.omega = omega;
        self
    }

    /// The first `n` entries; fails when `n` splits a multiplicity group.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidArgument(format!("prefix length {n} out of range 1..={}", self.len())));
        }
        let multiplicity = match &self.multiplicity {
            None => None,
            Some(_) => {
                let groups: Vec<(usize, usize)> = self.groups().into_iter().filter(|g| g.0 < n).collect();
                let (s, m) = *groups.last().expect("n > 0");
                if s + m > n {
                    return Err(Error::InvalidArgument(format!("prefix length {n} splits a multiplicity group")));
                }
                Some(Multiplicity::from_groups(&groups))
            }
        };
        Self::with_structure(self.rho[..n].to_vec(), self.alpha[..n].to_vec(), self.omega, multiplicity)
    }

    /// Data for `q + c`: every eigenvalue moves by `c`, weights are unchanged.
    pub fn shift_lambda(&self, c: Complex64) -> Result<Self> {
        let rho = self.rho.iter().map(|r| canonical_sqrt(r * r + c)).collect();
        let omega = self.omega.map(|w| w + 0.5 * PI * c);
        Self::with_structure(rho, self.alpha.clone(), omega, self.multiplicity.clone())
    }
}

/// `α̃ₙ` of the model problem for the 1-based index `n`.
pub fn model_alpha(n: usize) -> f64 {
    if n == 1 {
        1.0 / PI
    } else {
        2.0 / PI
    }
}

/// `ρ̃ₙ = n − 1` for the 1-based index `n`.
pub fn model_rho(n: usize) -> f64 {
    (n - 1) as f64
}

/// Shift normalisation: returns data with `ω = 0` and the constant `c`
/// such that the original potential equals the normalised one plus `c`.
pub fn shift_normalize(s: &SpectralData, omega: Complex64) -> Result<(SpectralData, Complex64)> {
    let c = 2.0 * omega / PI;
    let shifted = s.shift_lambda(-c)?.with_omega(Some(Complex64::new(0.0, 0.0)));
    Ok((shifted, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_sqrt_branch() {
        assert_eq!(canonical_sqrt(c(-4.0, 0.0)), c(0.0, -2.0));
        assert_eq!(canonical_sqrt(c(4.0, 0.0)), c(2.0, 0.0));
        let r = canonical_sqrt(c(-1.0, -1e-3));
        assert!(r.re > 0.0);
        assert_eq!(canonical_sqrt(c(-4.0, 1e-18)), c(0.0, -2.0));
    }

    #[test]
    fn model_data_values() {
        let s = SpectralData::model(3).unwrap();
        assert_eq!(s.rho()[2], c(2.0, 0.0));
        assert!((s.alpha()[0].re - 1.0 / PI).abs() < 1e-16);
        assert!((s.alpha()[1].re - 2.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn rejects_wrong_branch_and_bad_groups() {
        assert!(SpectralData::new(vec![c(-1.0, 0.0)], vec![c(1.0, 0.0)]).is_err());
        assert!(SpectralData::new(vec![c(0.0, 1.0)], vec![c(1.0, 0.0)]).is_err());
        let m = Multiplicity::new(vec![1, 3], vec![2, 1]).unwrap();
        let bad = SpectralData::with_structure(
            vec![c(1.0, 0.0), c(1.5, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0); 3],
            None,
            Some(m.clone()),
        );
        assert!(bad.is_err());
        let ok = SpectralData::with_structure(
            vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(1.0, 0.0); 3],
            None,
            Some(m),
        )
        .unwrap();
        assert_eq!(ok.groups(), vec![(0, 2), (2, 1)]);
        assert!(ok.prefix(1).is_err());
        assert!(ok.prefix(2).is_ok());
        assert!(Multiplicity::new(vec![1, 2], vec![2, 1]).is_err());
    }

    #[test]
    fn shift_normalize_moves_eigenvalues() {
        let s = SpectralData::model(4).unwrap().with_omega(Some(c(PI / 2.0, 0.0)));
        let (t, shift) = shift_normalize(&s, c(PI / 2.0, 0.0)).unwrap();
        assert!((shift - c(1.0, 0.0)).norm() < 1e-15);
        for (a, b) in s.lambda().iter().zip(t.lambda()) {
            assert!((a - b - 1.0).norm() < 1e-13);
        }
        assert_eq!(t.alpha(), s.alpha());
        assert_eq!(t.omega(), Some(c(0.0, 0.0)));
    }
}
