use std::f64::consts::PI;

use num_complex::Complex64;

use super::{distance_d, ProblemTriple, SpectralData};
use crate::error::{Error, Result};

/// Sign of the imaginary-part constraint in the `𝒱±` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauSign {
    Plus,
    Minus,
}

/// The sets of spectral data and problems used in stability estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    /// `B_Ω`: `d(S, S̃) ≤ Ω`.
    BOmega { omega_bound: f64 },
    /// `B̊_{Ω,K}`: `B_Ω` with `ω = 0` and operator norm bounded by `K`.
    BOmegaRing { omega_bound: f64, k_bound: f64 },
    /// `𝒱_{Ω,δ}`: real separated eigenvalues, weights bounded below with
    /// argument spread at most `π − δ`.
    VOmegaDelta { omega_bound: f64, delta: f64 },
    /// `𝒱±_{Ω,τ}`: real eigenvalues, weights outside the negative reals
    /// satisfy `±Im αₙ ≥ τₙ`.
    VOmegaTau { omega_bound: f64, tau: Vec<f64>, sign: TauSign },
    /// `P_Q`: `‖q‖ + |h| + |H| ≤ Q`.
    PQ { q_bound: f64 },
    /// `P_{Q,A}`: `P_Q` with simple spectrum and `|αₙ| ≤ A`.
    PQA { q_bound: f64, a_bound: f64 },
}

impl SetSpec {
    fn check_parameters(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        match self {
            SetSpec::BOmega { omega_bound } => positive(*omega_bound, "Omega"),
            SetSpec::BOmegaRing { omega_bound, k_bound } => {
                positive(*omega_bound, "Omega")?;
                positive(*k_bound, "K")
            }
            SetSpec::VOmegaDelta { omega_bound, delta } => {
                positive(*omega_bound, "Omega")?;
                if !(*delta > 0.0 && *delta < 1.0) {
                    return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
                }
                Ok(())
            }
            SetSpec::VOmegaTau { omega_bound, tau, .. } => {
                positive(*omega_bound, "Omega")?;
                tau.iter().try_for_each(|&t| positive(t, "tau_n"))
            }
            SetSpec::PQ { q_bound } => positive(*q_bound, "Q"),
            SetSpec::PQA { q_bound, a_bound } => {
                positive(*q_bound, "Q")?;
                positive(*a_bound, "A")
            }
        }
    }
}

/// What is being tested for membership.
#[derive(Debug, Clone, Copy)]
pub enum MembershipInput<'a> {
    Spectral(&'a SpectralData),
    Problem { triple: &'a ProblemTriple, spectral: Option<&'a SpectralData> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: String,
    /// 1-based index of the offending entry, when applicable.
    pub index: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub member: bool,
    pub violations: Vec<Violation>,
}

fn violation(condition: &str, index: Option<usize>, detail: String) -> Violation {
    Violation { condition: condition.to_string(), index, detail }
}

fn real_tol(z: Complex64) -> f64 {
    1e-12 * (1.0 + z.norm())
}

/// Checks whether the input belongs to the requested set.
pub fn validate_membership(input: MembershipInput<'_>, set: &SetSpec, aux: Option<f64>) -> Result<MembershipReport> {
    set.check_parameters()?;
    let mut v = Vec::new();
    match set {
        SetSpec::PQ { q_bound } | SetSpec::PQA { q_bound, .. } => {
            let (triple, spectral) = match input {
                MembershipInput::Problem { triple, spectral } => (triple, spectral),
                MembershipInput::Spectral(_) => {
                    return Err(Error::KindMismatch("problem sets need a problem triple".into()))
                }
            };
            let size = triple.q.l2_norm() + triple.h.norm() + triple.big_h.norm();
            if size > *q_bound {
                v.push(violation("problem_size", None, format!("|q| + |h| + |H| = {size} > {q_bound}")));
            }
            if let SetSpec::PQA { a_bound, .. } = set {
                let s = spectral.ok_or_else(|| {
                    Error::KindMismatch("the weight-bounded problem set needs spectral data".into())
                })?;
                if !s.is_simple() {
                    v.push(violation("simple_spectrum", None, "multiple eigenvalues present".into()));
                }
                for (k, a) in s.alpha().iter().enumerate() {
                    if a.norm() > *a_bound {
                        v.push(violation("weight_bound", Some(k + 1), format!("|alpha| = {} > {a_bound}", a.norm())));
                    }
                }
            }
        }
        _ => {
            let s = match input {
                MembershipInput::Spectral(s) => s,
                MembershipInput::Problem { spectral: Some(s), .. } => s,
                MembershipInput::Problem { spectral: None, .. } => {
                    return Err(Error::KindMismatch("spectral sets need spectral data".into()))
                }
            };
            check_spectral(s, set, aux, &mut v)?;
        }
    }
    Ok(MembershipReport { member: v.is_empty(), violations: v })
}

fn check_spectral(s: &SpectralData, set: &SetSpec, aux: Option<f64>, v: &mut Vec<Violation>) -> Result<()> {
    let omega_bound = match set {
        SetSpec::BOmega { omega_bound }
        | SetSpec::BOmegaRing { omega_bound, .. }
        | SetSpec::VOmegaDelta { omega_bound, .. }
        | SetSpec::VOmegaTau { omega_bound, .. } => *omega_bound,
        _ => unreachable!("problem sets handled by the caller"),
    };
    let omega = s.omega().unwrap_or(Complex64::new(0.0, 0.0));
    let model = SpectralData::model(s.len())?;
    let d = distance_d(s, &model, Some(omega), Some(Complex64::new(0.0, 0.0)))?;
    if d > omega_bound {
        v.push(violation("distance_bound", None, format!("d(S, model) = {d} > {omega_bound}")));
    }
    match set {
        SetSpec::BOmegaRing { k_bound, .. } => {
            if omega.norm() > 1e-12 {
                v.push(violation("omega_zero", None, format!("omega = {omega} is not zero")));
            }
            let k = aux.ok_or_else(|| {
                Error::InvalidArgument("the operator-norm estimate must be supplied for this set".into())
            })?;
            if k > *k_bound {
                v.push(violation("operator_norm", None, format!("norm estimate {k} > {k_bound}")));
            }
        }
        SetSpec::VOmegaDelta { delta, .. } => {
            check_real_spectrum(s, v);
            check_gaps(s, *delta, v);
            for (k, a) in s.alpha().iter().enumerate() {
                if a.norm() < *delta {
                    v.push(violation("weight_lower_bound", Some(k + 1), format!("|alpha| = {} < {delta}", a.norm())));
                }
            }
            let spread = argument_spread(s.alpha());
            if spread > PI - delta {
                v.push(violation("argument_spread", None, format!("spread {spread} > pi - {delta}")));
            }
        }
        SetSpec::VOmegaTau { tau, sign, .. } => {
            check_real_spectrum(s, v);
            if tau.len() < s.len() {
                return Err(Error::LengthMismatch { left: tau.len(), right: s.len() });
            }
            let sgn = if *sign == TauSign::Plus { 1.0 } else { -1.0 };
            for (k, a) in s.alpha().iter().enumerate() {
                let negative_real = a.im.abs() <= real_tol(*a) && a.re < 0.0;
                if !negative_real && sgn * a.im < tau[k] {
                    v.push(violation("tau_bound", Some(k + 1), format!("Im alpha = {} against tau = {}", a.im, tau[k])));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn check_real_spectrum(s: &SpectralData, v: &mut Vec<Violation>) {
    for (k, r) in s.rho().iter().enumerate() {
        if r.im.abs() > real_tol(*r) {
            v.push(violation("real_rho", Some(k + 1), format!("rho = {r} is not real")));
        }
    }
}

fn check_gaps(s: &SpectralData, delta: f64, v: &mut Vec<Violation>) {
    for k in 0..s.len().saturating_sub(1) {
        let gap = s.rho()[k + 1].re - s.rho()[k].re;
        if gap < delta {
            v.push(violation("gap", Some(k + 1), format!("rho_{} - rho_{} = {gap} < {delta}", k + 2, k + 1)));
        }
    }
}

/// Length of the smallest arc containing all arguments.
fn argument_spread(values: &[Complex64]) -> f64 {
    let mut args: Vec<f64> = values.iter().filter(|a| a.norm() > 0.0).map(|a| a.arg()).collect();
    if args.len() < 2 {
        return 0.0;
    }
    args.sort_by(|a, b| a.total_cmp(b));
    let mut largest_gap = args[0] + 2.0 * PI - args[args.len() - 1];
    for w in args.windows(2) {
        largest_gap = largest_gap.max(w[1] - w[0]);
    }
    2.0 * PI - largest_gap
}
