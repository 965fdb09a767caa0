#![allow(dead_code)]

use num_complex::Complex64;
use specmap::ProblemTriple;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zero() -> Complex64 {
    c(0.0, 0.0)
}

pub fn constant(m: usize, q: Complex64, h: Complex64, big_h: Complex64) -> ProblemTriple {
    ProblemTriple::from_fn(m, |_| q, h, big_h).unwrap()
}

/// `(0.3 − 0.6i) sin 2x + 0.5`, `h = H = 0`.
pub fn sin2(m: usize) -> ProblemTriple {
    ProblemTriple::from_fn(m, |x| c(0.3, -0.6) * (2.0 * x).sin() + 0.5, zero(), zero()).unwrap()
}

/// `0.4i (x − 1.5)² e^{−(x−1.5)²}`.
pub fn expi(m: usize) -> ProblemTriple {
    ProblemTriple::from_fn(m, |x| c(0.0, 0.4) * (x - 1.5).powi(2) * (-(x - 1.5).powi(2)).exp(), zero(), zero()).unwrap()
}

/// `(0.4 + 0.2i) cos x`, `h = H = 0.2`.
pub fn acos(m: usize) -> ProblemTriple {
    ProblemTriple::from_fn(m, |x| c(0.4, 0.2) * x.cos(), c(0.2, 0.0), c(0.2, 0.0)).unwrap()
}

/// `0.3i cos x`, `h = 0.2 + 0.1i`, `H = 0.1`.
pub fn icos(m: usize) -> ProblemTriple {
    ProblemTriple::from_fn(m, |x| c(0.0, 0.3) * x.cos(), c(0.2, 0.1), c(0.1, 0.0)).unwrap()
}

/// `0.4 cos x`, `h = H = 0`.
pub fn cos(m: usize) -> ProblemTriple {
    ProblemTriple::from_fn(m, |x| c(0.4, 0.0) * x.cos(), zero(), zero()).unwrap()
}

/// `q ≡ 0.5`, `h = 0.3`, `H = −0.2`.
pub fn q05(m: usize) -> ProblemTriple {
    constant(m, c(0.5, 0.0), c(0.3, 0.0), c(-0.2, 0.0))
}

/// `q ≡ 0` with complex Robin coefficients chosen so that `λ₂ = λ₃` is a
/// double eigenvalue whose simple-pole coefficient vanishes.
pub fn double_robin(m: usize) -> ProblemTriple {
    constant(
        m,
        zero(),
        c(-0.34762643914441039608, 1.4777813141434343631),
        c(-0.35092874670836222619, -1.4341782775020450264),
    )
}

/// `ρ` of the double eigenvalue of [`double_robin`].
pub fn double_robin_rho() -> Complex64 {
    c(1.4951530265194358821, 0.10071949236315720747)
}

/// Coefficient of `1/(λ − λ₂)²` of the Weyl function of [`double_robin`].
pub fn double_robin_alpha() -> Complex64 {
    c(5.7529007759844623445, 1.6923874805091282514)
}
