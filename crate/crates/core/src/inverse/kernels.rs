//! The model kernel `D̃(x, ρ, θ) = ∫₀ˣ cos ρt cos θt dt` and the divided
//! differences entering the main equation.

use num_complex::Complex64;

/// Below this `|ρ − ρ̃|` divided differences switch to derivatives.
pub const DIVIDED_DIFFERENCE_THRESHOLD: f64 = 1e-6;

const SERIES_RADIUS: f64 = 0.1;

/// `sin u / u`.
pub fn sinc(u: Complex64) -> Complex64 {
    if u.norm() < SERIES_RADIUS {
        let u2 = u * u;
        1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    } else {
        u.sin() / u
    }
}

/// Derivative of [`sinc`].
pub fn sinc_prime(u: Complex64) -> Complex64 {
    if u.norm() < SERIES_RADIUS {
        // Σ_{k≥1} (−1)^k 2k u^{2k−1} / (2k+1)!
        let u2 = u * u;
        u * (-1.0 / 3.0 + u2 * (1.0 / 30.0 + u2 * (-1.0 / 840.0 + u2 * (1.0 / 45360.0 - u2 / 3991680.0))))
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    }
}

/// `D̃(x, ρ, θ)`.
pub fn dtilde(x: f64, rho: Complex64, theta: Complex64) -> Complex64 {
    let dm = (rho - theta) * x;
    let dp = (rho + theta) * x;
    if dm.norm() >= SERIES_RADIUS && dp.norm() >= SERIES_RADIUS {
        let (sr, cr) = ((rho * x).sin(), (rho * x).cos());
        let (st, ct) = ((theta * x).sin(), (theta * x).cos());
        (rho * sr * ct - theta * cr * st) / (rho * rho - theta * theta)
    } else {
        0.5 * x * (sinc(dm) + sinc(dp))
    }
}

/// `∂D̃/∂ρ`.
pub fn dtilde_drho(x: f64, rho: Complex64, theta: Complex64) -> Complex64 {
    0.5 * x * x * (sinc_prime((rho - theta) * x) + sinc_prime((rho + theta) * x))
}

/// `∂D̃/∂x = cos ρx cos θx`.
pub fn dtilde_dx(x: f64, rho: Complex64, theta: Complex64) -> Complex64 {
    (rho * x).cos() * (theta * x).cos()
}

/// `(D̃(x, a, θ) − D̃(x, b, θ)) / (a − b)`.
pub fn dtilde_divided(x: f64, a: Complex64, b: Complex64, theta: Complex64) -> Complex64 {
    let d = a - b;
    if d.norm() < DIVIDED_DIFFERENCE_THRESHOLD {
        dtilde_drho(x, 0.5 * (a + b), theta)
    } else {
        (dtilde(x, a, theta) - dtilde(x, b, theta)) / d
    }
}

/// `(cos ax − cos bx) / (a − b)` without cancellation.
pub fn cos_divided(x: f64, a: Complex64, b: Complex64) -> Complex64 {
    -x * ((a + b) * (0.5 * x)).sin() * sinc((a - b) * (0.5 * x))
}

/// `(sin ax − sin bx) / (a − b)` without cancellation.
pub fn sin_divided(x: f64, a: Complex64, b: Complex64) -> Complex64 {
    x * ((a + b) * (0.5 * x)).cos() * sinc((a - b) * (0.5 * x))
}

/// `(−a sin ax + b sin bx) / (a − b)`, the divided difference of the
/// `x`-derivative of `cos ρx`.
pub fn msin_divided(x: f64, a: Complex64, b: Complex64) -> Complex64 {
    -((a * x).sin() + b * sin_divided(x, a, b))
}

/// `g̃ₙ(x, ρ) = (cos ρx − cos ρ̃ₙx) / (ρ − ρ̃ₙ)` with `ρ̃ₙ = n − 1`.
pub fn g_divided(x: f64, rho: Complex64, n: usize) -> Complex64 {
    cos_divided(x, rho, Complex64::new((n - 1) as f64, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quad(x: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
        // Gauss-Legendre on 64 panels of 4 points.
        let nodes = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
        let weights = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];
        let panels = 64;
        let h = x / panels as f64;
        let mut s = c(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (t, w) in nodes.iter().zip(weights) {
                s += f(mid + 0.5 * h * t) * (0.5 * h * w);
            }
        }
        s
    }

    #[test]
    fn dtilde_matches_its_defining_integral() {
        for (rho, theta) in [(c(1.3, 0.2), c(2.0, 0.0)), (c(3.0, 0.0), c(3.0, 0.0)), (c(0.5, -0.1), c(-0.5, 0.1)), (c(2.0, 0.0), c(2.04, 0.0))] {
            let x = 2.7;
            let exact = quad(x, |t| (rho * t).cos() * (theta * t).cos());
            assert!((dtilde(x, rho, theta) - exact).norm() < 1e-13, "{rho} {theta}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (x, rho, theta) = (1.9, c(2.2, 0.3), c(1.1, 0.0));
        let h = 1e-5;
        let fd = (dtilde(x, rho + h, theta) - dtilde(x, rho - h, theta)) / (2.0 * h);
        assert!((dtilde_drho(x, rho, theta) - fd).norm() < 1e-9);
        let fd = (dtilde(x + h, rho, theta) - dtilde(x - h, rho, theta)) / (2.0 * h);
        assert!((dtilde_dx(x, rho, theta) - fd).norm() < 1e-9);
        for u in [c(0.05, 0.01), c(0.3, 0.0), c(2.0, 1.0)] {
            let fd = (sinc(u + h) - sinc(u - h)) / (2.0 * h);
            assert!((sinc_prime(u) - fd).norm() < 1e-9);
        }
    }

    #[test]
    fn kernel_identities_on_the_model_spectrum() {
        assert!((dtilde(0.7, c(0.0, 0.0), c(0.0, 0.0)) - 0.7).norm() < 1e-15);
        for n in 1..30 {
            let r = c(n as f64, 0.0);
            assert!((dtilde(PI, r, r) - PI / 2.0).norm() < 1e-12);
            for k in 0..30 {
                if k != n {
                    assert!(dtilde(PI, r, c(k as f64, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn divided_differences_are_continuous_at_the_threshold() {
        let (x, b, theta) = (2.1, c(3.0, 0.0), c(1.7, 0.2));
        let below = dtilde_divided(x, b + 0.999e-6, b, theta);
        let above = dtilde_divided(x, b + 1.001e-6, b, theta);
        assert!((below - above).norm() < 1e-8);
        let g_small = g_divided(x, c(2.0 + 1e-9, 0.0), 3);
        assert!((g_small - (-x * (2.0 * x).sin())).norm() < 1e-8);
    }
}
