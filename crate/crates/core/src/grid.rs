//! Uniform grids on `[0, π]` and quadrature helpers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Samples of a complex function at the `M + 1` nodes `x_j = jπ/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "a grid function needs at least 2 intervals, got {}",
                values.len().saturating_sub(1)
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("grid function samples".into()));
        }
        Ok(Self { values })
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let h = PI / m as f64;
        Self::new((0..=m).map(|j| f(j as f64 * h)).collect())
    }

    pub fn constant(m: usize, c: Complex64) -> Result<Self> {
        Self::from_fn(m, |_| c)
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::constant(m, Complex64::new(0.0, 0.0))
    }

    /// Number of intervals `M`.
    pub fn node_count(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        PI / self.node_count() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.node(j)).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn integral(&self) -> Complex64 {
        simpson(&self.values, self.step())
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        simpson_real(&sq, self.step()).max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// L2 norm of `self - other`; `other` is resampled onto this grid when
    /// the node counts differ.
    pub fn l2_distance(&self, other: &GridFunction) -> f64 {
        let other = if other.node_count() == self.node_count() {
            other.clone()
        } else {
            other.resample(self.node_count())
        };
        let diff: Vec<Complex64> =
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        GridFunction { values: diff }.l2_norm()
    }

    /// Cubic Lagrange interpolation at `x ∈ [0, π]`.
    pub fn sample(&self, x: f64) -> Complex64 {
        let m = self.node_count();
        let h = self.step();
        let t = (x / h).clamp(0.0, m as f64);
        let cell = (t.floor() as usize).min(m - 1);
        if m < 3 {
            let s = t - cell as f64;
            return self.values[cell] * (1.0 - s) + self.values[cell + 1] * s;
        }
        let start = cell.saturating_sub(1).min(m - 3);
        lagrange4(&self.values[start..start + 4], t - start as f64)
    }

    pub fn resample(&self, m: usize) -> GridFunction {
        let h = PI / m as f64;
        GridFunction { values: (0..=m).map(|j| self.sample(j as f64 * h)).collect() }
    }

    /// Fourth-order finite-difference derivative.
    pub fn derivative(&self) -> GridFunction {
        let f = &self.values;
        let n = f.len();
        let h = self.step();
        if n < 5 {
            let mut d = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                let (a, b) = if j == 0 { (0, 1) } else if j == n - 1 { (n - 2, n - 1) } else { (j - 1, j + 1) };
                d[j] = (f[b] - f[a]) / ((b - a) as f64 * h);
            }
            return GridFunction { values: d };
        }
        let c = 1.0 / (12.0 * h);
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
        for j in 2..n - 2 {
            d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * c;
        }
        let l = n - 1;
        d[l] = (25.0 * f[l] - 48.0 * f[l - 1] + 36.0 * f[l - 2] - 16.0 * f[l - 3] + 3.0 * f[l - 4]) * c;
        d[l - 1] = (3.0 * f[l] + 10.0 * f[l - 1] - 18.0 * f[l - 2] + 6.0 * f[l - 3] - f[l - 4]) * c;
        GridFunction { values: d }
    }
}

/// Lagrange interpolation through four equispaced samples at `0, 1, 2, 3`.
pub(crate) fn lagrange4(v: &[Complex64], t: f64) -> Complex64 {
    let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
}

/// Composite Simpson rule; an odd interval count closes with the 3/8 rule.
pub fn simpson(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => Complex64::new(0.0, 0.0),
        1 => (values[0] + values[1]) * (h / 2.0),
        2 => (values[0] + 4.0 * values[1] + values[2]) * (h / 3.0),
        3 => three_eighths(values, h),
        _ if n % 2 == 0 => simpson_even(values, h),
        _ => simpson_even(&values[..n - 2], h) + three_eighths(&values[n - 3..], h),
    }
}

fn simpson_even(values: &[Complex64], h: f64) -> Complex64 {
    let n = values.len() - 1;
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    for j in 1..n {
        if j % 2 == 1 {
            odd += values[j];
        } else {
            even += values[j];
        }
    }
    (values[0] + values[n] + 4.0 * odd + 2.0 * even) * (h / 3.0)
}

fn three_eighths(v: &[Complex64], h: f64) -> Complex64 {
    (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]) * (3.0 * h / 8.0)
}

/// Weights of [`simpson`] for `n` intervals of width `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let mut add = |range: std::ops::Range<usize>, pattern: &dyn Fn(usize, usize) -> f64| {
        let len = range.end - range.start;
        for (i, j) in range.clone().enumerate() {
            w[j] += pattern(i, len);
        }
    };
    let even = |i: usize, len: usize| {
        let c = if i == 0 || i == len - 1 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        c * h / 3.0
    };
    let te = |i: usize, _len: usize| [1.0, 3.0, 3.0, 1.0][i] * 3.0 * h / 8.0;
    match n {
        0 => {}
        1 => add(0..2, &|_, _| h / 2.0),
        3 => add(0..4, &te),
        _ if n % 2 == 0 => add(0..n + 1, &even),
        _ => {
            add(0..n - 2, &even);
            add(n - 3..n + 1, &te);
        }
    }
    w
}

pub fn simpson_real(values: &[f64], h: f64) -> f64 {
    let c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    simpson(&c, h).re
}
