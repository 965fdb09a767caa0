//! Dense complex LU factorisation with partial pivoting.

use num_complex::Complex64;
use thiserror::Error;

/// Pivots smaller than this fraction of the largest matrix entry are
/// treated as exact zeros.
pub const SINGULAR_PIVOT_EPSILON: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LuError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix: relative pivot {pivot:e} at column {column}")]
    Singular { column: usize, pivot: f64 },
    #[error("right-hand side has length {got}, expected {expected}")]
    RhsLength { expected: usize, got: usize },
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self, LuError> {
        if data.len() != n * n {
            return Err(LuError::NotSquare { rows: n, cols: data.len() / n.max(1) });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Packed LU factors `PA = LU` with unit lower triangle.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: Matrix) -> Result<Self, LuError> {
        let n = a.n;
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let mut lu = a.data;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best / scale < SINGULAR_PIVOT_EPSILON {
                return Err(LuError::Singular { column: k, pivot: best / scale });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = lu[k * n + k].inv();
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            for row in tail.chunks_mut(n) {
                let f = row[k] * inv;
                row[k] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        row[j] -= f * pivot_row[j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LuError> {
        let n = self.n;
        if b.len() != n {
            return Err(LuError::RhsLength { expected: n, got: b.len() });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&x[..i]).map(|(a, v)| a * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(a, v)| a * v).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LuError> {
        let n = self.n;
        if b.len() != n {
            return Err(LuError::RhsLength { expected: n, got: b.len() });
        }
        // A^H = U^H L^H P, so solve U^H y = b, L^H z = y, x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.lu[k * n + i].conj() * y[k];
            }
            y[i] = s / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.lu[k * n + i].conj() * y[k];
            }
            y[i] = s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        Ok(x)
    }

    /// Exact `‖A⁻¹‖_∞` from the explicit inverse.
    pub fn inverse_norm_inf(&self) -> f64 {
        let n = self.n;
        let mut row_sums = vec![0.0; n];
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e).expect("dimension checked");
            for (s, v) in row_sums.iter_mut().zip(&col) {
                *s += v.norm();
            }
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }

    /// Hager-Higham estimate of `‖A⁻¹‖_∞ = ‖A⁻ᴴ‖₁`; a lower bound that is
    /// usually exact.
    pub fn inverse_norm_inf_estimate(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 0.0;
        }
        // B = A^{-H}; B x needs an adjoint solve, B^H x a plain solve.
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve_adjoint(&x).expect("dimension checked");
            let norm1: f64 = y.iter().map(|v| v.norm()).sum();
            if norm1 <= estimate && last_j != usize::MAX {
                break;
            }
            estimate = norm1;
            let xi: Vec<Complex64> = y
                .iter()
                .map(|v| if v.norm() > 0.0 { v / v.norm() } else { Complex64::new(1.0, 0.0) })
                .collect();
            let z = self.solve(&xi).expect("dimension checked");
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            x[j] = Complex64::new(1.0, 0.0);
        }
        // Alternating-sign test vector guards against unlucky starts.
        let alt: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(s * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
            })
            .collect();
        let y = self.solve_adjoint(&alt).expect("dimension checked");
        let alt_norm: f64 = alt.iter().map(|v| v.norm()).sum();
        let alt_est = y.iter().map(|v| v.norm()).sum::<f64>() / alt_norm;
        estimate.max(alt_est)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Matrix {
        Matrix::from_rows(
            3,
            vec![c(2.0, 1.0), c(-1.0, 0.0), c(0.5, 0.0), c(0.0, 3.0), c(1.0, -1.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(4.0, 2.0)],
        )
        .unwrap()
    }

    #[test]
    fn solve_and_adjoint_solve_reproduce_rhs() {
        let a = sample();
        let lu = Lu::factor(a.clone()).unwrap();
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)];
        let x = lu.solve(&b).unwrap();
        let r = a.mul_vec(&x);
        for (u, v) in r.iter().zip(&b) {
            assert!((u - v).norm() < 1e-13);
        }
        let y = lu.solve_adjoint(&b).unwrap();
        for i in 0..3 {
            let s: Complex64 = (0..3).map(|k| a.get(k, i).conj() * y[k]).sum();
            assert!((s - b[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Matrix::from_rows(2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!(matches!(Lu::factor(a), Err(LuError::Singular { column: 1, .. })));
    }

    #[test]
    fn norm_estimate_matches_explicit_inverse() {
        let lu = Lu::factor(sample()).unwrap();
        let exact = lu.inverse_norm_inf();
        let est = lu.inverse_norm_inf_estimate();
        assert!(est <= exact * (1.0 + 1e-12));
        assert!(est >= exact / 3.0);
        assert!((Lu::factor(Matrix::identity(5)).unwrap().inverse_norm_inf_estimate() - 1.0).abs() < 1e-14);
    }
}
