//! Zero finding for entire functions: Newton iteration, argument-principle
//! counts on circles and rectangles, and recursive rectangle subdivision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A zero together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Zeros closer than this (relative to `1 + |z|`) are reported as one
/// multiple zero.
pub const CLUSTER_TOL: f64 = 1e-4;

/// Five-point central difference, fourth order in `step`.
pub fn central_derivative<F>(f: &F, z: Complex64, step: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    let near = f(z + step)? - f(z - step)?;
    let far = f(z + 2.0 * step)? - f(z - 2.0 * step)?;
    Ok((8.0 * near - far) / (12.0 * step))
}

/// Newton iteration `z ← z − m f/f'` stopped when `|f| ≤ tol(z)` or the
/// step stagnates at roundoff level.
pub fn newton<F>(f: &F, z0: Complex64, multiplicity: usize, tol: impl Fn(Complex64) -> f64, max_iter: usize) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    let mut z = z0;
    for _ in 0..max_iter {
        let fz = f(z).ok()?;
        if fz.norm() <= tol(z) {
            return Some(z);
        }
        let d = central_derivative(f, z, 1e-6 * (1.0 + z.norm())).ok()?;
        if d.norm() == 0.0 || !d.re.is_finite() {
            return None;
        }
        let step = fz / d * multiplicity as f64;
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        if step.norm() <= 1e-14 * (1.0 + z.norm()) {
            let fz = f(z).ok()?;
            return (fz.norm() <= 1e3 * tol(z)).then_some(z);
        }
    }
    None
}

/// Number of zeros inside the circle `|z − center| = radius` from the
/// trapezoid rule for `(1/2πi)∮ f'/f`, doubling the node count until the
/// estimate settles on an integer.
pub fn winding_count_circle<F>(f: &F, center: Complex64, radius: f64, min_nodes: usize) -> Result<usize>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    let step = 1e-5 * (1.0 + center.norm() + radius);
    let term = |theta: f64| -> Result<Complex64> {
        let e = Complex64::from_polar(radius, theta);
        let z = center + e;
        let fz = f(z)?;
        if fz.norm() == 0.0 {
            return Err(Error::NearEigenvalue { rho: z });
        }
        Ok(central_derivative(f, z, step)? / fz * e)
    };
    let mut k = min_nodes.max(16);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..k {
        sum += term(2.0 * PI * j as f64 / k as f64)?;
    }
    let mut previous = sum / k as f64;
    while k < 1 << 14 {
        for j in 0..k {
            sum += term(2.0 * PI * (j as f64 + 0.5) / k as f64)?;
        }
        k *= 2;
        let current = sum / k as f64;
        let rounded = current.re.round();
        if (current - previous).norm() < 0.02 && (current.re - rounded).abs() < 0.05 && current.im.abs() < 0.05 {
            if rounded < 0.0 {
                return Err(Error::Certification(format!("negative winding number {rounded}")));
            }
            return Ok(rounded as usize);
        }
        previous = current;
    }
    Err(Error::Certification(format!(
        "argument-principle count on |z - {center}| = {radius} did not settle (last {previous})"
    )))
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }
}

fn arg_change<F>(f: &F, a: Complex64, b: Complex64, fa: Complex64, fb: Complex64, depth: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    let d = (fb / fa).arg();
    if d.abs() <= PI / 4.0 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::Certification("zero too close to a subdivision edge".into()));
    }
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    if fm.norm() == 0.0 {
        return Err(Error::Certification("zero on a subdivision edge".into()));
    }
    Ok(arg_change(f, a, m, fa, fm, depth - 1)? + arg_change(f, m, b, fm, fb, depth - 1)?)
}

/// Number of zeros inside a rectangle by phase unwrapping along its edges.
pub fn rect_count<F>(f: &F, r: &Rect) -> Result<usize>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    const PIECES: usize = 8;
    let c = r.corners();
    let mut total = 0.0;
    for e in 0..4 {
        let (a, b) = (c[e], c[(e + 1) % 4]);
        let mut za = a;
        let mut fa = f(za)?;
        for p in 1..=PIECES {
            let zb = a + (b - a) * (p as f64 / PIECES as f64);
            let fb = f(zb)?;
            if fa.norm() == 0.0 || fb.norm() == 0.0 {
                return Err(Error::Certification("zero on a subdivision edge".into()));
            }
            total += arg_change(f, za, zb, fa, fb, 24)?;
            za = zb;
            fa = fb;
        }
    }
    let w = total / (2.0 * PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.1 || rounded < 0.0 {
        return Err(Error::Certification(format!("non-integer winding {w}")));
    }
    Ok(rounded as usize)
}

/// Mean of the `m` zeros inside `|z − c| < r`, from `log f` on the circle.
pub fn cluster_mean<F>(f: &F, c: Complex64, r: f64, m: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    const K: usize = 64;
    let mut logs = Vec::with_capacity(K);
    let mut previous: Option<Complex64> = None;
    for j in 0..K {
        let theta = 2.0 * PI * j as f64 / K as f64;
        let v = f(c + Complex64::from_polar(r, theta))?;
        let mut l = v.ln();
        if let Some(p) = previous {
            let k = ((p.im - l.im) / (2.0 * PI)).round();
            l.im += 2.0 * PI * k;
        }
        previous = Some(l);
        logs.push(l);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, l) in logs.iter().enumerate() {
        let theta = 2.0 * PI * j as f64 / K as f64;
        let g = l - Complex64::new(0.0, m as f64 * theta);
        acc += g * Complex64::from_polar(1.0, theta);
    }
    Ok(c - acc * (r / (m as f64 * K as f64)))
}

/// All zeros inside `rect`, found by recursive subdivision. `count` is the
/// known number of zeros inside.
pub fn zeros_in_rect<F>(f: &F, rect: Rect, count: usize) -> Result<Vec<Zero>>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    let mut out = Vec::new();
    subdivide(f, rect, count, 0, &mut out)?;
    Ok(out)
}

fn subdivide<F>(f: &F, rect: Rect, count: usize, depth: usize, out: &mut Vec<Zero>) -> Result<()>
where
    F: Fn(Complex64) -> Result<Complex64> + ?Sized,
{
    if count == 0 {
        return Ok(());
    }
    let center = rect.center();
    let scale = 1.0 + center.norm();
    if count == 1 {
        let tol = |z: Complex64| 1e-13 * (1.0 + z.norm());
        if let Some(z) = newton(f, center, 1, tol, 60) {
            if rect.contains(z, 1e-12 * scale) {
                out.push(Zero { value: z, multiplicity: 1 });
                return Ok(());
            }
        }
    }
    if rect.diameter() < CLUSTER_TOL * scale {
        let r = 0.55 * rect.diameter();
        let value = cluster_mean(f, center, r, count).unwrap_or(center);
        out.push(Zero { value, multiplicity: count });
        return Ok(());
    }
    if depth > 80 {
        return Err(Error::Certification("zero subdivision exceeded its depth budget".into()));
    }
    let mut last_err = None;
    for attempt in 0..4 {
        let t = 0.5 + 0.0137 * (1 + (depth + attempt) % 3) as f64 * if attempt % 2 == 0 { 1.0 } else { -1.0 };
        let xm = rect.x0 + t * (rect.x1 - rect.x0);
        let ym = rect.y0 + (1.0 - t) * (rect.y1 - rect.y0);
        let parts = [
            Rect { x0: rect.x0, x1: xm, y0: rect.y0, y1: ym },
            Rect { x0: xm, x1: rect.x1, y0: rect.y0, y1: ym },
            Rect { x0: rect.x0, x1: xm, y0: ym, y1: rect.y1 },
            Rect { x0: xm, x1: rect.x1, y0: ym, y1: rect.y1 },
        ];
        let counts: Result<Vec<usize>> = parts.iter().map(|p| rect_count(f, p)).collect();
        match counts {
            Ok(cs) if cs.iter().sum::<usize>() == count => {
                for (p, c) in parts.iter().zip(cs) {
                    subdivide(f, *p, c, depth + 1, out)?;
                }
                return Ok(());
            }
            Ok(cs) => {
                last_err = Some(Error::Certification(format!(
                    "sub-rectangle counts {cs:?} do not add up to {count}"
                )))
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counts_zeros_of_a_polynomial() {
        let f = |z: Complex64| -> Result<Complex64> { Ok((z - 1.0) * (z - c(0.0, 2.0)) * (z + 5.0)) };
        assert_eq!(winding_count_circle(&f, c(0.0, 0.0), 3.0, 32).unwrap(), 2);
        let r = Rect { x0: -1.0, x1: 2.0, y0: -1.0, y1: 1.5 };
        assert_eq!(rect_count(&f, &r).unwrap(), 1);
    }

    #[test]
    fn subdivision_resolves_multiple_and_simple_zeros() {
        let f = |z: Complex64| -> Result<Complex64> { Ok((z - 1.0).powu(2) * (z - 4.0) * (z * 0.3).exp()) };
        let r = Rect { x0: -3.1, x1: 6.2, y0: -3.3, y1: 2.9 };
        assert_eq!(rect_count(&f, &r).unwrap(), 3);
        let mut zs = zeros_in_rect(&f, r, 3).unwrap();
        zs.sort_by(|a, b| a.value.re.total_cmp(&b.value.re));
        assert_eq!(zs.len(), 2);
        assert_eq!(zs[0].multiplicity, 2);
        assert!((zs[0].value - 1.0).norm() < 1e-8);
        assert_eq!(zs[1].multiplicity, 1);
        assert!((zs[1].value - 4.0).norm() < 1e-12);
    }

    #[test]
    fn cluster_mean_of_a_double_zero() {
        let f = |z: Complex64| -> Result<Complex64> { Ok((z - c(2.0, 1.0)).powu(2) * (z + 3.0)) };
        let m = cluster_mean(&f, c(2.0001, 0.99995), 1e-3, 2).unwrap();
        assert!((m - c(2.0, 1.0)).norm() < 1e-10);
    }
}
