use num_complex::Complex64;

use super::{decompose_asymptotics, model_alpha, model_rho, SpectralData};
use crate::error::{Error, Result};

/// `d(S¹, S²)` over the common prefix of the two sequences.
pub fn distance_d(
    a: &SpectralData,
    b: &SpectralData,
    omega_a: Option<Complex64>,
    omega_b: Option<Complex64>,
) -> Result<f64> {
    let da = decompose_asymptotics(a, omega_a)?;
    let db = decompose_asymptotics(b, omega_b)?;
    let n = a.len().min(b.len());
    let mut sum = (da.omega - db.omega).norm_sqr();
    for k in 0..n {
        sum += (da.varkappa[k] - db.varkappa[k]).norm_sqr() + (da.s[k] - db.s[k]).norm_sqr();
    }
    Ok(sum.sqrt())
}

/// `d_N`: sup-distance of the Weyl samples on the contour plus the tail
/// distance over indices `n > N`.
pub fn distance_dn(
    a: &SpectralData,
    b: &SpectralData,
    contour_index: usize,
    weyl_a: &[Complex64],
    weyl_b: &[Complex64],
    omega_a: Option<Complex64>,
    omega_b: Option<Complex64>,
) -> Result<f64> {
    let n = a.len().min(b.len());
    if contour_index >= n {
        return Err(Error::InvalidArgument(format!(
            "contour index {contour_index} must be below the data length {n}"
        )));
    }
    if weyl_a.len() != weyl_b.len() {
        return Err(Error::LengthMismatch { left: weyl_a.len(), right: weyl_b.len() });
    }
    let sup = weyl_a.iter().zip(weyl_b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let da = decompose_asymptotics(a, omega_a)?;
    let db = decompose_asymptotics(b, omega_b)?;
    let mut sum = (da.omega - db.omega).norm_sqr();
    for k in contour_index..n {
        sum += (da.varkappa[k] - db.varkappa[k]).norm_sqr() + (da.s[k] - db.s[k]).norm_sqr();
    }
    Ok(sup + sum.sqrt())
}

/// `ξₙ = sqrt(|ρₙ − ρ̃ₙ|² + |αₙ − α̃ₙ|²)`.
pub fn xi_sequence(s: &SpectralData) -> Vec<f64> {
    s.rho()
        .iter()
        .zip(s.alpha())
        .enumerate()
        .map(|(k, (r, a))| {
            ((r - model_rho(k + 1)).norm_sqr() + (a - model_alpha(k + 1)).norm_sqr()).sqrt()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_is_at_distance_zero() {
        let s = SpectralData::model(12).unwrap();
        assert_eq!(distance_d(&s, &s, None, None).unwrap(), 0.0);
        assert!(xi_sequence(&s).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_entry_change_is_weighted_by_index() {
        let s = SpectralData::model(10).unwrap();
        let mut rho = s.rho().to_vec();
        rho[3] += 0.01;
        let t = SpectralData::with_structure(rho, s.alpha().to_vec(), s.omega(), None).unwrap();
        let d = distance_d(&s, &t, None, None).unwrap();
        assert!((d - 0.04).abs() < 1e-14);
    }

    #[test]
    fn dn_rejects_too_large_index() {
        let s = SpectralData::model(4).unwrap();
        assert!(distance_dn(&s, &s, 4, &[], &[], None, None).is_err());
        assert_eq!(distance_dn(&s, &s, 2, &[], &[], None, None).unwrap(), 0.0);
    }
}
