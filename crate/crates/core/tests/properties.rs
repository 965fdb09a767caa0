use num_complex::Complex64;
use proptest::prelude::*;
use specmap::io::{spectral_from_json, spectral_to_json};
use specmap::spectral::{
    decompose_asymptotics, distance_d, recompose, validate_membership, xi_sequence, MembershipInput, SetSpec,
};
use specmap::stability::{perturb, PerturbationScheme, SchemeKind};
use specmap::SpectralData;

const LEN: usize = 12;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Small perturbations of the model data; `ρ₁` stays in the right half
/// plane so the data are canonical.
fn data() -> impl Strategy<Value = SpectralData> {
    (prop::collection::vec((-0.2..0.2f64, -0.2..0.2f64, -0.1..0.1f64, -0.1..0.1f64), LEN)).prop_map(|v| {
        let model = SpectralData::model(LEN).unwrap();
        let rho = v
            .iter()
            .enumerate()
            .map(|(k, &(a, b, _, _))| {
                let base = if k == 0 { 0.5 } else { model.rho()[k].re };
                Complex64::new(base + a, b)
            })
            .collect();
        let alpha = v.iter().zip(model.alpha()).map(|(&(_, _, a, b), m)| m + Complex64::new(a, b)).collect();
        SpectralData::with_structure(rho, alpha, Some(zero()), None).unwrap()
    })
}

fn d(a: &SpectralData, b: &SpectralData) -> f64 {
    distance_d(a, b, Some(zero()), Some(zero())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(a in data(), b in data(), c in data()) {
        prop_assert!(d(&a, &a) == 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-15 * (1.0 + d(&a, &b)));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-14);
    }

    #[test]
    fn decompose_then_recompose_is_the_identity(s in data()) {
        let back = recompose(&decompose_asymptotics(&s, None).unwrap()).unwrap();
        for (x, y) in s.rho().iter().zip(back.rho()).chain(s.alpha().iter().zip(back.alpha())) {
            prop_assert!((x - y).norm() <= 1e-13 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn distance_ball_boundary_is_sharp(s in data()) {
        let model = SpectralData::model(LEN).unwrap().with_omega(Some(zero()));
        let r = d(&s, &model);
        prop_assume!(r > 1e-6);
        let inside = SetSpec::BOmega { omega_bound: r * (1.0 + 1e-9) };
        let outside = SetSpec::BOmega { omega_bound: r * (1.0 - 1e-9) };
        prop_assert!(validate_membership(MembershipInput::Spectral(&s), &inside, None).unwrap().member);
        prop_assert!(!validate_membership(MembershipInput::Spectral(&s), &outside, None).unwrap().member);
    }

    #[test]
    fn perturbation_is_deterministic(s in data(), seed in any::<u64>(), sigma in 0.0..0.05f64) {
        let scheme = PerturbationScheme::new(SchemeKind::GaussianTail, sigma, seed).unwrap();
        prop_assert_eq!(perturb(&s, &scheme).unwrap(), perturb(&s, &scheme).unwrap());
        let zero_scheme = scheme.with_magnitude(0.0).unwrap();
        prop_assert_eq!(perturb(&s, &zero_scheme).unwrap(), s);
    }

    #[test]
    fn json_round_trip_is_exact(s in data()) {
        prop_assert_eq!(spectral_from_json(&spectral_to_json(&s).unwrap()).unwrap(), s);
    }
}

#[test]
fn xi_vanishes_on_the_model() {
    assert!(xi_sequence(&SpectralData::model(30).unwrap()).iter().all(|&x| x == 0.0));
}
