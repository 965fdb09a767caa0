mod common;

use common::*;
use specmap::direct::forward;
use specmap::inverse::{
    build_system, inverse_solve_simple, operator_norm_profile, recover_phi, solve_system, InverseConfig, NormMode,
};
use specmap::{Error, SpectralData};

fn finitely_perturbed() -> SpectralData {
    let m = SpectralData::model(12).unwrap();
    let mut rho = m.rho().to_vec();
    let mut alpha = m.alpha().to_vec();
    rho[1] = c(1.1, 0.05);
    alpha[2] = c(0.6, -0.1);
    rho[4] = c(3.95, 0.0);
    SpectralData::with_structure(rho, alpha, Some(zero()), None).unwrap()
}

#[test]
fn model_data_reconstruct_the_zero_triple() {
    let r = inverse_solve_simple(&SpectralData::model(20).unwrap(), &InverseConfig { grid_nodes: 128, ..InverseConfig::default() })
        .unwrap();
    assert!(r.triple.q.max_abs() < 1e-8);
    assert!(r.triple.h.norm() < 1e-10 && r.triple.big_h.norm() < 1e-10);
}

#[test]
fn finitely_perturbed_data_are_reproduced_by_the_reconstruction() {
    // Only finitely many entries differ from the model, so truncation is
    // exact and the forward map of the result must return the input.
    let s = finitely_perturbed();
    let cfg = InverseConfig { grid_nodes: 1024, shift: false, ..InverseConfig::default() };
    let r = inverse_solve_simple(&s, &cfg).unwrap();
    let f = forward(&r.triple, 8).unwrap();
    let gap = f.rho().iter().zip(s.rho()).chain(f.alpha().iter().zip(s.alpha())).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(gap < 2e-5, "gap {gap:e}");
}

#[test]
fn round_trip_error_decreases_with_truncation() {
    let p = sin2(512);
    let s = forward(&p, 40).unwrap();
    let err = |n| {
        let cfg = InverseConfig { n_trunc: Some(n), grid_nodes: 512, norm: NormMode::None, ..InverseConfig::default() };
        inverse_solve_simple(&s, &cfg).unwrap().triple.distance(&p)
    };
    let (e10, e20, e40) = (err(10), err(20), err(40));
    assert!(e10 > e20 && e20 > e40 && e40 < 5e-3, "{e10:e} {e20:e} {e40:e}");
}

#[test]
fn derivative_system_matches_differencing() {
    let s = forward(&expi(512), 20).unwrap();
    let base = InverseConfig { grid_nodes: 512, norm: NormMode::None, ..InverseConfig::default() };
    let a = inverse_solve_simple(&s, &base).unwrap();
    let b = inverse_solve_simple(&s, &InverseConfig { with_derivative: false, ..base }).unwrap();
    assert!(a.triple.distance(&b.triple) < 1e-2);
    assert!(a.fd_crosscheck.unwrap() < 1e-2);
}

#[test]
fn shift_removes_the_slowly_decaying_tail() {
    // Unshifted data with ω ≠ 0 leave an O(1/n) tail in the truncated
    // main equation; the shift to ω = 0 is what makes truncation work.
    let p = q05(256);
    let s = forward(&p, 20).unwrap();
    let base = InverseConfig { grid_nodes: 256, norm: NormMode::None, ..InverseConfig::default() };
    let shifted = inverse_solve_simple(&s, &base).unwrap().triple.distance(&p);
    let plain = inverse_solve_simple(&s, &InverseConfig { shift: false, ..base }).unwrap().triple.distance(&p);
    assert!(shifted < 0.1 && plain > 10.0 * shifted, "{shifted:e} {plain:e}");
}

#[test]
fn system_solution_recovers_phi_of_the_model() {
    let s = SpectralData::model(6).unwrap();
    let sys = build_system(&s, 1.3, 6, false).unwrap();
    let sol = solve_system(&sys, NormMode::Explicit).unwrap();
    let phi = recover_phi(&sol.psi, &s).unwrap();
    for (k, p) in phi.iter().enumerate() {
        let expected = (k as f64 * 1.3).cos();
        assert!((p[0] - expected).norm() < 1e-12 && (p[1] - expected).norm() < 1e-12);
    }
    assert!((sol.inv_norm.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn vanishing_weight_is_singular_only_at_the_right_end() {
    let m = SpectralData::model(8).unwrap();
    let mut alpha = m.alpha().to_vec();
    alpha[2] = zero();
    let s = SpectralData::new(m.rho().to_vec(), alpha).unwrap();
    let nodes = [0.0, 1.0, 2.0, 3.0, std::f64::consts::PI];
    let profile = operator_norm_profile(&s, 8, &nodes).unwrap();
    assert_eq!(profile.singular_at, Some(4));
    assert!(profile.per_node[..4].iter().all(|v| v.is_finite()));
    let err = inverse_solve_simple(&s, &InverseConfig { grid_nodes: 32, ..InverseConfig::default() }).unwrap_err();
    assert!(matches!(err, Error::SingularSystem { .. }));
}

#[test]
fn multiple_data_are_refused_by_the_simple_pipeline() {
    let s = forward(&double_robin(512), 6).unwrap();
    let err = inverse_solve_simple(&s, &InverseConfig::default()).unwrap_err();
    assert_eq!(err, Error::MultiplicityPresent);
}
