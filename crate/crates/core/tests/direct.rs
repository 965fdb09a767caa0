mod common;

use common::*;
use specmap::direct::{
    cauchy_data, char_delta, char_delta0, find_eigenvalues, forward, forward_with, weyl_function, CauchyCharacteristic,
    Characteristic, DirectSolver, ForwardOptions, OdeOptions, WeightMethod,
};
use specmap::SpectralData;

#[test]
fn zero_triple_gives_model_data() {
    let s = forward(&constant(512, zero(), zero(), zero()), 12).unwrap();
    let model = SpectralData::model(12).unwrap();
    for (a, b) in s.rho().iter().zip(model.rho()).chain(s.alpha().iter().zip(model.alpha())) {
        assert!((a - b).norm() < 1e-8, "{a} vs {b}");
    }
    assert!(s.is_simple());
}

#[test]
fn constant_potential_shifts_the_model_eigenvalues() {
    let q = c(0.4, -0.7);
    let s = forward(&constant(512, q, zero(), zero()), 8).unwrap();
    for (n, l) in s.lambda().iter().enumerate() {
        assert!((l - ((n * n) as f64 + q)).norm() < 1e-7);
    }
}

#[test]
fn integral_and_residue_weights_agree() {
    let p = icos(1024);
    let residue = forward(&p, 8).unwrap();
    let opts = ForwardOptions { weights: WeightMethod::Integral, ..ForwardOptions::default() };
    let integral = forward_with(&p, 8, &opts).unwrap();
    for (a, b) in residue.alpha().iter().zip(integral.alpha()) {
        assert!((a - b).norm() / a.norm() < 1e-6);
    }
}

#[test]
fn double_eigenvalue_is_detected() {
    let s = forward(&double_robin(1024), 6).unwrap();
    assert_eq!(s.groups()[..3], [(0, 1), (1, 2), (3, 1)]);
    assert!((s.rho()[1] - double_robin_rho()).norm() < 1e-6);
    assert!((s.alpha()[2] - double_robin_alpha()).norm() / double_robin_alpha().norm() < 1e-5);
    // The simple-pole coefficient of this group vanishes.
    assert!(s.alpha()[1].norm() < 1e-5);
}

#[test]
fn eigenvalues_are_zeros_of_the_characteristic_function() {
    let p = acos(512);
    let set = find_eigenvalues(&p, 6).unwrap();
    for &rho in &set.rho {
        assert!(char_delta(&p, rho).unwrap().norm() < 1e-8 * (1.0 + rho.norm()));
    }
}

#[test]
fn cauchy_data_reproduce_the_characteristic_functions() {
    let p = sin2(1024);
    let ch = CauchyCharacteristic::new(&cauchy_data(&p, 64).unwrap());
    for rho in [c(0.7, 0.2), c(2.3, -0.4), c(5.5, 0.0)] {
        let d = char_delta(&p, rho).unwrap();
        let d0 = char_delta0(&p, rho).unwrap();
        assert!((ch.delta(rho).unwrap() - d).norm() < 1e-5 * (1.0 + d.norm()));
        assert!((ch.delta0(rho).unwrap() - d0).norm() < 1e-5 * (1.0 + d0.norm()));
    }
}

#[test]
fn weyl_function_has_residue_alpha() {
    let p = icos(512);
    let s = forward(&p, 3).unwrap();
    let solver = DirectSolver::new(&p, OdeOptions::default());
    let lambda = s.lambda()[1];
    let eps = 1e-4;
    let z = specmap::spectral::canonical_sqrt(lambda + eps);
    let m = weyl_function(&solver, z).unwrap();
    assert!((m * eps - s.alpha()[1]).norm() < 1e-3);
}
