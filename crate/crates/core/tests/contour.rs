mod common;

use common::*;
use specmap::contour::{
    auto_contour_index, inverse_from_cauchy, inverse_solve_multiple, spectral_from_cauchy, CauchyInverseConfig,
    ContourConfig,
};
use specmap::direct::{cauchy_data, forward};
use specmap::inverse::{inverse_solve_simple, InverseConfig, NormMode};
use specmap::stability::{perturb, PerturbationScheme, SchemeKind};
use specmap::SpectralData;

#[test]
fn model_data_reconstruct_zero() {
    let cfg = ContourConfig { contour_index: Some(2), grid_nodes: 64, ..ContourConfig::default() };
    let r = inverse_solve_multiple(&SpectralData::model(12).unwrap(), &cfg).unwrap();
    assert!(r.triple.q.max_abs() < 1e-6, "{}", r.triple.q.max_abs());
    assert!(r.triple.h.norm() < 1e-8);
}

#[test]
fn contour_agrees_with_simple_on_simple_data() {
    let s = forward(&icos(512), 20).unwrap();
    let simple = inverse_solve_simple(&s, &InverseConfig { grid_nodes: 128, norm: NormMode::None, ..InverseConfig::default() })
        .unwrap();
    let cfg = ContourConfig { contour_index: Some(2), grid_nodes: 128, norm: NormMode::None, ..ContourConfig::default() };
    let contour = inverse_solve_multiple(&s, &cfg).unwrap();
    assert!(simple.triple.distance(&contour.triple) < 1e-5);
}

#[test]
fn contour_index_covers_the_double_eigenvalue() {
    let s = forward(&double_robin(512), 20).unwrap();
    assert_eq!(auto_contour_index(&s, 20).unwrap(), 3);
    assert_eq!(auto_contour_index(&SpectralData::model(10).unwrap(), 10).unwrap(), 0);
}

#[test]
fn split_data_converge_to_the_double_data() {
    let s = forward(&double_robin(1024), 20).unwrap();
    let cfg = ContourConfig { contour_index: Some(3), grid_nodes: 128, norm: NormMode::None, ..ContourConfig::default() };
    let base = inverse_solve_multiple(&s, &cfg).unwrap();
    let gap = |delta| {
        let split = perturb(&s, &PerturbationScheme::new(SchemeKind::PairSplit, delta, 0).unwrap()).unwrap();
        assert!(split.is_simple());
        inverse_solve_multiple(&split, &cfg).unwrap().triple.distance(&base.triple)
    };
    let (coarse, fine) = (gap(1e-1), gap(1e-2));
    // Second order in the split.
    assert!(fine < coarse / 50.0, "{coarse:e} {fine:e}");
}

#[test]
fn cauchy_data_give_back_the_spectral_data() {
    let p = acos(512);
    let s = forward(&p, 8).unwrap();
    let cfg = CauchyInverseConfig { n_trunc: 8, ..CauchyInverseConfig::default() };
    let t = spectral_from_cauchy(&cauchy_data(&p, 32).unwrap(), &cfg).unwrap();
    for (a, b) in s.rho().iter().zip(t.rho()).chain(s.alpha().iter().zip(t.alpha())) {
        assert!((a - b).norm() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn cauchy_round_trip_recovers_the_triple() {
    let p = q05(512);
    let cfg = CauchyInverseConfig {
        n_trunc: 15,
        contour: ContourConfig { grid_nodes: 128, norm: NormMode::None, ..ContourConfig::default() },
        ..CauchyInverseConfig::default()
    };
    let r = inverse_from_cauchy(&cauchy_data(&p, 32).unwrap(), &cfg).unwrap();
    let q = r.triple.q.resample(512);
    let rec = specmap::ProblemTriple::new(q, r.triple.h, r.triple.big_h).unwrap();
    assert!(rec.distance(&p) < 0.1, "{}", rec.distance(&p));
}
