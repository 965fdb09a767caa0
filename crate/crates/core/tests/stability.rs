mod common;

use common::*;
use specmap::direct::forward;
use specmap::inverse::{InverseConfig, NormMode};
use specmap::spectral::SetSpec;
use specmap::stability::{
    lipschitz_sweep, perturb, residual_check, Entry, PerturbationScheme, SchemeKind, StabilityConfig, SweepBase,
};
use specmap::SpectralData;

fn small_config() -> StabilityConfig {
    StabilityConfig {
        inverse: InverseConfig { n_trunc: Some(12), grid_nodes: 128, norm: NormMode::Estimate, ..InverseConfig::default() },
        ..StabilityConfig::default()
    }
}

#[test]
fn gaussian_ensemble_has_bounded_ratios() {
    let base = SpectralData::model(24).unwrap().with_omega(Some(zero()));
    let cfg = StabilityConfig {
        seeds: vec![1, 2, 3],
        sets: vec![SetSpec::BOmega { omega_bound: 1.0 }],
        ..small_config()
    };
    let scheme = PerturbationScheme::new(SchemeKind::GaussianTail, 0.0, 0).unwrap();
    let report = lipschitz_sweep(SweepBase::Spectral(&base), &scheme, &[1e-3, 1e-2], &cfg).unwrap();
    assert_eq!(report.distance_kind, "d");
    assert_eq!(report.rows.len(), 6);
    assert!(report.all_members());
    assert!(report.rows.windows(2).all(|w| w[0].distance <= w[1].distance));
    assert!(report.ratio_spread().unwrap() < 10.0);
}

#[test]
fn triple_base_is_solved_first() {
    let p = q05(256);
    let cfg = StabilityConfig { n_modes: 16, ..small_config() };
    let scheme = PerturbationScheme::new(SchemeKind::SingleEntry { index: 3, entry: Entry::Alpha }, 0.0, 7).unwrap();
    let report = lipschitz_sweep(SweepBase::Triple(&p), &scheme, &[1e-3, 1e-2], &cfg).unwrap();
    let ratios = report.ratios();
    assert_eq!(ratios.len(), 2);
    // A single-entry move is close to linear response.
    assert!((ratios[0] / ratios[1] - 1.0).abs() < 0.1, "{ratios:?}");
}

#[test]
fn vanishing_weight_blows_up_the_operator_norm() {
    let base = SpectralData::model(16).unwrap().with_omega(Some(zero()));
    let scheme = PerturbationScheme::new(SchemeKind::AlphaDegenerate { index: 3 }, 0.0, 0).unwrap();
    let report = lipschitz_sweep(SweepBase::Spectral(&base), &scheme, &[0.3, 1e-2, 1e-4], &small_config()).unwrap();
    let norm = |m: f64| report.rows.iter().find(|r| r.magnitude == m).unwrap().inv_norm.unwrap();
    assert!(norm(1e-4) > 10.0 * norm(1e-2) && norm(1e-2) > norm(0.3), "{} {} {}", norm(0.3), norm(1e-2), norm(1e-4));
}

#[test]
fn pair_split_uses_the_contour_distance() {
    let s = forward(&double_robin(1024), 20).unwrap();
    let scheme = PerturbationScheme::new(SchemeKind::PairSplit, 0.0, 0).unwrap();
    let report = lipschitz_sweep(SweepBase::Spectral(&s), &scheme, &[1e-1, 1e-2], &small_config()).unwrap();
    assert_eq!(report.distance_kind, "d_N");
    assert_eq!(report.contour_index, Some(3));
    let weights: Vec<f64> = report.rows.iter().map(|r| r.max_weight).collect();
    assert!(weights[0] > 5.0 * weights[1]);
    assert!(report.ratio_spread().unwrap() < 10.0);
}

#[test]
fn pair_split_preserves_the_other_entries() {
    let s = forward(&double_robin(512), 8).unwrap();
    let split = perturb(&s, &PerturbationScheme::new(SchemeKind::PairSplit, 1e-2, 0).unwrap()).unwrap();
    assert!(split.is_simple());
    for k in [0, 3, 4, 5, 6, 7] {
        assert_eq!(split.rho()[k], s.rho()[k]);
        assert_eq!(split.alpha()[k], s.alpha()[k]);
    }
}

#[test]
fn main_equation_residual_is_small_for_forward_data() {
    let p = icos(512);
    let s = forward(&p, 50).unwrap();
    let x = [0.0, 0.8, 1.6, 2.4, std::f64::consts::PI];
    let r = residual_check(&p, &s, 10, &x).unwrap();
    assert!(r < 1e-4, "{r:e}");
}

#[test]
fn csv_report_has_a_header_and_one_line_per_row() {
    let base = SpectralData::model(16).unwrap().with_omega(Some(zero()));
    let scheme = PerturbationScheme::new(SchemeKind::GaussianTail, 0.0, 0).unwrap();
    let report = lipschitz_sweep(SweepBase::Spectral(&base), &scheme, &[1e-3, 1e-2, 1e-1], &small_config()).unwrap();
    let mut out = Vec::new();
    report.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("magnitude,distance,difference,ratio,member_flags,inv_norm"));
}
