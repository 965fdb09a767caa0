use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::perturb::{perturb, PerturbationScheme, SchemeKind};
use crate::contour::{auto_contour_index, inverse_solve_multiple, weyl_hat_rational, ContourConfig, ContourGrid};
use crate::direct::forward;
use crate::error::{Error, Result};
use crate::inverse::{inverse_solve_simple, InverseConfig, Reconstruction};
use crate::spectral::{distance_d, distance_dn, validate_membership, MembershipInput, SetSpec, SpectralData};
use crate::ProblemTriple;

/// Distances below this are not turned into ratios.
pub const MIN_DISTANCE: f64 = 1e-10;

/// Starting point of a sweep.
#[derive(Debug, Clone, Copy)]
pub enum SweepBase<'a> {
    /// Spectral data of the triple are computed first.
    Triple(&'a ProblemTriple),
    Spectral(&'a SpectralData),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConfig {
    /// Eigenvalues computed when the base is a triple.
    pub n_modes: usize,
    pub inverse: InverseConfig,
    /// Trapezoid nodes on the contour when multiple eigenvalues are present.
    pub contour_nodes: usize,
    /// Seeds of the ensemble; the scheme's own seed when empty.
    pub seeds: Vec<u64>,
    /// Sets whose membership is flagged per row.
    pub sets: Vec<SetSpec>,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self { n_modes: 30, inverse: InverseConfig::default(), contour_nodes: 64, seeds: Vec::new(), sets: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub magnitude: f64,
    pub seed: u64,
    pub distance: f64,
    /// `‖q¹ − q²‖ + |h¹ − h²| + |H¹ − H²|`.
    pub difference: Option<f64>,
    /// `difference / distance`, omitted for distances below `MIN_DISTANCE`.
    pub ratio: Option<f64>,
    /// `label=1` or `label=0` for each configured set, joined by `;`.
    pub member_flags: String,
    pub inv_norm: Option<f64>,
    /// Largest `|αₙ|` of the perturbed data.
    pub max_weight: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// `d` or `d_N`.
    pub distance_kind: String,
    pub contour_index: Option<usize>,
    pub n_trunc: usize,
    pub base_inv_norm: Option<f64>,
    /// Sorted by distance.
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    /// Ratios of the rows that produced one.
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.ratio).collect()
    }

    /// `max ratio / min ratio`; `None` without ratios.
    pub fn ratio_spread(&self) -> Option<f64> {
        let r = self.ratios();
        let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().copied().fold(f64::INFINITY, f64::min);
        (!r.is_empty()).then(|| max / min)
    }

    /// Whether every row belongs to every configured set.
    pub fn all_members(&self) -> bool {
        self.rows.iter().all(|r| !r.member_flags.contains("=0"))
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let to_err = |e: csv::Error| Error::Schema(e.to_string());
        out.write_record(["magnitude", "distance", "difference", "ratio", "member_flags", "inv_norm"]).map_err(to_err)?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        for r in &self.rows {
            out.write_record([
                format!("{:.16e}", r.magnitude),
                format!("{:.16e}", r.distance),
                opt(r.difference),
                opt(r.ratio),
                r.member_flags.clone(),
                opt(r.inv_norm),
            ])
            .map_err(to_err)?;
        }
        out.flush().map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Short name of a set for the membership flags.
pub fn set_label(set: &SetSpec) -> String {
    match set {
        SetSpec::BOmega { omega_bound } => format!("B({omega_bound})"),
        SetSpec::BOmegaRing { omega_bound, k_bound } => format!("B0({omega_bound},{k_bound})"),
        SetSpec::VOmegaDelta { omega_bound, delta } => format!("V({omega_bound},{delta})"),
        SetSpec::VOmegaTau { omega_bound, sign, .. } => format!("V{sign:?}({omega_bound},tau)"),
        SetSpec::PQ { q_bound } => format!("P({q_bound})"),
        SetSpec::PQA { q_bound, a_bound } => format!("P({q_bound},{a_bound})"),
    }
}

/// How both data of a pair are reconstructed and compared.
#[derive(Debug, Clone, Copy)]
enum Pipeline {
    Simple,
    Contour(usize),
}

struct Context<'a> {
    base: SpectralData,
    base_rec: Reconstruction,
    pipeline: Pipeline,
    n_trunc: usize,
    cfg: &'a StabilityConfig,
}

impl Context<'_> {
    fn reconstruct(&self, s: &SpectralData) -> Result<Reconstruction> {
        reconstruct_with(s, self.pipeline, self.n_trunc, self.cfg)
    }

    fn distance(&self, s: &SpectralData) -> Result<f64> {
        let a = self.base.prefix(self.n_trunc)?;
        let b = s.prefix(self.n_trunc)?;
        match self.pipeline {
            Pipeline::Simple => distance_d(&a, &b, None, None),
            Pipeline::Contour(n) => {
                let grid = ContourGrid::new(n, self.cfg.contour_nodes)?;
                let wa: Vec<Complex64> = grid.nodes.iter().map(|&t| weyl_hat_rational(&a, n, t)).collect();
                let wb: Vec<Complex64> = grid.nodes.iter().map(|&t| weyl_hat_rational(&b, n, t)).collect();
                distance_dn(&a, &b, n, &wa, &wb, None, None)
            }
        }
    }

    fn flags(&self, s: &SpectralData, inv_norm: Option<f64>) -> String {
        self.cfg
            .sets
            .iter()
            .map(|set| {
                let member = |d: &SpectralData, k: Option<f64>| {
                    validate_membership(MembershipInput::Spectral(d), set, k).map(|r| r.member).unwrap_or(false)
                };
                let both = member(&self.base, self.base_rec.inv_norm) && member(s, inv_norm);
                format!("{}={}", set_label(set), u8::from(both))
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    fn row(&self, scheme: &PerturbationScheme) -> StabilityRow {
        let mut row = StabilityRow {
            magnitude: scheme.magnitude,
            seed: scheme.seed,
            distance: f64::NAN,
            difference: None,
            ratio: None,
            member_flags: String::new(),
            inv_norm: None,
            max_weight: f64::NAN,
            error: None,
        };
        let result = (|| -> Result<()> {
            let s = perturb(&self.base, scheme)?;
            row.max_weight = s.alpha().iter().map(|a| a.norm()).fold(0.0, f64::max);
            row.distance = self.distance(&s)?;
            let rec = self.reconstruct(&s)?;
            let diff = rec.triple.distance(&self.base_rec.triple);
            row.difference = Some(diff);
            row.ratio = (row.distance >= MIN_DISTANCE).then(|| diff / row.distance);
            row.inv_norm = rec.inv_norm;
            row.member_flags = self.flags(&s, rec.inv_norm);
            Ok(())
        })();
        if let Err(e) = result {
            row.error = Some(e.to_string());
        }
        row
    }
}

fn reconstruct_with(s: &SpectralData, pipeline: Pipeline, n_trunc: usize, cfg: &StabilityConfig) -> Result<Reconstruction> {
    let inv = InverseConfig { n_trunc: Some(n_trunc), ..cfg.inverse };
    match pipeline {
        Pipeline::Simple => inverse_solve_simple(s, &inv),
        Pipeline::Contour(n) => inverse_solve_multiple(
            s,
            &ContourConfig {
                contour_index: Some(n),
                contour_nodes: cfg.contour_nodes,
                n_trunc: inv.n_trunc,
                grid_nodes: inv.grid_nodes,
                with_derivative: inv.with_derivative,
                norm: inv.norm,
                shift: inv.shift,
                omega: inv.omega,
            },
        ),
    }
}

/// Perturbs the base data at every magnitude (and seed), reconstructs both
/// data and records the Lipschitz quotients. Reconstruction failures are
/// recorded per row.
pub fn lipschitz_sweep(
    base: SweepBase<'_>,
    scheme: &PerturbationScheme,
    magnitudes: &[f64],
    cfg: &StabilityConfig,
) -> Result<StabilityReport> {
    let base = match base {
        SweepBase::Triple(p) => forward(p, cfg.n_modes)?,
        SweepBase::Spectral(s) => s.clone(),
    };
    let n_trunc = cfg.inverse.n_trunc.unwrap_or(base.len()).min(base.len());
    let pipeline = if base.prefix(n_trunc)?.is_simple() && !matches!(scheme.kind, SchemeKind::PairSplit) {
        Pipeline::Simple
    } else {
        Pipeline::Contour(auto_contour_index(&base, n_trunc)?.max(1))
    };
    let base_rec = reconstruct_with(&base, pipeline, n_trunc, cfg)?;
    let ctx = Context { base, base_rec, pipeline, n_trunc, cfg };
    let seeds = if cfg.seeds.is_empty() { vec![scheme.seed] } else { cfg.seeds.clone() };
    let schemes: Vec<PerturbationScheme> = magnitudes
        .iter()
        .flat_map(|&m| seeds.iter().map(move |&seed| (m, seed)))
        .map(|(m, seed)| PerturbationScheme::new(scheme.kind, m, seed))
        .collect::<Result<_>>()?;
    let mut rows: Vec<StabilityRow> = schemes.par_iter().map(|s| ctx.row(s)).collect();
    rows.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(StabilityReport {
        distance_kind: match pipeline {
            Pipeline::Simple => "d".into(),
            Pipeline::Contour(_) => "d_N".into(),
        },
        contour_index: match pipeline {
            Pipeline::Simple => None,
            Pipeline::Contour(n) => Some(n),
        },
        n_trunc,
        base_inv_norm: ctx.base_rec.inv_norm,
        rows,
    })
}
