use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use specmap::contour::{auto_contour_index, inverse_from_cauchy, inverse_solve_multiple, CauchyInverseConfig, ContourConfig};
use specmap::direct::{cauchy_data, forward};
use specmap::inverse::{inverse_solve_simple, operator_norm_profile, InverseConfig, NormMode, Reconstruction};
use specmap::io::{self, DocumentKind};
use specmap::spectral::{validate_membership, MembershipInput, SetSpec, TauSign};
use specmap::stability::{lipschitz_sweep, set_label, Entry, PerturbationScheme, SchemeKind, StabilityConfig, SweepBase};
use specmap::{Error, ProblemTriple, SpectralData};

use crate::args::{
    Cli, Command, Common, EntryArg, ForwardArgs, InverseArgs, RoundtripArgs, SchemeArg, SetArg, SetArgs,
    StabilityArgs, ValidateArgs,
};
use crate::error::CliError;

/// Default acceptance threshold of the round trip.
const ROUNDTRIP_TOLERANCE: f64 = 5e-2;
/// Nodes in `[0, π]` at which the operator norm is sampled for the
/// norm-bounded set.
const NORM_NODES: usize = 33;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    check_common(c)?;
    match &cli.command {
        Command::Forward(a) => run_forward(c, a),
        Command::Inverse(a) => run_inverse(c, a),
        Command::InverseCauchy(a) => run_inverse_cauchy(c, a),
        Command::Roundtrip(a) => run_roundtrip(c, a),
        Command::Stability(a) => run_stability(c, a),
        Command::Validate(a) => run_validate(c, a),
    }
}

fn check_common(c: &Common) -> Result<(), CliError> {
    let positive = [
        ("--n-modes", c.n_modes),
        ("--grid-nodes", c.grid_nodes),
        ("--contour-nodes", c.contour_nodes),
        ("--fourier-modes", c.fourier_modes),
    ];
    for (name, v) in positive {
        if v == 0 {
            return Err(CliError::Usage(format!("{name} must be positive")));
        }
    }
    if c.n_trunc == Some(0) {
        return Err(CliError::Usage("--n-trunc must be positive".into()));
    }
    if let Some(t) = c.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tolerance must be positive, got {t}")));
        }
    }
    if let (Some(i), Some(o)) = (&c.input, &c.output) {
        if i == o {
            return Err(CliError::Usage("--input and --output must differ".into()));
        }
    }
    Ok(())
}

fn input_text(c: &Common) -> Result<String, CliError> {
    let path = c.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    Ok(io::read_text(path)?)
}

fn expect_kind(text: &str, kind: DocumentKind) -> Result<(), CliError> {
    let found = io::detect_kind(text)?;
    if found != kind {
        return Err(Error::Schema(format!("expected a {kind:?} document, found {found:?}")).into());
    }
    Ok(())
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => io::write_text(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn norm_mode(c: &Common) -> NormMode {
    if c.explicit_inverse_norm {
        NormMode::Explicit
    } else {
        NormMode::Estimate
    }
}

fn derived_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.{suffix}.json"))
}

fn run_forward(c: &Common, a: &ForwardArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    expect_kind(&text, DocumentKind::Triple)?;
    let p = io::triple_from_json(&text)?;
    let s = forward(&p, c.n_modes)?;
    let cauchy_path = a.cauchy_output.clone().or_else(|| c.output.as_deref().map(|o| derived_path(o, "cauchy")));
    // Both artifacts are computed before either is written.
    let cauchy = match &cauchy_path {
        Some(_) => Some(io::cauchy_to_json(&cauchy_data(&p, c.fourier_modes)?)?),
        None => None,
    };
    emit(c.output.as_deref(), &io::spectral_to_json(&s)?)?;
    if let (Some(path), Some(text)) = (cauchy_path, cauchy) {
        io::write_text(&path, &text)?;
    }
    Ok(())
}

/// Simple pipeline when the used prefix is simple, contour otherwise.
fn reconstruct(c: &Common, s: &SpectralData) -> Result<Reconstruction, CliError> {
    let n_trunc = c.n_trunc.unwrap_or(s.len());
    if n_trunc > s.len() {
        return Err(Error::TooFewEntries { needed: n_trunc, got: s.len() }.into());
    }
    let norm = norm_mode(c);
    if s.prefix(n_trunc)?.is_simple() && c.contour_index.is_none() {
        let cfg = InverseConfig {
            n_trunc: Some(n_trunc),
            grid_nodes: c.grid_nodes,
            with_derivative: c.with_derivative,
            norm,
            ..InverseConfig::default()
        };
        return Ok(inverse_solve_simple(s, &cfg)?);
    }
    let cfg = ContourConfig {
        contour_index: Some(match c.contour_index {
            Some(n) => n,
            None => auto_contour_index(s, n_trunc)?,
        }),
        contour_nodes: c.contour_nodes,
        n_trunc: Some(n_trunc),
        grid_nodes: c.grid_nodes,
        with_derivative: c.with_derivative,
        norm,
        ..ContourConfig::default()
    };
    Ok(inverse_solve_multiple(s, &cfg)?)
}

fn write_reconstruction(c: &Common, a: &InverseArgs, r: &Reconstruction) -> Result<(), CliError> {
    emit(c.output.as_deref(), &io::reconstruction_to_json(r)?)?;
    if let Some(path) = &a.csv {
        let file = std::fs::File::create(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        io::write_grid_csv(&r.triple.q, file)?;
    }
    Ok(())
}

fn run_inverse(c: &Common, a: &InverseArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    expect_kind(&text, DocumentKind::Spectral)?;
    let s = io::spectral_from_json(&text)?;
    let r = reconstruct(c, &s)?;
    write_reconstruction(c, a, &r)
}

fn cauchy_config(c: &Common) -> CauchyInverseConfig {
    CauchyInverseConfig {
        n_trunc: c.n_trunc.unwrap_or(c.n_modes),
        contour: ContourConfig {
            contour_index: c.contour_index,
            contour_nodes: c.contour_nodes,
            grid_nodes: c.grid_nodes,
            with_derivative: c.with_derivative,
            norm: norm_mode(c),
            ..ContourConfig::default()
        },
        ..CauchyInverseConfig::default()
    }
}

fn run_inverse_cauchy(c: &Common, a: &InverseArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    expect_kind(&text, DocumentKind::Cauchy)?;
    let data = io::cauchy_from_json(&text)?;
    let r = inverse_from_cauchy(&data, &cauchy_config(c))?;
    write_reconstruction(c, a, &r)
}

#[derive(Debug, Serialize)]
struct RoundtripSummary {
    route: &'static str,
    n_modes: usize,
    n_trunc: usize,
    grid_nodes: usize,
    q_error: f64,
    h_error: f64,
    #[serde(rename = "H_error")]
    big_h_error: f64,
    total_error: f64,
    residual_max: f64,
    inv_norm: Option<f64>,
    tolerance: f64,
    pass: bool,
}

fn run_roundtrip(c: &Common, a: &RoundtripArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    expect_kind(&text, DocumentKind::Triple)?;
    let p = io::triple_from_json(&text)?;
    let r = if a.via_cauchy {
        inverse_from_cauchy(&cauchy_data(&p, c.fourier_modes)?, &cauchy_config(c))?
    } else {
        reconstruct(c, &forward(&p, c.n_modes)?)?
    };
    let q = r.triple.q.resample(p.grid_nodes());
    let rec = ProblemTriple::new(q, r.triple.h, r.triple.big_h)?;
    let tolerance = c.tolerance.unwrap_or(ROUNDTRIP_TOLERANCE);
    let total = p.distance(&rec);
    let summary = RoundtripSummary {
        route: if a.via_cauchy { "cauchy" } else { "spectral" },
        n_modes: c.n_modes,
        n_trunc: r.n_trunc,
        grid_nodes: r.grid_nodes,
        q_error: p.q.l2_distance(&rec.q),
        h_error: (p.h - rec.h).norm(),
        big_h_error: (p.big_h - rec.big_h).norm(),
        total_error: total,
        residual_max: r.residual_max,
        inv_norm: r.inv_norm,
        tolerance,
        pass: total <= tolerance,
    };
    emit(c.output.as_deref(), &io::to_json(&summary)?)?;
    if !summary.pass {
        return Err(CliError::Rejected(format!("round-trip error {total:e} exceeds tolerance {tolerance:e}")));
    }
    Ok(())
}

fn set_spec(a: &SetArgs, len: usize) -> Option<SetSpec> {
    let tau = || (1..=len).map(|n| a.tau / (n * n) as f64).collect::<Vec<f64>>();
    Some(match a.set? {
        SetArg::BOmega => SetSpec::BOmega { omega_bound: a.omega_bound },
        SetArg::BOmegaRing => SetSpec::BOmegaRing { omega_bound: a.omega_bound, k_bound: a.k_bound },
        SetArg::VOmegaDelta => SetSpec::VOmegaDelta { omega_bound: a.omega_bound, delta: a.delta },
        SetArg::VOmegaTauPlus => SetSpec::VOmegaTau { omega_bound: a.omega_bound, tau: tau(), sign: TauSign::Plus },
        SetArg::VOmegaTauMinus => SetSpec::VOmegaTau { omega_bound: a.omega_bound, tau: tau(), sign: TauSign::Minus },
        SetArg::Pq => SetSpec::PQ { q_bound: a.q_bound },
        SetArg::Pqa => SetSpec::PQA { q_bound: a.q_bound, a_bound: a.a_bound },
    })
}

fn run_stability(c: &Common, a: &StabilityArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    let base = match io::detect_kind(&text)? {
        DocumentKind::Triple => forward(&io::triple_from_json(&text)?, c.n_modes)?,
        DocumentKind::Spectral => io::spectral_from_json(&text)?,
        DocumentKind::Cauchy => {
            return Err(Error::Schema("stability needs a triple or spectral data, found Cauchy data".into()).into())
        }
    };
    let kind = match a.scheme {
        SchemeArg::GaussianTail => SchemeKind::GaussianTail,
        SchemeArg::SingleEntry => SchemeKind::SingleEntry {
            index: a.index,
            entry: match a.entry {
                EntryArg::Rho => Entry::Rho,
                EntryArg::Alpha => Entry::Alpha,
            },
        },
        SchemeArg::PairSplit => SchemeKind::PairSplit,
        SchemeArg::AlphaDegenerate => SchemeKind::AlphaDegenerate { index: a.index },
    };
    let scheme = PerturbationScheme::new(kind, 0.0, c.seed)?;
    let cfg = StabilityConfig {
        n_modes: c.n_modes,
        inverse: InverseConfig {
            n_trunc: c.n_trunc,
            grid_nodes: c.grid_nodes,
            with_derivative: c.with_derivative,
            norm: norm_mode(c),
            ..InverseConfig::default()
        },
        contour_nodes: c.contour_nodes,
        seeds: (0..a.ensemble.max(1)).map(|k| c.seed + k).collect(),
        sets: set_spec(&a.set, base.len()).into_iter().collect(),
    };
    let report = lipschitz_sweep(SweepBase::Spectral(&base), &scheme, &a.magnitudes, &cfg)?;
    emit(c.output.as_deref(), &io::to_json(&report)?)?;
    if let Some(path) = &a.csv {
        let file = std::fs::File::create(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        report.write_csv(file)?;
    }
    if let (Some(tol), Some(spread)) = (c.tolerance, report.ratio_spread()) {
        if spread > tol {
            return Err(CliError::Rejected(format!("ratio spread {spread:e} exceeds tolerance {tol:e}")));
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ViolationJson {
    condition: String,
    index: Option<usize>,
    detail: String,
}

#[derive(Debug, Serialize)]
struct ValidateJson {
    set: String,
    member: bool,
    violations: Vec<ViolationJson>,
}

fn run_validate(c: &Common, a: &ValidateArgs) -> Result<(), CliError> {
    let text = input_text(c)?;
    let kind = io::detect_kind(&text)?;
    let (triple, spectral) = match kind {
        DocumentKind::Triple => {
            let p = io::triple_from_json(&text)?;
            let s = match &a.spectral {
                Some(path) => Some(io::spectral_from_json(&io::read_text(path)?)?),
                None if a.set.set == Some(SetArg::Pqa) => Some(forward(&p, c.n_modes)?),
                None => None,
            };
            (Some(p), s)
        }
        DocumentKind::Spectral => (None, Some(io::spectral_from_json(&text)?)),
        DocumentKind::Cauchy => return Err(Error::Schema("cannot validate Cauchy data".into()).into()),
    };
    let len = spectral.as_ref().map_or(c.n_modes, |s| s.len());
    let set = set_spec(&a.set, len).ok_or_else(|| CliError::Usage("--set is required".into()))?;
    let input = match &triple {
        Some(p) => MembershipInput::Problem { triple: p, spectral: spectral.as_ref() },
        None => MembershipInput::Spectral(spectral.as_ref().expect("spectral input")),
    };
    let aux = match (&set, &spectral, &triple) {
        (SetSpec::BOmegaRing { .. }, Some(s), None) => {
            let n_trunc = c.n_trunc.unwrap_or(s.len()).min(s.len());
            let nodes: Vec<f64> =
                (0..NORM_NODES).map(|j| std::f64::consts::PI * j as f64 / (NORM_NODES - 1) as f64).collect();
            Some(operator_norm_profile(s, n_trunc, &nodes)?.sup)
        }
        _ => None,
    };
    let report = validate_membership(input, &set, aux)?;
    let out = ValidateJson {
        set: set_label(&set),
        member: report.member,
        violations: report
            .violations
            .into_iter()
            .map(|v| ViolationJson { condition: v.condition, index: v.index, detail: v.detail })
            .collect(),
    };
    emit(c.output.as_deref(), &io::to_json(&out)?)?;
    if !out.member {
        return Err(CliError::Rejected(format!("not a member of {}", out.set)));
    }
    Ok(())
}
