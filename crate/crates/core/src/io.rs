//! JSON and CSV file formats. Complex numbers are `[re, im]` pairs and
//! every float is written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::direct::CauchyData;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::inverse::Reconstruction;
use crate::spectral::{Multiplicity, ProblemTriple, SpectralData};

type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Compact JSON formatter writing `f64` as `{:.16e}` (non-finite values
/// become `null`).
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFormatter;

impl serde_json::ser::Formatter for ExactFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes `value` with [`ExactFormatter`].
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFormatter);
    value.serialize(&mut ser).map_err(|e| Error::Schema(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| Error::Schema(e.to_string()))
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralJson {
    rho: Vec<Pair>,
    alpha: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicities: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleJson {
    grid_nodes: usize,
    q: Vec<Pair>,
    h: Pair,
    #[serde(rename = "H")]
    big_h: Pair,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CauchyJson {
    grid_nodes: usize,
    #[serde(rename = "N")]
    n: Vec<Pair>,
    #[serde(rename = "N0")]
    n0: Vec<Pair>,
    omega: Pair,
    omega0: Pair,
}

#[derive(Debug, Clone, Serialize)]
struct ReconstructionJson {
    q: Vec<Pair>,
    h: Pair,
    #[serde(rename = "H")]
    big_h: Pair,
    residual_max: f64,
    inv_norm: Option<f64>,
    n_trunc: usize,
    grid_nodes: usize,
    omega: Pair,
    shift: Pair,
    fd_crosscheck: Option<f64>,
}

fn grid(values: Vec<Pair>, grid_nodes: usize, what: &str) -> Result<GridFunction> {
    if values.len() != grid_nodes + 1 {
        return Err(Error::Schema(format!(
            "{what} has {} values, expected grid_nodes + 1 = {}",
            values.len(),
            grid_nodes + 1
        )));
    }
    GridFunction::new(values.into_iter().map(complex).collect())
}

fn grid_values(g: &GridFunction) -> Vec<Pair> {
    g.values().iter().map(|&z| pair(z)).collect()
}

pub fn spectral_to_json(s: &SpectralData) -> Result<String> {
    let (index_set, multiplicities) = match s.multiplicity() {
        Some(m) => (Some(m.index_set().to_vec()), Some(m.multiplicities().to_vec())),
        None => (None, None),
    };
    to_json(&SpectralJson {
        rho: s.rho().iter().map(|&z| pair(z)).collect(),
        alpha: s.alpha().iter().map(|&z| pair(z)).collect(),
        omega: s.omega().map(pair),
        index_set,
        multiplicities,
    })
}

pub fn spectral_from_json(text: &str) -> Result<SpectralData> {
    let j: SpectralJson = from_json(text)?;
    let mult = match (j.index_set, j.multiplicities) {
        (Some(i), Some(m)) => Some(Multiplicity::new(i, m)?),
        (None, None) => None,
        _ => return Err(Error::Schema("index_set and multiplicities must appear together".into())),
    };
    SpectralData::with_structure(
        j.rho.into_iter().map(complex).collect(),
        j.alpha.into_iter().map(complex).collect(),
        j.omega.map(complex),
        mult,
    )
}

pub fn triple_to_json(p: &ProblemTriple) -> Result<String> {
    to_json(&TripleJson { grid_nodes: p.grid_nodes(), q: grid_values(&p.q), h: pair(p.h), big_h: pair(p.big_h) })
}

pub fn triple_from_json(text: &str) -> Result<ProblemTriple> {
    let j: TripleJson = from_json(text)?;
    ProblemTriple::new(grid(j.q, j.grid_nodes, "q")?, complex(j.h), complex(j.big_h))
}

pub fn cauchy_to_json(c: &CauchyData) -> Result<String> {
    to_json(&CauchyJson {
        grid_nodes: c.n.node_count(),
        n: grid_values(&c.n),
        n0: grid_values(&c.n0),
        omega: pair(c.omega),
        omega0: pair(c.omega0),
    })
}

pub fn cauchy_from_json(text: &str) -> Result<CauchyData> {
    let j: CauchyJson = from_json(text)?;
    CauchyData::new(grid(j.n, j.grid_nodes, "N")?, grid(j.n0, j.grid_nodes, "N0")?, complex(j.omega), complex(j.omega0))
}

pub fn reconstruction_to_json(r: &Reconstruction) -> Result<String> {
    to_json(&ReconstructionJson {
        q: grid_values(&r.triple.q),
        h: pair(r.triple.h),
        big_h: pair(r.triple.big_h),
        residual_max: r.residual_max,
        inv_norm: r.inv_norm,
        n_trunc: r.n_trunc,
        grid_nodes: r.grid_nodes,
        omega: pair(r.omega),
        shift: pair(r.shift),
        fd_crosscheck: r.fd_crosscheck,
    })
}

/// The kind of a JSON document, recognised by its keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Spectral,
    Triple,
    Cauchy,
}

pub fn detect_kind(text: &str) -> Result<DocumentKind> {
    let v: serde_json::Value = from_json(text)?;
    let obj = v.as_object().ok_or_else(|| Error::Schema("top level must be an object".into()))?;
    if obj.contains_key("rho") {
        Ok(DocumentKind::Spectral)
    } else if obj.contains_key("N") {
        Ok(DocumentKind::Cauchy)
    } else if obj.contains_key("q") {
        Ok(DocumentKind::Triple)
    } else {
        Err(Error::Schema("unrecognised document: expected rho, q or N".into()))
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

/// Grid function as CSV with columns `x, re, im`.
pub fn write_grid_csv<W: Write>(g: &GridFunction, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let to_err = |e: csv::Error| Error::Schema(e.to_string());
    out.write_record(["x", "re", "im"]).map_err(to_err)?;
    for (x, z) in g.nodes().iter().zip(g.values()) {
        out.write_record([format!("{x:.16e}"), format!("{:.16e}", z.re), format!("{:.16e}", z.im)]).map_err(to_err)?;
    }
    out.flush().map_err(|e| Error::Schema(e.to_string()))
}
