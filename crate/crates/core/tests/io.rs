mod common;

use common::*;
use specmap::direct::{cauchy_data, forward};
use specmap::inverse::{inverse_solve_simple, InverseConfig};
use specmap::io::{
    cauchy_from_json, cauchy_to_json, detect_kind, read_text, reconstruction_to_json, spectral_from_json,
    spectral_to_json, triple_from_json, triple_to_json, write_grid_csv, write_text, DocumentKind,
};
use specmap::Error;

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("specmap-io-{}-{name}", std::process::id()))
}

#[test]
fn files_round_trip_exactly() {
    let p = icos(128);
    let s = forward(&double_robin(512), 5).unwrap();
    let data = cauchy_data(&p, 8).unwrap();

    let path = temp_path("triple.json");
    write_text(&path, &triple_to_json(&p).unwrap()).unwrap();
    let text = read_text(&path).unwrap();
    assert_eq!(detect_kind(&text).unwrap(), DocumentKind::Triple);
    assert_eq!(triple_from_json(&text).unwrap(), p);

    write_text(&path, &spectral_to_json(&s).unwrap()).unwrap();
    let text = read_text(&path).unwrap();
    assert_eq!(detect_kind(&text).unwrap(), DocumentKind::Spectral);
    let back = spectral_from_json(&text).unwrap();
    assert_eq!(back, s);
    assert!(!back.is_simple());

    write_text(&path, &cauchy_to_json(&data).unwrap()).unwrap();
    let text = read_text(&path).unwrap();
    assert_eq!(detect_kind(&text).unwrap(), DocumentKind::Cauchy);
    assert_eq!(cauchy_from_json(&text).unwrap(), data);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn reconstruction_document_carries_diagnostics() {
    let s = forward(&q05(128), 10).unwrap();
    let r = inverse_solve_simple(&s, &InverseConfig { grid_nodes: 32, ..InverseConfig::default() }).unwrap();
    let v: serde_json::Value = serde_json::from_str(&reconstruction_to_json(&r).unwrap()).unwrap();
    assert_eq!(v["q"].as_array().unwrap().len(), 33);
    assert_eq!(v["n_trunc"], 10);
    assert!(v["residual_max"].as_f64().unwrap() < 1e-10);
    assert!(v["inv_norm"].as_f64().unwrap() >= 1.0);
}

#[test]
fn grid_csv_has_one_row_per_node() {
    let p = sin2(16);
    let mut out = Vec::new();
    write_grid_csv(&p.q, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 18);
    assert_eq!(lines[0], "x,re,im");
}

#[test]
fn missing_file_is_a_schema_error() {
    assert!(matches!(read_text(&temp_path("absent.json")), Err(Error::Schema(_))));
}
