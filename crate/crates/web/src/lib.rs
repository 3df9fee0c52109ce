//! Browser front end: three interactive operations over the core library,
//! each returning a JSON string for `www/index.html` to render.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only turn their errors into `JsValue`s.

use mublp::fourier::{column_sum, g_norm_single, g_single};
use mublp::gamma::ExponentVector;
use mublp::karlsson::{self, ab_blocks, BracketReading, Branches, KarlssonParams};
use mublp::matrix::{fourier_matrix, spectral_matrix};
use mublp::verify::canonical_rhos;
use mublp::PhaseMatrix;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn params(theta: f64, phi: f64, z1_arg: f64, branches: &str) -> Result<KarlssonParams, String> {
    let br: Branches = branches.parse().map_err(|e: mublp::Error| e.to_string())?;
    let p = KarlssonParams::new(theta, phi, z1_arg).with_branches(br);
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn args_in_pi(m: &PhaseMatrix) -> Vec<Vec<f64>> {
    let d = m.dim();
    m.args()
        .chunks(d)
        .map(|r| r.iter().map(|a| a / std::f64::consts::PI).collect())
        .collect()
}

/// Builds one Karlsson matrix and reports its phases (in units of π), the
/// Hadamard residual and `g` at the two block-aligned placements of ρ.
pub fn karlsson_json(theta: f64, phi: f64, z1_arg: f64, branches: &str) -> Result<Value, String> {
    let p = params(theta, phi, z1_arg, branches)?;
    let zs = karlsson::derive_zs(&p).map_err(|e| e.to_string())?;
    let k = karlsson::build(&p).map_err(|e| e.to_string())?;
    let rhos: Vec<Value> = canonical_rhos()
        .iter()
        .map(|rho| {
            let s = column_sum(&k, rho).expect("dimension 6");
            json!({ "rho": rho.to_string(), "re": s.re, "im": s.im, "abs": s.norm() })
        })
        .collect();
    let g = g_single(&k, &canonical_rhos()[0]).map_err(|e| e.to_string())?;
    Ok(json!({
        "branches": p.branches.to_string(),
        "args_over_pi": args_in_pi(&k),
        "hadamard_residual": k.unitarity_residual(),
        "consistency_residual": zs.consistency_residual,
        "placements": rhos,
        "g_abs": g.norm(),
    }))
}

fn parse_gamma(s: &str, d: usize) -> Result<ExponentVector, String> {
    let v = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i32>()
                .map_err(|_| format!("`{t}` is not an integer"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != d {
        return Err(format!("γ needs {d} entries, got {}", v.len()));
    }
    Ok(ExponentVector::new(v))
}

/// `g(γ)` and `G(γ)` for one matrix: `karlsson` (with the given
/// parameters), `spectral` or `fourier`.
pub fn evaluate_json(
    matrix: &str,
    gamma: &str,
    theta: f64,
    phi: f64,
    z1_arg: f64,
    branches: &str,
) -> Result<Value, String> {
    let m = match matrix {
        "karlsson" => {
            karlsson::build(&params(theta, phi, z1_arg, branches)?).map_err(|e| e.to_string())?
        }
        "spectral" => spectral_matrix(),
        "fourier" => fourier_matrix(6),
        other => return Err(format!("unknown matrix `{other}`")),
    };
    let gamma = parse_gamma(gamma, m.dim())?;
    let g = g_single(&m, &gamma).map_err(|e| e.to_string())?;
    let big_g = g_norm_single(&m, &gamma).map_err(|e| e.to_string())?;
    Ok(json!({
        "matrix": m.label(),
        "gamma": gamma.to_string(),
        "g_re": g.re,
        "g_im": g.im,
        "g_abs": g.norm(),
        "G": big_g,
    }))
}

/// `|t0|` and both readings of the `t1` bracket over an `n_theta × n_phi`
/// grid of `[0, 2π)²`, row-major in θ.
pub fn bracket_scan_json(n_theta: usize, n_phi: usize) -> Result<Value, String> {
    if n_theta == 0 || n_phi == 0 || n_theta * n_phi > 250_000 {
        return Err("grid must have between 1 and 250000 points".into());
    }
    let tau = std::f64::consts::TAU;
    let (mut t0, mut printed, mut conj) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n_theta {
        for j in 0..n_phi {
            let ab = ab_blocks(
                tau * i as f64 / n_theta as f64,
                tau * j as f64 / n_phi as f64,
            );
            t0.push(ab.t0_residual().abs());
            printed.push(ab.t1_bracket(BracketReading::AsPrinted).norm());
            conj.push(ab.t1_bracket(BracketReading::Conjugated).norm());
        }
    }
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    Ok(json!({
        "n_theta": n_theta,
        "n_phi": n_phi,
        "t0_max": max(&t0),
        "as_printed_max": max(&printed),
        "conjugated_max": max(&conj),
        "as_printed": printed,
        "conjugated": conj,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn karlsson(theta: f64, phi: f64, z1_arg: f64, branches: &str) -> Result<String, JsValue> {
    to_js(karlsson_json(theta, phi, z1_arg, branches))
}

#[wasm_bindgen]
pub fn evaluate(
    matrix: &str,
    gamma: &str,
    theta: f64,
    phi: f64,
    z1_arg: f64,
    branches: &str,
) -> Result<String, JsValue> {
    to_js(evaluate_json(matrix, gamma, theta, phi, z1_arg, branches))
}

#[wasm_bindgen]
pub fn bracket_scan(n_theta: usize, n_phi: usize) -> Result<String, JsValue> {
    to_js(bracket_scan_json(n_theta, n_phi))
}
