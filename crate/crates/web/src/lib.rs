//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export returns a JSON string; numbers inside core reports are
//! decimal strings, as in the CLI output.

use hecke_core::arith::{is_squarefree, squarefree_primes};
use hecke_core::equidist::{run_squarefree_experiment, spectrum, StratumFunction};
use hecke_core::number_field::NumberFieldSpec;
use hecke_core::satake::{ratio_and_bound, satake_row, GlobalOperatorSpec};
use hecke_core::supersingular::{enumerate_locus, hecke_matrix, ModularPolynomialLibrary};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest characteristic the page accepts.
pub const MAX_P: u64 = 5000;
/// Largest level bound for the Satake table.
pub const MAX_M: u64 = 2000;

fn check_p(p: u64) -> Result<(), String> {
    if p > MAX_P {
        return Err(format!("p must be at most {MAX_P} in the browser"));
    }
    Ok(())
}

fn to_json<T: Serialize>(x: &T) -> Result<String, String> {
    serde_json::to_string(x).map_err(|e| e.to_string())
}

/// Eigenvalues of `T_ell` on the locus at `p`.
pub fn spectrum_report(p: u64, ell: u64) -> Result<String, String> {
    check_p(p)?;
    let lib = ModularPolynomialLibrary::builtin().map_err(|e| e.to_string())?;
    let locus = enumerate_locus(p).map_err(|e| e.to_string())?;
    let phi = lib.get(ell).map_err(|e| e.to_string())?;
    let t = hecke_matrix(&locus, phi).map_err(|e| e.to_string())?;
    to_json(&spectrum(&locus, &t).map_err(|e| e.to_string())?)
}

/// Squarefree convergence for a random unit vector and the first indicator.
/// `primes` is comma-separated.
pub fn convergence_report(p: u64, primes: &str, seed: u64) -> Result<String, String> {
    check_p(p)?;
    let levels = primes
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad prime {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let lib = ModularPolynomialLibrary::builtin().map_err(|e| e.to_string())?;
    let locus = enumerate_locus(p).map_err(|e| e.to_string())?;
    let random = StratumFunction::random_unit(&locus, seed);
    let indicator = StratumFunction::indicator(&locus, 0).map_err(|e| e.to_string())?;
    let reports = [(format!("random(seed={seed})"), random), ("indicator(0)".to_string(), indicator)]
        .iter()
        .map(|(name, v)| run_squarefree_experiment(&locus, &levels, v, name, &lib))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    to_json(&reports)
}

/// Norm/degree against the bound for every `r` and every squarefree
/// unramified `m` in `2..=m_max`. `field` is empty for Q.
pub fn satake_table(n: usize, field: &str, m_max: u64) -> Result<String, String> {
    if m_max > MAX_M {
        return Err(format!("m_max must be at most {MAX_M} in the browser"));
    }
    let field = if field.trim().is_empty() {
        NumberFieldSpec::rationals()
    } else {
        NumberFieldSpec::parse(field).map_err(|e| e.to_string())?
    };
    let mut rows = Vec::new();
    for r in 1..n {
        for m in 2..=m_max {
            let unramified = squarefree_primes(m).is_ok_and(|ps| ps.iter().all(|&l| !field.is_excluded(l)));
            if !is_squarefree(m) || !unramified {
                continue;
            }
            let spec = GlobalOperatorSpec::new(n, r, m, field.clone()).map_err(|e| e.to_string())?;
            let exact = ratio_and_bound(&spec).map_err(|e| e.to_string())?;
            let row = satake_row(&spec).map_err(|e| e.to_string())?;
            rows.push(json!({
                "row": row,
                "ratio": exact.ratio_f64(),
                "bound": exact.bound_f64(),
            }));
        }
    }
    to_json(&rows)
}

#[wasm_bindgen]
pub fn spectrum_json(p: u64, ell: u64) -> Result<String, JsValue> {
    spectrum_report(p, ell).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convergence_json(p: u64, primes: &str, seed: u64) -> Result<String, JsValue> {
    convergence_report(p, primes, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn satake_table_json(n: usize, field: &str, m_max: u64) -> Result<String, JsValue> {
    satake_table(n, field, m_max).map_err(|e| JsValue::from_str(&e))
}
