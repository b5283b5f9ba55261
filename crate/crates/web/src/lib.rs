//! wasm-bindgen entry points for the browser demo in `www/`.
//!
//! Each export returns a JSON string; the `*_value` functions hold the
//! logic so native tests can exercise it without a JS runtime.

use arbigeom::arrangement::{orthant_census_with_cap, q};
use arbigeom::montecarlo::{sample_gaussian_matrix, theoretical_probability};
use arbigeom::ratmath::{format_rational, rational_to_f64};
use arbigeom::{detect, estimate_arbitrage_probability, is_generic, Result, SimConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest m the census page accepts; 2^(m-1) LPs per draw.
pub const MAX_CENSUS_M: usize = 10;
pub const MAX_TABLE: usize = 40;
pub const MAX_SWEEP_TRIALS: u64 = 200_000;

pub fn qtable_value(max_m: usize, max_n: usize) -> Value {
    let (max_m, max_n) = (max_m.clamp(1, MAX_TABLE), max_n.clamp(1, MAX_TABLE));
    let rows: Vec<Vec<String>> =
        (1..=max_m).map(|m| (1..=max_n).map(|n| q(m, n).to_string()).collect()).collect();
    json!({ "max_m": max_m, "max_n": max_n, "rows": rows })
}

pub fn census_value(m: usize, n: usize, seed: u64) -> Result<Value> {
    if m > MAX_CENSUS_M {
        return Err(arbigeom::Error::CensusTooLarge { m, max: MAX_CENSUS_M });
    }
    let payoff = sample_gaussian_matrix(m, n, seed, 0);
    let census = orthant_census_with_cap(&payoff, MAX_CENSUS_M)?;
    let generic = if n <= m { Some(is_generic(&payoff)?.is_generic()) } else { None };
    let verdict = detect(&payoff);
    let matrix: Vec<Vec<f64>> =
        payoff.matrix().to_rows().iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
    let hits: Vec<String> = census.hit_vectors().iter().map(ToString::to_string).collect();
    Ok(json!({
        "m": m,
        "n": n,
        "seed": seed,
        "matrix": matrix,
        "hits": hits,
        "count": census.count,
        "q": q(m, n).to_string(),
        "total": 1u64 << m,
        "generic": generic,
        "verdict": verdict.tag(),
    }))
}

pub fn sweep_value(m: usize, trials: u64, seed: u64) -> Result<Value> {
    if m == 0 {
        return Err(arbigeom::Error::Dimension("sweep needs m ≥ 1".into()));
    }
    let trials = trials.clamp(1, MAX_SWEEP_TRIALS);
    let mut points = Vec::with_capacity(m);
    for n in 1..=m {
        let report = estimate_arbitrage_probability(&SimConfig::new(m, n, trials, seed))?;
        let exact = theoretical_probability(m, n);
        points.push(json!({
            "n": n,
            "hits": report.hits,
            "estimate": report.estimate,
            "ci95_lo": report.ci95.0,
            "ci95_hi": report.ci95.1,
            "theoretical": rational_to_f64(&exact),
            "theoretical_exact": format_rational(&exact),
        }));
    }
    Ok(json!({ "m": m, "trials": trials, "seed": seed, "points": points }))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn qtable_json(max_m: usize, max_n: usize) -> String {
    qtable_value(max_m, max_n).to_string()
}

#[wasm_bindgen]
pub fn census_json(m: usize, n: usize, seed: u64) -> std::result::Result<String, JsValue> {
    to_js(census_value(m, n, seed))
}

#[wasm_bindgen]
pub fn sweep_json(m: usize, trials: u64, seed: u64) -> std::result::Result<String, JsValue> {
    to_js(sweep_value(m, trials, seed))
}
