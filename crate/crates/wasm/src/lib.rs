//! Browser bindings: density of a set, its ratio trajectory, and the Δ-limit of a function.
//! Inputs use the same text forms as the command line.

use std::sync::Arc;

use deltascale::convergence::{default_epsilons, delta_limit};
use deltascale::density::{density, ratio_trajectory};
use deltascale::oracle::{approx, geometric_horizons};
use deltascale::{input, DeltaSet, Error};
use wasm_bindgen::prelude::*;

fn set(scale: &str, text: &str) -> Result<DeltaSet, Error> {
    let scale = Arc::new(input::parse_scale(scale)?);
    input::parse_set(text, Some(&scale))
}

pub fn density_json(scale: &str, text: &str) -> Result<String, String> {
    let s = set(scale, text).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&density(&s)).expect("serializable"))
}

/// `[[t, ratio], …]` as floats at horizons `a + 2^k`, for plotting.
pub fn trajectory_json(scale: &str, text: &str, count: u32) -> Result<String, String> {
    let s = set(scale, text).map_err(|e| e.to_string())?;
    let hs: Vec<_> = geometric_horizons(s.scale(), 2, count.min(40))
        .into_iter()
        .filter(|t| s.scale().sigma(t).is_ok_and(|n| &n > s.scale().min_point()))
        .collect();
    let tr = ratio_trajectory(&s, &hs).map_err(|e| e.to_string())?;
    let points: Vec<[f64; 2]> = tr.samples.iter().map(|p| [approx(&p.t), approx(&p.ratio)]).collect();
    Ok(serde_json::to_string(&points).expect("serializable"))
}

pub fn limit_json(scale: &str, function: &str) -> Result<String, String> {
    let scale = Arc::new(input::parse_scale(scale).map_err(|e| e.to_string())?);
    let f = input::parse_function(function, Some(&scale)).map_err(|e| e.to_string())?;
    let v = delta_limit(&f, &default_epsilons()).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&v).expect("serializable"))
}

#[wasm_bindgen(js_name = density)]
pub fn density_js(scale: &str, set: &str) -> Result<String, JsValue> {
    density_json(scale, set).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_js(scale: &str, set: &str, count: u32) -> Result<String, JsValue> {
    trajectory_json(scale, set, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = limit)]
pub fn limit_js(scale: &str, function: &str) -> Result<String, JsValue> {
    limit_json(scale, function).map_err(|e| JsValue::from_str(&e))
}
