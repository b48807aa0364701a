//! Browser bindings. Every export returns a JSON string; errors come back as
//! a thrown string.

use isoembed::game::{global_comparison, Bilinear, GameOutcome, GameSpec, Strategy};
use isoembed::jointbinary::{entropy_gradient, Family, JointPoint};
use isoembed::treeopt::{maximize_payoff_on_slice, surface};
use isoembed::{GradientResult, Semantics};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_js(r: isoembed::Result<Value>) -> Result<String, JsValue> {
    r.map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Grid points per axis allowed from the page.
const MAX_GRID: usize = 401;

fn check_grid(grid: usize) -> isoembed::Result<()> {
    if !(2..=MAX_GRID).contains(&grid) {
        return Err(isoembed::Error::BadParams(format!(
            "grid must lie in 2..={MAX_GRID}, got {grid}"
        )));
    }
    Ok(())
}

pub fn surface_json(rho: f64, grid: usize) -> isoembed::Result<Value> {
    check_grid(grid)?;
    let cells = surface(rho, grid)?;
    // JSON has no NaN
    let cells: Vec<Value> = cells
        .iter()
        .map(|[p, q, r, inside]| json!([p, q, r.is_finite().then_some(*r), *inside == 1.0]))
        .collect();
    Ok(json!({ "rho": rho, "grid": grid, "cells": cells }))
}

pub fn optimize_json(rho: f64, grid: usize) -> isoembed::Result<Value> {
    check_grid(grid)?;
    let o = maximize_payoff_on_slice(rho, grid)?;
    Ok(json!({
        "rho": o.rho,
        "p": o.point[0],
        "q": o.point[1],
        "r": o.point[2],
        "value": o.value,
        "on_boundary": o.diagnostics.on_boundary,
    }))
}

fn gradient_json(g: &GradientResult) -> Value {
    match g {
        GradientResult::Finite(v) => json!(v),
        GradientResult::Diverging(_) => json!("diverging"),
        GradientResult::Undefined => json!("undefined"),
    }
}

/// Entropy gradient at `(a, b, c, d)` under both semantics, approaching
/// `b = c = 0` along `(0, 1, 1)`.
pub fn entropy_json(a: f64, b: f64, c: f64) -> isoembed::Result<Value> {
    let p = JointPoint::from_free(a, b, c)?;
    let mut out = serde_json::Map::new();
    for s in [Semantics::Constrained, Semantics::Limit] {
        let mode = Family::Correlated.mode(s, p.free());
        let v = match entropy_gradient(&p, &mode) {
            Ok(g) => gradient_json(&g),
            Err(e) => json!(format!("error: {e}")),
        };
        out.insert(s.as_str().into(), v);
    }
    Ok(Value::Object(out))
}

fn outcome_json(o: &GameOutcome) -> Value {
    let (kind, a, b) = match o.strategy {
        Strategy::Pure { x, y } => ("pure", x as f64, y as f64),
        Strategy::Mixed { p, q } => ("mixed", p, q),
    };
    json!({ "rho": o.rho, "strategy": kind, "x": a, "y": b, "payoff_x": o.payoffs.0, "payoff_y": o.payoffs.1 })
}

pub fn game_json(cx: &[f64], cy: &[f64]) -> isoembed::Result<Value> {
    let bilinear = |c: &[f64]| match c {
        [c0, c1, c2, c3] => Ok(Bilinear::new(*c0, *c1, *c2, *c3)),
        _ => Err(isoembed::Error::BadParams(
            "payoffs take 4 coefficients".into(),
        )),
    };
    let g = GameSpec::new(bilinear(cx)?, bilinear(cy)?)?;
    let c = global_comparison(&g);
    Ok(json!({
        "slices": c.slices.iter().map(outcome_json).collect::<Vec<_>>(),
        "chosen": outcome_json(&c.chosen),
    }))
}

#[wasm_bindgen(js_name = surface)]
pub fn js_surface(rho: f64, grid: usize) -> Result<String, JsValue> {
    to_js(surface_json(rho, grid))
}

#[wasm_bindgen(js_name = optimizeSlice)]
pub fn js_optimize_slice(rho: f64, grid: usize) -> Result<String, JsValue> {
    to_js(optimize_json(rho, grid))
}

#[wasm_bindgen(js_name = entropyGradient)]
pub fn js_entropy_gradient(a: f64, b: f64, c: f64) -> Result<String, JsValue> {
    to_js(entropy_json(a, b, c))
}

#[wasm_bindgen(js_name = game)]
pub fn js_game(cx: Vec<f64>, cy: Vec<f64>) -> Result<String, JsValue> {
    to_js(game_json(&cx, &cy))
}
