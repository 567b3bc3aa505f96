//! Browser bindings: a verdict, a raster and a sweep, each returned as plain
//! data the page can use directly. The `*_json` and `render_pixels`
//! functions are ordinary Rust and are what the tests exercise.

use selfaffine_core::connect::{classify, inner_band, outer_band};
use selfaffine_core::params::{normalize_sign, validate};
use selfaffine_core::rational::int;
use selfaffine_core::render::rasterize;
use selfaffine_core::{parse_rational, AffinePair, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Points allowed per render; matches the command-line default.
pub const POINT_BUDGET: u64 = 1_000_000;

fn pair(p: i32, q: i32, a: &str, m: u32, n: u32) -> Result<AffinePair, String> {
    let a = parse_rational("a", a).map_err(|e| e.to_string())?;
    AffinePair::new(p.into(), q.into(), a, m, n).map_err(|e| e.to_string())
}

fn band(b: (Rational, Option<Rational>)) -> Value {
    json!([b.0.to_string(), b.1.map(|h| h.to_string())])
}

fn verdict_value(pair: &AffinePair) -> Value {
    let norm = normalize_sign(pair);
    let v = classify(&norm);
    json!({
        "a": pair.lower_left().to_string(),
        "verdict": v.status_name(),
        "branch": v.branch.name(),
        "inequality": v.satisfied_inequality,
        "outer_band": band(outer_band(norm.q(), norm.n())),
        "inner_band": band(inner_band(norm.q(), norm.n())),
        "main_theorem_ok": validate(&norm).main_theorem_ok,
    })
}

pub fn decide_json(p: i32, q: i32, a: &str, m: u32, n: u32) -> Result<String, String> {
    Ok(verdict_value(&pair(p, q, a, m, n)?).to_string())
}

/// Row-major 8-bit grey pixels, top row first; 0 marks a point.
pub fn render_pixels(
    p: i32,
    q: i32,
    a: &str,
    m: u32,
    n: u32,
    depth: u32,
    size: u32,
) -> Result<Vec<u8>, String> {
    let pr = pair(p, q, a, m, n)?;
    rasterize(&pr, depth, size, POINT_BUDGET)
        .map(|r| r.pixels)
        .map_err(|e| e.to_string())
}

/// Verdicts at `a_min + k (a_max - a_min)/(steps - 1)`.
pub fn sweep_json(
    p: i32,
    q: i32,
    m: u32,
    n: u32,
    a_min: &str,
    a_max: &str,
    steps: u32,
) -> Result<String, String> {
    let lo = parse_rational("a_min", a_min).map_err(|e| e.to_string())?;
    let hi = parse_rational("a_max", a_max).map_err(|e| e.to_string())?;
    if steps == 0 || steps > 10_000 || lo > hi {
        return Err("need 1 <= steps <= 10000 and a_min <= a_max".into());
    }
    let step = if steps == 1 {
        int(0)
    } else {
        (&hi - &lo) / int(i64::from(steps - 1))
    };
    let base = pair(p, q, "0", m, n)?;
    let rows: Vec<Value> = (0..steps)
        .map(|k| verdict_value(&base.with_lower_left(&lo + &step * int(i64::from(k)))))
        .collect();
    Ok(Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn decide(p: i32, q: i32, a: &str, m: u32, n: u32) -> Result<String, JsValue> {
    decide_json(p, q, a, m, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn render(
    p: i32,
    q: i32,
    a: &str,
    m: u32,
    n: u32,
    depth: u32,
    size: u32,
) -> Result<Vec<u8>, JsValue> {
    render_pixels(p, q, a, m, n, depth, size).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep(
    p: i32,
    q: i32,
    m: u32,
    n: u32,
    a_min: &str,
    a_max: &str,
    steps: u32,
) -> Result<String, JsValue> {
    sweep_json(p, q, m, n, a_min, a_max, steps).map_err(|e| JsValue::from_str(&e))
}
