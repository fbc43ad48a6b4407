//! Browser bindings. Each exported function returns a JSON string; failures
//! come back as `{"error": "..."}`.

use contact_groups::classify::{classify, CaseTag};
use contact_groups::embedding::angle_lift;
use contact_groups::frame::{canonical_frame, CanonicalFrame};
use contact_groups::models::{sl2_factorize, Mat2};
use contact_groups::presets;
use contact_groups::pullback::{beta_at, SecondKindChart};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Out = Result<Value, String>;

fn finish(r: Out) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn chart_for(preset: &str) -> Result<(CaseTag, SecondKindChart), String> {
    let p = presets::get(preset).map_err(|e| e.to_string())?;
    let res = canonical_frame(&p.constants, &p.contact)
        .and_then(|cf| classify(&cf))
        .map_err(|e| e.to_string())?;
    let chart = SecondKindChart::from_classification(&res).map_err(|e| e.to_string())?;
    Ok((res.case_tag, chart))
}

pub fn classify_preset(preset: &str) -> Out {
    let p = presets::get(preset).map_err(|e| e.to_string())?;
    let res = canonical_frame(&p.constants, &p.contact)
        .and_then(|cf| classify(&cf))
        .map_err(|e| e.to_string())?;
    serde_json::to_value(&res).map_err(|e| e.to_string())
}

/// Classification of the canonical pattern with constants `a, b, m1, m2`.
pub fn classify_canonical(a: f64, b: f64, m1: f64, m2: f64) -> Out {
    let res = classify(&CanonicalFrame::from_constants(a, b, m1, m2)).map_err(|e| e.to_string())?;
    serde_json::to_value(&res).map_err(|e| e.to_string())
}

/// `beta` and the lifted angle `f` along `z` at fixed `(x, y)`.
pub fn lift_curve(preset: &str, x: f64, y: f64, z_lo: f64, z_hi: f64, n: usize) -> Out {
    if n < 2 || !(z_hi > z_lo) {
        return Err("need n >= 2 and z_hi > z_lo".into());
    }
    let (tag, chart) = chart_for(preset)?;
    let zs: Vec<f64> = (0..n)
        .map(|i| z_lo + (z_hi - z_lo) * i as f64 / (n - 1) as f64)
        .collect();
    let f = angle_lift(&chart, x, y, &zs).map_err(|e| e.to_string())?;
    let (bx, by): (Vec<f64>, Vec<f64>) = zs
        .iter()
        .map(|&z| {
            let b = beta_at(&chart, x, y, z);
            (b.bx, b.by)
        })
        .unzip();
    Ok(json!({ "case_tag": tag, "z": zs, "bx": bx, "by": by, "f": f }))
}

pub fn factor_sl2_matrix(a11: f64, a12: f64, a21: f64, a22: f64) -> Out {
    let a = Mat2::new(a11, a12, a21, a22);
    let f = sl2_factorize(&a).map_err(|e| e.to_string())?;
    Ok(json!({ "theta": f.t1, "v": f.t2, "u": f.t3, "residual": f.residual }))
}

#[wasm_bindgen]
pub fn classify_json(preset: &str) -> String {
    finish(classify_preset(preset))
}

#[wasm_bindgen]
pub fn classify_canonical_json(a: f64, b: f64, m1: f64, m2: f64) -> String {
    finish(classify_canonical(a, b, m1, m2))
}

#[wasm_bindgen]
pub fn lift_json(preset: &str, x: f64, y: f64, z_lo: f64, z_hi: f64, n: usize) -> String {
    finish(lift_curve(preset, x, y, z_lo, z_hi, n))
}

#[wasm_bindgen]
pub fn factor_sl2_json(a11: f64, a12: f64, a21: f64, a22: f64) -> String {
    finish(factor_sl2_matrix(a11, a12, a21, a22))
}
