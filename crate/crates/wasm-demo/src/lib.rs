//! Browser bindings for the static demo page in `www/`.

use serde_json::json;
use vdclab::equidist;
use vdclab::pet::{self, DescentBudget, PolyFamily};
use vdclab::sequences::{sample_mod1, SequenceSpec};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2_000_000;

fn js_err(e: vdclab::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn points(spec: &str, count: usize) -> Result<Vec<f64>, JsValue> {
    if count == 0 || count > MAX_POINTS {
        return Err(JsValue::from_str(&format!("point count must lie in 1..={MAX_POINTS}")));
    }
    let spec: SequenceSpec = spec.parse().map_err(js_err)?;
    sample_mod1(&spec, count).map_err(js_err)
}

/// Weyl magnitudes for `h = 1..=h_max`, star discrepancy and a 64-bin histogram, as JSON.
#[wasm_bindgen]
pub fn weyl_profile(spec: &str, n_max: usize, h_max: i32) -> Result<String, JsValue> {
    if !(1..=200).contains(&h_max) {
        return Err(JsValue::from_str("h_max must lie in 1..=200"));
    }
    let pts = points(spec, n_max)?;
    let freqs: Vec<i64> = (1..=i64::from(h_max)).collect();
    let report = equidist::weyl_report(&pts, &freqs).map_err(js_err)?;
    let disc = equidist::star_discrepancy(&pts).map_err(js_err)?;
    let mut bins = vec![0u32; 64];
    for &x in &pts {
        bins[((x * 64.0) as usize).min(63)] += 1;
    }
    let mags: Vec<f64> = report.entries.iter().map(|e| e.magnitude).collect();
    Ok(json!({"N": n_max, "magnitudes": mags, "d_star": disc.d_star, "histogram": bins}).to_string())
}

/// Window Weyl magnitudes `|(1/L) Σ_{n=M+1}^{M+L} e(h x_n)|` for `M = 0..=m_max`.
#[wasm_bindgen]
pub fn window_scan(spec: &str, window: usize, m_max: usize, h: i32) -> Result<Vec<f64>, JsValue> {
    let pts = points(spec, window.saturating_add(m_max))?;
    equidist::window_magnitudes(&pts, i64::from(h), window, m_max).map_err(js_err)
}

/// Characteristic vectors and family sizes along the descent chain, as JSON.
#[wasm_bindgen]
pub fn pet_chain(family: &str, max_steps: usize) -> Result<String, JsValue> {
    let f = PolyFamily::parse(family).map_err(js_err)?;
    let budget = DescentBudget { max_steps: max_steps.min(64), max_family_size: 1 << 12 };
    let chain = pet::descent_chain_with(&f, budget).map_err(js_err)?;
    let mut doc = chain.to_json();
    doc["labels"] = json!(chain.vectors.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(doc.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn profile_is_small_for_irrational_rotation() {
        let doc: Value = serde_json::from_str(&weyl_profile("poly:0,sqrt2", 10_000, 5).unwrap()).unwrap();
        let mags = doc["magnitudes"].as_array().unwrap();
        assert_eq!(mags.len(), 5);
        assert!(mags.iter().all(|m| m.as_f64().unwrap() < 0.01));
        let total: u64 = doc["histogram"].as_array().unwrap().iter().map(|b| b.as_u64().unwrap()).sum();
        assert_eq!(total, 10_000);
    }

    #[test]
    fn scan_length() {
        assert_eq!(window_scan("lin:phi+log", 100, 500, 1).unwrap().len(), 501);
    }

    #[test]
    fn chain_labels() {
        let doc: Value = serde_json::from_str(&pet_chain("x^2", 10).unwrap()).unwrap();
        assert_eq!(doc["labels"], json!(["(0,1)", "(1)"]));
        assert_eq!(doc["terminated"], true);
    }
}
