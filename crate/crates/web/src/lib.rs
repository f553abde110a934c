//! Browser bindings. Every export returns a JSON string: a report, or
//! `{"error": ...}` when the input is rejected.

use qtwist_core::apps::finite_torus;
use qtwist_core::matspan::Tolerance;
use qtwist_core::report::Report;
use qtwist_core::spec::{resolve, verify};
use qtwist_core::suite::skew_scenarios;
use wasm_bindgen::prelude::wasm_bindgen;

/// Larger tori stall the page.
pub const MAX_TORUS_N: usize = 8;

fn report_json(r: &Report) -> String {
    serde_json::to_string(r).expect("reports serialize")
}

fn error_json(e: impl serde::Serialize) -> String {
    serde_json::json!({ "error": e }).to_string()
}

/// Classification of the finite torus `C*(Z/N) ⊠ C*(Z/N)` at twist `k`.
#[wasm_bindgen]
pub fn torus(n: usize, k: usize) -> String {
    if n > MAX_TORUS_N {
        return error_json(format!("N must be at most {MAX_TORUS_N}"));
    }
    let tol = Tolerance::default();
    match finite_torus(n, k, tol) {
        Ok(t) => report_json(&t.report(tol)),
        Err(e) => error_json(e.to_string()),
    }
}

/// The graded `M₂` example and its anticommuting generators.
#[wasm_bindgen]
pub fn skew() -> String {
    let reports = skew_scenarios(Tolerance::default());
    serde_json::to_string(&reports[0]).expect("reports serialize")
}

/// Runs `qtwist verify` on spec text. A negative tolerance keeps the
/// spec's own.
#[wasm_bindgen]
pub fn verify_spec(text: &str, tolerance: f64) -> String {
    let t = (tolerance > 0.0).then_some(tolerance);
    match resolve(text, t) {
        Ok(s) => report_json(&verify(&s)),
        Err(e) => error_json(e),
    }
}
