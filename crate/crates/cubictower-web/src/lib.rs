//! Browser bindings: classify a conductor, run a multiplet census, evaluate a
//! residue character. Every entry point returns a JSON string.

use cubictower::arith::{cubic_exponent, factorize};
use cubictower::census::{doublet_census, multiplet_census, quartet_census};
use cubictower::classify::{classify, rank_distribution, Label};
use cubictower::conductor::decompose;
use cubictower::residue_graph::{build_graph, symbol_matrix};
use cubictower::tower_rules::{quartet_rule_for, QuartetContext};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest bound accepted by the census page, to keep the tab responsive.
pub const WEB_MAX_BOUND: u32 = 1_000_000;

pub fn classify_value(c: u32, context: &str) -> Result<Value, String> {
    let c = c as u64;
    let cond = decompose(3, c).map_err(|e| e.to_string())?;
    let cg = classify(&cond).map_err(|e| e.to_string())?;
    let (matrix, edges) = if cond.t >= 2 {
        let m = symbol_matrix(&cond).map_err(|e| e.to_string())?;
        let edges = build_graph(&m).map(|g| g.prime_edges()).unwrap_or_default();
        (Some(m.a), edges)
    } else {
        (None, Vec::new())
    };
    let rule = match cg.label {
        Label::Quartet { .. } => {
            let ctx = if context.trim().is_empty() {
                QuartetContext { v: Some(1), ati: None }
            } else {
                QuartetContext::parse(context).map_err(|e| e.to_string())?
            };
            Some(quartet_rule_for(c, cg.label, &ctx).to_string())
        }
        _ => None,
    };
    Ok(json!({
        "conductor": c,
        "factorization": factorize(c).to_string(),
        "primes": cond.ramified_primes,
        "multiplicity": cond.multiplicity(),
        "label": cg.label.to_string(),
        "symbol": cg.symbol,
        "ranks": rank_distribution(&cg.label),
        "matrix": matrix,
        "edges": edges,
        "rule": rule,
    }))
}

pub fn census_value(ell: u32, bound: u32) -> Result<Value, String> {
    if bound > WEB_MAX_BOUND {
        return Err(format!("bound above {WEB_MAX_BOUND}"));
    }
    let (ell, bound) = (ell as u64, bound as u64);
    let m = multiplet_census(ell, bound).map_err(|e| e.to_string())?;
    let mut out = json!({ "multiplets": m });
    if ell == 3 {
        out["doublets"] = serde_json::to_value(doublet_census(bound).map_err(|e| e.to_string())?).unwrap();
        out["categories"] = serde_json::to_value(quartet_census(bound).map_err(|e| e.to_string())?).unwrap();
    }
    Ok(out)
}

pub fn character_value(ell: u32, modulus: u32, residue: i32) -> Result<Value, String> {
    let ch = cubic_exponent(ell as u64, modulus as u64, residue as i64).map_err(|e| e.to_string())?;
    serde_json::to_value(ch).map_err(|e| e.to_string())
}

fn to_js(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Factorization, residue graph, category and tower rule of a conductor.
#[wasm_bindgen(js_name = classifyConductor)]
pub fn classify_conductor(c: u32, context: &str) -> Result<String, JsError> {
    to_js(classify_value(c, context))
}

#[wasm_bindgen(js_name = runCensus)]
pub fn run_census(ell: u32, bound: u32) -> Result<String, JsError> {
    to_js(census_value(ell, bound))
}

#[wasm_bindgen(js_name = residueCharacter)]
pub fn residue_character(ell: u32, modulus: u32, residue: i32) -> Result<String, JsError> {
    to_js(character_value(ell, modulus, residue))
}
