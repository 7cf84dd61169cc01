//! Browser bindings for the static demo page in `www/`.
//!
//! Each export returns JSON. The plain functions below the bindings do the
//! work so they can be tested natively.

use braidlab::adjacency::{self, AdjacencyCertificate};
use braidlab::braid::fence_render;
use braidlab::cobordism;
use braidlab::invariants::upsilon_function_of;
use braidlab::{BraidWord, TorusKnotId};
use serde_json::json;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn upsilon_profile(knot: &str) -> Result<String, JsError> {
    profile_json(knot).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cobordism_distance(k: &str, t: &str) -> Result<String, JsError> {
    distance_json(k, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certificate_frames(construction: &str, m: usize) -> Result<String, JsError> {
    frames_json(construction, m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fence(word: &str) -> Result<String, JsError> {
    word.parse::<BraidWord>()
        .and_then(|w| fence_render(&w))
        .map_err(|e| JsError::new(&e.to_string()))
}

/// Υ segments plus sampled points for plotting.
pub fn profile_json(knot: &str) -> Result<String, String> {
    let k: TorusKnotId = knot.parse().map_err(|e: braidlab::Error| e.to_string())?;
    let f = upsilon_function_of(&k).map_err(|e| e.to_string())?;
    let (lo, _) = f.domain();
    let mut ts = vec![lo];
    ts.extend(f.segments().iter().map(|s| s.to.clone()));
    ts.dedup();
    let points: Vec<(String, String)> = ts.iter().map(|t| (t.to_string(), f.eval(t).unwrap().to_string())).collect();
    Ok(json!({
        "knot": k.to_string(),
        "genus": k.genus(),
        "tau": k.tau(),
        "upsilon": k.upsilon(),
        "segments": f,
        "points": points,
    })
    .to_string())
}

pub fn distance_json(k: &str, t: &str) -> Result<String, String> {
    let k: TorusKnotId = k.parse().map_err(|e: braidlab::Error| e.to_string())?;
    let t: TorusKnotId = t.parse().map_err(|e: braidlab::Error| e.to_string())?;
    match cobordism::distance(&k, &t) {
        Ok(r) => Ok(json!({"from": k.to_string(), "to": t.to_string(), "result": r}).to_string()),
        Err(e) => Err(format!("{e} (lower bound {})", cobordism::lower_bound(&k, &t))),
    }
}

fn build(construction: &str, m: usize) -> Result<AdjacencyCertificate, String> {
    match construction {
        "index3" => adjacency::adj_index3(m),
        "index4" => adjacency::adj_index4(m),
        "square" => adjacency::adj_square(m),
        "staircase" => adjacency::adj_staircase(m),
        other => return Err(format!("unknown construction {other:?}")),
    }
    .map_err(|e| e.to_string())
}

/// Words at each phase boundary of a certificate, with fence drawings, and
/// the verdict of a full replay.
pub fn frames_json(construction: &str, m: usize) -> Result<String, String> {
    if m > 12 {
        return Err("the page keeps m at 12 or below".into());
    }
    let cert = build(construction, m)?;
    let frames: Vec<_> = cert
        .phase_words()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(name, w)| {
            json!({
                "phase": name,
                "word": w.to_string(),
                "length": w.len(),
                "fence": fence_render(&w).unwrap_or_default(),
            })
        })
        .collect();
    Ok(json!({
        "target": cert.target.to_string(),
        "source": cert.source.to_string(),
        "steps": cert.steps.len(),
        "deletions": cert.deletions(),
        "verdict": adjacency::verify(&cert).to_string(),
        "frames": frames,
    })
    .to_string())
}
