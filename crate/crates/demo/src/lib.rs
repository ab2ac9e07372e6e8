//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function takes and returns JSON text in the same formats as the CLI.

use wasm_bindgen::prelude::*;

use blockdec::corpus::{random_block_sum, random_interval_sum};
use blockdec::decomp::{decompose_blocks, DecomposeOptions, Outcome};
use blockdec::fixtures;
use blockdec::gridmod::{GridModule, GridShape};
use blockdec::io::{
    read_module, residue_json, summands_json, write_module, Report, VerdictTag, ViolationJson,
};
use blockdec::koszul::{exactness_profile, is_locally_block_decomposable, Verdict};
use blockdec::linalg::PrimeField;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn load(text: &str) -> Result<Result<GridModule, Report>, JsError> {
    let m = read_module(text, None).map_err(err)?;
    Ok(match m.validate().into_iter().next() {
        Some(v) => {
            let mut r = Report::with_verdict(VerdictTag::Invalid);
            r.violation = Some(ViolationJson::new(&v, m.field()));
            Err(r)
        }
        None => Ok(m),
    })
}

/// Module JSON for a bundled example.
#[wasm_bindgen]
pub fn fixture(name: &str) -> Result<String, JsError> {
    Ok(write_module(
        &fixtures::by_name(name, PrimeField::default()).map_err(err)?,
    ))
}

/// Module JSON for a random scrambled sum; `shape` is comma separated.
#[wasm_bindgen]
pub fn random_module(
    shape: &str,
    count: usize,
    intervals: bool,
    seed: u64,
) -> Result<String, JsError> {
    let sizes = shape
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let shape = GridShape::new(sizes).map_err(err)?;
    let f = PrimeField::default();
    let m = if intervals {
        random_interval_sum(&shape, count, seed, f).map_err(err)?.0
    } else {
        random_block_sum(&shape, count, seed, f).map_err(err)?.0
    };
    Ok(write_module(&m))
}

/// Criterion verdict with witness and exactness profile.
#[wasm_bindgen]
pub fn check(module: &str) -> Result<String, JsError> {
    let m = match load(module)? {
        Ok(m) => m,
        Err(r) => return Ok(r.to_json()),
    };
    let mut report = match is_locally_block_decomposable(&m).map_err(err)? {
        Verdict::BlockDecomposable => Report::with_verdict(VerdictTag::BlockDecomposable),
        Verdict::NotBlockDecomposable(w) => {
            let mut r = Report::with_verdict(VerdictTag::NotBlockDecomposable);
            r.witness = Some(w);
            r
        }
    };
    report.profile = Some(exactness_profile(&m).map_err(err)?);
    Ok(report.to_json())
}

/// Block decomposition report.
#[wasm_bindgen]
pub fn decompose(module: &str, seed: u64) -> Result<String, JsError> {
    let m = match load(module)? {
        Ok(m) => m,
        Err(r) => return Ok(r.to_json()),
    };
    let opts = DecomposeOptions {
        seed,
        ..Default::default()
    };
    let report = match decompose_blocks(&m, &opts).map_err(err)? {
        Outcome::Decomposed(d) => {
            let mut r = Report::with_verdict(VerdictTag::BlockDecomposable);
            r.method = Some(d.method);
            r.decomposition = Some(summands_json(&d));
            r
        }
        Outcome::Failure(w) => {
            let mut r = Report::with_verdict(VerdictTag::NotBlockDecomposable);
            r.witness = Some(w);
            r
        }
        Outcome::Incomplete { partial, residue } => {
            let mut r = Report::with_verdict(VerdictTag::Incomplete);
            r.method = Some(partial.method);
            r.decomposition = Some(summands_json(&partial));
            r.residue = Some(residue_json(&residue));
            r
        }
    };
    Ok(report.to_json())
}
