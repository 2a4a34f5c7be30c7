//! JSON literals for the toolkit's value types.
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs with the
//! dimension inferred from the shape. States are tagged objects, either
//! `{"kind":"vector","v":[...]}` (auto-normalised) or
//! `{"kind":"density","rho": matrix}`. Algebras are `{dim_h, basis: [...]}`.
//! Every loader re-validates the full invariants of the type it produces, so
//! a parsed value is as trustworthy as a constructed one.

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, HermitianOp, LinalgError};
use crate::segalgebra::{AlgebraError, Segalgebra};
use crate::states::{AlgState, StateError};

/// Failures while reading JSON literals.
#[derive(Debug, Error)]
pub enum JsonError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error("expected {expected} at {path}")]
    Shape { path: String, expected: &'static str },
}

fn shape(path: &str, expected: &'static str) -> JsonError {
    JsonError::Shape {
        path: path.to_string(),
        expected,
    }
}

fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex_from_json(v: &Value, path: &str) -> Result<Complex64, JsonError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| shape(path, "a [re, im] pair"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| shape(path, "a finite number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| shape(path, "a finite number"))?;
    Ok(Complex64::new(re, im))
}

pub fn vector_to_json(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| complex_to_json(*z)).collect())
}

pub fn vector_from_json(v: &Value) -> Result<Vec<Complex64>, JsonError> {
    let entries = v.as_array().ok_or_else(|| shape("vector", "an array"))?;
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| complex_from_json(e, &format!("vector[{i}]")))
        .collect()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.dim())
        .map(|i| Value::Array((0..m.dim()).map(|j| complex_to_json(m.at(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value) -> Result<ComplexMatrix, JsonError> {
    let rows = v.as_array().ok_or_else(|| shape("matrix", "an array of rows"))?;
    let dim = rows.len();
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| shape(&format!("matrix[{i}]"), "a row of matching length"))?;
        for (j, cell) in cells.iter().enumerate() {
            entries.push(complex_from_json(cell, &format!("matrix[{i}][{j}]"))?);
        }
    }
    Ok(ComplexMatrix::new(dim, entries)?)
}

pub fn hermitian_to_json(op: &HermitianOp) -> Value {
    matrix_to_json(op.mat())
}

/// Load and validate a Hermitian operator.
pub fn hermitian_from_json(v: &Value) -> Result<HermitianOp, JsonError> {
    Ok(HermitianOp::new(matrix_from_json(v)?)?)
}

pub fn state_to_json(state: &AlgState) -> Value {
    json!({ "kind": "density", "rho": matrix_to_json(state.density().mat()) })
}

/// Load a state literal: a unit-normalised vector or a validated density.
pub fn state_from_json(v: &Value) -> Result<AlgState, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape("state", "an object with a \"kind\" tag"))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("vector") => {
            let vec = vector_from_json(
                obj.get("v").ok_or_else(|| shape("state.v", "a vector"))?,
            )?;
            Ok(AlgState::from_vector(&vec)?)
        }
        Some("density") => {
            let rho = matrix_from_json(
                obj.get("rho").ok_or_else(|| shape("state.rho", "a matrix"))?,
            )?;
            Ok(AlgState::from_density(rho)?)
        }
        _ => Err(shape("state.kind", "\"vector\" or \"density\"")),
    }
}

pub fn segalgebra_to_json(s: &Segalgebra) -> Value {
    json!({
        "dim_h": s.dim_h(),
        "basis": s.basis().iter().map(hermitian_to_json).collect::<Vec<_>>(),
    })
}

/// Load an algebra literal, re-validating closure and the identity axiom.
pub fn segalgebra_from_json(v: &Value) -> Result<Segalgebra, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| shape("algebra", "an object"))?;
    let dim_h = obj
        .get("dim_h")
        .and_then(Value::as_u64)
        .ok_or_else(|| shape("algebra.dim_h", "a positive integer"))? as usize;
    let basis_json = obj
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("algebra.basis", "an array of matrices"))?;
    let basis: Vec<HermitianOp> = basis_json
        .iter()
        .map(hermitian_from_json)
        .collect::<Result<_, _>>()?;
    Ok(Segalgebra::from_operators(dim_h, &basis)?)
}
