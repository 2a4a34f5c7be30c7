//! Scenario files: a Hilbert-space dimension, a named bag of Hermitian
//! operators, a state, a command, and command-specific parameters.
//!
//! Everything is validated up front so command handlers can assume
//! well-formed inputs: operators must be Hermitian with the declared
//! dimension, the state must match, and any `spin_triples` parameter must
//! name operator triples satisfying the angular-momentum commutation
//! relation (so bundled spin matrices are checked rather than trusted).

use std::collections::BTreeMap;

use beable_core::json;
use beable_core::linalg::HermitianOp;
use beable_core::states::AlgState;
use beable_core::tol::{set_tolerances, Tolerances};
use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Generate,
    CheckBeable,
    BubDefinite,
    Family,
    Maximal,
    Decompose,
    VerifyTheorems,
}

impl CommandKind {
    pub fn parse(s: &str) -> Option<CommandKind> {
        match s {
            "generate" => Some(CommandKind::Generate),
            "check-beable" => Some(CommandKind::CheckBeable),
            "bub-definite" => Some(CommandKind::BubDefinite),
            "family" => Some(CommandKind::Family),
            "maximal" => Some(CommandKind::Maximal),
            "decompose" => Some(CommandKind::Decompose),
            "verify-theorems" => Some(CommandKind::VerifyTheorems),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Generate => "generate",
            CommandKind::CheckBeable => "check-beable",
            CommandKind::BubDefinite => "bub-definite",
            CommandKind::Family => "family",
            CommandKind::Maximal => "maximal",
            CommandKind::Decompose => "decompose",
            CommandKind::VerifyTheorems => "verify-theorems",
        }
    }
}

#[derive(Debug)]
pub struct Scenario {
    pub dim_h: usize,
    pub operators: BTreeMap<String, HermitianOp>,
    pub state: Option<AlgState>,
    /// Present when the state literal was a vector; already normalised.
    pub state_vector: Option<Vec<Complex64>>,
    pub command: CommandKind,
    pub params: Map<String, Value>,
    pub tol_overrides: Option<Map<String, Value>>,
    /// Original document, echoed back in reports.
    pub raw: Value,
}

impl Scenario {
    pub fn from_str(text: &str, path: &str) -> Result<Scenario, CliError> {
        let raw: Value =
            serde_json::from_str(text).map_err(|e| CliError::parse(path, &e))?;
        Scenario::from_value(raw)
    }

    pub fn from_value(raw: Value) -> Result<Scenario, CliError> {
        let obj = raw
            .as_object()
            .ok_or_else(|| CliError::Validation("scenario must be a JSON object".into()))?;

        let dim_h = obj
            .get("dim_h")
            .and_then(Value::as_u64)
            .filter(|&d| d >= 1)
            .ok_or_else(|| {
                CliError::Validation("scenario.dim_h must be a positive integer".into())
            })? as usize;

        let command_str = obj
            .get("command")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::Validation("scenario.command must be a string".into()))?;
        let command = CommandKind::parse(command_str).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown command {command_str:?}; expected one of generate, check-beable, \
                 bub-definite, family, maximal, decompose, verify-theorems"
            ))
        })?;

        let mut operators = BTreeMap::new();
        if let Some(ops) = obj.get("operators") {
            let map = ops.as_object().ok_or_else(|| {
                CliError::Validation("scenario.operators must be an object".into())
            })?;
            for (name, lit) in map {
                let op = json::hermitian_from_json(lit).map_err(|e| {
                    CliError::Validation(format!("operator {name:?}: {e}"))
                })?;
                if op.dim() != dim_h {
                    return Err(CliError::Validation(format!(
                        "operator {name:?} is {got}x{got} but dim_h is {dim_h}",
                        got = op.dim()
                    )));
                }
                operators.insert(name.clone(), op);
            }
        }

        let (state, state_vector) = match obj.get("state") {
            None | Some(Value::Null) => (None, None),
            Some(lit) => parse_state(lit, dim_h)?,
        };

        let params = match obj.get("params") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => {
                return Err(CliError::Validation(
                    "scenario.params must be an object".into(),
                ))
            }
        };

        let tol_overrides = match obj.get("tol_overrides") {
            None | Some(Value::Null) => None,
            Some(Value::Object(m)) => Some(m.clone()),
            Some(_) => {
                return Err(CliError::Validation(
                    "scenario.tol_overrides must be an object".into(),
                ))
            }
        };

        let scenario = Scenario {
            dim_h,
            operators,
            state,
            state_vector,
            command,
            params,
            tol_overrides,
            raw,
        };
        scenario.validate_spin_triples()?;
        Ok(scenario)
    }

    /// Bundled spin matrices carry a `spin_triples` parameter naming
    /// operator triples (a, b, c) that must satisfy `ab - ba = i c`
    /// cyclically. Checked here so a corrupted corpus cannot run.
    fn validate_spin_triples(&self) -> Result<(), CliError> {
        let Some(triples) = self.params.get("spin_triples") else {
            return Ok(());
        };
        let list = triples.as_array().ok_or_else(|| {
            CliError::Validation("params.spin_triples must be an array of name triples".into())
        })?;
        for entry in list {
            let names: Vec<&str> = entry
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect())
                .unwrap_or_default();
            if names.len() != 3 {
                return Err(CliError::Validation(
                    "each spin triple must list three operator names".into(),
                ));
            }
            for rot in 0..3 {
                let a = self.op(names[rot])?;
                let b = self.op(names[(rot + 1) % 3])?;
                let c = self.op(names[(rot + 2) % 3])?;
                let comm = &a.mat().matmul(b.mat()) - &b.mat().matmul(a.mat());
                let residual =
                    (&comm - &c.mat().scale(Complex64::i())).frobenius_norm();
                let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
                if residual > 1e-9 * scale {
                    return Err(CliError::Validation(format!(
                        "spin triple ({}, {}, {}) violates the commutation relation: \
                         residual {residual:.3e}",
                        names[rot],
                        names[(rot + 1) % 3],
                        names[(rot + 2) % 3],
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn op(&self, name: &str) -> Result<&HermitianOp, CliError> {
        self.operators.get(name).ok_or_else(|| {
            CliError::Validation(format!("scenario defines no operator named {name:?}"))
        })
    }

    /// Operators listed under a params key, or every operator in name order
    /// when the key is absent.
    pub fn selected_ops(&self, key: &str) -> Result<Vec<HermitianOp>, CliError> {
        match self.params.get(key) {
            None => {
                if self.operators.is_empty() {
                    return Err(CliError::Validation(format!(
                        "command needs operators (none defined and no params.{key} given)"
                    )));
                }
                Ok(self.operators.values().cloned().collect())
            }
            Some(v) => {
                let names = v.as_array().ok_or_else(|| {
                    CliError::Validation(format!("params.{key} must be an array of names"))
                })?;
                let mut ops = Vec::with_capacity(names.len());
                for n in names {
                    let name = n.as_str().ok_or_else(|| {
                        CliError::Validation(format!("params.{key} entries must be strings"))
                    })?;
                    ops.push(self.op(name)?.clone());
                }
                if ops.is_empty() {
                    return Err(CliError::Validation(format!("params.{key} is empty")));
                }
                Ok(ops)
            }
        }
    }

    pub fn require_state(&self) -> Result<&AlgState, CliError> {
        self.state.as_ref().ok_or_else(|| {
            CliError::Validation(format!(
                "command {:?} needs a scenario state",
                self.command.as_str()
            ))
        })
    }

    pub fn require_vector(&self) -> Result<&[Complex64], CliError> {
        self.state_vector.as_deref().ok_or_else(|| {
            CliError::Validation(format!(
                "command {:?} needs a state literal of kind \"vector\"",
                self.command.as_str()
            ))
        })
    }

    pub fn param_str(&self, key: &str) -> Result<&str, CliError> {
        self.params
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::Validation(format!("params.{key} (string) is required")))
    }

    pub fn param_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| {
                    CliError::Validation(format!("params.{key} must be a non-negative integer"))
                }),
        }
    }

    /// A list of vector literals under a params key.
    pub fn param_vectors(&self, key: &str) -> Result<Vec<Vec<Complex64>>, CliError> {
        let v = self.params.get(key).ok_or_else(|| {
            CliError::Validation(format!("params.{key} (array of vectors) is required"))
        })?;
        let list = v.as_array().ok_or_else(|| {
            CliError::Validation(format!("params.{key} must be an array of vectors"))
        })?;
        let mut out = Vec::with_capacity(list.len());
        for (i, lit) in list.iter().enumerate() {
            let vec = json::vector_from_json(lit)
                .map_err(|e| CliError::Validation(format!("params.{key}[{i}]: {e}")))?;
            if vec.len() != self.dim_h {
                return Err(CliError::Validation(format!(
                    "params.{key}[{i}] has length {}, expected dim_h = {}",
                    vec.len(),
                    self.dim_h
                )));
            }
            out.push(vec);
        }
        Ok(out)
    }
}

fn parse_state(
    lit: &Value,
    dim_h: usize,
) -> Result<(Option<AlgState>, Option<Vec<Complex64>>), CliError> {
    let kind = lit
        .as_object()
        .and_then(|o| o.get("kind"))
        .and_then(Value::as_str);
    let state = json::state_from_json(lit).map_err(|e| CliError::Validation(e.to_string()))?;
    if state.dim() != dim_h {
        return Err(CliError::Validation(format!(
            "state has dimension {}, expected dim_h = {dim_h}",
            state.dim()
        )));
    }
    let vector = if kind == Some("vector") {
        let raw = json::vector_from_json(lit.as_object().unwrap().get("v").unwrap())
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Some(raw.into_iter().map(|z| z / norm).collect())
    } else {
        None
    };
    Ok((Some(state), vector))
}

/// Install the tolerance table for this invocation. A `--tol` flag rebuilds
/// the whole table from that base; scenario `tol_overrides` then adjust
/// individual entries (a scenario "base" key is ignored when the flag wins).
pub fn apply_tolerances(
    flag_base: Option<f64>,
    overrides: Option<&Map<String, Value>>,
) -> Result<(), CliError> {
    // Bands below the table's floor tier (1e-12) cannot be met by f64
    // arithmetic and would turn internal invariant checks into guaranteed
    // failures, so they are rejected as invalid input rather than attempted.
    let check_value = |key: &str, b: f64| -> Result<f64, CliError> {
        if (1e-12..1.0).contains(&b) {
            Ok(b)
        } else {
            Err(CliError::Validation(format!(
                "tolerance {key} = {b:e} must lie in [1e-12, 1)"
            )))
        }
    };

    let mut table = match flag_base {
        Some(b) => Tolerances::from_base(check_value("base", b)?),
        None => Tolerances::default(),
    };

    if let Some(map) = overrides {
        for (key, value) in map {
            let x = value.as_f64().ok_or_else(|| {
                CliError::Validation(format!("tol_overrides.{key} must be a number"))
            })?;
            let x = check_value(key, x)?;
            match key.as_str() {
                "base" => {
                    if flag_base.is_none() {
                        table = Tolerances::from_base(x);
                    }
                }
                "herm_tol" => table.herm_tol = x,
                "eig_tol" => table.eig_tol = x,
                "sub_tol" => table.sub_tol = x,
                "accept_tol" => table.accept_tol = x,
                "df_tol" => table.df_tol = x,
                "fam_tol" => table.fam_tol = x,
                "cluster_tol" => table.cluster_tol = x,
                "weight_floor" => table.weight_floor = x,
                "proj_floor" => table.proj_floor = x,
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown tolerance key {other:?}"
                    )))
                }
            }
        }
    }

    set_tolerances(table);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn command_names_round_trip() {
        for name in [
            "generate",
            "check-beable",
            "bub-definite",
            "family",
            "maximal",
            "decompose",
            "verify-theorems",
        ] {
            assert_eq!(CommandKind::parse(name).unwrap().as_str(), name);
        }
        assert!(CommandKind::parse("frobnicate").is_none());
    }

    #[test]
    fn minimal_scenario_parses_with_operators_in_name_order() {
        let sc = Scenario::from_value(json!({
            "dim_h": 2,
            "operators": {
                "zz": [[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]],
                "aa": [[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]
            },
            "state": { "kind": "vector", "v": [[2.0,0.0],[0.0,0.0]] },
            "command": "generate"
        }))
        .unwrap();

        let ops = sc.selected_ops("seeds").unwrap();
        assert_eq!(ops.len(), 2);
        assert!((ops[0].mat().at(0, 1).re - 1.0).abs() < 1e-15, "aa sorts first");

        // The vector literal was not unit length; the loader normalises it.
        let v = sc.state_vector.unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_dimension_mismatch_is_rejected() {
        let err = Scenario::from_value(json!({
            "dim_h": 3,
            "operators": { "x": [[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]] },
            "command": "generate"
        }))
        .unwrap_err();
        assert!(err.to_string().contains("dim_h is 3"), "{err}");
    }

    #[test]
    fn tolerance_rejections_leave_the_table_untouched() {
        for bad in [2.0, 0.0, -1e-9, 1e-300] {
            let err = apply_tolerances(Some(bad), None).unwrap_err();
            assert!(err.to_string().contains("must lie in [1e-12, 1)"), "{err}");
        }

        let mut overrides = Map::new();
        overrides.insert("not_a_knob".into(), json!(1e-6));
        let err = apply_tolerances(None, Some(&overrides)).unwrap_err();
        assert!(err.to_string().contains("unknown tolerance key"), "{err}");

        let mut overrides = Map::new();
        overrides.insert("eig_tol".into(), json!(1e-18));
        let err = apply_tolerances(None, Some(&overrides)).unwrap_err();
        assert!(err.to_string().contains("eig_tol"), "{err}");
    }
}
