//! Handlers for the scenario commands.
//!
//! Each handler returns the results payload, a residual map justifying every
//! boolean in the payload, and a one-line human headline.

use beable_core::json;
use beable_core::segalgebra::closure_residual;
use beable_core::states::decompose_state;
use beable_core::{
    bub_definite, check_maximality, complexified_closure_check, family_algebra,
    has_beable_status, recover_family, BeableError, BeableVerdict, EigenFamily, Segalgebra,
};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::scenario::{CommandKind, Scenario};

pub struct CommandOutput {
    pub results: Value,
    pub residuals: Map<String, Value>,
    pub headline: String,
}

#[derive(Debug, Clone)]
pub struct RunFlags {
    pub seed: u64,
    pub trials: Option<usize>,
    pub max_dim: usize,
    pub dims: Option<Vec<usize>>,
}

pub fn run_command(sc: &Scenario, flags: &RunFlags) -> Result<CommandOutput, CliError> {
    match sc.command {
        CommandKind::Generate => cmd_generate(sc),
        CommandKind::CheckBeable => cmd_check_beable(sc),
        CommandKind::BubDefinite => cmd_bub_definite(sc),
        CommandKind::Family => cmd_family(sc),
        CommandKind::Maximal => cmd_maximal(sc, flags),
        CommandKind::Decompose => cmd_decompose(sc),
        CommandKind::VerifyTheorems => unreachable!("verify-theorems has its own runner"),
    }
}

/// Serialize a verdict and append the residuals that justify it.
fn verdict_json(verdict: &BeableVerdict, residuals: &mut Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("has_status".into(), json!(verdict.has_status()));
    out.insert("ideal_dim".into(), json!(verdict.ideal().dim()));
    residuals.insert(
        "worst_lie_residual".into(),
        json!(verdict.worst_lie_residual()),
    );
    if let Some(w) = verdict.witness() {
        out.insert("witness".into(), json::hermitian_to_json(w));
        if let Some(d) = verdict.witness_dispersion() {
            residuals.insert("witness_dispersion".into(), json!(d));
        }
    }
    if let Some(mix) = verdict.decomposition() {
        let components: Vec<Value> = mix
            .components()
            .iter()
            .map(|(w, chi)| json!({ "weight": w, "values": chi.values() }))
            .collect();
        out.insert("decomposition".into(), Value::Array(components));
        residuals.insert(
            "reproduction_residual".into(),
            json!(mix.reproduction_residual()),
        );
        residuals.insert("dropped_mass".into(), json!(mix.dropped_mass()));
    }
    Value::Object(out)
}

fn cmd_generate(sc: &Scenario) -> Result<CommandOutput, CliError> {
    let seeds = sc.selected_ops("seeds")?;
    let algebra = Segalgebra::generate(sc.dim_h, &seeds)?;
    let closed = complexified_closure_check(algebra.subspace())?;
    let closure = closure_residual(algebra.subspace())?;
    let commutativity = algebra.commutativity_residual();

    let mut residuals = Map::new();
    residuals.insert("closure_residual".into(), json!(closure));
    residuals.insert("commutativity_residual".into(), json!(commutativity));

    let results = json!({
        "algebra_dim": algebra.dim(),
        "closed": closed,
        "commutative": algebra.is_commutative(),
        "basis": algebra.basis().iter().map(json::hermitian_to_json).collect::<Vec<_>>(),
    });
    let headline = format!(
        "generated algebra of dimension {} on a {}-dimensional space (commutative: {})",
        algebra.dim(),
        sc.dim_h,
        algebra.is_commutative()
    );
    Ok(CommandOutput {
        results,
        residuals,
        headline,
    })
}

fn cmd_check_beable(sc: &Scenario) -> Result<CommandOutput, CliError> {
    let generators = sc.selected_ops("generators")?;
    let algebra = Segalgebra::generate(sc.dim_h, &generators)?;
    let state = sc.require_state()?;
    let verdict = has_beable_status(&algebra, state)?;

    let mut residuals = Map::new();
    let verdict_value = verdict_json(&verdict, &mut residuals);
    let headline = if verdict.has_status() {
        format!(
            "beable status: yes ({} dispersion-free components, ideal dimension {})",
            verdict.decomposition().map_or(0, |m| m.len()),
            verdict.ideal().dim()
        )
    } else {
        "beable status: no (witness lie product recorded)".to_string()
    };
    Ok(CommandOutput {
        results: json!({ "algebra_dim": algebra.dim(), "verdict": verdict_value }),
        residuals,
        headline,
    })
}

fn cmd_bub_definite(sc: &Scenario) -> Result<CommandOutput, CliError> {
    let preferred = sc.param_str("preferred")?;
    let r = sc.op(preferred)?;
    let v = sc.require_vector()?;
    let state = sc.require_state()?;

    let bub = bub_definite(v, r)?;
    let verdict = has_beable_status(bub.algebra(), state)?;

    let mut residuals = Map::new();
    let verdict_value = verdict_json(&verdict, &mut residuals);
    residuals.insert(
        "mass_kept".into(),
        json!(bub.kept_masses().iter().sum::<f64>()),
    );

    let family_vectors: Vec<Value> = bub
        .family()
        .vectors()
        .iter()
        .map(|w| json::vector_to_json(w))
        .collect();
    let results = json!({
        "family_size": bub.family().len(),
        "algebra_dim": bub.algebra().dim(),
        "kept_masses": bub.kept_masses(),
        "dropped_masses": bub.dropped_masses(),
        "family_vectors": family_vectors,
        "verdict": verdict_value,
    });
    let headline = format!(
        "preferred observable keeps {} eigenspace projections; algebra dimension {}",
        bub.family().len(),
        bub.algebra().dim()
    );
    Ok(CommandOutput {
        results,
        residuals,
        headline,
    })
}

fn cmd_family(sc: &Scenario) -> Result<CommandOutput, CliError> {
    let vectors = sc.param_vectors("vectors")?;
    let target = sc.require_vector()?.to_vec();
    let state = sc.require_state()?;

    let family = EigenFamily::new(vectors, target)?;
    let algebra = family_algebra(&family)?;
    let verdict = has_beable_status(&algebra, state)?;

    let mut residuals = Map::new();
    let verdict_value = verdict_json(&verdict, &mut residuals);
    let headline = format!(
        "family of {} eigenvectors fixes an algebra of dimension {}",
        family.len(),
        algebra.dim()
    );
    Ok(CommandOutput {
        results: json!({
            "family_size": family.len(),
            "algebra_dim": algebra.dim(),
            "verdict": verdict_value,
        }),
        residuals,
        headline,
    })
}

fn cmd_maximal(sc: &Scenario, flags: &RunFlags) -> Result<CommandOutput, CliError> {
    let state = sc.require_state()?;
    let algebra = if sc.params.contains_key("vectors") {
        let vectors = sc.param_vectors("vectors")?;
        let target = sc.require_vector()?.to_vec();
        family_algebra(&EigenFamily::new(vectors, target)?)?
    } else {
        Segalgebra::generate(sc.dim_h, &sc.selected_ops("generators")?)?
    };

    let trials = sc
        .param_usize("trials")?
        .or(flags.trials)
        .unwrap_or(200);
    let maximal = check_maximality(&algebra, state, trials, flags.seed)?;

    let mut residuals = Map::new();
    let verdict = has_beable_status(&algebra, state)?;
    let verdict_value = verdict_json(&verdict, &mut residuals);

    let mut results = Map::new();
    results.insert("algebra_dim".into(), json!(algebra.dim()));
    results.insert("maximal".into(), json!(maximal));
    results.insert("trials".into(), json!(trials));
    results.insert("verdict".into(), verdict_value);

    // With a vector state the structural converse is available: recover the
    // eigenvector family and confirm it regenerates the same span.
    if let Some(v) = sc.state_vector.as_deref() {
        match recover_family(&algebra, v) {
            Ok(family) => {
                let rebuilt = family_algebra(&family)?;
                let round_trip = rebuilt.span_equal(&algebra);
                results.insert("recovered_family_size".into(), json!(family.len()));
                results.insert("round_trip_span_equal".into(), json!(round_trip));
            }
            Err(BeableError::NotMaximal {
                algebra_dim,
                recovered_dim,
            }) => {
                results.insert(
                    "recovery".into(),
                    json!({
                        "outcome": "larger-algebra",
                        "algebra_dim": algebra_dim,
                        "recovered_dim": recovered_dim,
                    }),
                );
            }
            Err(other) => return Err(other.into()),
        }
    }

    let headline = format!(
        "maximality certificate over {trials} adjoin trials: {}",
        if maximal { "no beable extension found" } else { "extension found, not maximal" }
    );
    Ok(CommandOutput {
        results: Value::Object(results),
        residuals,
        headline,
    })
}

fn cmd_decompose(sc: &Scenario) -> Result<CommandOutput, CliError> {
    let generators = sc.selected_ops("generators")?;
    let algebra = Segalgebra::generate(sc.dim_h, &generators)?;
    let state = sc.require_state()?;

    let mixture = decompose_state(state, &algebra)?;
    let components: Vec<Value> = mixture
        .components()
        .iter()
        .map(|(w, chi)| json!({ "weight": w, "values": chi.values() }))
        .collect();

    let mut residuals = Map::new();
    residuals.insert(
        "reproduction_residual".into(),
        json!(mixture.reproduction_residual()),
    );

    let headline = format!(
        "state splits into {} dispersion-free components (dropped mass {:.3e})",
        mixture.len(),
        mixture.dropped_mass()
    );
    Ok(CommandOutput {
        results: json!({
            "algebra_dim": algebra.dim(),
            "components": components,
            "dropped_mass": mixture.dropped_mass(),
        }),
        residuals,
        headline,
    })
}
