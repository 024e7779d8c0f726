//! Browser bindings: gradient scans, a scheme comparison on a complex state,
//! and sequential ground/excited-state optimization traces. Every export
//! returns a JSON string.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fermigrad::io::{bundled_names, cmd_excited, cmd_grad, cmd_spectrum, Inputs, ProblemFile};

const TOY: &str = include_str!("../../core/data/circuits/h2_toy.circ");
const ILLUSTRATIVE_REAL: &str = include_str!("../../core/data/circuits/illustrative_real.circ");
const ILLUSTRATIVE_COMPLEX: &str = include_str!("../../core/data/circuits/illustrative_complex.circ");

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn inputs(problem: &str) -> Result<Inputs, JsError> {
    let p = ProblemFile::load(&format!("bundled:{problem}")).map_err(err)?;
    Ok(Inputs::new(p, problem))
}

/// CSV text to `{columns: [...], rows: [[...]]}`.
fn csv_to_json(csv: &str) -> Value {
    let mut lines = csv.lines();
    let columns: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    json!({ "columns": columns, "rows": rows })
}

#[wasm_bindgen]
pub fn problems() -> String {
    json!(bundled_names().collect::<Vec<_>>()).to_string()
}

/// Energy and gradient columns over `t ∈ [0, 2π]`.
///
/// `circuit` is `toy` (4 qubits), `real` or `complex` (the 8-qubit
/// illustrative circuits); `schemes` is a comma-separated list such as
/// `exact4,real2+,real2-`.
#[wasm_bindgen]
pub fn gradient_scan(circuit: &str, schemes: &str, points: usize) -> Result<String, JsError> {
    let (problem, text) = match circuit {
        "toy" => ("h2_sto3g_0.7414", TOY),
        "real" => ("h2_631g_0.7414", ILLUSTRATIVE_REAL),
        "complex" => ("h2_631g_0.7414", ILLUSTRATIVE_COMPLEX),
        other => return Err(JsError::new(&format!("unknown circuit `{other}`"))),
    };
    let mut inputs = inputs(problem)?;
    inputs.circuit_text = Some(text.to_string());
    inputs.config.grad.points = points.clamp(2, 2001);
    inputs.config.grad.schemes = schemes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    let out = cmd_grad(&inputs).map_err(err)?;
    Ok(json!({
        "problem": problem,
        "circuit": text,
        "summary": out.record.results,
        "table": csv_to_json(out.csv.as_deref().unwrap_or("")),
    })
    .to_string())
}

/// Sequential penalized solves for the lowest `states` states, with traces
/// and the exact singlet energies for comparison.
#[wasm_bindgen]
pub fn excited_states(problem: &str, states: usize, scheme: &str, adaptive: bool) -> Result<String, JsError> {
    let mut inputs = inputs(problem)?;
    inputs.scheme = Some(scheme.to_string());
    inputs.config.excited.states = states.clamp(1, 4);
    if adaptive {
        inputs.config.excited.method = "adapt".into();
        inputs.config.pool.kind = fermigrad::optimize::PoolKind::Singlet;
    }
    inputs.config.optimizer.tol = 1e-8;
    let out = cmd_excited(&inputs).map_err(err)?;
    let mut exact_inputs = inputs.clone();
    exact_inputs.electrons = inputs.problem.n_electrons();
    exact_inputs.singlet = true;
    exact_inputs.k = Some(states.clamp(1, 4));
    let exact = cmd_spectrum(&exact_inputs).map_err(err)?;
    Ok(json!({
        "results": out.record.results,
        "trace": csv_to_json(out.csv.as_deref().unwrap_or("")),
        "exact": exact.record.results["eigenvalues"],
    })
    .to_string())
}
