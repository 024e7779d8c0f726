use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{parse_scheme, ReferenceConfig, RunConfig};
use super::problem::ProblemFile;
use crate::autodiff::{finite_difference, grad, GradientScheme, Objective};
use crate::dense::{hermitian_eigenvalues, sector_eigenvalues, to_dense};
use crate::error::{Error, Result};
use crate::optimize::{
    adapt_with, excited_adapt, excited_objective, minimize, prepare_reference, vqe, AdaptOptions,
    AdaptResult, AnsatzLayout, CisPair, ExcitedStateTask, OperatorPool,
};
use crate::sim::{Branch, Circuit, Values};

/// Everything a command needs, already read from disk.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub problem: ProblemFile,
    pub problem_source: String,
    pub circuit_text: Option<String>,
    pub circuit_source: Option<String>,
    pub config: RunConfig,
    /// `--scheme`, overriding the config.
    pub scheme: Option<String>,
    pub alpha: Branch,
    /// `--param name=value` assignments.
    pub params: Values,
    pub seed: u64,
    /// `spectrum` overrides.
    pub k: Option<usize>,
    pub electrons: Option<usize>,
    pub singlet: bool,
}

impl Inputs {
    pub fn new(problem: ProblemFile, problem_source: impl Into<String>) -> Self {
        Self {
            problem,
            problem_source: problem_source.into(),
            circuit_text: None,
            circuit_source: None,
            config: RunConfig::default(),
            scheme: None,
            alpha: Branch::Plus,
            params: Values::new(),
            seed: 0,
            k: None,
            electrons: None,
            singlet: false,
        }
    }

    fn n(&self) -> usize {
        self.problem.n_qubits
    }

    fn scheme(&self) -> Result<GradientScheme> {
        match self.scheme.as_deref().or(self.config.scheme.as_deref()) {
            Some(s) => parse_scheme(s, self.alpha),
            None => Ok(GradientScheme::Real2(self.alpha)),
        }
    }

    fn circuit(&self) -> Result<Option<Circuit>> {
        self.circuit_text
            .as_deref()
            .map(|t| Circuit::parse(t, self.n()))
            .transpose()
    }

    fn reference(&self, cfg: &ReferenceConfig) -> Result<Circuit> {
        let occupied = match &cfg.occupied {
            Some(o) => o.clone(),
            None => {
                let n_e = self.problem.n_electrons().ok_or_else(|| {
                    Error::Config(
                        "problem has no `n_electrons` metadata; set [reference] occupied".into(),
                    )
                })?;
                (0..n_e).collect()
            }
        };
        prepare_reference(self.n(), &occupied, cfg.cis)
    }

    fn pattern(&self, default: &str) -> String {
        self.config
            .layout
            .pattern
            .clone()
            .unwrap_or_else(|| default.to_string())
    }

    /// Ansatz without reference: `--circuit`, then `[ansatz] gates`, then the layout pattern.
    fn ansatz(&self) -> Result<Circuit> {
        if let Some(c) = self.circuit()? {
            return Ok(c);
        }
        if let Some(lines) = &self.config.ansatz.gates {
            return Circuit::parse(&lines.join("\n"), self.n());
        }
        AnsatzLayout::from_pattern(Circuit::new(self.n()), &self.pattern("D"), &self.config.pool.freeze)?
            .circuit()
    }

    fn layout(&self, reference: Circuit) -> Result<AnsatzLayout> {
        AnsatzLayout::from_pattern(reference, &self.pattern("A"), &self.config.pool.freeze)
    }

    fn pool(&self) -> Result<OperatorPool> {
        OperatorPool::generate(self.n(), self.config.pool.kind, &self.config.pool.freeze)
    }

    /// Zero or seeded random values for `names`, then `--param` overrides.
    fn initial_values<'a>(&self, names: impl IntoIterator<Item = &'a String>) -> Result<Values> {
        let opt = &self.config.optimizer;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut names: Vec<&String> = names.into_iter().collect();
        names.sort();
        names.dedup();
        let mut v = Values::new();
        for n in names {
            let x = match opt.init.as_str() {
                "zero" => 0.0,
                "random" => rng.random_range(-opt.init_scale..=opt.init_scale),
                other => {
                    return Err(Error::Config(format!(
                        "unknown optimizer.init `{other}` (expected zero or random)"
                    )))
                }
            };
            v.insert(n.clone(), x);
        }
        v.extend(self.params.clone());
        Ok(v)
    }

    fn adapt_options(&self) -> Result<AdaptOptions> {
        let scheme = self.scheme()?;
        let a = &self.config.adapt;
        Ok(AdaptOptions {
            screen_tol: a.screen_tol,
            energy_tol: a.energy_tol,
            max_ops: a.max_ops,
            scheme,
            optimizer: self.config.optimizer.options(scheme)?,
        })
    }

    fn describe(&self) -> Value {
        json!({
            "problem": self.problem_source,
            "n_qubits": self.n(),
            "n_terms": self.problem.hamiltonian.len(),
            "circuit": self.circuit_source,
            "config": self.config,
            "scheme": self.scheme().ok().map(GradientScheme::label),
            "params": self.params,
            "seed": self.seed,
        })
    }
}

/// Wall clock; reads zero on targets without one.
struct Clock {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Clock {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_secs_f64();
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// JSON record of one run. Everything except `timing` is reproducible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub timing: Timing,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: RunRecord,
    pub csv: Option<String>,
    pub summary: String,
    /// False when an optimizer hit its iteration cap.
    pub converged: bool,
}

fn finish(command: &str, inputs: &Inputs, start: Clock, results: Value, csv: Option<String>, summary: String, converged: bool) -> Outcome {
    Outcome {
        record: RunRecord {
            command: command.to_string(),
            inputs: inputs.describe(),
            results,
            timing: Timing {
                wall_seconds: start.seconds(),
            },
        },
        csv,
        summary,
        converged,
    }
}

fn energy_objective(inputs: &Inputs, circuit: Circuit) -> Result<Objective> {
    Objective::expectation(circuit, &inputs.problem.hamiltonian)
}

/// `⟨H⟩` of the given circuit, or of the reference when none is given.
pub fn cmd_energy(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let circuit = match inputs.circuit()? {
        Some(c) => c,
        None => inputs.reference(&inputs.config.reference)?,
    };
    let values = inputs.initial_values(circuit.parameters())?;
    let energy = energy_objective(inputs, circuit)?.evaluate(&values)?;
    if !energy.is_finite() {
        return Err(Error::NonFinite(0));
    }
    let results = json!({
        "energy": energy,
        "parameters": values,
        "hf_energy": inputs.problem.hf_energy(),
    });
    Ok(finish("energy", inputs, start, results, None, format!("energy {energy}"), true))
}

/// Scan of energy and gradient columns over one parameter.
pub fn cmd_grad(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let circuit = match inputs.circuit()? {
        Some(c) => c,
        None => inputs.reference(&inputs.config.reference)?.concat(&inputs.ansatz()?)?,
    };
    let cfg = &inputs.config.grad;
    let param = match &cfg.param {
        Some(p) => p.clone(),
        None => match circuit.parameters() {
            [one] => one.clone(),
            other => {
                return Err(Error::Config(format!(
                    "circuit has {} parameters; set [grad] param",
                    other.len()
                )))
            }
        },
    };
    if cfg.points < 2 {
        return Err(Error::Config("[grad] points must be at least 2".into()));
    }
    let schemes = if cfg.schemes.is_empty() {
        vec![inputs.scheme()?]
    } else {
        cfg.schemes
            .iter()
            .map(|s| parse_scheme(s, inputs.alpha))
            .collect::<Result<Vec<_>>>()?
    };
    let obj = energy_objective(inputs, circuit.clone())?;
    let grads = schemes
        .iter()
        .map(|s| grad(&obj, &param, *s))
        .collect::<Result<Vec<_>>>()?;
    let mut values = inputs.initial_values(circuit.parameters())?;

    let mut csv = String::from("theta,energy");
    for s in &schemes {
        csv.push(',');
        csv.push_str(&s.label());
    }
    let _ = writeln!(csv, ",fd[h={}],grad_squared", cfg.fd_step);
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); schemes.len() + 1];
    let mut thetas = Vec::with_capacity(cfg.points);
    for k in 0..cfg.points {
        let theta = cfg.theta_min + (cfg.theta_max - cfg.theta_min) * k as f64 / (cfg.points - 1) as f64;
        values.insert(param.clone(), theta);
        let e = obj.evaluate(&values)?;
        let _ = write!(csv, "{theta},{e}");
        for (j, g) in grads.iter().enumerate() {
            let v = g.evaluate(&values)?;
            columns[j].push(v);
            let _ = write!(csv, ",{v}");
        }
        let fd = finite_difference(&obj, &param, &values, cfg.fd_step)?;
        columns[schemes.len()].push(fd);
        let _ = writeln!(csv, ",{fd},{}", columns[0][k].powi(2));
        if !e.is_finite() || columns.iter().any(|c| !c[k].is_finite()) {
            return Err(Error::NonFinite(k));
        }
        thetas.push(theta);
    }

    let fd = &columns[schemes.len()];
    let max_dev = |c: &[f64], d: &[f64]| c.iter().zip(d).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let per_scheme: Vec<Value> = schemes
        .iter()
        .zip(&columns)
        .map(|(s, c)| {
            json!({
                "scheme": s.label(),
                "max_abs_dev_from_fd": max_dev(c, fd),
                "max_abs_dev_from_first": max_dev(c, &columns[0]),
            })
        })
        .collect();
    let zeros = zero_crossings(&thetas, &columns[0]);
    let results = json!({
        "param": param,
        "points": cfg.points,
        "schemes": per_scheme,
        "gradient_zeros": zeros,
    });
    let summary = format!("{} points, gradient zeros at {:?}", cfg.points, zeros);
    Ok(finish("grad", inputs, start, results, Some(csv), summary, true))
}

/// Linearly interpolated sign changes of `g` over `x`.
pub fn zero_crossings(x: &[f64], g: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1..x.len() {
        let (g0, g1) = (g[k - 1], g[k]);
        if g0 == 0.0 {
            out.push(x[k - 1]);
        } else if g0 * g1 < 0.0 {
            out.push(x[k - 1] + (x[k] - x[k - 1]) * g0 / (g0 - g1));
        }
    }
    if g.last() == Some(&0.0) {
        out.push(x[x.len() - 1]);
    }
    out
}

fn trace_csv(trace: &[crate::optimize::TraceEntry]) -> String {
    let mut csv = String::from("iteration,energy,grad_norm\n");
    for t in trace {
        let _ = writeln!(csv, "{},{},{}", t.iteration, t.value, t.grad_norm);
    }
    csv
}

pub fn cmd_vqe(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let reference = inputs.reference(&inputs.config.reference)?;
    let ansatz = inputs.ansatz()?;
    let opts = inputs.config.optimizer.options(inputs.scheme()?)?;
    let initial = inputs.initial_values(ansatz.parameters())?;
    let r = vqe(&inputs.problem.hamiltonian, &reference, &ansatz, &initial, &opts)?;
    let results = json!({
        "energy": r.energy,
        "parameters": r.values,
        "converged": r.converged,
        "iterations": r.iterations,
        "initial_parameters": initial,
        "trace": r.trace,
    });
    let summary = format!("energy {} after {} iterations", r.energy, r.iterations);
    Ok(finish("vqe", inputs, start, results, Some(trace_csv(&r.trace)), summary, r.converged))
}

fn adapt_json(r: &AdaptResult) -> Value {
    json!({
        "energy": r.energy,
        "initial_energy": r.initial_energy,
        "stop": r.stop,
        "rounds": r.rounds,
        "parameters": r.values,
        "circuit": r.circuit.to_text(),
    })
}

fn adapt_csv(r: &AdaptResult, state: Option<usize>, csv: &mut String) {
    let prefix = state.map(|s| format!("{s},")).unwrap_or_default();
    let _ = writeln!(csv, "{prefix}0,reference,,,{},", r.initial_energy);
    for rd in &r.rounds {
        let _ = writeln!(
            csv,
            "{prefix}{},{},{},{},{},{}",
            rd.round, rd.operator, rd.point, rd.gradient, rd.energy, rd.grad_norm
        );
    }
}

pub fn cmd_adapt(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let layout = inputs.layout(inputs.reference(&inputs.config.reference)?)?;
    let pool = inputs.pool()?;
    let opts = inputs.adapt_options()?;
    let initial = inputs.initial_values(layout.circuit()?.parameters())?;
    let h = &inputs.problem.hamiltonian;
    let r = adapt_with(&layout, &pool, &opts, &initial, |c| Objective::expectation(c.clone(), h))?;
    let converged = r.rounds.iter().all(|rd| rd.converged);
    let mut csv = String::from("round,operator,point,gradient,energy,grad_norm\n");
    adapt_csv(&r, None, &mut csv);
    let summary = format!("energy {} after {} rounds ({:?})", r.energy, r.rounds.len(), r.stop);
    let mut results = adapt_json(&r);
    results["pool_size"] = json!(pool.len());
    Ok(finish("adapt", inputs, start, results, Some(csv), summary, converged))
}

/// Reference for excited state `k`: configured, or HOMO→LUMO+k−1 singlet.
fn state_reference(inputs: &Inputs, k: usize) -> Result<Circuit> {
    if let Some(cfg) = inputs.config.excited.references.get(k) {
        return inputs.reference(cfg);
    }
    let base = &inputs.config.reference;
    if k == 0 {
        return inputs.reference(base);
    }
    let occupied = match &base.occupied {
        Some(o) => o.clone(),
        None => (0..inputs.problem.n_electrons().unwrap_or(0)).collect(),
    };
    let homo = occupied.iter().max().map_or(0, |m| m / 2);
    let cfg = ReferenceConfig {
        occupied: Some(occupied),
        cis: Some(CisPair {
            from: homo,
            to: homo + k,
        }),
    };
    inputs.reference(&cfg)
}

pub fn cmd_excited(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let cfg = &inputs.config.excited;
    let h = &inputs.problem.hamiltonian;
    let mut task = ExcitedStateTask::new(h)?;
    let mut states = Vec::new();
    let mut csv = String::new();
    let mut converged = true;
    let adaptive = match cfg.method.as_str() {
        "vqe" => false,
        "adapt" => true,
        other => {
            return Err(Error::Config(format!(
                "unknown excited.method `{other}` (expected vqe or adapt)"
            )))
        }
    };
    csv.push_str(if adaptive {
        "state,round,operator,point,gradient,objective,grad_norm\n"
    } else {
        "state,iteration,objective,grad_norm\n"
    });
    for k in 0..cfg.states {
        let reference = state_reference(inputs, k)?;
        let (circuit, values, objective, detail) = if adaptive {
            let layout = inputs.layout(reference)?;
            let r = excited_adapt(&task, &layout, &inputs.pool()?, &inputs.adapt_options()?)?;
            converged &= r.rounds.iter().all(|rd| rd.converged);
            adapt_csv(&r, Some(k), &mut csv);
            (r.circuit.clone(), r.values.clone(), r.energy, adapt_json(&r))
        } else {
            let circuit = reference.concat(&inputs.ansatz()?)?;
            let initial = inputs.initial_values(circuit.parameters())?;
            let obj = excited_objective(&task, &circuit)?;
            let r = minimize(&obj, &initial, &inputs.config.optimizer.options(inputs.scheme()?)?)?;
            converged &= r.converged;
            for t in &r.trace {
                let _ = writeln!(csv, "{k},{},{},{}", t.iteration, t.value, t.grad_norm);
            }
            let detail = json!({ "iterations": r.iterations, "converged": r.converged, "trace": r.trace });
            (circuit, r.values, r.value, detail)
        };
        let energy = energy_objective(inputs, circuit.clone())?.evaluate(&values)?;
        let overlaps = task
            .solved()
            .iter()
            .map(|s| Objective::overlap(&circuit, &s.circuit)?.evaluate(&values))
            .collect::<Result<Vec<_>>>()?;
        states.push(json!({
            "state": k,
            "energy": energy,
            "objective": objective,
            "overlaps_with_previous": overlaps,
            "parameters": values,
            "circuit": circuit.bind(&values)?.to_text(),
            "details": detail,
        }));
        task.push(&circuit, &values, energy, cfg.penalties.get(k).copied())?;
    }
    let energies: Vec<f64> = task.solved().iter().map(|s| s.energy).collect();
    let summary = format!("energies {energies:?}");
    let results = json!({ "energies": energies, "states": states });
    Ok(finish("excited", inputs, start, results, Some(csv), summary, converged))
}

pub fn cmd_spectrum(inputs: &Inputs) -> Result<Outcome> {
    let start = Clock::start();
    let cfg = &inputs.config.spectrum;
    let k = inputs.k.unwrap_or(cfg.k);
    let electrons = inputs.electrons.or(cfg.electrons);
    let singlet = inputs.singlet || cfg.singlet;
    let h = &inputs.problem.hamiltonian;
    let n = inputs.n();
    let mut values = if electrons.is_some() || singlet {
        sector_eigenvalues(h, n, electrons, singlet)?
    } else {
        hermitian_eigenvalues(&to_dense(h, n)?)
    };
    values.truncate(k);
    let results = json!({
        "eigenvalues": values,
        "electrons": electrons,
        "singlet": singlet,
        "fci_energy": inputs.problem.get("fci_energy").and_then(|v| v.parse::<f64>().ok()),
    });
    let mut csv = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(csv, "{i},{v}");
    }
    Ok(finish("spectrum", inputs, start, results, Some(csv), format!("eigenvalues {values:?}"), true))
}

/// Process exit status for a failed run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonFinite(_) | Error::ImaginaryExpectation(_) => 3,
        _ => 2,
    }
}
