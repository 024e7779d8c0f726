//! Gradient-based minimization and the VQE, adapt-VQE and excited-state drivers.

mod adapt;
mod excited;

pub use adapt::{
    adapt_vqe, adapt_with, AdaptOptions, AdaptResult, AdaptRound, AnsatzLayout, Block, OperatorPool,
    PoolKind, PoolOperator, StopReason,
};
pub use excited::{
    excited_adapt, excited_objective, prepare_reference, CisPair, ExcitedStateTask, SolvedState,
};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::autodiff::{grad, GradientScheme, Objective};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::sim::{Circuit, Values};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Steepest descent; with `line_search` the step is backtracked from `step`.
    GradientDescent { step: f64, line_search: bool },
    /// Limited-memory BFGS with Armijo backtracking.
    Lbfgs { memory: usize },
}

impl Default for Method {
    fn default() -> Self {
        Method::Lbfgs { memory: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeOptions {
    pub method: Method,
    pub scheme: GradientScheme,
    /// Convergence threshold on the gradient ∞-norm.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            method: Method::default(),
            scheme: GradientScheme::default(),
            tol: 1e-6,
            max_iters: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub value: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub values: Values,
    pub value: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
}

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

struct Problem<'a> {
    obj: &'a Objective,
    names: Vec<String>,
    grads: Vec<Objective>,
    base: Values,
}

impl Problem<'_> {
    fn values(&self, x: &[f64]) -> Values {
        let mut v = self.base.clone();
        for (n, xi) in self.names.iter().zip(x) {
            v.insert(n.clone(), *xi);
        }
        v
    }

    fn value(&self, x: &[f64], iteration: usize) -> Result<f64> {
        let f = self.obj.evaluate(&self.values(x))?;
        if !f.is_finite() {
            return Err(Error::NonFinite(iteration));
        }
        Ok(f)
    }

    fn gradient(&self, x: &[f64], iteration: usize) -> Result<Vec<f64>> {
        let v = self.values(x);
        let g = self
            .grads
            .iter()
            .map(|g| g.evaluate(&v))
            .collect::<Result<Vec<_>>>()?;
        if g.iter().any(|gi| !gi.is_finite()) {
            return Err(Error::NonFinite(iteration));
        }
        Ok(g)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(g: &[f64]) -> f64 {
    g.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizes `obj` over every parameter it references, starting from `initial`.
///
/// Reaching `max_iters` is not an error: the best point so far is returned
/// with `converged == false`.
pub fn minimize(obj: &Objective, initial: &Values, opts: &MinimizeOptions) -> Result<MinimizeResult> {
    let names: Vec<String> = obj.parameters().into_iter().collect();
    let mut x = Vec::with_capacity(names.len());
    for n in &names {
        x.push(
            *initial
                .get(n)
                .ok_or_else(|| Error::UnassignedParameter(n.clone()))?,
        );
    }
    let grads = names
        .iter()
        .map(|n| grad(obj, n, opts.scheme))
        .collect::<Result<Vec<_>>>()?;
    let problem = Problem {
        obj,
        names,
        grads,
        base: initial.clone(),
    };

    let mut f = problem.value(&x, 0)?;
    let mut g = problem.gradient(&x, 0)?;
    let mut trace = vec![TraceEntry {
        iteration: 0,
        value: f,
        grad_norm: inf_norm(&g),
    }];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut converged = inf_norm(&g) < opts.tol;

    while !converged && iterations < opts.max_iters {
        iterations += 1;
        let (direction, first_step) = match opts.method {
            Method::GradientDescent { step, .. } => (g.iter().map(|v| -v).collect(), step),
            Method::Lbfgs { .. } => (lbfgs_direction(&g, &memory), 1.0),
        };
        let step = match opts.method {
            Method::GradientDescent {
                line_search: false,
                ..
            } => {
                let x_new: Vec<f64> = x.iter().zip(&direction).map(|(a, d)| a + first_step * d).collect();
                let f_new = problem.value(&x_new, iterations)?;
                Some((x_new, f_new))
            }
            _ => {
                let found = backtrack(&problem, &x, f, &g, &direction, first_step, iterations)?;
                match found {
                    Some(p) => Some(p),
                    None if !memory.is_empty() => {
                        memory.clear();
                        let steepest: Vec<f64> = g.iter().map(|v| -v).collect();
                        backtrack(&problem, &x, f, &g, &steepest, 1.0, iterations)?
                    }
                    None => None,
                }
            }
        };
        let Some((x_new, f_new)) = step else {
            break;
        };
        let g_new = problem.gradient(&x_new, iterations)?;
        if let Method::Lbfgs { memory: m } = opts.method {
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-14 {
                if memory.len() == m.max(1) {
                    memory.pop_front();
                }
                memory.push_back((s, y, 1.0 / sy));
            }
        }
        x = x_new;
        f = f_new;
        g = g_new;
        trace.push(TraceEntry {
            iteration: iterations,
            value: f,
            grad_norm: inf_norm(&g),
        });
        converged = inf_norm(&g) < opts.tol;
    }

    Ok(MinimizeResult {
        values: problem.values(&x),
        value: f,
        grad_norm: inf_norm(&g),
        converged,
        iterations,
        trace,
    })
}

fn lbfgs_direction(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    let d: Vec<f64> = q.into_iter().map(|v| -v).collect();
    if dot(&d, g) < 0.0 {
        d
    } else {
        g.iter().map(|v| -v).collect()
    }
}

fn backtrack(
    problem: &Problem<'_>,
    x: &[f64],
    f: f64,
    g: &[f64],
    d: &[f64],
    first: f64,
    iteration: usize,
) -> Result<Option<(Vec<f64>, f64)>> {
    let slope = dot(g, d);
    let mut t = first;
    for _ in 0..MAX_BACKTRACKS {
        let x_new: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + t * b).collect();
        let f_new = problem.value(&x_new, iteration)?;
        if f_new <= f + ARMIJO * t * slope {
            return Ok(Some((x_new, f_new)));
        }
        t *= 0.5;
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub energy: f64,
    pub values: Values,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
}

/// Minimizes `⟨H⟩` over the parameters of `reference · ansatz`.
pub fn vqe(
    hamiltonian: &PauliSum,
    reference: &Circuit,
    ansatz: &Circuit,
    initial: &Values,
    opts: &MinimizeOptions,
) -> Result<VqeResult> {
    if !hamiltonian.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    let circuit = reference.concat(ansatz)?;
    let mut start = initial.clone();
    for p in circuit.parameters() {
        start.entry(p.clone()).or_insert(0.0);
    }
    let obj = Objective::expectation(circuit, hamiltonian)?;
    let r = minimize(&obj, &start, opts)?;
    Ok(VqeResult {
        energy: r.value,
        values: r.values,
        converged: r.converged,
        iterations: r.iterations,
        trace: r.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;
    use crate::sim::Angle;

    fn rz_energy() -> Objective {
        // ⟨Z⟩ after Ry(t): cos t, minimum −1 at t = π.
        let c = Circuit::new(1)
            .rot(PauliSum::single(1.0, 0, Axis::Y), Angle::param("t"))
            .unwrap();
        Objective::expectation(c, &PauliSum::single(1.0, 0, Axis::Z)).unwrap()
    }

    #[test]
    fn quadratic_with_fixed_step() {
        // (cos t − c)² has its minimum where cos t = c.
        let c = 0.3;
        let obj = (rz_energy() - Objective::constant(c)).square();
        let opts = MinimizeOptions {
            method: Method::GradientDescent {
                step: 0.5,
                line_search: false,
            },
            tol: 1e-10,
            max_iters: 500,
            ..Default::default()
        };
        let start: Values = [("t".to_string(), 0.5)].into();
        let r = minimize(&obj, &start, &opts).unwrap();
        assert!(r.converged);
        assert!((r.values["t"].cos() - c).abs() < 1e-8);
    }

    #[test]
    fn lbfgs_reaches_minimum() {
        let start: Values = [("t".to_string(), 0.2)].into();
        let r = minimize(&rz_energy(), &start, &MinimizeOptions::default()).unwrap();
        assert!(r.converged);
        assert!((r.value + 1.0).abs() < 1e-12);
        assert!(r.trace.windows(2).all(|w| w[1].value <= w[0].value));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let start: Values = [("t".to_string(), 0.2)].into();
        let opts = MinimizeOptions {
            max_iters: 1,
            method: Method::GradientDescent {
                step: 1e-3,
                line_search: false,
            },
            ..Default::default()
        };
        let r = minimize(&rz_energy(), &start, &opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn missing_initial_value() {
        assert_eq!(
            minimize(&rz_energy(), &Values::new(), &MinimizeOptions::default()).unwrap_err(),
            Error::UnassignedParameter("t".into())
        );
    }

    #[test]
    fn non_finite_objective() {
        let obj = rz_energy().scale(f64::INFINITY);
        let start: Values = [("t".to_string(), 0.2)].into();
        assert!(matches!(
            minimize(&obj, &start, &MinimizeOptions::default()),
            Err(Error::NonFinite(0))
        ));
    }
}
