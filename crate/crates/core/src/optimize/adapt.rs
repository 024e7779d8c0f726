use std::fmt;
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{minimize, MinimizeOptions};
use crate::autodiff::{grad, GradientScheme, Objective};
use crate::error::{Error, Result};
use crate::fermion::Excitation;
use crate::pauli::PauliSum;
use crate::sim::{Angle, Circuit, Gate, Values};

/// One pool entry: excitations that share a single angle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoolOperator {
    pub excitations: Vec<Excitation>,
}

impl PoolOperator {
    pub fn new(excitations: Vec<Excitation>) -> Self {
        Self { excitations }
    }

    pub fn gates(&self, angle: &Angle) -> Vec<Gate> {
        self.excitations
            .iter()
            .map(|e| Gate::excitation(e.clone(), angle.clone()))
            .collect()
    }

    pub fn max_index(&self) -> usize {
        self.excitations.iter().map(Excitation::max_index).max().unwrap_or(0)
    }

    fn touches(&self, spin_orbital: usize) -> bool {
        self.excitations.iter().any(|e| e.flat().contains(&spin_orbital))
    }

    /// Preserves `S_z`: every excitation moves electrons within one spin or
    /// moves one of each spin.
    pub fn is_sz_preserving(&self) -> bool {
        self.excitations.iter().all(|e| {
            let up_to = e.pairs().iter().filter(|(p, _)| p % 2 == 0).count();
            let up_from = e.pairs().iter().filter(|(_, q)| q % 2 == 0).count();
            up_to == up_from
        })
    }
}

impl fmt::Display for PoolOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.excitations.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "[{e}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    /// All generalized singles and doubles.
    Full,
    /// Same-spin generalized singles and paired doubles.
    #[default]
    SzPreserving,
    /// Spin-adapted singles (up and down sharing one angle), paired doubles,
    /// and spin-complemented opposite-spin doubles.
    Singlet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPool {
    operators: Vec<PoolOperator>,
    spin_filter: bool,
}

impl OperatorPool {
    pub fn from_operators(operators: Vec<PoolOperator>, spin_filter: bool) -> Result<Self> {
        if spin_filter {
            if let Some(op) = operators.iter().find(|o| !o.is_sz_preserving()) {
                return Err(Error::InvalidExcitation(format!(
                    "{op} does not preserve S_z"
                )));
            }
        }
        Ok(Self {
            operators,
            spin_filter,
        })
    }

    /// Builds a pool over `n_spin_orbitals` (interleaved up/down), skipping
    /// every operator that touches a frozen spatial orbital.
    pub fn generate(n_spin_orbitals: usize, kind: PoolKind, freeze: &[usize]) -> Result<Self> {
        let n_spatial = n_spin_orbitals / 2;
        let mut ops = Vec::new();
        match kind {
            PoolKind::Full => {
                for a in 0..n_spin_orbitals {
                    for i in 0..a {
                        ops.push(PoolOperator::new(vec![Excitation::single(a, i)?]));
                    }
                }
                ops.extend(generalized_doubles(n_spin_orbitals)?);
            }
            PoolKind::SzPreserving => {
                for spin in 0..2 {
                    for a in 0..n_spatial {
                        for i in 0..a {
                            let e = Excitation::single(2 * a + spin, 2 * i + spin)?;
                            ops.push(PoolOperator::new(vec![e]));
                        }
                    }
                }
                ops.extend(paired_doubles(n_spatial)?);
            }
            PoolKind::Singlet => {
                for a in 0..n_spatial {
                    for i in 0..a {
                        ops.push(PoolOperator::new(vec![
                            Excitation::single(2 * a, 2 * i)?,
                            Excitation::single(2 * a + 1, 2 * i + 1)?,
                        ]));
                    }
                }
                ops.extend(paired_doubles(n_spatial)?);
                ops.extend(spin_complemented_doubles(n_spatial)?);
            }
        }
        ops.retain(|op| {
            !freeze
                .iter()
                .any(|&k| op.touches(2 * k) || op.touches(2 * k + 1))
        });
        Self::from_operators(ops, kind != PoolKind::Full)
    }

    pub fn operators(&self) -> &[PoolOperator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn spin_filter(&self) -> bool {
        self.spin_filter
    }
}

fn paired_doubles(n_spatial: usize) -> Result<Vec<PoolOperator>> {
    let mut ops = Vec::new();
    for a in 0..n_spatial {
        for i in 0..a {
            ops.push(PoolOperator::new(vec![Excitation::double(
                (2 * a, 2 * i),
                (2 * a + 1, 2 * i + 1),
            )?]));
        }
    }
    Ok(ops)
}

/// `(r,s) → (p,q)` over distinct spatial orbitals, one electron of each spin,
/// paired with its spin-flipped image.
fn spin_complemented_doubles(n_spatial: usize) -> Result<Vec<PoolOperator>> {
    let mut ops = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n_spatial)
        .flat_map(|q| (0..q).map(move |p| (p, q)))
        .collect();
    for (x, &(p, q)) in pairs.iter().enumerate() {
        for &(r, s) in &pairs[..x] {
            if [r, s].iter().any(|k| *k == p || *k == q) {
                continue;
            }
            for (a, b) in [(r, s), (s, r)] {
                ops.push(PoolOperator::new(vec![
                    Excitation::double((2 * p, 2 * a), (2 * q + 1, 2 * b + 1))?,
                    Excitation::double((2 * p + 1, 2 * a + 1), (2 * q, 2 * b))?,
                ]));
            }
        }
    }
    Ok(ops)
}

fn generalized_doubles(n: usize) -> Result<Vec<PoolOperator>> {
    let mut ops = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|q| (0..q).map(move |p| (p, q))).collect();
    for (x, &(p, q)) in pairs.iter().enumerate() {
        for &(r, s) in &pairs[..x] {
            if [r, s].iter().any(|k| *k == p || *k == q) {
                continue;
            }
            ops.push(PoolOperator::new(vec![Excitation::double((p, r), (q, s))?]));
        }
    }
    Ok(ops)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Static(Vec<Gate>),
    /// Insertion point; holds the operators added so far.
    Adaptive(Vec<Gate>),
}

/// Reference circuit followed by static and adaptive blocks in order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzLayout {
    reference: Circuit,
    blocks: Vec<Block>,
}

impl AnsatzLayout {
    /// A single trailing adaptive block.
    pub fn adaptive(reference: Circuit) -> Self {
        Self {
            reference,
            blocks: vec![Block::Adaptive(Vec::new())],
        }
    }

    pub fn from_blocks(reference: Circuit, blocks: Vec<Block>) -> Self {
        Self { reference, blocks }
    }

    /// Builds blocks from a pattern such as `"DAD"`: `D` is a static block of
    /// paired doubles, `S` a static block of spin-adapted singles, `A` an
    /// adaptive insertion point. Static angles are named `s<block>_<k>`.
    pub fn from_pattern(reference: Circuit, pattern: &str, freeze: &[usize]) -> Result<Self> {
        let n = reference.n_qubits();
        let mut blocks = Vec::new();
        for (b, ch) in pattern.chars().enumerate() {
            let kind = match ch.to_ascii_uppercase() {
                'A' => {
                    blocks.push(Block::Adaptive(Vec::new()));
                    continue;
                }
                'D' => PoolKind::SzPreserving,
                'S' => PoolKind::Singlet,
                other => {
                    return Err(Error::Config(format!(
                        "unknown layout block `{other}` (expected A, D or S)"
                    )))
                }
            };
            let pool = OperatorPool::generate(n, kind, freeze)?;
            let wanted_rank = if ch.eq_ignore_ascii_case(&'D') { 2 } else { 1 };
            let mut gates = Vec::new();
            let mut k = 0;
            for op in pool.operators() {
                if op.excitations.iter().all(|e| e.rank() == wanted_rank) {
                    gates.extend(op.gates(&Angle::param(format!("s{b}_{k}"))));
                    k += 1;
                }
            }
            blocks.push(Block::Static(gates));
        }
        Ok(Self { reference, blocks })
    }

    pub fn reference(&self) -> &Circuit {
        &self.reference
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.n_qubits()
    }

    /// Block indices of the adaptive insertion points.
    pub fn adaptive_points(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| matches!(b, Block::Adaptive(_)))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = self.reference.clone();
        for b in &self.blocks {
            let (Block::Static(gates) | Block::Adaptive(gates)) = b;
            for g in gates {
                c.push(g.clone())?;
            }
        }
        Ok(c)
    }

    /// Copy with `gates` appended to the adaptive block at `point`.
    pub fn with_inserted(&self, point: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut out = self.clone();
        match out.blocks.get_mut(point) {
            Some(Block::Adaptive(existing)) => existing.extend(gates),
            _ => return Err(Error::GatePosition(point)),
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdaptOptions {
    pub screen_tol: f64,
    pub energy_tol: f64,
    pub max_ops: usize,
    /// Scheme used to screen candidates; the optimizer carries its own.
    pub scheme: GradientScheme,
    pub optimizer: MinimizeOptions,
}

impl Default for AdaptOptions {
    fn default() -> Self {
        Self {
            screen_tol: 1e-3,
            energy_tol: 1e-6,
            max_ops: 20,
            scheme: GradientScheme::default(),
            optimizer: MinimizeOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GradientBelowTolerance,
    EnergyConverged,
    MaxOperators,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptRound {
    pub round: usize,
    /// Index of the operator in the pool.
    pub pool_index: usize,
    pub operator: String,
    pub parameter: String,
    pub point: usize,
    /// Screened gradient of the selected candidate at angle 0.
    pub gradient: f64,
    pub energy: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Parameter values after this round's optimization.
    pub values: Values,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptResult {
    pub layout: AnsatzLayout,
    pub circuit: Circuit,
    pub values: Values,
    pub initial_energy: f64,
    pub energy: f64,
    pub rounds: Vec<AdaptRound>,
    pub stop: StopReason,
}

struct Screened {
    gradient: f64,
    op: usize,
    point: usize,
}

/// Adapt-VQE on `⟨H⟩`.
pub fn adapt_vqe(
    hamiltonian: &PauliSum,
    layout: &AnsatzLayout,
    pool: &OperatorPool,
    opts: &AdaptOptions,
) -> Result<AdaptResult> {
    let h = Arc::new(hamiltonian.clone());
    adapt_with(layout, pool, opts, &Values::new(), |c| {
        Objective::expectation_shared(Arc::new(c.clone()), h.clone())
    })
}

/// Adapt loop over an arbitrary objective built from the current circuit.
pub fn adapt_with<F>(
    layout: &AnsatzLayout,
    pool: &OperatorPool,
    opts: &AdaptOptions,
    initial: &Values,
    build: F,
) -> Result<AdaptResult>
where
    F: Fn(&Circuit) -> Result<Objective> + Sync,
{
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let n = layout.n_qubits();
    if let Some(op) = pool.operators().iter().find(|o| o.max_index() >= n) {
        return Err(Error::IndexOutOfRange {
            index: op.max_index(),
            size: n,
        });
    }
    let points = layout.adaptive_points();
    let mut layout = layout.clone();
    let mut values = initial.clone();
    let circuit = layout.circuit()?;
    for p in circuit.parameters() {
        values.entry(p.clone()).or_insert(0.0);
    }
    let obj = build(&circuit)?;
    let mut energy = if circuit.parameters().is_empty() {
        obj.evaluate(&values)?
    } else {
        let r = minimize(&obj, &values, &opts.optimizer)?;
        values = r.values;
        r.value
    };
    let initial_energy = energy;
    let mut rounds = Vec::new();

    let stop = loop {
        if rounds.len() >= opts.max_ops {
            break StopReason::MaxOperators;
        }
        let name = format!("a{}", rounds.len());
        let angle = Angle::param(&name);
        let candidates: Vec<(usize, usize)> = (0..pool.len())
            .flat_map(|op| points.iter().map(move |&pt| (op, pt)))
            .collect();
        let screen = |&(op, point): &(usize, usize)| -> Result<Screened> {
            let trial = layout.with_inserted(point, pool.operators()[op].gates(&angle))?;
            let obj = build(&trial.circuit()?)?;
            let mut v = values.clone();
            v.insert(name.clone(), 0.0);
            let gradient = grad(&obj, &name, opts.scheme)?.evaluate(&v)?;
            Ok(Screened {
                gradient,
                op,
                point,
            })
        };
        #[cfg(feature = "parallel")]
        let screened: Vec<Result<Screened>> = candidates.par_iter().map(screen).collect();
        #[cfg(not(feature = "parallel"))]
        let screened: Vec<Result<Screened>> = candidates.iter().map(screen).collect();

        let mut best: Option<Screened> = None;
        for s in screened {
            let s = s?;
            if !s.gradient.is_finite() {
                return Err(Error::NonFinite(rounds.len()));
            }
            if best
                .as_ref()
                .is_none_or(|b| s.gradient.abs() > b.gradient.abs() + 1e-12)
            {
                best = Some(s);
            }
        }
        let best = best.expect("pool is nonempty");
        if best.gradient.abs() < opts.screen_tol {
            break StopReason::GradientBelowTolerance;
        }

        let op = &pool.operators()[best.op];
        layout = layout.with_inserted(best.point, op.gates(&angle))?;
        values.insert(name.clone(), 0.0);
        let circuit = layout.circuit()?;
        let r = minimize(&build(&circuit)?, &values, &opts.optimizer)?;
        values = r.values;
        let previous = energy;
        energy = r.value;
        rounds.push(AdaptRound {
            round: rounds.len() + 1,
            pool_index: best.op,
            operator: op.to_string(),
            parameter: name,
            point: best.point,
            gradient: best.gradient,
            energy,
            grad_norm: r.grad_norm,
            iterations: r.iterations,
            converged: r.converged,
            values: values.clone(),
        });
        if previous - energy < opts.energy_tol {
            break StopReason::EnergyConverged;
        }
    };

    Ok(AdaptResult {
        circuit: layout.circuit()?,
        layout,
        values,
        initial_energy,
        energy,
        rounds,
        stop,
    })
}
