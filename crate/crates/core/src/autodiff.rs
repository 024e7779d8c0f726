//! Differentiable objectives built from circuit expectation values.
//!
//! An [`Objective`] is an immutable expression DAG. Leaves are constants or
//! expectation values of an observable in the state prepared by a circuit;
//! interior nodes are sums, scalings, products and squares. [`grad`] returns
//! another `Objective`, so derivatives can be taken repeatedly.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fermion::{excitation_generator, g_plus_minus, jordan_wigner, Excitation};
use crate::pauli::PauliSum;
use crate::sim::{fermionic_shift_circuit, simulate, Angle, Branch, Circuit, Gate, SparsePauli, Values};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Operator measured at an expectation leaf.
#[derive(Clone)]
pub enum Observable {
    Pauli {
        op: Arc<PauliSum>,
        compiled: Arc<SparsePauli>,
    },
    /// `|0…0⟩⟨0…0|`
    ZeroProjector,
}

impl Observable {
    pub fn pauli(op: Arc<PauliSum>, n_qubits: usize) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        let compiled = Arc::new(SparsePauli::compile(&op, n_qubits)?);
        Ok(Observable::Pauli { op, compiled })
    }
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Pauli { op, .. } => write!(f, "Pauli({} terms)", op.len()),
            Observable::ZeroProjector => write!(f, "ZeroProjector"),
        }
    }
}

/// `⟨0|U†·O·U|0⟩` for one circuit `U` and observable `O`.
#[derive(Debug, Clone)]
pub struct ExpectationNode {
    pub circuit: Arc<Circuit>,
    pub observable: Observable,
}

impl ExpectationNode {
    pub fn evaluate(&self, values: &Values) -> Result<f64> {
        let state = simulate(&self.circuit, values)?;
        match &self.observable {
            Observable::Pauli { compiled, .. } => {
                let z = compiled.expectation(state.amplitudes());
                if z.im.abs() > 1e-10 {
                    return Err(Error::ImaginaryExpectation(z.im));
                }
                Ok(z.re)
            }
            Observable::ZeroProjector => Ok(state.probability(0)),
        }
    }

    fn with_circuit(&self, circuit: Circuit) -> Objective {
        Objective::leaf(ExpectationNode {
            circuit: Arc::new(circuit),
            observable: self.observable.clone(),
        })
    }

    fn gate(&self, position: usize) -> Result<&Gate> {
        self.circuit
            .gates()
            .get(position)
            .ok_or(Error::GatePosition(position))
    }
}

#[derive(Debug)]
enum Node {
    Constant(f64),
    Expectation(ExpectationNode),
    Sum(Vec<Objective>),
    Scale(f64, Objective),
    Product(Objective, Objective),
    Square(Objective),
}

#[derive(Debug, Clone)]
pub struct Objective(Arc<Node>);

impl Objective {
    fn from_node(node: Node) -> Self {
        Objective(Arc::new(node))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(Node::Constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn leaf(node: ExpectationNode) -> Self {
        Self::from_node(Node::Expectation(node))
    }

    /// `⟨H⟩` in the state prepared by `circuit`.
    pub fn expectation(circuit: Circuit, h: &PauliSum) -> Result<Self> {
        Self::expectation_shared(Arc::new(circuit), Arc::new(h.clone()))
    }

    pub fn expectation_shared(circuit: Arc<Circuit>, h: Arc<PauliSum>) -> Result<Self> {
        let observable = Observable::pauli(h, circuit.n_qubits())?;
        Ok(Self::leaf(ExpectationNode {
            circuit,
            observable,
        }))
    }

    /// `|⟨ψ_b|ψ_a⟩|²` as the all-zero population after `adjoint(b)·a`.
    pub fn overlap(a: &Circuit, b: &Circuit) -> Result<Self> {
        Ok(Self::leaf(ExpectationNode {
            circuit: Arc::new(a.concat(&b.adjoint())?),
            observable: Observable::ZeroProjector,
        }))
    }

    pub fn sum(terms: impl IntoIterator<Item = Objective>) -> Self {
        let mut kept = Vec::new();
        let mut constant = 0.0;
        for t in terms {
            match &*t.0 {
                Node::Constant(c) => constant += c,
                _ => kept.push(t),
            }
        }
        if constant != 0.0 {
            kept.push(Self::constant(constant));
        }
        match kept.len() {
            0 => Self::zero(),
            1 => kept.pop().expect("one element"),
            _ => Self::from_node(Node::Sum(kept)),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        match &*self.0 {
            _ if c == 1.0 => self.clone(),
            _ if c == 0.0 => Self::zero(),
            Node::Constant(v) => Self::constant(c * v),
            Node::Scale(d, inner) => inner.scale(c * d),
            _ => Self::from_node(Node::Scale(c, self.clone())),
        }
    }

    pub fn product(&self, other: &Objective) -> Self {
        match (&*self.0, &*other.0) {
            (Node::Constant(a), _) => other.scale(*a),
            (_, Node::Constant(b)) => self.scale(*b),
            _ => Self::from_node(Node::Product(self.clone(), other.clone())),
        }
    }

    pub fn square(&self) -> Self {
        match &*self.0 {
            Node::Constant(v) => Self::constant(v * v),
            _ => Self::from_node(Node::Square(self.clone())),
        }
    }

    /// The leaf itself when this objective is a single expectation value.
    pub fn as_expectation(&self) -> Option<&ExpectationNode> {
        match &*self.0 {
            Node::Expectation(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&*self.0, Node::Constant(c) if *c == 0.0)
    }

    /// Number of expectation leaves, counted with multiplicity.
    pub fn leaf_count(&self) -> usize {
        match &*self.0 {
            Node::Constant(_) => 0,
            Node::Expectation(_) => 1,
            Node::Sum(ts) => ts.iter().map(Objective::leaf_count).sum(),
            Node::Scale(_, a) | Node::Square(a) => a.leaf_count(),
            Node::Product(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Names of all parameters referenced by any leaf circuit.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_leaves(&mut |leaf| {
            out.extend(leaf.circuit.parameters().iter().cloned());
        });
        out
    }

    fn visit_leaves<'a>(&'a self, f: &mut impl FnMut(&'a ExpectationNode)) {
        match &*self.0 {
            Node::Constant(_) => {}
            Node::Expectation(e) => f(e),
            Node::Sum(ts) => ts.iter().for_each(|t| t.visit_leaves(f)),
            Node::Scale(_, a) | Node::Square(a) => a.visit_leaves(f),
            Node::Product(a, b) => {
                a.visit_leaves(f);
                b.visit_leaves(f);
            }
        }
    }

    /// Evaluates every distinct leaf once (concurrently with the `parallel`
    /// feature) and combines them in a fixed order.
    pub fn evaluate(&self, values: &Values) -> Result<f64> {
        let mut seen = HashMap::new();
        let mut leaves = Vec::new();
        self.visit_leaves(&mut |leaf| {
            let key = leaf as *const ExpectationNode;
            if !seen.contains_key(&key) {
                seen.insert(key, leaves.len());
                leaves.push(leaf);
            }
        });
        #[cfg(feature = "parallel")]
        let results: Vec<Result<f64>> = leaves.par_iter().map(|l| l.evaluate(values)).collect();
        #[cfg(not(feature = "parallel"))]
        let results: Vec<Result<f64>> = leaves.iter().map(|l| l.evaluate(values)).collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(self.combine(&|leaf| results[seen[&(leaf as *const ExpectationNode)]]))
    }

    fn combine(&self, leaf: &impl Fn(&ExpectationNode) -> f64) -> f64 {
        match &*self.0 {
            Node::Constant(c) => *c,
            Node::Expectation(e) => leaf(e),
            Node::Sum(ts) => ts.iter().map(|t| t.combine(leaf)).sum(),
            Node::Scale(c, a) => c * a.combine(leaf),
            Node::Product(a, b) => a.combine(leaf) * b.combine(leaf),
            Node::Square(a) => a.combine(leaf).powi(2),
        }
    }
}

impl Add for &Objective {
    type Output = Objective;
    fn add(self, rhs: &Objective) -> Objective {
        Objective::sum([self.clone(), rhs.clone()])
    }
}

impl Add for Objective {
    type Output = Objective;
    fn add(self, rhs: Objective) -> Objective {
        Objective::sum([self, rhs])
    }
}

impl Sub for &Objective {
    type Output = Objective;
    fn sub(self, rhs: &Objective) -> Objective {
        Objective::sum([self.clone(), rhs.scale(-1.0)])
    }
}

impl Sub for Objective {
    type Output = Objective;
    fn sub(self, rhs: Objective) -> Objective {
        &self - &rhs
    }
}

impl Neg for &Objective {
    type Output = Objective;
    fn neg(self) -> Objective {
        self.scale(-1.0)
    }
}

impl Neg for Objective {
    type Output = Objective;
    fn neg(self) -> Objective {
        self.scale(-1.0)
    }
}

impl Mul for &Objective {
    type Output = Objective;
    fn mul(self, rhs: &Objective) -> Objective {
        self.product(rhs)
    }
}

impl Mul for Objective {
    type Output = Objective;
    fn mul(self, rhs: Objective) -> Objective {
        self.product(&rhs)
    }
}

impl Mul<f64> for Objective {
    type Output = Objective;
    fn mul(self, rhs: f64) -> Objective {
        self.scale(rhs)
    }
}

/// How fermionic excitation gates are differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "scheme", content = "branch", rename_all = "snake_case")]
pub enum GradientScheme {
    /// Decompose into commuting Pauli rotations and shift each one.
    QubitShift,
    /// Four shifted circuits, exact for any wavefunction.
    Exact4,
    /// Two shifted circuits with the `α` nullspace phase; exact for real wavefunctions.
    Real2(Branch),
    /// Replace `G` by `G±` and use the two-eigenvalue shift rule.
    GeneratorApprox(Branch),
}

impl GradientScheme {
    /// Default: `Real2(+)`.
    pub const DEFAULT: GradientScheme = GradientScheme::Real2(Branch::Plus);

    pub fn parse(name: &str, branch: Branch) -> Option<Self> {
        match name {
            "qubit" => Some(GradientScheme::QubitShift),
            "exact4" => Some(GradientScheme::Exact4),
            "real2" => Some(GradientScheme::Real2(branch)),
            "approx" => Some(GradientScheme::GeneratorApprox(branch)),
            _ => None,
        }
    }

    /// Prefactor `r`; `None` for the per-term qubit scheme.
    pub fn prefactor(self) -> Option<f64> {
        match self {
            GradientScheme::QubitShift => None,
            GradientScheme::Exact4 => Some(0.25),
            GradientScheme::Real2(_) | GradientScheme::GeneratorApprox(_) => Some(0.5),
        }
    }

    /// Shift `s` in radians; `None` for the per-term qubit scheme.
    pub fn shift(self) -> Option<f64> {
        match self {
            GradientScheme::QubitShift => None,
            GradientScheme::Exact4 => Some(PI),
            GradientScheme::Real2(_) | GradientScheme::GeneratorApprox(_) => Some(FRAC_PI_2),
        }
    }

    /// Self-describing column label, e.g. `real2+[r=1/2 s=pi/2]`.
    pub fn label(self) -> String {
        match self {
            GradientScheme::QubitShift => "qubit[r=|c|/2 s=pi/(4r)]".to_string(),
            GradientScheme::Exact4 => "exact4[r=1/4 s=pi]".to_string(),
            GradientScheme::Real2(b) => format!("real2{}[r=1/2 s=pi/2]", b.symbol()),
            GradientScheme::GeneratorApprox(b) => format!("approx{}[r=1/2 s=pi/2]", b.symbol()),
        }
    }
}

impl Default for GradientScheme {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// `r·(E(θ+s) − E(θ−s))` with `s = π/(4r)` for a rotation whose generator
/// has the two eigenvalues `±2r` (as `exp(−iθG/2)`).
pub fn shift_rule_gradient(node: &ExpectationNode, position: usize, r: f64) -> Result<Objective> {
    let Gate::PauliRotation { generator, angle } = node.gate(position)? else {
        return Err(Error::GeneratorNotTwoEigenvalue(position));
    };
    match generator.involution_scale() {
        Some(k) if (k - 2.0 * r).abs() < 1e-10 => {}
        _ => return Err(Error::GeneratorNotTwoEigenvalue(position)),
    }
    let s = PI / (4.0 * r);
    let plus = node.circuit.splice(position, vec![Gate::PauliRotation {
        generator: generator.clone(),
        angle: angle.shifted(s),
    }])?;
    let minus = node.circuit.splice(position, vec![Gate::PauliRotation {
        generator: generator.clone(),
        angle: angle.shifted(-s),
    }])?;
    Ok((node.with_circuit(plus) - node.with_circuit(minus)).scale(r))
}

/// Shift rule for a rotation gate: a single pair of shifts when the generator
/// squares to a multiple of the identity, otherwise one pair per term.
fn rotation_gradient(node: &ExpectationNode, position: usize) -> Result<Objective> {
    let Gate::PauliRotation { generator, angle } = node.gate(position)? else {
        return Err(Error::GeneratorNotTwoEigenvalue(position));
    };
    if let Some(k) = generator.involution_scale() {
        return shift_rule_gradient(node, position, k / 2.0);
    }
    let factors: Vec<Gate> = generator
        .iter()
        .map(|(s, c)| Gate::PauliRotation {
            generator: PauliSum::term(*c, s.clone()),
            angle: angle.clone(),
        })
        .collect();
    product_rule(node, position, factors)
}

/// Replaces the gate at `position` by commuting single-term rotations and
/// sums the shift rule over each factor.
fn product_rule(node: &ExpectationNode, position: usize, factors: Vec<Gate>) -> Result<Objective> {
    let mut terms = Vec::with_capacity(factors.len());
    for k in 0..factors.len() {
        let Gate::PauliRotation { generator, .. } = &factors[k] else {
            unreachable!("factors are rotations")
        };
        let c = generator.iter().next().map(|(_, c)| c.re).unwrap_or(0.0);
        let r = c.abs() / 2.0;
        let expanded = node.circuit.splice(position, factors.clone())?;
        let sub = ExpectationNode {
            circuit: Arc::new(expanded),
            observable: node.observable.clone(),
        };
        terms.push(shift_rule_gradient(&sub, position + k, r)?);
    }
    Ok(Objective::sum(terms))
}

fn fermionic_gate(node: &ExpectationNode, position: usize) -> Result<(&Excitation, &Angle)> {
    match node.gate(position)? {
        Gate::FermionicExcitation { excitation, angle } => Ok((excitation, angle)),
        _ => Err(Error::NotAFermionicGate(position)),
    }
}

/// Compiles the excitation into `2^{2n−1}` commuting Pauli rotations and
/// applies the two-term shift rule to each.
pub fn qubit_level_gradient(node: &ExpectationNode, position: usize) -> Result<Objective> {
    let (excitation, angle) = fermionic_gate(node, position)?;
    let g = jordan_wigner(&excitation_generator(excitation), node.circuit.n_qubits())?;
    let factors = g
        .iter()
        .map(|(s, c)| Gate::PauliRotation {
            generator: PauliSum::term(c.re, s.clone()),
            angle: angle.clone(),
        })
        .collect();
    product_rule(node, position, factors)
}

fn shifted_leaf(node: &ExpectationNode, position: usize, sign: Branch, alpha: Branch) -> Result<Objective> {
    Ok(node.with_circuit(fermionic_shift_circuit(&node.circuit, position, sign, alpha)?))
}

/// `¼ Σ_α (E[U₊^α] − E[U₋^α])`
pub fn fermionic_gradient_exact(node: &ExpectationNode, position: usize) -> Result<Objective> {
    fermionic_gate(node, position)?;
    let mut terms = Vec::with_capacity(4);
    for alpha in [Branch::Plus, Branch::Minus] {
        terms.push(shifted_leaf(node, position, Branch::Plus, alpha)?);
        terms.push(shifted_leaf(node, position, Branch::Minus, alpha)?.scale(-1.0));
    }
    Ok(Objective::sum(terms).scale(0.25))
}

/// `½ (E[U₊^α] − E[U₋^α])`
pub fn fermionic_gradient_real(node: &ExpectationNode, position: usize, alpha: Branch) -> Result<Objective> {
    fermionic_gate(node, position)?;
    let plus = shifted_leaf(node, position, Branch::Plus, alpha)?;
    let minus = shifted_leaf(node, position, Branch::Minus, alpha)?;
    Ok((plus - minus).scale(0.5))
}

/// Differentiates the gate with `G` replaced by `G₊` or `G₋`.
pub fn generator_approx_gradient(node: &ExpectationNode, position: usize, which: Branch) -> Result<Objective> {
    let (excitation, angle) = fermionic_gate(node, position)?;
    let (gp, gm) = g_plus_minus(excitation);
    let op = match which {
        Branch::Plus => gp,
        Branch::Minus => gm,
    };
    let generator = jordan_wigner(&op, node.circuit.n_qubits())?;
    let gate = Gate::rotation(generator, angle.clone())?;
    let replaced = node.circuit.splice(position, vec![gate])?;
    let sub = ExpectationNode {
        circuit: Arc::new(replaced),
        observable: node.observable.clone(),
    };
    shift_rule_gradient(&sub, position, 0.5)
}

/// Derivative of one leaf with respect to the angle of the gate at `position`.
pub fn gate_gradient(node: &ExpectationNode, position: usize, scheme: GradientScheme) -> Result<Objective> {
    match node.gate(position)? {
        Gate::PauliRotation { .. } => rotation_gradient(node, position),
        Gate::FermionicExcitation { .. } => match scheme {
            GradientScheme::QubitShift => qubit_level_gradient(node, position),
            GradientScheme::Exact4 => fermionic_gradient_exact(node, position),
            GradientScheme::Real2(a) => fermionic_gradient_real(node, position, a),
            GradientScheme::GeneratorApprox(w) => generator_approx_gradient(node, position, w),
        },
        _ => Ok(Objective::zero()),
    }
}

/// Partial derivative of `obj` with respect to `param`.
///
/// Every gate using `param` contributes its gate gradient times the angle's
/// scale. A constant objective has a zero gradient; an objective whose leaves
/// never mention `param` is an error.
pub fn grad(obj: &Objective, param: &str, scheme: GradientScheme) -> Result<Objective> {
    let params = obj.parameters();
    if obj.leaf_count() > 0 && !params.contains(param) {
        return Err(Error::UnknownParameter(param.to_string()));
    }
    grad_node(obj, param, scheme)
}

fn grad_node(obj: &Objective, param: &str, scheme: GradientScheme) -> Result<Objective> {
    Ok(match &*obj.0 {
        Node::Constant(_) => Objective::zero(),
        Node::Expectation(e) => {
            let mut terms = Vec::new();
            for pos in e.circuit.positions_of(param) {
                let scale = e.circuit.gates()[pos].angle().map_or(0.0, Angle::scale);
                terms.push(gate_gradient(e, pos, scheme)?.scale(scale));
            }
            Objective::sum(terms)
        }
        Node::Sum(ts) => Objective::sum(
            ts.iter()
                .map(|t| grad_node(t, param, scheme))
                .collect::<Result<Vec<_>>>()?,
        ),
        Node::Scale(c, a) => grad_node(a, param, scheme)?.scale(*c),
        Node::Product(a, b) => {
            let da = grad_node(a, param, scheme)?;
            let db = grad_node(b, param, scheme)?;
            Objective::sum([da.product(b), a.product(&db)])
        }
        Node::Square(a) => {
            let da = grad_node(a, param, scheme)?;
            a.product(&da).scale(2.0)
        }
    })
}

/// Central difference `(f(θ+h) − f(θ−h)) / 2h`.
pub fn finite_difference(obj: &Objective, param: &str, values: &Values, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {h}")));
    }
    let theta = *values
        .get(param)
        .ok_or_else(|| Error::UnassignedParameter(param.to_string()))?;
    let mut shifted = values.clone();
    shifted.insert(param.to_string(), theta + h);
    let plus = obj.evaluate(&shifted)?;
    shifted.insert(param.to_string(), theta - h);
    let minus = obj.evaluate(&shifted)?;
    Ok((plus - minus) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;

    fn values(pairs: &[(&str, f64)]) -> Values {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn rx_z(theta: f64) -> (Objective, Values) {
        let c = Circuit::new(1)
            .rot(PauliSum::single(1.0, 0, Axis::X), Angle::param("t"))
            .unwrap();
        let obj = Objective::expectation(c, &PauliSum::single(1.0, 0, Axis::Z)).unwrap();
        (obj, values(&[("t", theta)]))
    }

    #[test]
    fn rotation_gradient_is_minus_sine() {
        for theta in [0.0, 0.4, 1.9, -2.2] {
            let (obj, v) = rx_z(theta);
            assert!((obj.evaluate(&v).unwrap() - theta.cos()).abs() < 1e-14);
            let g = grad(&obj, "t", GradientScheme::default()).unwrap();
            assert_eq!(g.leaf_count(), 2);
            assert!((g.evaluate(&v).unwrap() + theta.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_gradient_is_zero() {
        let g = grad(&Objective::constant(3.0), "t", GradientScheme::Exact4).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn unknown_parameter() {
        let (obj, _) = rx_z(0.0);
        assert_eq!(
            grad(&obj, "q", GradientScheme::Exact4).unwrap_err(),
            Error::UnknownParameter("q".into())
        );
    }

    #[test]
    fn square_follows_chain_rule() {
        let (obj, v) = rx_z(0.7);
        let sq = obj.square();
        let g = grad(&sq, "t", GradientScheme::Exact4).unwrap();
        let expected = -2.0 * 0.7f64.cos() * 0.7f64.sin();
        assert!((g.evaluate(&v).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn scaled_parameter_uses_chain_rule() {
        let angle = Angle::Param {
            name: "t".into(),
            scale: 2.0,
            offset: 0.3,
        };
        let c = Circuit::new(1)
            .rot(PauliSum::single(1.0, 0, Axis::Y), angle)
            .unwrap();
        let obj = Objective::expectation(c, &PauliSum::single(1.0, 0, Axis::Z)).unwrap();
        let v = values(&[("t", 0.5)]);
        let g = grad(&obj, "t", GradientScheme::default()).unwrap();
        let expected = -2.0 * (2.0f64 * 0.5 + 0.3).sin();
        assert!((g.evaluate(&v).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn finite_difference_of_linear_objective() {
        let (obj, v) = rx_z(0.0);
        let lin = obj.scale(0.0) + Objective::constant(2.0);
        assert_eq!(finite_difference(&lin, "t", &v, 1e-3).unwrap(), 0.0);
        assert!(finite_difference(&obj, "t", &v, 0.0).is_err());
    }

    #[test]
    fn shift_rule_rejects_wrong_prefactor() {
        let (obj, _) = rx_z(0.0);
        let Node::Expectation(e) = &*obj.0 else { panic!() };
        assert!(shift_rule_gradient(e, 0, 0.25).is_err());
        assert!(shift_rule_gradient(e, 0, 0.5).is_ok());
    }

    #[test]
    fn shift_rule_is_not_a_chord() {
        // The shift rule is exact even with a large step; the chord is not.
        let theta = 0.9;
        let (obj, v) = rx_z(theta);
        let chord = finite_difference(&obj, "t", &v, FRAC_PI_2).unwrap();
        let exact = grad(&obj, "t", GradientScheme::default()).unwrap().evaluate(&v).unwrap();
        assert!((exact + theta.sin()).abs() < 1e-14);
        assert!((chord - (-theta.sin() * 2.0 / PI)).abs() < 1e-14);
    }

    #[test]
    fn scheme_labels_and_constants() {
        assert_eq!(GradientScheme::default(), GradientScheme::Real2(Branch::Plus));
        assert_eq!(GradientScheme::Exact4.shift(), Some(PI));
        assert_eq!(GradientScheme::Exact4.prefactor(), Some(0.25));
        assert_eq!(GradientScheme::parse("approx", Branch::Minus), Some(GradientScheme::GeneratorApprox(Branch::Minus)));
        assert!(GradientScheme::Real2(Branch::Minus).label().starts_with("real2-"));
    }
}
