//! Dense statevector simulation of circuits built from basis flips, Pauli
//! rotations, fermionic excitation gates and nullspace phase gates.

mod circuit;
mod kernels;
mod state;

pub use circuit::{Angle, Circuit, Gate, Values};
pub use kernels::{apply_excitation, apply_null_phase, apply_pauli_rotation};
pub use state::{SparsePauli, Statevector, MAX_QUBITS};

use std::f64::consts::FRAC_PI_4;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// `+` or `−` choice used for shift directions, the `α` branch of the
/// fermionic shift gate, and the `G±` generator approximations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }

    pub fn parse(s: &str) -> Option<Branch> {
        match s {
            "+" | "plus" | "+1" => Some(Branch::Plus),
            "-" | "minus" | "-1" => Some(Branch::Minus),
            _ => None,
        }
    }
}

pub fn apply_gate(state: &mut Statevector, gate: &Gate, values: &Values) -> Result<()> {
    match gate {
        Gate::BasisFlip(q) => state.apply_flip(*q),
        Gate::PauliRotation { generator, angle } => {
            apply_pauli_rotation(state, generator, angle.value(values)?)
        }
        Gate::FermionicExcitation { excitation, angle } => {
            apply_excitation(state, excitation, angle.value(values)?)
        }
        Gate::NullspacePhase { excitation, angle } => apply_null_phase(state, excitation, *angle),
    }
}

/// Runs the circuit on `|0…0⟩`.
pub fn simulate(circuit: &Circuit, values: &Values) -> Result<Statevector> {
    simulate_from(circuit, values, Statevector::zero(circuit.n_qubits())?)
}

pub fn simulate_from(circuit: &Circuit, values: &Values, mut state: Statevector) -> Result<Statevector> {
    if state.n_qubits() != circuit.n_qubits() {
        return Err(Error::QubitCountMismatch {
            left: circuit.n_qubits(),
            right: state.n_qubits(),
        });
    }
    for gate in circuit.gates() {
        apply_gate(&mut state, gate, values)?;
    }
    Ok(state)
}

/// `⟨0|U†HU|0⟩`
pub fn expectation(circuit: &Circuit, values: &Values, h: &PauliSum) -> Result<f64> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    simulate(circuit, values)?.expectation(h)
}

/// `|⟨ψ_b|ψ_a⟩|²`, computed as the `|0…0⟩` population after `adjoint(b)·a`.
pub fn overlap_squared(a: &Circuit, b: &Circuit, values: &Values) -> Result<f64> {
    let joined = a.concat(&b.adjoint())?;
    Ok(simulate(&joined, values)?.probability(0))
}

/// Fermionic shift gate: the excitation at `position` becomes `U(θ ± π/2)`
/// followed by `exp(−i·α·(±)·(π/4)·P₀)`.
pub fn fermionic_shift_circuit(
    circuit: &Circuit,
    position: usize,
    sign: Branch,
    alpha: Branch,
) -> Result<Circuit> {
    let gate = circuit
        .gates()
        .get(position)
        .ok_or(Error::GatePosition(position))?;
    let Gate::FermionicExcitation { excitation, angle } = gate else {
        return Err(Error::NotAFermionicGate(position));
    };
    let shifted = Gate::FermionicExcitation {
        excitation: excitation.clone(),
        angle: angle.shifted(sign.sign() * FRAC_PI_2),
    };
    let phase = Gate::NullspacePhase {
        excitation: excitation.clone(),
        angle: alpha.sign() * sign.sign() * FRAC_PI_4,
    };
    circuit.splice(position, vec![shifted, phase])
}
