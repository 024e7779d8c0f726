use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::adapt::{adapt_with, AdaptOptions, AdaptResult, AnsatzLayout, OperatorPool};
use crate::autodiff::Objective;
use crate::error::{Error, Result};
use crate::fermion::Excitation;
use crate::pauli::PauliSum;
use crate::sim::{Angle, Circuit, Values};

/// A previously solved state with its energy and optional penalty weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedState {
    /// Parameter-free circuit preparing the state.
    pub circuit: Circuit,
    pub energy: f64,
    /// Weight `w` of the `w·|⟨ψ_i|ψ⟩|²` penalty; `−energy` when absent.
    pub penalty: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExcitedStateTask {
    hamiltonian: Arc<PauliSum>,
    solved: Vec<SolvedState>,
}

impl ExcitedStateTask {
    pub fn new(hamiltonian: &PauliSum) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        Ok(Self {
            hamiltonian: Arc::new(hamiltonian.clone()),
            solved: Vec::new(),
        })
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn solved(&self) -> &[SolvedState] {
        &self.solved
    }

    /// Records a solved state, binding its parameters.
    pub fn push(&mut self, circuit: &Circuit, values: &Values, energy: f64, penalty: Option<f64>) -> Result<()> {
        if let Some(q) = self.hamiltonian.max_qubit() {
            if q >= circuit.n_qubits() {
                return Err(Error::QubitCountMismatch {
                    left: q + 1,
                    right: circuit.n_qubits(),
                });
            }
        }
        if let Some(first) = self.solved.first() {
            if first.circuit.n_qubits() != circuit.n_qubits() {
                return Err(Error::QubitCountMismatch {
                    left: first.circuit.n_qubits(),
                    right: circuit.n_qubits(),
                });
            }
        }
        self.solved.push(SolvedState {
            circuit: circuit.bind(values)?,
            energy,
            penalty,
        });
        Ok(())
    }
}

/// `⟨H⟩_U + Σ_i w_i·|⟨ψ_i|ψ_U⟩|²` with default weights `w_i = −E_i`.
pub fn excited_objective(task: &ExcitedStateTask, ansatz: &Circuit) -> Result<Objective> {
    let mut terms = vec![Objective::expectation_shared(
        Arc::new(ansatz.clone()),
        task.hamiltonian.clone(),
    )?];
    for s in &task.solved {
        let w = match s.penalty {
            Some(w) => w,
            None if s.energy < 0.0 => -s.energy,
            None => return Err(Error::NonNegativeEnergy(s.energy)),
        };
        terms.push(Objective::overlap(ansatz, &s.circuit)?.scale(w));
    }
    Ok(Objective::sum(terms))
}

/// Adapt-VQE on the penalized objective; screening uses its full gradient.
pub fn excited_adapt(
    task: &ExcitedStateTask,
    layout: &AnsatzLayout,
    pool: &OperatorPool,
    opts: &AdaptOptions,
) -> Result<AdaptResult> {
    adapt_with(layout, pool, opts, &Values::new(), |c| excited_objective(task, c))
}

/// Singlet single excitation of one electron pair, in spatial orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CisPair {
    pub from: usize,
    pub to: usize,
}

/// Basis-state preparation for the occupied spin orbitals. With a
/// [`CisPair`], produces the real singlet `(|…i↓a↑…⟩ + |…i↑a↓…⟩)/√2`.
pub fn prepare_reference(n_qubits: usize, occupied: &[usize], cis: Option<CisPair>) -> Result<Circuit> {
    let mut occ = occupied.to_vec();
    occ.sort_unstable();
    if occ.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidExcitation(format!(
            "repeated orbital in occupation {occupied:?}"
        )));
    }
    if let Some(&q) = occ.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::IndexOutOfRange {
            index: q,
            size: n_qubits,
        });
    }
    let Some(CisPair { from, to }) = cis else {
        return occ.iter().try_fold(Circuit::new(n_qubits), |c, &q| c.x(q));
    };
    let (i_up, i_dn, a_up, a_dn) = (2 * from, 2 * from + 1, 2 * to, 2 * to + 1);
    if !(occ.contains(&i_up) && occ.contains(&i_dn)) || occ.contains(&a_up) || occ.contains(&a_dn) {
        return Err(Error::InvalidExcitation(format!(
            "orbital {from} must be doubly occupied and {to} empty"
        )));
    }
    if a_dn >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index: a_dn,
            size: n_qubits,
        });
    }
    let mut c = Circuit::new(n_qubits);
    for &q in &occ {
        c = c.x(if q == i_up { a_up } else { q })?;
    }
    let mix = Excitation::new(vec![(i_up, a_up), (a_dn, i_dn)])?;
    c.ferm(mix, Angle::Fixed(FRAC_PI_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{simulate, Statevector};

    #[test]
    fn plain_reference() {
        let c = prepare_reference(4, &[0, 1], None).unwrap();
        let s = simulate(&c, &Values::new()).unwrap();
        assert_eq!(s, Statevector::from_label("1100").unwrap());
    }

    #[test]
    fn cis_reference_is_two_real_determinants() {
        let c = prepare_reference(4, &[0, 1], Some(CisPair { from: 0, to: 1 })).unwrap();
        let s = simulate(&c, &Values::new()).unwrap();
        let support = s.support(1e-12);
        assert_eq!(support.len(), 2);
        for (_, a) in &support {
            assert!((a.re.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
            assert!(a.im.abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_references() {
        assert!(prepare_reference(4, &[0, 0], None).is_err());
        assert!(prepare_reference(4, &[0, 4], None).is_err());
        assert!(prepare_reference(4, &[0, 2], Some(CisPair { from: 0, to: 1 })).is_err());
        assert!(prepare_reference(4, &[0, 1], Some(CisPair { from: 0, to: 2 })).is_err());
    }

    #[test]
    fn default_penalty_needs_negative_energy() {
        let h = PauliSum::identity();
        let mut task = ExcitedStateTask::new(&h).unwrap();
        task.push(&Circuit::new(1), &Values::new(), 0.5, None).unwrap();
        assert_eq!(
            excited_objective(&task, &Circuit::new(1)).unwrap_err(),
            Error::NonNegativeEnergy(0.5)
        );
    }

    #[test]
    fn no_solved_states_is_plain_energy() {
        let h = PauliSum::single(1.0, 0, crate::pauli::Axis::Z);
        let task = ExcitedStateTask::new(&h).unwrap();
        let c = Circuit::new(1).x(0).unwrap();
        let e = excited_objective(&task, &c).unwrap().evaluate(&Values::new()).unwrap();
        assert_eq!(e, -1.0);
    }
}
