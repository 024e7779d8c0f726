use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{excitation_generator, jordan_wigner, nullspace_projector, Excitation};
use crate::pauli::PauliSum;
use crate::sim::state::{SparsePauli, Statevector};

/// Encoded generator and nullspace projector of one excitation on one register size.
pub(crate) struct EncodedExcitation {
    pub generator: SparsePauli,
    pub projector: SparsePauli,
}

type Cache = Mutex<HashMap<(Excitation, usize), Arc<EncodedExcitation>>>;

static ENCODED: LazyLock<Cache> = LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn encoded(e: &Excitation, n_qubits: usize) -> Result<Arc<EncodedExcitation>> {
    if e.max_index() >= n_qubits {
        return Err(Error::IndexOutOfRange {
            index: e.max_index(),
            size: n_qubits,
        });
    }
    let key = (e.clone(), n_qubits);
    if let Some(hit) = ENCODED.lock().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let g = jordan_wigner(&excitation_generator(e), n_qubits)?;
    let p0 = jordan_wigner(&nullspace_projector(e), n_qubits)?;
    let enc = Arc::new(EncodedExcitation {
        generator: SparsePauli::compile(&g, n_qubits)?,
        projector: SparsePauli::compile(&p0, n_qubits)?,
    });
    ENCODED
        .lock()
        .expect("cache lock")
        .insert(key, enc.clone());
    Ok(enc)
}

/// `U(θ)|ψ⟩ = cos(θ/2)|ψ⟩ − i sin(θ/2) G|ψ⟩ + (1 − cos(θ/2)) P₀|ψ⟩`
pub fn apply_excitation(state: &mut Statevector, e: &Excitation, theta: f64) -> Result<()> {
    let enc = encoded(e, state.n_qubits())?;
    let amps = state.amplitudes_mut();
    let g = enc.generator.apply(amps);
    let p = enc.projector.apply(amps);
    let (s, c) = (theta / 2.0).sin_cos();
    let gs = Complex64::new(0.0, -s);
    for ((a, g), p) in amps.iter_mut().zip(g).zip(p) {
        *a = *a * c + g * gs + p * (1.0 - c);
    }
    Ok(())
}

/// `exp(−iφP₀)|ψ⟩ = |ψ⟩ + (e^{−iφ} − 1) P₀|ψ⟩`
pub fn apply_null_phase(state: &mut Statevector, e: &Excitation, phi: f64) -> Result<()> {
    let enc = encoded(e, state.n_qubits())?;
    let amps = state.amplitudes_mut();
    let p = enc.projector.apply(amps);
    let f = Complex64::from_polar(1.0, -phi) - 1.0;
    for (a, p) in amps.iter_mut().zip(p) {
        *a += p * f;
    }
    Ok(())
}

/// `∏_k exp(−iθ c_k σ_k / 2)`; the strings must commute and carry real coefficients.
pub fn apply_pauli_rotation(state: &mut Statevector, generator: &PauliSum, theta: f64) -> Result<()> {
    if !generator.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    if !generator.strings_commute() {
        return Err(Error::NonCommutingGenerator);
    }
    let n = state.n_qubits();
    for (s, c) in generator.iter() {
        let single = PauliSum::term(1.0, s.clone());
        let op = SparsePauli::compile(&single, n)?;
        let amps = state.amplitudes_mut();
        let applied = op.apply(amps);
        let (sn, cs) = (theta * c.re / 2.0).sin_cos();
        let f = Complex64::new(0.0, -sn);
        for (a, b) in amps.iter_mut().zip(applied) {
            *a = *a * cs + b * f;
        }
    }
    Ok(())
}
