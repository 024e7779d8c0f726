use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliSum};

/// Largest register the statevector simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Dense amplitude vector over `2^n` computational basis states.
///
/// Qubit 0 is the most significant bit of the basis index, so the label
/// `|1100⟩` (index 12 on four qubits) has orbitals 0 and 1 occupied.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, size: dim });
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Basis state from an occupation label such as `"1100"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.len();
        let index = usize::from_str_radix(label, 2).map_err(|_| Error::Parse {
            line: 0,
            msg: format!("invalid basis label `{label}`"),
        })?;
        Self::basis(n, index)
    }

    /// Wraps amplitudes after normalizing them.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n_qubits {
            return Err(Error::QubitCountMismatch {
                left: n_qubits,
                right: amps.len().trailing_zeros() as usize,
            });
        }
        let mut s = Self { n_qubits, amps };
        let norm = s.norm();
        s.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// True when every amplitude has imaginary part below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() < tol)
    }

    /// Bit mask of `qubit` in the basis index.
    pub fn mask(&self, qubit: usize) -> usize {
        1usize << (self.n_qubits - 1 - qubit)
    }

    pub fn label(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.n_qubits)
    }

    /// Basis labels with probability above `tol`, in index order.
    pub fn support(&self, tol: f64) -> Vec<(String, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > tol)
            .map(|(i, a)| (self.label(i), *a))
            .collect()
    }

    pub fn apply_flip(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let m = self.mask(qubit);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
        Ok(())
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                size: self.n_qubits,
            });
        }
        Ok(())
    }

    /// `⟨ψ|op|ψ⟩` as a complex number.
    pub fn expectation_complex(&self, op: &PauliSum) -> Result<Complex64> {
        Ok(SparsePauli::compile(op, self.n_qubits)?.expectation(&self.amps))
    }

    /// `⟨ψ|H|ψ⟩` for hermitian `H`; an imaginary residue above `1e-10` is an error.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if !h.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        real_part(self.expectation_complex(h)?)
    }
}

pub(crate) fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-10 {
        return Err(Error::ImaginaryExpectation(z.im));
    }
    Ok(z.re)
}

#[derive(Debug, Clone, Copy)]
struct SparseTerm {
    flip: usize,
    sign: usize,
    coeff: Complex64,
}

/// A Pauli sum lowered to bit masks: each string maps `|i⟩` to
/// `coeff · (−1)^{popcount(i & sign)} |i ⊕ flip⟩`.
#[derive(Debug, Clone)]
pub struct SparsePauli {
    terms: Vec<SparseTerm>,
}

impl SparsePauli {
    pub fn compile(op: &PauliSum, n_qubits: usize) -> Result<Self> {
        if let Some(q) = op.max_qubit() {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    size: n_qubits,
                });
            }
        }
        let terms = op
            .iter()
            .map(|(s, c)| {
                let (mut flip, mut sign, mut ny) = (0, 0, 0u32);
                for &(q, a) in s.factors() {
                    let m = 1usize << (n_qubits - 1 - q);
                    match a {
                        Axis::X => flip |= m,
                        Axis::Y => {
                            flip |= m;
                            sign |= m;
                            ny += 1;
                        }
                        Axis::Z => sign |= m,
                    }
                }
                // Y|b⟩ = i(−1)^b |1−b⟩
                let phase = Complex64::new(0.0, 1.0).powu(ny);
                SparseTerm {
                    flip,
                    sign,
                    coeff: c * phase,
                }
            })
            .collect();
        Ok(Self { terms })
    }

    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); amps.len()];
        for t in &self.terms {
            for (i, a) in amps.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let v = if (i & t.sign).count_ones() % 2 == 1 {
                    -t.coeff
                } else {
                    t.coeff
                };
                out[i ^ t.flip] += v * a;
            }
        }
        out
    }

    pub fn expectation(&self, amps: &[Complex64]) -> Complex64 {
        let mut total = Complex64::default();
        for t in &self.terms {
            let mut acc = Complex64::default();
            for (i, a) in amps.iter().enumerate() {
                let b = amps[i ^ t.flip];
                let v = b.conj() * a;
                if (i & t.sign).count_ones() % 2 == 1 {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
            total += t.coeff * acc;
        }
        total
    }
}
