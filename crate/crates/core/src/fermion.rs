//! Second-quantized fermionic operators, excitation generators and their
//! eigenspace projectors, and qubit encodings.
//!
//! Spin orbitals are interleaved: spatial orbital `j` has spin-up index `2j`
//! and spin-down index `2j + 1`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub index: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(index: usize) -> Self {
        Self { index, dagger: true }
    }

    pub fn annihilate(index: usize) -> Self {
        Self {
            index,
            dagger: false,
        }
    }

    pub fn adjoint(self) -> Self {
        Self {
            index: self.index,
            dagger: !self.dagger,
        }
    }
}

/// Linear combination of products of ladder operators. Products are kept as
/// written; no normal ordering is applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::product(c, Vec::new())
    }

    pub fn product(c: impl Into<Complex64>, ops: Vec<Ladder>) -> Self {
        Self {
            terms: vec![(c.into(), ops)],
        }
    }

    /// `N_k = a†_k a_k`
    pub fn number(k: usize) -> Self {
        Self::product(1.0, vec![Ladder::create(k), Ladder::annihilate(k)])
    }

    /// `Ñ_k = a_k a†_k`
    pub fn hole(k: usize) -> Self {
        Self::product(1.0, vec![Ladder::annihilate(k), Ladder::create(k)])
    }

    /// Two-index `N_pq = a†_p a_q`.
    pub fn hopping(p: usize, q: usize) -> Self {
        Self::product(1.0, vec![Ladder::create(p), Ladder::annihilate(q)])
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(_, ops)| ops.iter().map(|l| l.index))
            .max()
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self {
            terms: self.terms.iter().map(|(v, ops)| (v * c, ops.clone())).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(v, ops)| (v.conj(), ops.iter().rev().map(|l| l.adjoint()).collect()))
                .collect(),
        }
    }
}

impl Add for &FermionOperator {
    type Output = FermionOperator;
    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        FermionOperator { terms }
    }
}

impl Add for FermionOperator {
    type Output = FermionOperator;
    fn add(self, rhs: FermionOperator) -> FermionOperator {
        &self + &rhs
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        self + &rhs.scale(-1.0)
    }
}

impl Sub for FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: FermionOperator) -> FermionOperator {
        &self - &rhs
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, oa) in &self.terms {
            for (b, ob) in &rhs.terms {
                let mut ops = oa.clone();
                ops.extend_from_slice(ob);
                terms.push((a * b, ops));
            }
        }
        FermionOperator { terms }
    }
}

impl Mul for FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: FermionOperator) -> FermionOperator {
        &self * &rhs
    }
}

/// An n-fold excitation: ordered `(p_i, q_i)` pairs moving electrons from the
/// `q` orbitals into the `p` orbitals. Pair order is significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Excitation {
    pairs: Vec<(usize, usize)>,
}

impl Excitation {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidExcitation("no index pairs".into()));
        }
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidExcitation(format!(
                "indices are not distinct in {pairs:?}"
            )));
        }
        Ok(Self { pairs })
    }

    pub fn single(p: usize, q: usize) -> Result<Self> {
        Self::new(vec![(p, q)])
    }

    pub fn double(first: (usize, usize), second: (usize, usize)) -> Result<Self> {
        Self::new(vec![first, second])
    }

    /// Builds from a flat index list `p0 q0 p1 q1 ...`.
    pub fn from_flat(indices: &[usize]) -> Result<Self> {
        if indices.len() % 2 != 0 {
            return Err(Error::InvalidExcitation(
                "odd number of indices".to_string(),
            ));
        }
        Self::new(indices.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn max_index(&self) -> usize {
        self.pairs.iter().map(|&(p, q)| p.max(q)).max().unwrap_or(0)
    }

    pub fn flat(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(p, q)| [p, q]).collect()
    }

    /// All pairs connect orbitals of the same spin.
    pub fn is_same_spin(&self) -> bool {
        self.pairs.iter().all(|&(p, q)| p % 2 == q % 2)
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, q)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({p},{q})")?;
        }
        Ok(())
    }
}

/// `∏ a†_{p_i} a_{q_i}` in pair order.
fn excitation_product(e: &Excitation) -> FermionOperator {
    let ops = e
        .pairs
        .iter()
        .flat_map(|&(p, q)| [Ladder::create(p), Ladder::annihilate(q)])
        .collect();
    FermionOperator::product(1.0, ops)
}

/// `G = i(∏ a†_{p_i} a_{q_i} − h.c.)`
pub fn excitation_generator(e: &Excitation) -> FermionOperator {
    let t = excitation_product(e);
    (&t - &t.dagger()).scale(Complex64::new(0.0, 1.0))
}

/// `P₀ = 1 − ∏ N_{p_i}Ñ_{q_i} − ∏ N_{q_i}Ñ_{p_i}` with diagonal number operators.
pub fn nullspace_projector(e: &Excitation) -> FermionOperator {
    let forward = e
        .pairs
        .iter()
        .fold(FermionOperator::identity(), |acc, &(p, q)| {
            &(&acc * &FermionOperator::number(p)) * &FermionOperator::hole(q)
        });
    let backward = e
        .pairs
        .iter()
        .fold(FermionOperator::identity(), |acc, &(p, q)| {
            &(&acc * &FermionOperator::number(q)) * &FermionOperator::hole(p)
        });
    &(&FermionOperator::identity() - &forward) - &backward
}

/// `(G₊, G₋) = (G + P₀, G − P₀)`
pub fn g_plus_minus(e: &Excitation) -> (FermionOperator, FermionOperator) {
    let g = excitation_generator(e);
    let p0 = nullspace_projector(e);
    (&g + &p0, &g - &p0)
}

/// `P₊ = ½(1 + G₋)`, `P₋ = ½(1 − G₊)`: projectors onto the `±1` eigenspaces of `G`.
pub fn eigen_projectors(e: &Excitation) -> (FermionOperator, FermionOperator) {
    let (gp, gm) = g_plus_minus(e);
    let one = FermionOperator::identity();
    ((&one + &gm).scale(0.5), (&one - &gp).scale(0.5))
}

/// Maps fermionic operators on `n_orbitals` spin orbitals to qubit operators.
pub trait Encoding: Send + Sync {
    fn name(&self) -> &str;

    fn encode(&self, op: &FermionOperator, n_orbitals: usize) -> Result<PauliSum>;
}

/// Jordan-Wigner with the parity string on the higher-indexed qubits:
/// `a_k ↦ σ⁺_k Z_{k+1} ⋯ Z_{N−1}`, `a†_k ↦ σ⁻_k Z_{k+1} ⋯ Z_{N−1}`,
/// where `σ± = (X ± iY)/2` and `|1⟩` marks an occupied orbital.
#[derive(Debug, Clone, Copy, Default)]
pub struct JordanWigner;

impl JordanWigner {
    fn ladder(&self, l: Ladder, n: usize) -> PauliSum {
        let tail = (l.index + 1..n).map(|q| (q, Axis::Z));
        let xs = PauliString::new(std::iter::once((l.index, Axis::X)).chain(tail.clone()))
            .expect("distinct qubits");
        let ys = PauliString::new(std::iter::once((l.index, Axis::Y)).chain(tail))
            .expect("distinct qubits");
        let y_coef = if l.dagger { -0.5 } else { 0.5 };
        PauliSum::from_terms([
            (xs, Complex64::new(0.5, 0.0)),
            (ys, Complex64::new(0.0, y_coef)),
        ])
    }
}

impl Encoding for JordanWigner {
    fn name(&self) -> &str {
        "jordan-wigner"
    }

    fn encode(&self, op: &FermionOperator, n_orbitals: usize) -> Result<PauliSum> {
        if let Some(k) = op.max_index() {
            if k >= n_orbitals {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    size: n_orbitals,
                });
            }
        }
        let mut out = PauliSum::zero();
        for (c, ops) in op.terms() {
            let mut term = PauliSum::constant(*c);
            for &l in ops {
                term = term.multiply(&self.ladder(l, n_orbitals));
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

/// Convenience wrapper around [`JordanWigner`].
pub fn jordan_wigner(op: &FermionOperator, n_orbitals: usize) -> Result<PauliSum> {
    JordanWigner.encode(op, n_orbitals)
}

/// Total particle number `Σ_k N_k`.
pub fn particle_number(n_orbitals: usize) -> FermionOperator {
    (0..n_orbitals).fold(FermionOperator::zero(), |acc, k| {
        &acc + &FermionOperator::number(k)
    })
}

/// `S_z = ½ Σ_j (N_{2j} − N_{2j+1})`
pub fn spin_z(n_orbitals: usize) -> FermionOperator {
    (0..n_orbitals).fold(FermionOperator::zero(), |acc, k| {
        let sign = if k % 2 == 0 { 0.5 } else { -0.5 };
        &acc + &FermionOperator::number(k).scale(sign)
    })
}

/// `S² = S₋S₊ + S_z(S_z + 1)`
pub fn spin_squared(n_orbitals: usize) -> FermionOperator {
    let spatial = n_orbitals / 2;
    let raise = (0..spatial).fold(FermionOperator::zero(), |acc, j| {
        &acc + &FermionOperator::hopping(2 * j, 2 * j + 1)
    });
    let lower = raise.dagger();
    let sz = spin_z(n_orbitals);
    &(&lower * &raise) + &(&sz * &(&sz + &FermionOperator::identity()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{hermitian_eigenvalues, to_dense, DenseMatrix};

    fn dense(op: &FermionOperator, n: usize) -> DenseMatrix {
        to_dense(&jordan_wigner(op, n).unwrap(), n).unwrap()
    }

    fn close(a: &DenseMatrix, b: &DenseMatrix) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn excitation_validation() {
        assert!(Excitation::new(vec![]).is_err());
        assert!(Excitation::new(vec![(0, 0)]).is_err());
        assert!(Excitation::double((0, 2), (2, 3)).is_err());
        assert_eq!(Excitation::from_flat(&[0, 2, 1, 3]).unwrap().rank(), 2);
        assert!(Excitation::from_flat(&[0, 2, 1]).is_err());
    }

    #[test]
    fn creation_on_one_orbital() {
        let a = jordan_wigner(&FermionOperator::product(1.0, vec![Ladder::create(0)]), 1).unwrap();
        let expected = PauliSum::from_terms([
            (PauliString::single(0, Axis::X), Complex64::new(0.5, 0.0)),
            (PauliString::single(0, Axis::Y), Complex64::new(0.0, -0.5)),
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn creation_fills_the_one_state() {
        // |1> means occupied: a†|0> = |1>, i.e. dense[(1, 0)] = 1.
        let m = dense(&FermionOperator::product(1.0, vec![Ladder::create(0)]), 1);
        assert!((m[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn anticommutation_relations() {
        let n = 4;
        let id = DenseMatrix::identity(1 << n, 1 << n);
        for p in 0..n {
            for q in 0..n {
                let ap = FermionOperator::product(1.0, vec![Ladder::annihilate(p)]);
                let aq_dag = FermionOperator::product(1.0, vec![Ladder::create(q)]);
                let anti = &(&ap * &aq_dag) + &(&aq_dag * &ap);
                let expected = if p == q { id.clone() } else { id.clone() * Complex64::new(0.0, 0.0) };
                assert!(close(&dense(&anti, n), &expected), "p={p} q={q}");
                let aq = FermionOperator::product(1.0, vec![Ladder::annihilate(q)]);
                let both = &(&ap * &aq) + &(&aq * &ap);
                assert!(dense(&both, n).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_generator_has_two_real_terms() {
        let g = jordan_wigner(&excitation_generator(&Excitation::single(0, 1).unwrap()), 2).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.is_hermitian());
    }

    #[test]
    fn generator_term_counts() {
        let single = Excitation::single(3, 0).unwrap();
        let double = Excitation::double((0, 2), (1, 3)).unwrap();
        let triple = Excitation::new(vec![(0, 3), (1, 4), (2, 5)]).unwrap();
        assert_eq!(jordan_wigner(&excitation_generator(&single), 4).unwrap().len(), 2);
        assert_eq!(jordan_wigner(&excitation_generator(&double), 4).unwrap().len(), 8);
        assert_eq!(jordan_wigner(&excitation_generator(&triple), 6).unwrap().len(), 32);
    }

    #[test]
    fn generator_strings_commute() {
        let double = Excitation::double((0, 2), (1, 3)).unwrap();
        let g = jordan_wigner(&excitation_generator(&double), 4).unwrap();
        let strings: Vec<_> = g.iter().map(|(s, _)| s.clone()).collect();
        for a in &strings {
            for b in &strings {
                assert!(a.commutes(b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn single_nullspace_projector_is_zz_form() {
        let e = Excitation::single(0, 3).unwrap();
        let p0 = jordan_wigner(&nullspace_projector(&e), 4).unwrap();
        // 1 − ½(1 − Z_p Z_q) = ½ + ½ Z_p Z_q
        let expected = PauliSum::parse("0.5 0\n0.5 0 Z0 Z3\n").unwrap();
        assert_eq!(p0, expected);
    }

    #[test]
    fn double_nullspace_projector_matches_q_form() {
        let e = Excitation::double((0, 2), (1, 3)).unwrap();
        let p0 = jordan_wigner(&nullspace_projector(&e), 4).unwrap();
        let qp = |q| PauliSum::parse(&format!("0.5 0\n0.5 0 Z{q}\n")).unwrap();
        let qm = |q| PauliSum::parse(&format!("0.5 0\n-0.5 0 Z{q}\n")).unwrap();
        let a = qm(0) * qm(1) * qp(2) * qp(3);
        let b = qp(0) * qp(1) * qm(2) * qm(3);
        let expected = &(&PauliSum::identity() - &a) - &b;
        assert_eq!(p0, expected);
        assert!(p0.is_diagonal());
        // identity + six ZZ strings + one ZZZZ string
        assert_eq!(p0.len(), 8);
    }

    #[test]
    fn generator_eigenvalues_are_minus_one_zero_one() {
        let e = Excitation::single(0, 1).unwrap();
        for v in hermitian_eigenvalues(&dense(&excitation_generator(&e), 2)) {
            assert!([-1.0, 0.0, 1.0].iter().any(|x| (v - x).abs() < 1e-10), "{v}");
        }
    }

    #[test]
    fn generator_annihilates_nullspace() {
        let e = Excitation::double((0, 2), (1, 3)).unwrap();
        let g = jordan_wigner(&excitation_generator(&e), 4).unwrap();
        let p0 = jordan_wigner(&nullspace_projector(&e), 4).unwrap();
        assert!((&g * &p0).is_empty());
        assert!((&p0 * &g).is_empty());
    }

    #[test]
    fn s_squared_of_closed_shell_is_zero() {
        let s2 = jordan_wigner(&spin_squared(4), 4).unwrap();
        let m = to_dense(&s2, 4).unwrap();
        // |1100> -> index 12
        assert!(m[(12, 12)].norm() < 1e-12);
        // |1000>: one spin-up electron, S² = 3/4
        assert!((m[(8, 8)].re - 0.75).abs() < 1e-12);
    }
}
