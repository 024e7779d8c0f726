//! Reference implementations for the integration tests. Fermionic operators
//! act on basis states by direct bit manipulation, independent of the
//! library's operator algebra and encoding.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use fermigrad::fermion::Excitation;
use fermigrad::pauli::{Axis, PauliString, PauliSum};
use fermigrad::sim::{Angle, Circuit, Statevector};

pub type Mat = DMatrix<Complex64>;
pub type Vect = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `a_k` or `a†_k` on basis index `x` of an `n`-qubit register, qubit 0 most
/// significant, sign from the occupied qubits above `k`.
pub fn ladder(dagger: bool, k: usize, n: usize, x: usize) -> Option<(usize, f64)> {
    let mask = 1usize << (n - 1 - k);
    let occupied = x & mask != 0;
    if occupied == dagger {
        return None;
    }
    let sign = if (x & (mask - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((x ^ mask, sign))
}

/// Applies a product of ladder operators, rightmost first.
pub fn ladder_string(ops: &[(bool, usize)], n: usize, x: usize) -> Option<(usize, f64)> {
    ops.iter().rev().try_fold((x, 1.0), |(y, s), &(d, k)| {
        ladder(d, k, n, y).map(|(z, t)| (z, s * t))
    })
}

/// Dense `∏ a†_p a_q`.
pub fn excitation_product(pairs: &[(usize, usize)], n: usize) -> Mat {
    let ops: Vec<(bool, usize)> = pairs.iter().flat_map(|&(p, q)| [(true, p), (false, q)]).collect();
    let dim = 1 << n;
    let mut m = Mat::zeros(dim, dim);
    for x in 0..dim {
        if let Some((y, s)) = ladder_string(&ops, n, x) {
            m[(y, x)] += c(s);
        }
    }
    m
}

/// Dense `G = i(T − T†)`.
pub fn generator(pairs: &[(usize, usize)], n: usize) -> Mat {
    let t = excitation_product(pairs, n);
    (&t - t.adjoint()) * I
}

/// Projector onto the basis states `G` annihilates.
pub fn null_projector(g: &Mat) -> Mat {
    let dim = g.nrows();
    let mut p = Mat::zeros(dim, dim);
    for x in 0..dim {
        if g.column(x).iter().all(|z| z.norm() == 0.0) {
            p[(x, x)] = c(1.0);
        }
    }
    p
}

/// `exp(−i t A) v` by Taylor series, `A` hermitian with small norm.
pub fn expm_apply(a: &Mat, t: f64, v: &Vect) -> Vect {
    let mut out = v.clone();
    let mut term = v.clone();
    for k in 1..200 {
        term = (a * &term) * (-I * t / k as f64);
        out += &term;
        if term.norm() < 1e-20 {
            break;
        }
    }
    out
}

pub fn to_vect(s: &Statevector) -> Vect {
    Vect::from_column_slice(s.amplitudes())
}

pub fn max_diff(a: &Vect, b: &Vect) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn mat_max_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dense Pauli string, built qubit by qubit.
pub fn pauli_dense(s: &PauliString, n: usize) -> Mat {
    let mut m = Mat::from_element(1, 1, c(1.0));
    for q in 0..n {
        let f = match s.axis_at(q) {
            None => Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]),
            Some(Axis::X) => Mat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
            Some(Axis::Y) => Mat::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)]),
            Some(Axis::Z) => Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        };
        m = m.kronecker(&f);
    }
    m
}

pub fn sum_dense(a: &PauliSum, n: usize) -> Mat {
    let dim = 1 << n;
    a.iter()
        .fold(Mat::zeros(dim, dim), |acc, (s, coef)| acc + pauli_dense(s, n) * *coef)
}

pub fn random_excitation<R: Rng>(rng: &mut R, n: usize, max_rank: usize) -> Excitation {
    let rank = rng.random_range(1..=max_rank.min(n / 2));
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    Excitation::new((0..rank).map(|k| (idx[2 * k], idx[2 * k + 1])).collect()).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Statevector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Statevector::from_amplitudes(n, amps.into_iter().map(|z| z / norm).collect()).unwrap()
}

/// Random real-symmetric Hamiltonian: Pauli strings with an even number of `Y`.
pub fn random_real_hamiltonian<R: Rng>(rng: &mut R, n: usize, terms: usize) -> PauliSum {
    let mut out = Vec::new();
    while out.len() < terms {
        let factors: Vec<(usize, Axis)> = (0..n)
            .filter_map(|q| match rng.random_range(0..4) {
                0 => None,
                1 => Some((q, Axis::X)),
                2 => Some((q, Axis::Y)),
                _ => Some((q, Axis::Z)),
            })
            .collect();
        if factors.iter().filter(|(_, a)| *a == Axis::Y).count() % 2 == 1 {
            continue;
        }
        out.push((PauliString::new(factors).unwrap(), c(rng.random_range(-1.0..1.0))));
    }
    PauliSum::from_terms(out)
}

/// Basis-state reference, a few fixed excitation gates and the parameter `t`
/// on one more random excitation; every amplitude stays real.
pub fn random_real_circuit<R: Rng>(rng: &mut R, n: usize, max_rank: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        if rng.random_bool(0.5) {
            c = c.x(q).unwrap();
        }
    }
    for _ in 0..rng.random_range(1..=3) {
        let e = random_excitation(rng, n, max_rank);
        c = c.ferm(e, Angle::Fixed(rng.random_range(-3.0..3.0))).unwrap();
    }
    let e = random_excitation(rng, n, max_rank);
    c.ferm(e, Angle::param("t")).unwrap()
}
