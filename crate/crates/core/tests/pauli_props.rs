mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

use fermigrad::pauli::{Axis, PauliString, PauliSum};

const N: usize = 3;

fn axis(k: u8) -> Option<Axis> {
    match k {
        0 => None,
        1 => Some(Axis::X),
        2 => Some(Axis::Y),
        _ => Some(Axis::Z),
    }
}

fn pauli_sum() -> impl Strategy<Value = PauliSum> {
    prop::collection::vec(
        (prop::collection::vec(0u8..4, N), -2.0..2.0f64, -2.0..2.0f64),
        0..6,
    )
    .prop_map(|terms| {
        PauliSum::from_terms(terms.into_iter().map(|(axes, re, im)| {
            let s = PauliString::new(axes.iter().enumerate().filter_map(|(q, &a)| axis(a).map(|x| (q, x))))
                .unwrap();
            (s, Complex64::new(re, im))
        }))
    })
}

proptest! {
    #[test]
    fn multiply_matches_dense(a in pauli_sum(), b in pauli_sum()) {
        let prod = sum_dense(&a.multiply(&b), N);
        let expected = sum_dense(&a, N) * sum_dense(&b, N);
        prop_assert!(mat_max_diff(&prod, &expected) < 1e-11);
    }

    #[test]
    fn addition_and_dagger_match_dense(a in pauli_sum(), b in pauli_sum()) {
        prop_assert!(mat_max_diff(&sum_dense(&(&a + &b), N), &(sum_dense(&a, N) + sum_dense(&b, N))) < 1e-11);
        prop_assert!(mat_max_diff(&sum_dense(&a.dagger(), N), &sum_dense(&a, N).adjoint()) < 1e-12);
    }

    #[test]
    fn commutation_matches_dense(a in pauli_sum(), b in pauli_sum()) {
        for (sa, _) in a.iter() {
            for (sb, _) in b.iter() {
                let (ma, mb) = (pauli_dense(sa, N), pauli_dense(sb, N));
                let commutes = mat_max_diff(&(&ma * &mb), &(&mb * &ma)) < 1e-12;
                prop_assert_eq!(sa.commutes(sb), commutes);
            }
        }
    }

    #[test]
    fn hermiticity_matches_dense(a in pauli_sum(), b in pauli_sum()) {
        for op in [a.clone(), &a + &a.dagger(), a.multiply(&b)] {
            let m = sum_dense(&op, N);
            let dense_hermitian = mat_max_diff(&m, &m.adjoint()) < 1e-10;
            prop_assert_eq!(op.is_hermitian(), dense_hermitian);
            prop_assert_eq!(op.hermitized().is_ok(), dense_hermitian);
        }
    }

    #[test]
    fn text_round_trip(a in pauli_sum()) {
        let back = PauliSum::parse(&a.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), a.to_text());
        prop_assert!(mat_max_diff(&sum_dense(&back, N), &sum_dense(&a, N)) < 1e-15);
    }
}

#[test]
fn bad_token_reports_line_and_token() {
    let err = PauliSum::parse("1 0 Z0\n\n0.5 0 W3\n").unwrap_err();
    let text = err.to_string();
    assert!(text.contains('3') && text.contains("W3"), "{text}");
}
