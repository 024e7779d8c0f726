mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fermigrad::autodiff::*;
use fermigrad::fermion::{g_plus_minus, jordan_wigner};
use fermigrad::sim::*;

const FD: f64 = 1e-5;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn at(t: f64) -> Values {
    [("t".to_string(), t)].into()
}

const REAL_SCHEMES: [GradientScheme; 4] = [
    GradientScheme::QubitShift,
    GradientScheme::Exact4,
    GradientScheme::Real2(Branch::Plus),
    GradientScheme::Real2(Branch::Minus),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schemes_agree_on_real_circuits(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let circuit = random_real_circuit(&mut r, n, 3);
        let h = random_real_hamiltonian(&mut r, n, 6);
        let obj = Objective::expectation(circuit, &h).unwrap();
        let v = at(r.random_range(-4.0..4.0));
        let g: Vec<f64> = REAL_SCHEMES.iter().map(|s| grad(&obj, "t", *s).unwrap().evaluate(&v).unwrap()).collect();
        let fd = finite_difference(&obj, "t", &v, FD).unwrap();
        prop_assert!((g[1] - g[2]).abs() < 1e-9 && (g[1] - g[3]).abs() < 1e-9, "{:?}", g);
        prop_assert!((g[0] - g[1]).abs() < 1e-10, "{:?}", g);
        prop_assert!((g[1] - fd).abs() < 1e-6, "{:?} fd {}", g, fd);
    }

    #[test]
    fn leaf_counts_per_scheme(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let circuit = random_real_circuit(&mut r, n, 3);
        let Gate::FermionicExcitation { excitation, .. } = circuit.gates().last().unwrap().clone() else { unreachable!() };
        let obj = Objective::expectation(circuit, &random_real_hamiltonian(&mut r, n, 3)).unwrap();
        let rank = excitation.rank() as u32;
        prop_assert_eq!(grad(&obj, "t", GradientScheme::QubitShift).unwrap().leaf_count(), 1usize << (2 * rank));
        prop_assert_eq!(grad(&obj, "t", GradientScheme::Exact4).unwrap().leaf_count(), 4);
        prop_assert_eq!(grad(&obj, "t", GradientScheme::Real2(Branch::Plus)).unwrap().leaf_count(), 2);
    }

    #[test]
    fn exact_schemes_match_fd_on_complex_states(seed in any::<u64>(), n in 4usize..=6) {
        let mut r = rng(seed);
        let e = random_excitation(&mut r, n, 2);
        let (gp, _) = g_plus_minus(&e);
        let mut c = Circuit::new(n);
        for q in 0..n {
            if r.random_bool(0.5) { c = c.x(q).unwrap(); }
        }
        let c = c
            .ferm(random_excitation(&mut r, n, 2), Angle::Fixed(r.random_range(-3.0..3.0))).unwrap()
            .rot(jordan_wigner(&gp, n).unwrap(), Angle::Fixed(r.random_range(-3.0..3.0))).unwrap()
            .null_phase(random_excitation(&mut r, n, 2), r.random_range(-3.0..3.0)).unwrap()
            .ferm(e, Angle::param("t")).unwrap();
        let obj = Objective::expectation(c, &random_real_hamiltonian(&mut r, n, 6)).unwrap();
        let v = at(r.random_range(-4.0..4.0));
        let fd = finite_difference(&obj, "t", &v, FD).unwrap();
        for s in [GradientScheme::Exact4, GradientScheme::QubitShift] {
            let g = grad(&obj, "t", s).unwrap().evaluate(&v).unwrap();
            prop_assert!((g - fd).abs() < 1e-6, "{} {} {}", s.label(), g, fd);
        }
        // the two real-case branches always average to the exact gradient
        let gp = grad(&obj, "t", GradientScheme::Real2(Branch::Plus)).unwrap().evaluate(&v).unwrap();
        let gm = grad(&obj, "t", GradientScheme::Real2(Branch::Minus)).unwrap().evaluate(&v).unwrap();
        prop_assert!((0.5 * (gp + gm) - fd).abs() < 1e-6);
    }

    #[test]
    fn generator_approximation_differentiates_the_replaced_gate(seed in any::<u64>(), n in 2usize..=6, plus in any::<bool>()) {
        let mut r = rng(seed);
        let circuit = random_real_circuit(&mut r, n, 2);
        let h = random_real_hamiltonian(&mut r, n, 5);
        let which = if plus { Branch::Plus } else { Branch::Minus };
        let obj = Objective::expectation(circuit.clone(), &h).unwrap();
        let g = grad(&obj, "t", GradientScheme::GeneratorApprox(which)).unwrap();
        let last = circuit.len() - 1;
        let Gate::FermionicExcitation { excitation, angle } = circuit.gates()[last].clone() else { unreachable!() };
        let (gp, gm) = g_plus_minus(&excitation);
        let op = if plus { gp } else { gm };
        let replaced = circuit.splice(last, vec![Gate::rotation(jordan_wigner(&op, n).unwrap(), angle).unwrap()]).unwrap();
        let approx_obj = Objective::expectation(replaced, &h).unwrap();
        let v = at(r.random_range(-4.0..4.0));
        let fd = finite_difference(&approx_obj, "t", &v, FD).unwrap();
        prop_assert!((g.evaluate(&v).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn repeated_and_scaled_parameters(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let mut c = random_real_circuit(&mut r, n, 2);
        let k = r.random_range(-2.0..2.0);
        c = c.ferm(random_excitation(&mut r, n, 2), Angle::Param { name: "t".into(), scale: k, offset: r.random_range(-1.0..1.0) }).unwrap();
        let obj = Objective::expectation(c, &random_real_hamiltonian(&mut r, n, 5)).unwrap();
        let v = at(r.random_range(-4.0..4.0));
        let fd = finite_difference(&obj, "t", &v, FD).unwrap();
        for s in REAL_SCHEMES {
            let g = grad(&obj, "t", s).unwrap().evaluate(&v).unwrap();
            prop_assert!((g - fd).abs() < 1e-6, "{} {} {}", s.label(), g, fd);
        }
    }

    #[test]
    fn second_derivative_matches_fd(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let obj = Objective::expectation(random_real_circuit(&mut r, n, 2), &random_real_hamiltonian(&mut r, n, 5)).unwrap();
        let t = r.random_range(-4.0..4.0);
        let d2 = grad(&grad(&obj, "t", GradientScheme::Exact4).unwrap(), "t", GradientScheme::Exact4).unwrap();
        let h = 1e-4;
        let e = |x: f64| obj.evaluate(&at(x)).unwrap();
        let fd2 = (e(t + h) - 2.0 * e(t) + e(t - h)) / (h * h);
        prop_assert!((d2.evaluate(&at(t)).unwrap() - fd2).abs() < 1e-5);
    }

    #[test]
    fn composite_objectives(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let c = random_real_circuit(&mut r, n, 2);
        let a = Objective::expectation(c.clone(), &random_real_hamiltonian(&mut r, n, 4)).unwrap();
        let b = Objective::expectation(c, &random_real_hamiltonian(&mut r, n, 4)).unwrap();
        let obj = (a.square() + a.product(&b) * 0.5 - b.clone()) * 3.0 + Objective::constant(1.0);
        let v = at(r.random_range(-4.0..4.0));
        let g = grad(&obj, "t", GradientScheme::default()).unwrap().evaluate(&v).unwrap();
        let fd = finite_difference(&obj, "t", &v, FD).unwrap();
        prop_assert!((g - fd).abs() < 1e-6);
    }
}

#[test]
fn overlap_leaf_is_differentiable() {
    let mut r = rng(3);
    for _ in 0..20 {
        let n = r.random_range(2..=5);
        let a = random_real_circuit(&mut r, n, 2);
        let mut b = Circuit::new(n);
        for q in 0..n {
            if r.random_bool(0.5) {
                b = b.x(q).unwrap();
            }
        }
        let b = b.ferm(random_excitation(&mut r, n, 2), Angle::Fixed(r.random_range(-3.0..3.0))).unwrap();
        let obj = Objective::overlap(&a, &b).unwrap();
        let v = at(r.random_range(-4.0..4.0));
        let direct = simulate(&b, &v).unwrap().inner(&simulate(&a, &v).unwrap()).norm_sqr();
        assert!((obj.evaluate(&v).unwrap() - direct).abs() < 1e-12);
        let g = grad(&obj, "t", GradientScheme::Exact4).unwrap().evaluate(&v).unwrap();
        assert!((g - finite_difference(&obj, "t", &v, FD).unwrap()).abs() < 1e-6);
    }
}
