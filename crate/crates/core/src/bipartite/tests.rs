use super::*;
use crate::dynamics::{channel_superoperator, BathState, OpenDynamics, Sense};
use crate::models::IsingLMGParams;
use crate::qops::random::random_hermitian;
use crate::qops::{propagator, TensorLayout};
use proptest::prelude::*;

fn two_by_two() -> Bipartition {
    Bipartition::new(2, 2).unwrap()
}

fn swap_gate() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        4,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    )
    .unwrap()
}

fn unitary_rep(u: &ComplexMatrix) -> QuantumChannelRep {
    let qubits = u.rows().trailing_zeros() as usize;
    channel_superoperator(
        |x| Ok(&(&u.adjoint() * x) * u),
        &TensorLayout::qubits(qubits),
        Direction::Adjoint,
        Sense::Forward,
    )
    .unwrap()
}

#[test]
fn swap_algebra() {
    for (da, db) in [(2, 2), (2, 4), (4, 2)] {
        let p = Bipartition::new(da, db).unwrap();
        let s = build_swaps(p);
        let n = p.dim() * p.dim();
        let id = ComplexMatrix::identity(n);
        assert!((&s.s_aa * &s.s_bb).max_abs_diff(&s.s_full) < 1e-12);
        assert!((&s.s_bb * &s.s_aa).max_abs_diff(&s.s_full) < 1e-12);
        for m in [&s.s_full, &s.s_aa, &s.s_bb] {
            assert!((m * m).max_abs_diff(&id) < 1e-12);
        }
        assert!((s.s_full.trace().re - p.dim() as f64).abs() < 1e-12);
        assert!((s.s_aa.trace().re - (da * db * db) as f64).abs() < 1e-12);
        assert!((s.s_bb.trace().re - (db * da * da) as f64).abs() < 1e-12);
    }
    assert_eq!(build_swaps(two_by_two()).s_aa.trace().re, 8.0);
}

#[test]
fn swap_exchanges_product_vectors() {
    let mut rng = sample_rng(1, 0);
    let p = Bipartition::new(2, 3).unwrap();
    let x = crate::qops::random::random_state_vector(6, &mut rng);
    let y = crate::qops::random::random_state_vector(6, &mut rng);
    let kron = |u: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
        u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
    };
    let got = build_swaps(p).s_full.mul_vec(&kron(&x, &y)).unwrap();
    for (g, w) in got.iter().zip(kron(&y, &x)) {
        assert!((g - w).norm() < 1e-14);
    }
}

#[test]
fn closed_reference_values() {
    let p = two_by_two();
    let g = |u: &ComplexMatrix| bipartite_otoc_closed(u, p).unwrap().value;
    assert!(g(&ComplexMatrix::identity(4)).abs() < 1e-12);
    assert!((g(&swap_gate()) - 0.75).abs() < 1e-12);
    let mut rng = sample_rng(2, 0);
    for _ in 0..5 {
        let local = haar_unitary(2, &mut rng).unwrap().kron(&haar_unitary(2, &mut rng).unwrap());
        assert!(g(&local).abs() < 1e-10);
    }
    let bad = ComplexMatrix::identity(4).scale_real(1.1);
    assert!(matches!(bipartite_otoc_closed(&bad, p), Err(Error::NotUnitary { .. })));
}

#[test]
fn gram_form_matches_explicit_swaps() {
    let mut rng = sample_rng(3, 0);
    for (da, db) in [(2, 2), (2, 4), (4, 2)] {
        let p = Bipartition::new(da, db).unwrap();
        let u = haar_unitary(p.dim(), &mut rng).unwrap();
        let fast = bipartite_otoc_closed(&u, p).unwrap();
        let slow = bipartite_otoc_closed_explicit(&u, p).unwrap();
        assert!((fast.raw - slow.raw).norm() < 1e-12);
    }
}

#[test]
fn open_reference_values() {
    let p = two_by_two();
    let id = unitary_rep(&ComplexMatrix::identity(4));
    assert!(bipartite_otoc_open(&id, p).unwrap().raw.norm() < 1e-12);

    let depol = channel_superoperator(
        |x| Ok(ComplexMatrix::identity(4).scale(x.trace() / 4.0)),
        &TensorLayout::qubits(2),
        Direction::Adjoint,
        Sense::Forward,
    )
    .unwrap();
    let swaps = build_swaps(p);
    let image = tensor_square_apply(&depol, &swaps.s_aa).unwrap();
    assert!(image.max_abs_diff(&ComplexMatrix::identity(16).scale_real(0.5)) < 1e-12);
    assert!(bipartite_otoc_open(&depol, p).unwrap().raw.norm() < 1e-12);

    let mut rng = sample_rng(4, 0);
    for _ in 0..5 {
        let u = propagator(&random_hermitian(4, &mut rng), 1.3).unwrap();
        let open = bipartite_otoc_open(&unitary_rep(&u), p).unwrap();
        let closed = bipartite_otoc_closed(&u, p).unwrap();
        assert!((open.raw.re - closed.raw.re).abs() < 1e-9);
    }
    let mut schrodinger = id.clone();
    schrodinger.direction = Direction::Schrodinger;
    assert!(bipartite_otoc_open(&schrodinger, p).is_err());
}

#[test]
fn monte_carlo_agrees_with_swap_formula() {
    let p = two_by_two();
    let est = bipartite_otoc_haar_mc(|x| Ok(x.clone()), p, 400, 5).unwrap();
    assert!(est.mean.abs() < 1e-12);
    let sw = swap_gate();
    let est = bipartite_otoc_haar_mc(|x| Ok(&(&sw * x) * &sw), p, 2000, 6).unwrap();
    assert!((est.mean - 0.75).abs() < 3.0 * est.stderr, "{est:?}");

    let params = IsingLMGParams::uniform(2, 2, 2.0, 0.5, 1.0, 4.0, 10.0);
    let dynamics = OpenDynamics::ising_lmg(&params, BathState::Thermal { temperature: 10.0 }, false).unwrap();
    let kraus = dynamics.kraus(1.0, Sense::Forward);
    let exact = bipartite_otoc_open(&kraus.superoperator(Direction::Adjoint), p).unwrap();
    let est = bipartite_otoc_haar_mc(|x| kraus.apply_adjoint(x), p, 2000, 7).unwrap();
    assert!((est.mean - exact.raw.re).abs() < 3.0 * est.stderr, "{est:?} vs {exact:?}");
    assert!(bipartite_otoc_haar_mc(|x| Ok(x.clone()), p, 99, 1).is_err());
}

#[test]
fn haar_identity_is_reproducible() {
    for dim in [2, 4] {
        let e1 = haar_identity_check(dim, 2000, &mut sample_rng(9, 0)).unwrap();
        let e2 = haar_identity_check(dim, 2000, &mut sample_rng(9, 0)).unwrap();
        assert_eq!(e1, e2);
        assert!(e1 <= 5.0 / 2000f64.sqrt(), "dim {dim}: {e1}");
    }
}

#[test]
fn reduction_is_order_stable() {
    let values: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.37).sin()).collect();
    let a = reduce_samples(&values);
    let b = reduce_samples(&values.clone());
    assert_eq!(a, b);
    assert_eq!(a.samples, 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_value_invariant_under_local_unitaries(seed in any::<u64>()) {
        let p = two_by_two();
        let mut rng = sample_rng(seed, 0);
        let u = haar_unitary(4, &mut rng).unwrap();
        let mut local = || haar_unitary(2, &mut rng).unwrap().kron(&haar_unitary(2, &mut rng).unwrap());
        let (l, r) = (local(), local());
        let g0 = bipartite_otoc_closed(&u, p).unwrap();
        let g1 = bipartite_otoc_closed(&(&(&l * &u) * &r), p).unwrap();
        prop_assert!((g0.raw.re - g1.raw.re).abs() < 1e-9);
        prop_assert!(g0.excess() < VALUE_TOL);
    }
}
