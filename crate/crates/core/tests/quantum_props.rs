mod common;

use oilab_core::quantum::{ci_vector, oi_oracle_query, oi_vector, phase_alignment, swap_test};
use oilab_core::seed::rng_from_seed;
use oilab_core::{Caps, OiQuery, SimUnitary, StateVector};
use proptest::prelude::*;

use common::*;

fn factorial(m: usize) -> f64 {
    (1..=m).product::<usize>() as f64
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn oi_norm_within_factorial(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=4) {
        let mut rng = rng_from_seed(seed);
        let us: Vec<SimUnitary> = (0..m).map(|_| random_unitary(n, &mut rng)).collect();
        let psi = random_state(n, &mut rng);
        let e = oi_vector(&OiQuery::new(us, psi, 10).unwrap(), &Caps::default()).unwrap();
        let norm = e.vector.norm();
        prop_assert!((0.0..=factorial(m) + 1e-9).contains(&norm));
        let gamma = e.phase_alignment().unwrap();
        prop_assert!((0.0..=1.0).contains(&gamma));
    }

    #[test]
    fn oi_pair_matches_direct_products(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let us = vec![random_unitary(n, &mut rng), random_unitary(n, &mut rng)];
        let psi = random_state(n, &mut rng);
        let a = apply_product(&us, &psi);
        let b = apply_product(&[us[1].clone(), us[0].clone()], &psi);
        let direct = StateVector::new(n, a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x + y).collect()).unwrap();
        let got = oi_vector(&OiQuery::new(us, psi, 10).unwrap(), &Caps::default()).unwrap().vector;
        prop_assert!(got.max_abs_diff(&direct).unwrap() <= 1e-10);
    }

    #[test]
    fn commuting_orderings_are_fully_aligned(seed in any::<u64>(), n in 1usize..=3, m in 2usize..=4) {
        let mut rng = rng_from_seed(seed);
        let us: Vec<SimUnitary> = (0..m).map(|_| random_phase_unitary(n, &mut rng)).collect();
        let psi = random_state(n, &mut rng);
        let e = oi_vector(&OiQuery::new(us.clone(), psi.clone(), 10).unwrap(), &Caps::default()).unwrap();
        prop_assert!((e.phase_alignment().unwrap() - 1.0).abs() <= 1e-9);
        prop_assert!((e.vector.norm() - factorial(m) * apply_product(&us, &psi).norm()).abs() <= 1e-9);
    }

    #[test]
    fn equal_parts_align(seed in any::<u64>(), n in 1usize..=3, copies in 1usize..=5) {
        let psi = random_state(n, &mut rng_from_seed(seed));
        prop_assert!((phase_alignment(&vec![psi; copies]).unwrap() - 1.0).abs() <= 1e-12);
    }

    // exact: integer amplitudes, integer arithmetic
    #[test]
    fn choice_norm_at_least_sqrt_m_exact(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let tables: Vec<Vec<usize>> = (0..m).map(|_| random_permutation(n, &mut rng)).collect();
        let psi: Vec<u64> = (0..1u64 << n).map(|i| (seed.rotate_left(i as u32) % 7) + u64::from(i == 0)).collect();
        let mut sum = vec![0u64; 1 << n];
        for t in &tables {
            for (x, &y) in t.iter().enumerate() {
                sum[y] += psi[x];
            }
        }
        let lhs: u64 = sum.iter().map(|s| s * s).sum();
        let rhs = m as u64 * psi.iter().map(|p| p * p).sum::<u64>();
        prop_assert!(lhs >= rhs);

        let us: Vec<SimUnitary> = tables.into_iter().map(|t| SimUnitary::permutation(n, t).unwrap()).collect();
        let real: Vec<f64> = psi.iter().map(|&p| p as f64).collect();
        let state = StateVector::from_real(n, &real).unwrap().normalized().unwrap();
        prop_assert!(ci_vector(&us, &state).unwrap().norm() >= (m as f64).sqrt() * (1.0 - 1e-12));
    }

    #[test]
    fn oracle_probability_is_a_probability(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=3, lambda in 1u64..200) {
        let mut rng = rng_from_seed(seed);
        let us: Vec<SimUnitary> = (0..m).map(|_| random_unitary(n, &mut rng)).collect();
        let psi = random_state(n, &mut rng);
        let out = oi_oracle_query(&OiQuery::new(us, psi, lambda).unwrap(), &Caps::default(), &mut rng).unwrap();
        let p = out.diagnostics.success_probability;
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert_eq!(out.success, out.state.is_some());
        if let Some(s) = out.state {
            prop_assert!(s.is_normalized());
        }
    }
}

#[test]
fn cancelling_pair_never_succeeds() {
    let mut rng = rng_from_seed(3);
    for _ in 0..1000 {
        let psi = random_state(1, &mut rng);
        let q = OiQuery::new(
            vec![SimUnitary::pauli_x(), SimUnitary::pauli_z()],
            psi,
            1000,
        )
        .unwrap();
        let out = oi_oracle_query(&q, &Caps::default(), &mut rng).unwrap();
        assert!(!out.success);
        assert_eq!(out.diagnostics.success_probability, 0.0);
    }
}

#[test]
fn swap_estimates_concentrate() {
    let mut close = 0;
    for run in 0..500u64 {
        let mut rng = rng_from_seed(run);
        let phi = random_state(2, &mut rng);
        let psi = random_state(2, &mut rng);
        let t = swap_test(&phi, &psi, 10_000, &mut rng).unwrap();
        close += usize::from((t.estimate - t.overlap_sq).abs() <= 0.05);
    }
    assert!(close >= 495, "{close}/500 within 0.05");
}
