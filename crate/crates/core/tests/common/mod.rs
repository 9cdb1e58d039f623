#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use oilab_core::circuit::{random_circuit, BoolCircuit, CircuitBuilder, ExactDistribution};
use oilab_core::{SimUnitary, StateVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::new(n, amps).unwrap().normalized().unwrap()
}

/// Haar-ish unitary: Gram-Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> SimUnitary {
    let dim = 1usize << n;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let matrix = (0..dim * dim).map(|k| cols[k % dim][k / dim]).collect();
    SimUnitary::dense(n, matrix).unwrap()
}

/// Diagonal unitary with uniform random phases; any two commute.
pub fn random_phase_unitary<R: Rng>(n: usize, rng: &mut R) -> SimUnitary {
    let dim = 1usize << n;
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        matrix[i * dim + i] =
            Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    }
    SimUnitary::dense(n, matrix).unwrap()
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut table: Vec<usize> = (0..1 << n).collect();
    table.shuffle(rng);
    table
}

/// `(U_1 ... U_m) ψ` with `U_m` applied first.
pub fn apply_product(us: &[SimUnitary], psi: &StateVector) -> StateVector {
    us.iter()
        .rev()
        .fold(psi.clone(), |acc, u| u.apply(&acc).unwrap())
}

/// Random distribution with rational masses on `width` bits; some keys get
/// zero mass.
pub fn random_exact_distribution<R: Rng>(width: usize, rng: &mut R) -> ExactDistribution {
    let mut weights: Vec<u64> = (0..1u64 << width)
        .map(|_| {
            if rng.random_bool(0.3) {
                0
            } else {
                rng.random_range(1..20)
            }
        })
        .collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let total: u64 = weights.iter().sum();
    ExactDistribution::new(
        width,
        weights.into_iter().enumerate().map(|(k, w)| {
            (
                k as u64,
                BigRational::new(BigInt::from(w), BigInt::from(total)),
            )
        }),
    )
    .unwrap()
}

/// `c` with its first output flipped on the all-ones input only, so the
/// output distributions differ by at most `2^-k_in`.
pub fn perturbed_copy(c: &BoolCircuit) -> BoolCircuit {
    let mut b = CircuitBuilder::new(c.k_in());
    let inputs: Vec<u32> = (0..c.k_in()).map(|i| b.input(i)).collect();
    let mut outs = b.inline(c, &inputs);
    let all = inputs[1..].iter().fold(inputs[0], |acc, &w| b.and(acc, w));
    outs[0] = b.xor(outs[0], all);
    b.finish(outs).unwrap()
}

/// Deterministic small SD pair: `k_in <= 4`, `k_out <= 3`. Every third pair is
/// a near-copy, the rest are independent.
pub fn small_pair(seed: u64) -> (BoolCircuit, BoolCircuit) {
    let k_in = 1 + (seed % 4) as usize;
    let k_out = 1 + ((seed / 4) % 3) as usize;
    let gates = 2 + (seed % 7) as usize;
    let c0 = random_circuit(k_in, k_out, gates, seed.wrapping_mul(2)).unwrap();
    let c1 = if seed.rem_euclid(3) == 0 {
        perturbed_copy(&c0)
    } else {
        let k_in1 = 1 + ((seed / 12) % 4) as usize;
        random_circuit(k_in1, k_out, gates + 1, seed.wrapping_mul(2) + 1).unwrap()
    };
    (c0, c1)
}

/// `P(‖e‖ <= d)` for `e` with i.i.d. truncated discrete Gaussian coordinates,
/// by convolving the exact law of `e_i²`.
pub fn exact_norm_rate(s: f64, m: usize, d: f64) -> f64 {
    let tail = (oilab_core::lattice::TAIL_WIDTHS * s).ceil() as i64;
    let weights: Vec<(usize, f64)> = (-tail..=tail)
        .map(|x| ((x * x) as usize, (-((x * x) as f64) / (s * s)).exp()))
        .collect();
    let z: f64 = weights.iter().map(|w| w.1).sum();
    let limit = (d * d).floor() as usize;
    let mut law = vec![0.0; limit + 1];
    law[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; limit + 1];
        for (acc, &p) in law.iter().enumerate() {
            for &(sq, w) in &weights {
                if acc + sq <= limit {
                    next[acc + sq] += p * w / z;
                }
            }
        }
        law = next;
    }
    law.iter().sum()
}
