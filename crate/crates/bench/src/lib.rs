//! Deterministic fixtures shared by the benchmarks.

use oilab_core::circuit::random_circuit;
use oilab_core::numeric::ratio;
use oilab_core::{SdInstance, SimUnitary, StateVector};

/// SD instance on `k_in` input and `k_out` output bits.
pub fn sd_instance(k_in: usize, k_out: usize, seed: u64) -> SdInstance {
    let c0 = random_circuit(k_in, k_out, 4 * k_in, seed).expect("valid widths");
    let c1 = random_circuit(k_in, k_out, 4 * k_in, seed + 1).expect("valid widths");
    SdInstance::new(c0, c1, ratio(1, 10), ratio(9, 10)).expect("valid promise")
}

/// `m` affine permutations `x -> a x + b (mod 2^n)` with odd `a`.
pub fn affine_family(n: usize, m: usize) -> Vec<SimUnitary> {
    let dim = 1usize << n;
    (0..m)
        .map(|i| {
            let (a, b) = (2 * i + 3, 5 * i + 1);
            SimUnitary::permutation(n, (0..dim).map(|x| (a * x + b) % dim).collect())
                .expect("odd multiplier")
        })
        .collect()
}

/// Normalized non-negative state with a ramp profile.
pub fn ramp_state(n: usize) -> StateVector {
    let amps: Vec<f64> = (0..1usize << n).map(|x| 1.0 + x as f64).collect();
    StateVector::from_real(n, &amps)
        .and_then(|s| s.normalized())
        .expect("non-zero ramp")
}
