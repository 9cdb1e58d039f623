use rand::Rng;

use super::ir::{BoolCircuit, CircuitBuilder, GateKind};
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Deterministic pseudo-random circuit. With no gates, output `j` is wired to
/// input `j mod k_in`.
pub fn random_circuit(
    k_in: usize,
    k_out: usize,
    gate_count: usize,
    seed: u64,
) -> Result<BoolCircuit> {
    if k_in == 0 || k_out == 0 {
        return Err(Error::Domain(
            "random_circuit needs k_in >= 1 and k_out >= 1".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut builder = CircuitBuilder::new(k_in);
    // two-input gates dominate; constants and copies are rare
    const WEIGHTED: [GateKind; 15] = [
        GateKind::And,
        GateKind::And,
        GateKind::And,
        GateKind::Or,
        GateKind::Or,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Xor,
        GateKind::Xor,
        GateKind::Not,
        GateKind::Not,
        GateKind::Not,
        GateKind::Const0,
        GateKind::Const1,
        GateKind::Copy,
    ];
    for _ in 0..gate_count {
        let kind = WEIGHTED[rng.random_range(0..WEIGHTED.len())];
        let defined = (k_in + builder.gate_count()) as u32;
        let inputs: Vec<u32> = (0..kind.arity())
            .map(|_| rng.random_range(0..defined))
            .collect();
        builder.push(kind, &inputs);
    }
    let outputs = if gate_count == 0 {
        (0..k_out).map(|j| (j % k_in) as u32).collect()
    } else {
        let lo = k_in as u32;
        let hi = (k_in + gate_count) as u32;
        (0..k_out).map(|_| rng.random_range(lo..hi)).collect()
    };
    builder.finish(outputs)
}
