use serde::{Deserialize, Serialize};

/// Resource bounds for the brute-force and simulation paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of input bits enumerated exhaustively.
    pub enumeration_bits: u32,
    /// Maximum number of unitaries in an order-interference query (m! orderings).
    pub max_oi_unitaries: usize,
    /// Maximum simulated register width.
    pub max_qubits: u32,
    /// Maximum number of stored amplitudes when per-ordering vectors are kept.
    pub max_ordering_amplitudes: usize,
    /// Maximum gate count of a compiled circuit.
    pub max_gates: usize,
    /// Maximum number of secrets enumerated by the exact CVP solver.
    pub max_cvp_candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration_bits: 24,
            max_oi_unitaries: 8,
            max_qubits: 14,
            max_ordering_amplitudes: 1 << 22,
            max_gates: 1 << 22,
            max_cvp_candidates: 1 << 20,
        }
    }
}

impl Caps {
    pub fn with_enumeration_bits(mut self, bits: u32) -> Self {
        self.enumeration_bits = bits;
        self
    }
}
