//! Exact state-vector simulation of the order- and choice-interference
//! oracles, permutation unitaries built from circuits, and the swap test.

mod oracle;
mod state;
mod swap;
mod unitary;

pub use oracle::{
    ci_expansion, ci_oracle_query, ci_vector, oi_oracle_query, oi_vector, phase_alignment,
    OiExpansion, OiOutcome, OiQuery, OracleDiagnostics,
};
pub use state::{StateVector, NORM_TOLERANCE};
pub use swap::{swap_test, SwapTest};
pub use unitary::{permutation_unitary_from_circuit, SimUnitary};
