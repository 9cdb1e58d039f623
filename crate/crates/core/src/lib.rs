//! Desk-scale workbench for the order-interference computational model.
//!
//! The crate is organised around five subsystems:
//!
//! * [`circuit`]: Boolean circuits, exact output distributions and the
//!   distance measures used to state Statistical Difference promises.
//! * [`invseq`]: sequentially invertible circuit sequences, the SD to SISD
//!   reduction and SD polarization.
//! * [`quantum`]: exact state-vector simulation of order/choice interference
//!   oracles and the swap test.
//! * [`solver`]: the oracle-based SISD decider and the end-to-end SD decider.
//! * [`lattice`]: LWE sampling, the LWE to GapCVP reduction and exact CVP at
//!   small dimension.

// `!(x >= y)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caps;
pub mod circuit;
pub mod error;
pub mod invseq;
pub mod lattice;
pub mod numeric;
pub mod quantum;
pub mod seed;
pub mod solver;

pub use caps::Caps;
pub use circuit::{BitString, BoolCircuit, Distribution, ExactDistribution, GateKind, SdInstance};
pub use error::{Error, Result};
pub use invseq::{InvPair, InvertibleSequence, SisdInstance};
pub use lattice::{GapCvpInstance, LweInstance, LweParams};
pub use quantum::{OiOutcome, OiQuery, SimUnitary, StateVector};
pub use solver::{Decision, SolverConfig, Verdict};
