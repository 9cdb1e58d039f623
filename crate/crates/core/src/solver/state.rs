use rand::Rng;
use serde::Serialize;

use super::SolverConfig;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::invseq::InvertibleSequence;
use crate::quantum::{ci_oracle_query, permutation_unitary_from_circuit, SimUnitary, StateVector};

// amplitudes may pick up rounding noise of this size and still count as real, non-negative
const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageDiagnostics {
    pub stage: usize,
    pub randomness_width: usize,
    /// Oracle calls made; 0 for deterministic steps.
    pub attempts: u32,
    pub success_probability: f64,
    pub min_real: f64,
    pub max_abs_imag: f64,
}

#[derive(Clone, Debug)]
pub struct BuiltState {
    pub state: StateVector,
    pub stages: Vec<StageDiagnostics>,
}

impl BuiltState {
    pub fn total_attempts(&self) -> u32 {
        self.stages.iter().map(|s| s.attempts).sum()
    }
}

/// Permutation unitaries `U_{i,z}` for every step, built once per sequence.
#[derive(Clone, Debug)]
pub struct PreparedSequence {
    k: usize,
    stages: Vec<Vec<SimUnitary>>,
}

impl PreparedSequence {
    pub fn new(seq: &InvertibleSequence, caps: &Caps) -> Result<Self> {
        let k = seq.state_width();
        if k > caps.max_qubits as usize {
            return Err(Error::resource("qubits", k as u64, caps.max_qubits));
        }
        let stages = seq
            .pairs()
            .iter()
            .map(|pair| {
                let r = pair.randomness_width();
                if r >= 16 {
                    return Err(Error::resource(
                        "unitaries per choice step (bits)",
                        r as u64,
                        15u64,
                    ));
                }
                (0..1u64 << r)
                    .map(|z| permutation_unitary_from_circuit(pair, z, caps))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedSequence { k, stages })
    }

    /// Builds `|C_{1..ℓ}⟩` from `|0^k⟩`, one choice-interference call per
    /// randomized step.
    pub fn build<R: Rng + ?Sized>(&self, cfg: &SolverConfig, rng: &mut R) -> Result<BuiltState> {
        let mut state = StateVector::basis(self.k, 0)?;
        let mut stages = Vec::with_capacity(self.stages.len());
        for (index, unitaries) in self.stages.iter().enumerate() {
            let stage = index + 1;
            let (next, attempts, success_probability) = if unitaries.len() == 1 {
                (unitaries[0].apply(&state)?, 0, 1.0)
            } else {
                choice_step(unitaries, &state, cfg, stage, rng)?
            };
            state = next;
            let (min_real, max_abs_imag) = sign_profile(&state);
            if min_real < -SIGN_TOLERANCE || max_abs_imag > SIGN_TOLERANCE {
                return Err(Error::Invariant(format!(
                    "stage {stage} state has a negative or complex amplitude (min re {min_real}, max |im| {max_abs_imag})"
                )));
            }
            stages.push(StageDiagnostics {
                stage,
                randomness_width: unitaries.len().trailing_zeros() as usize,
                attempts,
                success_probability,
                min_real,
                max_abs_imag,
            });
        }
        Ok(BuiltState { state, stages })
    }
}

fn choice_step<R: Rng + ?Sized>(
    unitaries: &[SimUnitary],
    state: &StateVector,
    cfg: &SolverConfig,
    stage: usize,
    rng: &mut R,
) -> Result<(StateVector, u32, f64)> {
    for attempt in 1..=cfg.retry_budget {
        let out = ci_oracle_query(unitaries, state, cfg.lambda, rng)?;
        if let Some(next) = out.state {
            return Ok((next, attempt, out.diagnostics.success_probability));
        }
    }
    Err(Error::OracleFailure {
        stage,
        attempts: cfg.retry_budget,
        success_rate: 0.0,
    })
}

fn sign_profile(s: &StateVector) -> (f64, f64) {
    s.amplitudes()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, im), a| {
            (lo.min(a.re), im.max(a.im.abs()))
        })
}

/// Output distribution state of a sequence via the choice-interference oracle.
pub fn build_output_state<R: Rng + ?Sized>(
    seq: &InvertibleSequence,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<BuiltState> {
    PreparedSequence::new(seq, &cfg.caps)?.build(cfg, rng)
}
