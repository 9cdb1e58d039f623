//! Oracle-based SISD decider: build both output distribution states through
//! the choice-interference oracle, compare them with the swap test, and
//! threshold the median estimate.

mod state;
mod threshold;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use state::{build_output_state, BuiltState, PreparedSequence, StageDiagnostics};
pub use threshold::{derive_threshold, Threshold};

use crate::caps::Caps;
use crate::circuit::SdInstance;
use crate::error::{Error, Result};
use crate::invseq::{polarize, reduce_sd_to_sisd, SisdInstance};
use crate::numeric::to_f64;
use crate::quantum::swap_test;
use crate::seed::derived_rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub lambda: u64,
    /// Oracle calls allowed per randomized step before giving up.
    pub retry_budget: u32,
    pub swap_shots: u64,
    pub trial_count: u32,
    /// Overrides the midpoint threshold when set.
    pub threshold: Option<f64>,
    pub seed: u64,
    pub caps: Caps,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lambda: 100,
            retry_budget: 50,
            swap_shots: 4096,
            trial_count: 25,
            threshold: None,
            seed: 0,
            caps: Caps::default(),
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.lambda == 0
            || self.retry_budget == 0
            || self.swap_shots == 0
            || self.trial_count == 0
        {
            return Err(Error::Domain(
                "λ, retry budget, shots and trials must all be at least 1".into(),
            ));
        }
        if let Some(t) = self.threshold {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::Domain(format!("threshold {t} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub estimate: f64,
    /// Exact `|⟨C_0|C_1⟩|²` of the states this trial built.
    pub overlap_sq: f64,
    /// Oracle calls spent building each state.
    pub oracle_calls: [u32; 2],
    /// Smallest per-stage oracle success probability seen in this trial.
    pub min_success_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    /// Median swap-test estimate over trials.
    pub estimate: f64,
    pub tau: f64,
    pub gap: f64,
    pub trials: Vec<TrialRecord>,
}

/// Decides an SISD instance whose promise satisfies the gap condition.
pub fn decide_sisd(inst: &SisdInstance, cfg: &SolverConfig) -> Result<Decision> {
    cfg.validate()?;
    let threshold = derive_threshold(inst.a(), inst.b())?;
    let tau = cfg.threshold.unwrap_or_else(|| threshold.tau_f64());
    let prepared = [
        PreparedSequence::new(inst.seq0(), &cfg.caps)?,
        PreparedSequence::new(inst.seq1(), &cfg.caps)?,
    ];

    let trials = (0..cfg.trial_count)
        .into_par_iter()
        .map(|t| {
            let mut rng = derived_rng(cfg.seed, "trial", t as u64);
            let s0 = prepared[0].build(cfg, &mut rng)?;
            let s1 = prepared[1].build(cfg, &mut rng)?;
            let swap = swap_test(&s0.state, &s1.state, cfg.swap_shots, &mut rng)?;
            let min_success_probability = s0
                .stages
                .iter()
                .chain(&s1.stages)
                .map(|s| s.success_probability)
                .fold(1.0, f64::min);
            Ok(TrialRecord {
                trial: t,
                estimate: swap.estimate,
                overlap_sq: swap.overlap_sq,
                oracle_calls: [s0.total_attempts(), s1.total_attempts()],
                min_success_probability,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let estimate = median(trials.iter().map(|t| t.estimate).collect());
    Ok(Decision {
        verdict: if estimate >= tau {
            Verdict::Yes
        } else {
            Verdict::No
        },
        estimate,
        tau,
        gap: to_f64(&threshold.gap),
        trials,
    })
}

/// End to end: polarize when `(a, b)` violates the gap and `polarize_k` is
/// given, reduce to SISD, then decide.
pub fn decide_sd(
    inst: &SdInstance,
    cfg: &SolverConfig,
    polarize_k: Option<u32>,
) -> Result<Decision> {
    let polarized;
    let inst = match (derive_threshold(inst.a(), inst.b()), polarize_k) {
        (Ok(_), _) => inst,
        (Err(Error::GapViolation { .. }), Some(k)) => {
            polarized = polarize(inst, k, &cfg.caps)?;
            &polarized.instance
        }
        (Err(e), _) => return Err(e),
    };
    decide_sisd(&reduce_sd_to_sisd(inst)?, cfg)
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
