use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use super::StateVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwapTest {
    /// Exact `|⟨φ|ψ⟩|²`.
    pub overlap_sq: f64,
    pub accept_probability: f64,
    pub shots: u64,
    pub accepts: u64,
    /// `2 · accepts/shots - 1`.
    pub estimate: f64,
}

/// Simulated swap test: `shots` independent accept/reject draws with accept
/// probability `1/2 + |⟨φ|ψ⟩|²/2`.
pub fn swap_test<R: Rng + ?Sized>(
    phi: &StateVector,
    psi: &StateVector,
    shots: u64,
    rng: &mut R,
) -> Result<SwapTest> {
    if shots == 0 {
        return Err(Error::Domain("swap test needs at least one shot".into()));
    }
    for (name, s) in [("φ", phi), ("ψ", psi)] {
        if !s.is_normalized() {
            return Err(Error::Precondition(format!(
                "|{name}⟩ has squared norm {}",
                s.norm_sqr()
            )));
        }
    }
    let overlap_sq = phi.inner(psi)?.norm_sqr().min(1.0);
    let accept_probability = 0.5 + overlap_sq / 2.0;
    let accepts = Binomial::new(shots, accept_probability)
        .map_err(|e| Error::Domain(format!("binomial draw: {e}")))?
        .sample(rng);
    Ok(SwapTest {
        overlap_sq,
        accept_probability,
        shots,
        accepts,
        estimate: 2.0 * accepts as f64 / shots as f64 - 1.0,
    })
}
