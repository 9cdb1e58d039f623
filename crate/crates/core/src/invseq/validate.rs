use rand::Rng;
use serde::Serialize;

use super::{InvPair, InvertibleSequence};
use crate::circuit::BitString;
use crate::error::Result;
use crate::seed::derived_rng;

/// Random `(x, z)` points checked when exhaustive checking is too large.
pub const SAMPLED_POINTS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub x: String,
    pub z: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub index: usize,
    pub exhaustive: bool,
    pub points_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pairs: Vec<PairReport>,
    pub passed: bool,
}

/// Checks `x = C_←(C_→(x; z); z)` for every pair: exhaustively when
/// `2^(k + r_i) <= exhaustive_cap`, otherwise on [`SAMPLED_POINTS`] seeded
/// random points.
pub fn validate_sequence(s: &InvertibleSequence, exhaustive_cap: u64) -> Result<ValidationReport> {
    let pairs = s
        .pairs()
        .iter()
        .enumerate()
        .map(|(index, pair)| check_pair(index, pair, exhaustive_cap))
        .collect::<Result<Vec<_>>>()?;
    let passed = pairs.iter().all(PairReport::passed);
    Ok(ValidationReport { pairs, passed })
}

fn check_pair(index: usize, pair: &InvPair, exhaustive_cap: u64) -> Result<PairReport> {
    let (k, r) = (pair.state_width(), pair.randomness_width());
    let bits = k + r;
    let exhaustive = bits < 32 && (1u64 << bits) <= exhaustive_cap;
    if exhaustive {
        let fwd = pair.forward().truth_table(bits as u32)?;
        let bwd = pair.backward().truth_table(bits as u32)?;
        let mut points = 0;
        for x in 0..1u64 << k {
            for z in 0..1u64 << r {
                points += 1;
                let y = fwd[pair.join(x, z) as usize];
                if bwd[pair.join(y, z) as usize] != x {
                    return Ok(PairReport {
                        index,
                        exhaustive,
                        points_checked: points,
                        counterexample: Some(Counterexample {
                            x: BitString::from_u64(x, k).to_string(),
                            z: BitString::from_u64(z, r).to_string(),
                        }),
                    });
                }
            }
        }
        return Ok(PairReport {
            index,
            exhaustive,
            points_checked: points,
            counterexample: None,
        });
    }

    let mut rng = derived_rng(0, "validate-sequence", index as u64);
    for point in 1..=SAMPLED_POINTS {
        let x: Vec<bool> = (0..k).map(|_| rng.random()).collect();
        let z: Vec<bool> = (0..r).map(|_| rng.random()).collect();
        let input = BitString::new(x.iter().chain(&z).copied().collect());
        let y = pair.forward().eval(&input)?;
        let back_in = BitString::new(y.bits().iter().chain(&z).copied().collect());
        let back = pair.backward().eval(&back_in)?;
        if back.bits() != x.as_slice() {
            return Ok(PairReport {
                index,
                exhaustive,
                points_checked: point,
                counterexample: Some(Counterexample {
                    x: BitString::new(x).to_string(),
                    z: BitString::new(z).to_string(),
                }),
            });
        }
    }
    Ok(PairReport {
        index,
        exhaustive,
        points_checked: SAMPLED_POINTS,
        counterexample: None,
    })
}
