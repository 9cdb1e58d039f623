use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::circuit::check_gap_params;
use crate::error::{Error, Result};
use crate::numeric::{rational_serde, to_f64};

/// Swap-test acceptance threshold for a promise `(a, b)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// Lower bound on `⟨C_0|C_1⟩²` for YES instances: `(1 - a)²`.
    #[serde(with = "rational_serde")]
    pub yes_bound: BigRational,
    /// Upper bound for NO instances: `1 - b²`.
    #[serde(with = "rational_serde")]
    pub no_bound: BigRational,
    /// Midpoint of the two bounds.
    #[serde(with = "rational_serde")]
    pub tau: BigRational,
    /// `b² - 2a + a²`, which equals `yes_bound - no_bound`.
    #[serde(with = "rational_serde")]
    pub gap: BigRational,
}

impl Threshold {
    pub fn tau_f64(&self) -> f64 {
        to_f64(&self.tau)
    }
}

pub fn derive_threshold(a: &BigRational, b: &BigRational) -> Result<Threshold> {
    check_gap_params(a, b)?;
    let one = BigRational::one();
    let gap = b * b - (a + a) + a * a;
    if gap <= BigRational::zero() {
        return Err(Error::GapViolation { gap });
    }
    let yes_bound = (&one - a) * (&one - a);
    let no_bound = &one - b * b;
    let tau = (&yes_bound + &no_bound) / BigRational::from_integer(2.into());
    debug_assert_eq!(&yes_bound - &no_bound, gap);
    Ok(Threshold {
        yes_bound,
        no_bound,
        tau,
        gap,
    })
}
