use rand::Rng;
use rand_distr::{weighted::WeightedIndex, Distribution};

use crate::error::{Error, Result};

/// Support is cut at `±⌈TAIL_WIDTHS · s⌉`; the dropped mass is below `e^-100`.
pub const TAIL_WIDTHS: f64 = 10.0;

/// `ρ_s(x) = exp(-x²/s²)`.
pub fn rho(s: f64, x: f64) -> f64 {
    (-(x * x) / (s * s)).exp()
}

/// Discrete Gaussian `D_{Z,s}` with mass proportional to `exp(-x²/s²)`,
/// sampled exactly over the truncated support.
#[derive(Clone, Debug)]
pub struct DiscreteGaussian {
    s: f64,
    lo: i64,
    index: WeightedIndex<f64>,
}

impl DiscreteGaussian {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!(
                "Gaussian width must be positive, got {s}"
            )));
        }
        let bound = (TAIL_WIDTHS * s).ceil() as i64;
        let weights = (-bound..=bound).map(|x| rho(s, x as f64));
        let index = WeightedIndex::new(weights)
            .map_err(|e| Error::Domain(format!("Gaussian weights: {e}")))?;
        Ok(DiscreteGaussian {
            s,
            lo: -bound,
            index,
        })
    }

    pub fn width(&self) -> f64 {
        self.s
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.lo + self.index.sample(rng) as i64
    }
}

pub fn sample_discrete_gaussian<R: Rng + ?Sized>(s: f64, rng: &mut R) -> Result<i64> {
    Ok(DiscreteGaussian::new(s)?.sample(rng))
}
