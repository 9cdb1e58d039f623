//! Boolean circuits, exact output distributions and distribution metrics.

mod bits;
mod distribution;
mod ir;
mod metrics;
mod random;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use bits::{hex_key, parse_hex_key, BitString};
pub use distribution::{
    enumerate_distribution, Distribution, ExactDistribution, Probability, RealDistribution,
};
pub use ir::{BoolCircuit, CircuitBuilder, Gate, GateKind};
pub use metrics::{cosine_similarity, fidelity, tv_distance, tv_distance_exact};
pub use random::random_circuit;

use crate::error::{Error, Result};
use crate::numeric::rational_serde;

/// `SD_{a,b}` instance: YES when `Δ(D(C0), D(C1)) <= a`, NO when `> b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SdFile", into = "SdFile")]
pub struct SdInstance {
    c0: BoolCircuit,
    c1: BoolCircuit,
    a: BigRational,
    b: BigRational,
}

impl SdInstance {
    pub fn new(c0: BoolCircuit, c1: BoolCircuit, a: BigRational, b: BigRational) -> Result<Self> {
        if c0.k_out() != c1.k_out() {
            return Err(Error::Domain(format!(
                "circuits disagree on output width ({} vs {})",
                c0.k_out(),
                c1.k_out()
            )));
        }
        check_gap_params(&a, &b)?;
        Ok(SdInstance { c0, c1, a, b })
    }

    pub fn c0(&self) -> &BoolCircuit {
        &self.c0
    }

    pub fn c1(&self) -> &BoolCircuit {
        &self.c1
    }

    pub fn circuit(&self, bit: bool) -> &BoolCircuit {
        if bit {
            &self.c1
        } else {
            &self.c0
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn output_width(&self) -> usize {
        self.c0.k_out()
    }
}

pub(crate) fn check_gap_params(a: &BigRational, b: &BigRational) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if *a < zero || *b > one || a > b {
        return Err(Error::Domain(format!(
            "need 0 <= a <= b <= 1, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct SdFile {
    c0: BoolCircuit,
    c1: BoolCircuit,
    #[serde(with = "rational_serde")]
    a: BigRational,
    #[serde(with = "rational_serde")]
    b: BigRational,
}

impl TryFrom<SdFile> for SdInstance {
    type Error = Error;
    fn try_from(f: SdFile) -> Result<Self> {
        SdInstance::new(f.c0, f.c1, f.a, f.b)
    }
}

impl From<SdInstance> for SdFile {
    fn from(i: SdInstance) -> Self {
        SdFile {
            c0: i.c0,
            c1: i.c1,
            a: i.a,
            b: i.b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    #[test]
    fn instance_validation() {
        let c = BoolCircuit::identity(2);
        assert!(SdInstance::new(c.clone(), c.clone(), ratio(1, 3), ratio(2, 3)).is_ok());
        assert!(SdInstance::new(c.clone(), c.clone(), ratio(2, 3), ratio(1, 3)).is_err());
        assert!(SdInstance::new(
            c.clone(),
            BoolCircuit::identity(1),
            ratio(0, 1),
            ratio(1, 1)
        )
        .is_err());
    }

    #[test]
    fn instance_json() {
        let c = BoolCircuit::identity(1);
        let inst = SdInstance::new(c.clone(), c, ratio(1, 3), ratio(2, 3)).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        assert!(text.contains(r#""a":"1/3""#));
        let back: SdInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
        let numeric = text.replace(r#""a":"1/3""#, r#""a":0.25"#);
        let parsed: SdInstance = serde_json::from_str(&numeric).unwrap();
        assert_eq!(parsed.a(), &ratio(1, 4));
    }
}
