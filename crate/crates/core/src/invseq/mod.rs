//! Sequentially invertible circuit sequences and the reductions that produce
//! them.

mod polarize;
mod reduction;
mod validate;

use std::collections::HashMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use polarize::{
    default_polarization_k, direct_product, polarize, polarize_with_plan, xor_combine,
    PolarizationPlan, Polarized,
};
pub use reduction::reduce_sd_to_sisd;
pub use validate::{validate_sequence, Counterexample, PairReport, ValidationReport};

use crate::caps::Caps;
use crate::circuit::{check_gap_params, BoolCircuit, ExactDistribution};
use crate::error::{Error, Result};
use crate::numeric::rational_serde;

/// Forward/backward circuit pair on `k` state bits with `r` hard-wired
/// randomness bits. Both circuits read `x || z` and write `k` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct InvPair {
    forward: BoolCircuit,
    backward: BoolCircuit,
    k: usize,
    r: usize,
}

impl InvPair {
    pub fn new(forward: BoolCircuit, backward: BoolCircuit, k: usize, r: usize) -> Result<Self> {
        for (name, c) in [("forward", &forward), ("backward", &backward)] {
            if c.k_in() != k + r || c.k_out() != k {
                return Err(Error::MalformedSequence(format!(
                    "{name} circuit maps {} -> {} bits, expected {} -> {k}",
                    c.k_in(),
                    c.k_out(),
                    k + r
                )));
            }
        }
        Ok(InvPair {
            forward,
            backward,
            k,
            r,
        })
    }

    pub fn forward(&self) -> &BoolCircuit {
        &self.forward
    }

    pub fn backward(&self) -> &BoolCircuit {
        &self.backward
    }

    pub fn state_width(&self) -> usize {
        self.k
    }

    pub fn randomness_width(&self) -> usize {
        self.r
    }

    /// `C_→(x; z)` on integer encodings (`k + r <= 64`).
    pub fn apply_forward(&self, x: u64, z: u64) -> u64 {
        self.forward.eval_u64(self.join(x, z))
    }

    pub fn apply_backward(&self, x: u64, z: u64) -> u64 {
        self.backward.eval_u64(self.join(x, z))
    }

    fn join(&self, x: u64, z: u64) -> u64 {
        if self.r == 0 {
            x
        } else {
            (x << self.r) | z
        }
    }

    /// Forward map for a fixed `z`, as a table over all `2^k` states.
    pub fn forward_table(&self, z: u64, cap_bits: u32) -> Result<Vec<u64>> {
        let full = self.forward.truth_table(cap_bits)?;
        Ok((0..1u64 << self.k)
            .map(|x| full[self.join(x, z) as usize])
            .collect())
    }
}

/// `(r, t, ℓ)`-invertible circuit sequence on `k` bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceFile", into = "SequenceFile")]
pub struct InvertibleSequence {
    k: usize,
    pairs: Vec<InvPair>,
}

impl InvertibleSequence {
    pub fn new(k: usize, pairs: Vec<InvPair>) -> Result<Self> {
        if let Some((i, p)) = pairs.iter().enumerate().find(|(_, p)| p.k != k) {
            return Err(Error::MalformedSequence(format!(
                "pair {i} acts on {} bits, sequence width is {k}",
                p.k
            )));
        }
        Ok(InvertibleSequence { k, pairs })
    }

    pub fn state_width(&self) -> usize {
        self.k
    }

    pub fn pairs(&self) -> &[InvPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `r = max_i r_i`.
    pub fn max_randomness(&self) -> usize {
        self.pairs.iter().map(|p| p.r).max().unwrap_or(0)
    }

    pub fn total_randomness(&self) -> usize {
        self.pairs.iter().map(|p| p.r).sum()
    }

    /// `t`: largest circuit in either direction.
    pub fn size_bound(&self) -> usize {
        self.pairs
            .iter()
            .map(|p| p.forward.size().max(p.backward.size()))
            .max()
            .unwrap_or(0)
    }

    pub fn randomness_widths(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.r).collect()
    }
}

/// Exact `D(𝔠)`: fold the forward circuits from `0^k` over every randomness
/// tuple. Equal states are merged after each step, which gives the same
/// counts as enumerating the tuples one by one.
pub fn sequence_output_distribution(
    s: &InvertibleSequence,
    caps: &Caps,
) -> Result<ExactDistribution> {
    let total = s.total_randomness();
    if total > caps.enumeration_bits as usize {
        return Err(Error::resource(
            "randomness tuples (bits)",
            total as u64,
            caps.enumeration_bits as u64,
        ));
    }
    if s.k > 63 {
        return Err(Error::Domain(format!(
            "state width {} exceeds 63 bits",
            s.k
        )));
    }
    let mut current: HashMap<u64, u128> = HashMap::from([(0, 1)]);
    for pair in &s.pairs {
        let branches = 1u64 << pair.r;
        let table = (pair.k + pair.r <= 20)
            .then(|| pair.forward.truth_table(20))
            .transpose()?;
        let mut next: HashMap<u64, u128> =
            HashMap::with_capacity(current.len() * branches as usize);
        for (&x, &count) in &current {
            for z in 0..branches {
                let input = pair.join(x, z);
                let y = match &table {
                    Some(t) => t[input as usize],
                    None => pair.forward.eval_u64(input),
                };
                *next.entry(y).or_insert(0) += count;
            }
        }
        current = next;
    }
    ExactDistribution::from_counts(s.k, current, total as u32)
}

/// `SISD_{a,b,r}` instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SisdFile", into = "SisdFile")]
pub struct SisdInstance {
    seq0: InvertibleSequence,
    seq1: InvertibleSequence,
    a: BigRational,
    b: BigRational,
    r: usize,
}

impl SisdInstance {
    pub fn new(
        seq0: InvertibleSequence,
        seq1: InvertibleSequence,
        a: BigRational,
        b: BigRational,
        r: usize,
    ) -> Result<Self> {
        if seq0.k != seq1.k {
            return Err(Error::MalformedSequence(format!(
                "sequences act on different widths ({} vs {})",
                seq0.k, seq1.k
            )));
        }
        let widest = seq0.max_randomness().max(seq1.max_randomness());
        if widest > r {
            return Err(Error::MalformedSequence(format!(
                "a step uses {widest} random bits, instance bound is r = {r}"
            )));
        }
        check_gap_params(&a, &b)?;
        Ok(SisdInstance {
            seq0,
            seq1,
            a,
            b,
            r,
        })
    }

    pub fn seq0(&self) -> &InvertibleSequence {
        &self.seq0
    }

    pub fn seq1(&self) -> &InvertibleSequence {
        &self.seq1
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

#[derive(Serialize, Deserialize)]
struct PairFile {
    r: usize,
    forward: BoolCircuit,
    backward: BoolCircuit,
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    k: usize,
    pairs: Vec<PairFile>,
}

impl TryFrom<SequenceFile> for InvertibleSequence {
    type Error = Error;
    fn try_from(f: SequenceFile) -> Result<Self> {
        let pairs = f
            .pairs
            .into_iter()
            .map(|p| InvPair::new(p.forward, p.backward, f.k, p.r))
            .collect::<Result<Vec<_>>>()?;
        InvertibleSequence::new(f.k, pairs)
    }
}

impl From<InvertibleSequence> for SequenceFile {
    fn from(s: InvertibleSequence) -> Self {
        SequenceFile {
            k: s.k,
            pairs: s
                .pairs
                .into_iter()
                .map(|p| PairFile {
                    r: p.r,
                    forward: p.forward,
                    backward: p.backward,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SisdFile {
    seq0: InvertibleSequence,
    seq1: InvertibleSequence,
    #[serde(with = "rational_serde")]
    a: BigRational,
    #[serde(with = "rational_serde")]
    b: BigRational,
    r: usize,
}

impl TryFrom<SisdFile> for SisdInstance {
    type Error = Error;
    fn try_from(f: SisdFile) -> Result<Self> {
        SisdInstance::new(f.seq0, f.seq1, f.a, f.b, f.r)
    }
}

impl From<SisdInstance> for SisdFile {
    fn from(i: SisdInstance) -> Self {
        SisdFile {
            seq0: i.seq0,
            seq1: i.seq1,
            a: i.a,
            b: i.b,
            r: i.r,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::numeric::ratio;

    /// `(x; z) -> x xor (z || 0^{k-1})`.
    pub(crate) fn xor_first_bit(k: usize) -> InvPair {
        let mut b = CircuitBuilder::new(k + 1);
        let w = b.xor(0, k as u32);
        let mut outs: Vec<u32> = (0..k as u32).collect();
        outs[0] = w;
        let c = b.finish(outs).unwrap();
        InvPair::new(c.clone(), c, k, 1).unwrap()
    }

    pub(crate) fn identity_pair(k: usize) -> InvPair {
        InvPair::new(BoolCircuit::identity(k), BoolCircuit::identity(k), k, 0).unwrap()
    }

    #[test]
    fn single_xor_step_distribution() {
        let s = InvertibleSequence::new(3, vec![xor_first_bit(3)]).unwrap();
        let d = sequence_output_distribution(&s, &Caps::default()).unwrap();
        assert_eq!(d.support_len(), 2);
        assert_eq!(d.get(0b000), ratio(1, 2));
        assert_eq!(d.get(0b100), ratio(1, 2));
    }

    #[test]
    fn identity_sequence_is_point_mass() {
        let s = InvertibleSequence::new(2, vec![identity_pair(2), identity_pair(2)]).unwrap();
        let d = sequence_output_distribution(&s, &Caps::default()).unwrap();
        assert_eq!(d, ExactDistribution::point_mass(2, 0).unwrap());
    }

    #[test]
    fn randomness_cap() {
        let s = InvertibleSequence::new(2, vec![xor_first_bit(2); 5]).unwrap();
        let caps = Caps::default().with_enumeration_bits(4);
        assert!(matches!(
            sequence_output_distribution(&s, &caps),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn rejects_mismatched_widths() {
        assert!(InvertibleSequence::new(3, vec![xor_first_bit(2)]).is_err());
        assert!(InvPair::new(BoolCircuit::identity(3), BoolCircuit::identity(3), 2, 0).is_err());
        let s2 = InvertibleSequence::new(2, vec![xor_first_bit(2)]).unwrap();
        let s3 = InvertibleSequence::new(3, vec![xor_first_bit(3)]).unwrap();
        assert!(SisdInstance::new(s2.clone(), s3, ratio(0, 1), ratio(1, 1), 1).is_err());
        assert!(SisdInstance::new(s2.clone(), s2, ratio(0, 1), ratio(1, 1), 0).is_err());
    }

    #[test]
    fn sequence_json_round_trip() {
        let s = InvertibleSequence::new(2, vec![xor_first_bit(2), identity_pair(2)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"k":2,"pairs":[{"r":1,"forward":"#));
        let back: InvertibleSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = text.replacen(r#""r":1"#, r#""r":2"#, 1);
        assert!(serde_json::from_str::<InvertibleSequence>(&bad).is_err());
    }
}
