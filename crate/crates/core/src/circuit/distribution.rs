use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bits::{hex_key, parse_hex_key};
use super::ir::BoolCircuit;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::numeric::{dyadic, format_rational, parse_rational, to_f64};

/// Probability values a [`Distribution`] can carry.
pub trait Probability: Clone + PartialEq + std::fmt::Debug {
    fn zero_mass() -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero_mass(&self) -> bool;
}

impl Probability for f64 {
    fn zero_mass() -> Self {
        0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_mass(&self) -> bool {
        *self == 0.0
    }
}

impl Probability for BigRational {
    fn zero_mass() -> Self {
        <BigRational as Zero>::zero()
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    fn is_zero_mass(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Sparse distribution over `width`-bit strings (big-endian integer keys).
/// Zero-probability keys are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<P> {
    width: usize,
    probs: BTreeMap<u64, P>,
}

pub type ExactDistribution = Distribution<BigRational>;
pub type RealDistribution = Distribution<f64>;

const REAL_SUM_TOLERANCE: f64 = 1e-12;

impl<P: Probability> Distribution<P> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, key: u64) -> P {
        self.probs.get(&key).cloned().unwrap_or_else(P::zero_mass)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &P)> {
        self.probs.iter().map(|(&k, p)| (k, p))
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn to_real(&self) -> RealDistribution {
        Distribution {
            width: self.width,
            probs: self.probs.iter().map(|(&k, p)| (k, p.to_f64())).collect(),
        }
    }

    fn check_keys(width: usize, keys: impl Iterator<Item = u64>) -> Result<()> {
        if width > 64 {
            return Err(Error::Domain(format!(
                "distribution width {width} exceeds 64 bits"
            )));
        }
        for key in keys {
            if width < 64 && key >> width != 0 {
                return Err(Error::Domain(format!(
                    "key {key:#x} does not fit in {width} bits"
                )));
            }
        }
        Ok(())
    }
}

impl RealDistribution {
    pub fn new(width: usize, probs: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, p) in probs {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::Domain(format!(
                    "invalid probability {p} at key {k:#x}"
                )));
            }
            if p > 0.0 {
                *map.entry(k).or_insert(0.0) += p;
            }
        }
        Self::check_keys(width, map.keys().copied())?;
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > REAL_SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Distribution { width, probs: map })
    }

    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.probs
            .iter()
            .map(|(&k, p)| (hex_key(k, self.width), format!("{p}")))
            .collect()
    }

    pub fn from_json_map(width: usize, map: &BTreeMap<String, String>) -> Result<Self> {
        let entries = map
            .iter()
            .map(|(k, v)| {
                let p: f64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad probability {v:?}")))?;
                Ok((parse_hex_key(k, width)?, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(width, entries)
    }
}

impl ExactDistribution {
    pub fn new(width: usize, probs: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (k, p) in probs {
            if p.is_negative() {
                return Err(Error::Domain(format!("negative probability at key {k:#x}")));
            }
            if !Zero::is_zero(&p) {
                *map.entry(k).or_insert_with(<BigRational as Zero>::zero) += p;
            }
        }
        Self::check_keys(width, map.keys().copied())?;
        let total: BigRational = map.values().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Distribution { width, probs: map })
    }

    /// Distribution with mass `count / 2^total_bits` at each key.
    pub fn from_counts(
        width: usize,
        counts: impl IntoIterator<Item = (u64, u128)>,
        total_bits: u32,
    ) -> Result<Self> {
        Self::new(
            width,
            counts.into_iter().map(|(k, c)| (k, dyadic(c, total_bits))),
        )
    }

    pub fn point_mass(width: usize, key: u64) -> Result<Self> {
        Self::new(width, [(key, BigRational::one())])
    }

    /// Marginal on bit positions `start..start + len`.
    pub fn marginal(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.width {
            return Err(Error::Domain(format!(
                "marginal {start}..{} outside width {}",
                start + len,
                self.width
            )));
        }
        let shift = self.width - start - len;
        let mask = if len == 64 { !0 } else { (1u64 << len) - 1 };
        Self::new(
            len,
            self.probs
                .iter()
                .map(|(&k, p)| ((k >> shift) & mask, p.clone())),
        )
    }

    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.probs
            .iter()
            .map(|(&k, p)| (hex_key(k, self.width), format_rational(p)))
            .collect()
    }

    pub fn from_json_map(width: usize, map: &BTreeMap<String, String>) -> Result<Self> {
        let entries = map
            .iter()
            .map(|(k, v)| Ok((parse_hex_key(k, width)?, parse_rational(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(width, entries)
    }
}

/// Tallies how often each output occurs; dense for narrow outputs.
pub(crate) struct Tally {
    dense: Option<Vec<u64>>,
    sparse: HashMap<u64, u64>,
}

impl Tally {
    pub(crate) fn new(width: usize) -> Self {
        Tally {
            dense: (width <= 16).then(|| vec![0; 1 << width]),
            sparse: HashMap::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, key: u64, count: u64) {
        match &mut self.dense {
            Some(v) => v[key as usize] += count,
            None => *self.sparse.entry(key).or_insert(0) += count,
        }
    }

    pub(crate) fn into_counts(self) -> Vec<(u64, u128)> {
        match self.dense {
            Some(v) => v
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(k, c)| (k as u64, c as u128))
                .collect(),
            None => self
                .sparse
                .into_iter()
                .map(|(k, c)| (k, c as u128))
                .collect(),
        }
    }
}

/// Exact `D(C)` by running every input through the circuit.
pub fn enumerate_distribution(c: &BoolCircuit, caps: &Caps) -> Result<ExactDistribution> {
    let mut tally = Tally::new(c.k_out());
    c.for_each_io(caps.enumeration_bits, |_, y| tally.add(y, 1))?;
    ExactDistribution::from_counts(c.k_out(), tally.into_counts(), c.k_in() as u32)
}
