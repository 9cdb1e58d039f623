use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Normalization tolerance for states fed to oracles and the swap test.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// `2^n` complex amplitudes; index `i` is the basis string of `i` in `n` bits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n >= usize::BITS as usize || amps.len() != 1usize << n {
            return Err(Error::Domain(format!(
                "{} amplitudes do not describe a {n}-qubit register",
                amps.len()
            )));
        }
        Ok(StateVector { n, amps })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::new(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Self {
        StateVector {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1 << n],
        }
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >> n != 0 {
            return Err(Error::Domain(format!(
                "basis index {index} outside {n} qubits"
            )));
        }
        let mut s = Self::zero(n);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// `v / ‖v‖`; the zero vector is degenerate.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::Degenerate("cannot normalize the zero vector".into()));
        }
        Ok(StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a / norm).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub(crate) fn check_same_width(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Domain(format!(
                "register widths differ ({} vs {} qubits)",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub(crate) fn add_assign(&mut self, other: &StateVector) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += b;
        }
    }

    /// Largest `‖self - other‖_∞` over amplitudes.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_same_width(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.amps.iter().map(|a| [a.re, a.im]))
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        let len = pairs.len();
        if !len.is_power_of_two() {
            return Err(serde::de::Error::custom(format!(
                "state length {len} is not a power of two"
            )));
        }
        let amps = pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::new(len.trailing_zeros() as usize, amps).map_err(serde::de::Error::custom)
    }
}
