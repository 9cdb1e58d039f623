//! Distances between output distributions.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::distribution::{Distribution, ExactDistribution, Probability};
use crate::error::{Error, Result};

fn check_widths<P: Probability, Q: Probability>(
    d0: &Distribution<P>,
    d1: &Distribution<Q>,
) -> Result<()> {
    if d0.width() != d1.width() {
        return Err(Error::Domain(format!(
            "distribution widths differ ({} vs {})",
            d0.width(),
            d1.width()
        )));
    }
    Ok(())
}

fn union_keys<P: Probability>(d0: &Distribution<P>, d1: &Distribution<P>) -> BTreeSet<u64> {
    d0.iter()
        .map(|(k, _)| k)
        .chain(d1.iter().map(|(k, _)| k))
        .collect()
}

/// Total variation distance `1/2 sum |D0(x) - D1(x)|`.
pub fn tv_distance<P: Probability>(d0: &Distribution<P>, d1: &Distribution<P>) -> Result<f64> {
    check_widths(d0, d1)?;
    let sum: f64 = union_keys(d0, d1)
        .into_iter()
        .map(|k| (d0.get(k).to_f64() - d1.get(k).to_f64()).abs())
        .sum();
    Ok((sum / 2.0).clamp(0.0, 1.0))
}

/// Total variation distance in exact arithmetic.
pub fn tv_distance_exact(d0: &ExactDistribution, d1: &ExactDistribution) -> Result<BigRational> {
    check_widths(d0, d1)?;
    let sum: BigRational = union_keys(d0, d1)
        .into_iter()
        .map(|k| (d0.get(k) - d1.get(k)).abs())
        .fold(BigRational::zero(), |acc, x| acc + x);
    Ok(sum / BigRational::from_integer(2.into()))
}

/// Bhattacharyya fidelity `sum sqrt(D0(x) D1(x))`.
pub fn fidelity<P: Probability>(d0: &Distribution<P>, d1: &Distribution<P>) -> Result<f64> {
    check_widths(d0, d1)?;
    let sum: f64 = d0
        .iter()
        .map(|(k, p)| (p.to_f64() * d1.get(k).to_f64()).sqrt())
        .sum();
    Ok(sum.clamp(0.0, 1.0))
}

/// Inner product of the probability vectors after L2 normalisation. This is
/// the overlap of the two output distribution states.
pub fn cosine_similarity<P: Probability>(
    d0: &Distribution<P>,
    d1: &Distribution<P>,
) -> Result<f64> {
    check_widths(d0, d1)?;
    let norm = |d: &Distribution<P>| {
        d.iter()
            .map(|(_, p)| p.to_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let (n0, n1) = (norm(d0), norm(d1));
    if n0 == 0.0 || n1 == 0.0 {
        return Err(Error::Domain(
            "cosine similarity of a zero-mass distribution".into(),
        ));
    }
    let dot: f64 = d0
        .iter()
        .map(|(k, p)| p.to_f64() * d1.get(k).to_f64())
        .sum();
    Ok((dot / (n0 * n1)).clamp(0.0, 1.0))
}
