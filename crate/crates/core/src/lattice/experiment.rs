use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    alpha_bound, closest_vector, lwe_to_gapcvp, sample_lwe, sample_uniform, within_alpha_bound,
    LweParams, Origin, DEFAULT_C_PRIME,
};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::seed::derived_rng;

/// Desk-scale separation factor for the NO side: uniform targets are
/// expected beyond `3d`.
pub const DEFAULT_SEPARATION: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVerdict {
    /// `dist <= d`.
    Yes,
    /// `dist > γ' d`.
    No,
    /// In between.
    Gap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub trial: u32,
    pub origin: Origin,
    pub dist: f64,
    pub d: f64,
    pub verdict: RowVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub params: LweParams,
    pub trials: u32,
    pub seed: u64,
    pub d: f64,
    pub separation_factor: f64,
    /// `√(n / ln n)`, the asymptotic factor, for reference only.
    pub asymptotic_gamma: f64,
    /// Largest α the asymptotic argument admits (`c' = 1`); absent for `n < 2`.
    pub alpha_bound: Option<f64>,
    pub within_alpha_bound: Option<bool>,
    /// LWE targets with `dist <= d`.
    pub yes_rate: f64,
    /// Uniform targets with `dist > γ' d`.
    pub no_rate: f64,
    pub lwe_median: f64,
    pub uniform_median: f64,
    /// LWE samples whose recorded error already satisfies `‖e‖ <= d`.
    pub error_within_d_rate: f64,
    /// Exact squared distance -> count.
    pub lwe_histogram: BTreeMap<u64, u32>,
    pub uniform_histogram: BTreeMap<u64, u32>,
    pub rows: Vec<ExperimentRow>,
}

struct Measured {
    dist_sq: u64,
    error_norm_sq: Option<u64>,
}

/// Samples `trials` LWE and `trials` uniform instances and measures their exact
/// distance to `Λ(A)`. Trial `t` of each origin draws from its own derived
/// stream, so the report does not depend on scheduling.
pub fn gap_experiment(
    p: &LweParams,
    separation: f64,
    trials: u32,
    seed: u64,
    caps: &Caps,
) -> Result<GapReport> {
    p.validate()?;
    if trials == 0 || !(separation >= 1.0) {
        return Err(Error::Domain(
            "need at least one trial and a separation factor >= 1".into(),
        ));
    }
    let d = p.distance_threshold();
    let measure = |origin: Origin, t: u32| -> Result<Measured> {
        let inst = match origin {
            Origin::Lwe => sample_lwe(p, &mut derived_rng(seed, "lwe", t as u64))?,
            Origin::Uniform => sample_uniform(p, &mut derived_rng(seed, "uniform", t as u64))?,
        };
        let g = lwe_to_gapcvp(&inst, separation)?;
        let sol = closest_vector(p.q, g.matrix(), g.target(), caps)?;
        Ok(Measured {
            dist_sq: sol.dist_sq,
            error_norm_sq: inst.witness().map(|w| w.error_norm_sq()),
        })
    };
    let lwe = (0..trials)
        .into_par_iter()
        .map(|t| measure(Origin::Lwe, t))
        .collect::<Result<Vec<_>>>()?;
    let uniform = (0..trials)
        .into_par_iter()
        .map(|t| measure(Origin::Uniform, t))
        .collect::<Result<Vec<_>>>()?;

    let d_sq = d * d;
    let far_sq = (separation * d).powi(2);
    let verdict = |dist_sq: u64| {
        let x = dist_sq as f64;
        if x <= d_sq {
            RowVerdict::Yes
        } else if x > far_sq {
            RowVerdict::No
        } else {
            RowVerdict::Gap
        }
    };
    let mut rows = Vec::with_capacity(2 * trials as usize);
    for (origin, set) in [(Origin::Lwe, &lwe), (Origin::Uniform, &uniform)] {
        for (t, m) in set.iter().enumerate() {
            rows.push(ExperimentRow {
                trial: t as u32,
                origin,
                dist: (m.dist_sq as f64).sqrt(),
                d,
                verdict: verdict(m.dist_sq),
            });
        }
    }
    let rate = |set: &[Measured], want: RowVerdict| {
        set.iter().filter(|m| verdict(m.dist_sq) == want).count() as f64 / trials as f64
    };
    let error_within_d = lwe
        .iter()
        .filter(|m| m.error_norm_sq.is_some_and(|e| e as f64 <= d_sq))
        .count() as f64
        / trials as f64;
    let n = p.n as f64;
    Ok(GapReport {
        params: *p,
        trials,
        seed,
        d,
        separation_factor: separation,
        asymptotic_gamma: if p.n >= 2 {
            (n / n.ln()).sqrt()
        } else {
            f64::NAN
        },
        alpha_bound: alpha_bound(p.n, p.m, p.q, DEFAULT_C_PRIME).ok(),
        within_alpha_bound: within_alpha_bound(p, DEFAULT_C_PRIME).ok(),
        yes_rate: rate(&lwe, RowVerdict::Yes),
        no_rate: rate(&uniform, RowVerdict::No),
        lwe_median: median_dist(&lwe),
        uniform_median: median_dist(&uniform),
        error_within_d_rate: error_within_d,
        lwe_histogram: histogram(&lwe),
        uniform_histogram: histogram(&uniform),
        rows,
    })
}

fn median_dist(set: &[Measured]) -> f64 {
    let mut v: Vec<u64> = set.iter().map(|m| m.dist_sq).collect();
    v.sort_unstable();
    let k = v.len();
    if k % 2 == 1 {
        (v[k / 2] as f64).sqrt()
    } else {
        ((v[k / 2 - 1] as f64).sqrt() + (v[k / 2] as f64).sqrt()) / 2.0
    }
}

fn histogram(set: &[Measured]) -> BTreeMap<u64, u32> {
    let mut h = BTreeMap::new();
    for m in set {
        *h.entry(m.dist_sq).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_noise_is_all_yes_at_zero() {
        let p = LweParams::new(2, 31, 6, 1e-4).unwrap();
        let r = gap_experiment(&p, DEFAULT_SEPARATION, 20, 1, &Caps::default()).unwrap();
        assert_eq!(r.yes_rate, 1.0);
        assert_eq!(r.lwe_histogram.get(&0), Some(&20));
    }

    #[test]
    fn same_seed_same_bytes() {
        let p = LweParams::new(2, 31, 6, 0.05).unwrap();
        let a = serde_json::to_string(&gap_experiment(&p, 3.0, 15, 7, &Caps::default()).unwrap())
            .unwrap();
        let b = serde_json::to_string(&gap_experiment(&p, 3.0, 15, 7, &Caps::default()).unwrap())
            .unwrap();
        assert_eq!(a, b);
    }
}
