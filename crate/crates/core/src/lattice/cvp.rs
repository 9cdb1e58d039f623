use serde::Serialize;

use super::GapCvpInstance;
use crate::caps::Caps;
use crate::error::{Error, Result};

/// `v mod q` mapped into `(-q/2, q/2]`.
pub fn centered_mod(v: i64, q: u64) -> i64 {
    let q = q as i64;
    let r = v.rem_euclid(q);
    if 2 * r > q {
        r - q
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvpSolution {
    /// Exact `dist(t, Λ(A))²`.
    pub dist_sq: u64,
    pub dist: f64,
    /// A secret whose coset `As + qZ^m` holds a closest vector.
    pub secret: Vec<u64>,
}

/// Exact CVP on `Λ(A) = {As} + qZ^m`: for each `s ∈ Z_q^n` the closest point of
/// the coset is reached coordinate-wise by centred reduction of `t - As`.
pub fn closest_vector(q: u64, a: &[Vec<u64>], target: &[i64], caps: &Caps) -> Result<CvpSolution> {
    let m = target.len();
    if a.len() != m {
        return Err(Error::Domain(format!(
            "A has {} rows, target has {m} entries",
            a.len()
        )));
    }
    let n = a.first().map_or(0, Vec::len);
    let candidates = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if candidates > caps.max_cvp_candidates as u128 {
        return Err(Error::resource(
            "CVP candidates q^n",
            candidates,
            caps.max_cvp_candidates,
        ));
    }
    // residual t - As (mod q), updated one column at a time as s counts up
    let mut residual: Vec<u64> = target
        .iter()
        .map(|&t| t.rem_euclid(q as i64) as u64)
        .collect();
    let mut s = vec![0u64; n];
    let mut best = CvpSolution {
        dist_sq: u64::MAX,
        dist: f64::INFINITY,
        secret: s.clone(),
    };
    loop {
        let d2: u64 = residual
            .iter()
            .map(|&r| {
                let c = centered_mod(r as i64, q);
                (c * c) as u64
            })
            .sum();
        if d2 < best.dist_sq {
            best.dist_sq = d2;
            best.secret.clone_from(&s);
            if d2 == 0 {
                break;
            }
        }
        // odometer step; every digit that moves (including wraps) adds one column
        let mut j = 0;
        while j < n {
            for (r, row) in residual.iter_mut().zip(a) {
                *r = (*r + q - row[j] % q) % q;
            }
            s[j] += 1;
            if s[j] < q {
                break;
            }
            s[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    best.dist = (best.dist_sq as f64).sqrt();
    Ok(best)
}

/// `dist(t, Λ(A))`.
pub fn dist_to_lattice(g: &GapCvpInstance, caps: &Caps) -> Result<f64> {
    Ok(closest_vector(g.params().q, g.matrix(), g.target(), caps)?.dist)
}
