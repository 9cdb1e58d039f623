use serde::Serialize;

use super::{closest_vector, LweParams};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// `log2(2^m q^n (2R)^m / q^m)`: the union bound on the chance that a
/// uniform `b` lands within `R` of `Λ(A)`. Only a valid bound for `R >= 1/4`:
/// below that a ball still holds its centre, so `(4R)^m` undercounts.
pub fn counting_bound_log2(n: usize, q: u64, m: usize, radius: f64) -> f64 {
    let (n, m, lq) = (n as f64, m as f64, (q as f64).log2());
    m + n * lq + m * (2.0 * radius).log2() - m * lq
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoSideBound {
    /// `R = γ · √m · αq`.
    pub radius: f64,
    pub log2_p: f64,
    /// `2^log2_p`; values at or above 1 mean the bound says nothing.
    pub p: f64,
}

impl NoSideBound {
    pub fn is_vacuous(&self) -> bool {
        self.log2_p >= 0.0
    }
}

pub fn no_side_probability_bound(p: &LweParams, gamma: f64) -> Result<NoSideBound> {
    p.validate()?;
    if !(gamma >= 1.0) {
        return Err(Error::Domain(format!("γ must be at least 1, got {gamma}")));
    }
    let radius = gamma * p.distance_threshold();
    let log2_p = counting_bound_log2(p.n, p.q, p.m, radius);
    Ok(NoSideBound {
        radius,
        log2_p,
        p: log2_p.exp2(),
    })
}

/// Largest `α` with `α <= c'√(ln n) / (2^{n/m} q^{n/m} √n √m)`.
pub fn alpha_bound(n: usize, m: usize, q: u64, c_prime: f64) -> Result<f64> {
    if n < 2 || m < 2 || q < 2 {
        return Err(Error::Domain(format!(
            "need n, m, q >= 2, got n = {n}, m = {m}, q = {q}"
        )));
    }
    let (nf, mf, qf) = (n as f64, m as f64, q as f64);
    let ratio = nf / mf;
    Ok(c_prime * nf.ln().sqrt() / (2f64.powf(ratio) * qf.powf(ratio) * nf.sqrt() * mf.sqrt()))
}

/// The free constant `c'` in the α bound.
pub const DEFAULT_C_PRIME: f64 = 1.0;

/// Whether `p.alpha` is admitted by [`alpha_bound`]. Parameters outside it
/// (Regev's concrete choices among them) still run, they are only flagged.
pub fn within_alpha_bound(p: &LweParams, c_prime: f64) -> Result<bool> {
    p.validate()?;
    Ok(p.alpha <= alpha_bound(p.n, p.m, p.q, c_prime)?)
}

/// Exact fraction of `b ∈ Z_q^m` with `dist(b, Λ(A)) <= radius`.
pub fn ball_fraction(q: u64, a: &[Vec<u64>], radius: f64, caps: &Caps) -> Result<f64> {
    let m = a.len();
    let total = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > caps.max_cvp_candidates as u128 {
        return Err(Error::resource(
            "targets q^m",
            total,
            caps.max_cvp_candidates,
        ));
    }
    let r2 = radius * radius;
    let mut inside = 0u64;
    let mut b = vec![0i64; m];
    for _ in 0..total {
        if (closest_vector(q, a, &b, caps)?.dist_sq as f64) <= r2 {
            inside += 1;
        }
        for x in b.iter_mut() {
            *x += 1;
            if *x < q as i64 {
                break;
            }
            *x = 0;
        }
    }
    Ok(inside as f64 / total as f64)
}
