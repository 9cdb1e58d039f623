//! LWE sampling, the LWE to GapCVP reduction over the q-ary lattice
//! `Λ(A) = {z ∈ Z^m : z ≡ As (mod q)}`, exact CVP by enumerating secrets, and
//! the parameter calculators for the NO-side counting bound.

mod bounds;
mod cvp;
mod experiment;
mod gaussian;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bounds::{
    alpha_bound, ball_fraction, counting_bound_log2, no_side_probability_bound, within_alpha_bound,
    NoSideBound, DEFAULT_C_PRIME,
};
pub use cvp::{centered_mod, closest_vector, dist_to_lattice, CvpSolution};
pub use experiment::{gap_experiment, ExperimentRow, GapReport, RowVerdict, DEFAULT_SEPARATION};
pub use gaussian::{rho, sample_discrete_gaussian, DiscreteGaussian, TAIL_WIDTHS};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LweParams {
    pub n: usize,
    pub q: u64,
    pub m: usize,
    pub alpha: f64,
}

impl LweParams {
    pub fn new(n: usize, q: u64, m: usize, alpha: f64) -> Result<Self> {
        let p = LweParams { n, q, m, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.q < 2 || self.m < self.n {
            return Err(Error::Domain(format!(
                "need n >= 1, q >= 2 and m >= n, got n = {}, q = {}, m = {}",
                self.n, self.q, self.m
            )));
        }
        if self.q > 1 << 31 {
            return Err(Error::Domain(format!("modulus {} exceeds 2^31", self.q)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!(
                "α must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Error width `αq`.
    pub fn width(&self) -> f64 {
        self.alpha * self.q as f64
    }

    /// Distance threshold `d = √m · αq`.
    pub fn distance_threshold(&self) -> f64 {
        (self.m as f64).sqrt() * self.width()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Lwe,
    Uniform,
}

/// Secret and error of an LWE sample. Kept out of files and of the
/// reduction; exposed only so verification code can check `dist <= ‖e‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LweWitness {
    pub s: Vec<u64>,
    pub e: Vec<i64>,
}

impl LweWitness {
    pub fn error_norm_sq(&self) -> u64 {
        self.e.iter().map(|&x| (x * x) as u64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LweFile", into = "LweFile")]
pub struct LweInstance {
    params: LweParams,
    a: Vec<Vec<u64>>,
    b: Vec<u64>,
    origin: Origin,
    witness: Option<LweWitness>,
}

impl LweInstance {
    pub fn new(params: LweParams, a: Vec<Vec<u64>>, b: Vec<u64>, origin: Origin) -> Result<Self> {
        params.validate()?;
        check_matrix(&params, &a)?;
        if b.len() != params.m || b.iter().any(|&x| x >= params.q) {
            return Err(Error::Domain(format!(
                "b must have {} entries in [0, q)",
                params.m
            )));
        }
        Ok(LweInstance {
            params,
            a,
            b,
            origin,
            witness: None,
        })
    }

    pub fn params(&self) -> &LweParams {
        &self.params
    }

    /// `m x n` matrix, rows are samples.
    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Recorded `(s, e)` for freshly sampled LWE instances; `None` after a
    /// round trip through a file.
    pub fn witness(&self) -> Option<&LweWitness> {
        self.witness.as_ref()
    }
}

fn check_matrix(p: &LweParams, a: &[Vec<u64>]) -> Result<()> {
    if a.len() != p.m
        || a.iter()
            .any(|row| row.len() != p.n || row.iter().any(|&x| x >= p.q))
    {
        return Err(Error::Domain(format!(
            "A must be {} x {} with entries in [0, q)",
            p.m, p.n
        )));
    }
    Ok(())
}

fn uniform_matrix<R: Rng + ?Sized>(p: &LweParams, rng: &mut R) -> Vec<Vec<u64>> {
    (0..p.m)
        .map(|_| (0..p.n).map(|_| rng.random_range(0..p.q)).collect())
        .collect()
}

/// `(A, As + e mod q)` with `s` uniform and `e_i ← D_{Z,αq}`.
pub fn sample_lwe<R: Rng + ?Sized>(p: &LweParams, rng: &mut R) -> Result<LweInstance> {
    p.validate()?;
    let gaussian = DiscreteGaussian::new(p.width())?;
    let s: Vec<u64> = (0..p.n).map(|_| rng.random_range(0..p.q)).collect();
    let a = uniform_matrix(p, rng);
    let e: Vec<i64> = (0..p.m).map(|_| gaussian.sample(rng)).collect();
    let q = p.q as i128;
    let b = a
        .iter()
        .zip(&e)
        .map(|(row, &ei)| {
            let dot: i128 = row
                .iter()
                .zip(&s)
                .map(|(&x, &y)| x as i128 * y as i128)
                .sum();
            (dot + ei as i128).rem_euclid(q) as u64
        })
        .collect();
    Ok(LweInstance {
        params: *p,
        a,
        b,
        origin: Origin::Lwe,
        witness: Some(LweWitness { s, e }),
    })
}

pub fn sample_uniform<R: Rng + ?Sized>(p: &LweParams, rng: &mut R) -> Result<LweInstance> {
    p.validate()?;
    let a = uniform_matrix(p, rng);
    let b = (0..p.m).map(|_| rng.random_range(0..p.q)).collect();
    Ok(LweInstance {
        params: *p,
        a,
        b,
        origin: Origin::Uniform,
        witness: None,
    })
}

/// `(Λ(A), t, d, γ)`. The lattice is carried as `(A, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GapCvpFile", into = "GapCvpFile")]
pub struct GapCvpInstance {
    params: LweParams,
    a: Vec<Vec<u64>>,
    target: Vec<i64>,
    origin: Origin,
    d: f64,
    gamma: f64,
}

impl GapCvpInstance {
    pub fn new(
        params: LweParams,
        a: Vec<Vec<u64>>,
        target: Vec<i64>,
        origin: Origin,
        d: f64,
        gamma: f64,
    ) -> Result<Self> {
        params.validate()?;
        check_matrix(&params, &a)?;
        if target.len() != params.m {
            return Err(Error::Domain(format!(
                "target must have {} entries",
                params.m
            )));
        }
        if !(d > 0.0) || !(gamma >= 1.0) {
            return Err(Error::Domain(format!(
                "need d > 0 and γ >= 1, got d = {d}, γ = {gamma}"
            )));
        }
        Ok(GapCvpInstance {
            params,
            a,
            target,
            origin,
            d,
            gamma,
        })
    }

    pub fn params(&self) -> &LweParams {
        &self.params
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `L = Λ(A)`, `t = b`, `d = √m · αq`.
pub fn lwe_to_gapcvp(inst: &LweInstance, gamma: f64) -> Result<GapCvpInstance> {
    GapCvpInstance::new(
        inst.params,
        inst.a.clone(),
        inst.b.iter().map(|&x| x as i64).collect(),
        inst.origin,
        inst.params.distance_threshold(),
        gamma,
    )
}

#[derive(Serialize, Deserialize)]
struct LweFile {
    n: usize,
    q: u64,
    m: usize,
    alpha: f64,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    b: Vec<u64>,
    origin: Origin,
}

impl TryFrom<LweFile> for LweInstance {
    type Error = Error;
    fn try_from(f: LweFile) -> Result<Self> {
        LweInstance::new(LweParams::new(f.n, f.q, f.m, f.alpha)?, f.a, f.b, f.origin)
    }
}

impl From<LweInstance> for LweFile {
    fn from(i: LweInstance) -> Self {
        LweFile {
            n: i.params.n,
            q: i.params.q,
            m: i.params.m,
            alpha: i.params.alpha,
            a: i.a,
            b: i.b,
            origin: i.origin,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GapCvpFile {
    n: usize,
    q: u64,
    m: usize,
    alpha: f64,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    b: Vec<i64>,
    origin: Origin,
    d: f64,
    gamma: f64,
}

impl TryFrom<GapCvpFile> for GapCvpInstance {
    type Error = Error;
    fn try_from(f: GapCvpFile) -> Result<Self> {
        GapCvpInstance::new(
            LweParams::new(f.n, f.q, f.m, f.alpha)?,
            f.a,
            f.b,
            f.origin,
            f.d,
            f.gamma,
        )
    }
}

impl From<GapCvpInstance> for GapCvpFile {
    fn from(g: GapCvpInstance) -> Self {
        GapCvpFile {
            n: g.params.n,
            q: g.params.q,
            m: g.params.m,
            alpha: g.params.alpha,
            a: g.a,
            b: g.target,
            origin: g.origin,
            d: g.d,
            gamma: g.gamma,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    fn desk() -> LweParams {
        LweParams::new(2, 101, 8, 0.02).unwrap()
    }

    #[test]
    fn lwe_relation_holds() {
        let p = desk();
        let inst = sample_lwe(&p, &mut rng_from_seed(5)).unwrap();
        let w = inst.witness().unwrap();
        for (i, row) in inst.matrix().iter().enumerate() {
            let dot: i64 = row.iter().zip(&w.s).map(|(&x, &y)| (x * y) as i64).sum();
            assert_eq!((dot + w.e[i]).rem_euclid(101) as u64, inst.b()[i]);
        }
    }

    #[test]
    fn near_zero_noise_gives_exact_products() {
        let p = LweParams::new(2, 101, 8, 0.01 / 101.0).unwrap();
        for seed in 0..20 {
            let inst = sample_lwe(&p, &mut rng_from_seed(seed)).unwrap();
            assert!(inst.witness().unwrap().e.iter().all(|&e| e == 0));
        }
    }

    #[test]
    fn deterministic_json() {
        let p = desk();
        let a = serde_json::to_string(&sample_lwe(&p, &mut rng_from_seed(9)).unwrap()).unwrap();
        let b = serde_json::to_string(&sample_lwe(&p, &mut rng_from_seed(9)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(r#"{"n":2,"q":101,"m":8,"alpha":0.02,"A":[["#));
        assert!(a.ends_with(r#""origin":"lwe"}"#));
        let back: LweInstance = serde_json::from_str(&a).unwrap();
        assert!(back.witness().is_none());
        assert_eq!(back.b(), sample_lwe(&p, &mut rng_from_seed(9)).unwrap().b());
    }

    #[test]
    fn distance_threshold_example() {
        let inst = sample_uniform(&desk(), &mut rng_from_seed(0)).unwrap();
        let g = lwe_to_gapcvp(&inst, 1.0).unwrap();
        assert!((g.d() - 8f64.sqrt() * 2.02).abs() < 1e-12);
        assert!((g.d() - 5.713).abs() < 1e-3);
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains(r#""origin":"uniform","d":5.71"#));
        assert_eq!(serde_json::from_str::<GapCvpInstance>(&text).unwrap(), g);
        assert!(lwe_to_gapcvp(&inst, 0.5).is_err());
    }

    #[test]
    fn rejects_bad_params_and_entries() {
        assert!(LweParams::new(3, 101, 2, 0.1).is_err());
        assert!(LweParams::new(2, 1, 4, 0.1).is_err());
        assert!(LweParams::new(2, 11, 4, 1.5).is_err());
        let p = LweParams::new(1, 5, 2, 0.1).unwrap();
        assert!(LweInstance::new(p, vec![vec![1], vec![5]], vec![0, 0], Origin::Uniform).is_err());
    }
}
