use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{SimUnitary, StateVector};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// Input triple `({U_i}, |ψ⟩, λ)` of the order-interference oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OiQuery {
    unitaries: Vec<SimUnitary>,
    psi: StateVector,
    lambda: u64,
}

impl OiQuery {
    pub fn new(unitaries: Vec<SimUnitary>, psi: StateVector, lambda: u64) -> Result<Self> {
        check_family(&unitaries, &psi)?;
        if lambda == 0 {
            return Err(Error::Domain("λ must be a positive integer".into()));
        }
        Ok(OiQuery {
            unitaries,
            psi,
            lambda,
        })
    }

    pub fn unitaries(&self) -> &[SimUnitary] {
        &self.unitaries
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }
}

fn check_family(unitaries: &[SimUnitary], psi: &StateVector) -> Result<()> {
    if unitaries.is_empty() {
        return Err(Error::Domain("at least one unitary is required".into()));
    }
    if let Some(u) = unitaries.iter().find(|u| u.qubits() != psi.qubits()) {
        return Err(Error::Domain(format!(
            "{}-qubit unitary in a query on {} qubits",
            u.qubits(),
            psi.qubits()
        )));
    }
    if !psi.is_normalized() {
        return Err(Error::Precondition(format!(
            "|ψ⟩ has squared norm {}",
            psi.norm_sqr()
        )));
    }
    Ok(())
}

/// Sum over orderings plus what phase alignment needs.
#[derive(Clone, Debug)]
pub struct OiExpansion {
    /// Unnormalized `OI({U_i}, |ψ⟩)`.
    pub vector: StateVector,
    /// `Σ_x Σ_σ |α_{x,σ}|`.
    pub abs_mass: f64,
    /// `(σ^{-1}(1), .., σ^{-1}(m))` with the state it produces, kept only
    /// while `m! · 2^n` fits the ordering-amplitude cap.
    pub per_ordering: Option<Vec<(Vec<usize>, StateVector)>>,
}

impl OiExpansion {
    pub fn phase_alignment(&self) -> Result<f64> {
        alignment(&self.vector, self.abs_mass)
    }
}

fn alignment(sum: &StateVector, abs_mass: f64) -> Result<f64> {
    if abs_mass == 0.0 {
        return Err(Error::Degenerate("all amplitudes are zero".into()));
    }
    let coherent: f64 = sum.amplitudes().iter().map(|a| a.norm()).sum();
    Ok((coherent / abs_mass).min(1.0))
}

/// `(Σ_x |Σ_σ α_{x,σ}|) / (Σ_x Σ_σ |α_{x,σ}|)` over the given per-ordering
/// (or per-choice) amplitude vectors.
pub fn phase_alignment(alphas: &[StateVector]) -> Result<f64> {
    let Some(first) = alphas.first() else {
        return Err(Error::Degenerate("no amplitude vectors".into()));
    };
    let mut sum = StateVector::zero(first.qubits());
    let mut abs_mass = 0.0;
    for v in alphas {
        first.check_same_width(v)?;
        sum.add_assign(v);
        abs_mass += v.amplitudes().iter().map(|a| a.norm()).sum::<f64>();
    }
    alignment(&sum, abs_mass)
}

/// `OI({U_i}, |ψ⟩) = Σ_σ U_{σ^{-1}(m)} ⋯ U_{σ^{-1}(1)} |ψ⟩`, by depth-first
/// search over ordering prefixes so shared prefixes are applied once.
pub fn oi_vector(q: &OiQuery, caps: &Caps) -> Result<OiExpansion> {
    let m = q.unitaries.len();
    if m > caps.max_oi_unitaries {
        return Err(Error::resource(
            "unitaries in an OI query",
            m as u64,
            caps.max_oi_unitaries as u64,
        ));
    }
    let n = q.psi.qubits();
    if n > caps.max_qubits as usize {
        return Err(Error::resource("qubits", n as u64, caps.max_qubits));
    }
    let orderings: u128 = (1..=m as u128).product();
    let keep = orderings << n <= caps.max_ordering_amplitudes as u128;

    let mut acc = Accumulator {
        unitaries: &q.unitaries,
        vector: StateVector::zero(n),
        abs_mass: 0.0,
        per_ordering: keep.then(Vec::new),
        path: Vec::with_capacity(m),
    };
    let mut scratch: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); 1 << n]; m];
    acc.descend(q.psi.amplitudes(), &mut scratch, 0);
    Ok(OiExpansion {
        vector: acc.vector,
        abs_mass: acc.abs_mass,
        per_ordering: acc.per_ordering,
    })
}

struct Accumulator<'a> {
    unitaries: &'a [SimUnitary],
    vector: StateVector,
    abs_mass: f64,
    per_ordering: Option<Vec<(Vec<usize>, StateVector)>>,
    path: Vec<usize>,
}

impl Accumulator<'_> {
    fn descend(&mut self, current: &[Complex64], scratch: &mut [Vec<Complex64>], depth: usize) {
        let m = self.unitaries.len();
        if depth == m {
            for (s, a) in self.vector.amplitudes_mut().iter_mut().zip(current) {
                *s += a;
            }
            self.abs_mass += current.iter().map(|a| a.norm()).sum::<f64>();
            if let Some(store) = &mut self.per_ordering {
                let n = self.vector.qubits();
                let state = StateVector::new(n, current.to_vec()).expect("width preserved");
                store.push((self.path.clone(), state));
            }
            return;
        }
        let (here, deeper) = scratch.split_first_mut().expect("one buffer per level");
        for i in 0..m {
            if self.path.contains(&i) {
                continue;
            }
            self.unitaries[i].apply_into(current, here);
            self.path.push(i);
            self.descend(here, deeper, depth + 1);
            self.path.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleDiagnostics {
    /// `‖OI‖` (or `‖CI‖` for the choice oracle).
    pub oi_norm: f64,
    pub phase_alignment: f64,
    /// `N / (N + 1/λ)` with `N = ‖OI‖/m!` (resp. `‖CI‖/m`).
    pub norm_factor: f64,
    pub success_probability: f64,
}

/// Result of one oracle call. Failure carries no state; the caller decides
/// whether to retry.
#[derive(Clone, Debug, PartialEq)]
pub struct OiOutcome {
    pub success: bool,
    pub state: Option<StateVector>,
    pub diagnostics: OracleDiagnostics,
}

fn draw_outcome<R: Rng + ?Sized>(
    sum: &StateVector,
    abs_mass: f64,
    scale: f64,
    lambda: u64,
    rng: &mut R,
) -> Result<OiOutcome> {
    let norm = sum.norm();
    let gamma = alignment(sum, abs_mass)?;
    let reduced = norm / scale;
    let norm_factor = reduced / (reduced + 1.0 / lambda as f64);
    let success_probability = gamma * norm_factor;
    let diagnostics = OracleDiagnostics {
        oi_norm: norm,
        phase_alignment: gamma,
        norm_factor,
        success_probability,
    };
    // one uniform draw per call, even when the outcome is forced
    let u: f64 = rng.random();
    if norm == 0.0 || u >= success_probability {
        return Ok(OiOutcome {
            success: false,
            state: None,
            diagnostics,
        });
    }
    Ok(OiOutcome {
        success: true,
        state: Some(sum.normalized()?),
        diagnostics,
    })
}

/// Probabilistic order-interference oracle.
pub fn oi_oracle_query<R: Rng + ?Sized>(
    q: &OiQuery,
    caps: &Caps,
    rng: &mut R,
) -> Result<OiOutcome> {
    let expansion = oi_vector(q, caps)?;
    let factorial: f64 = (1..=q.unitaries.len()).map(|i| i as f64).product();
    draw_outcome(
        &expansion.vector,
        expansion.abs_mass,
        factorial,
        q.lambda,
        rng,
    )
}

/// `Σ_i U_i |ψ⟩` with the per-choice vectors `U_i |ψ⟩`.
pub fn ci_expansion(
    unitaries: &[SimUnitary],
    psi: &StateVector,
) -> Result<(StateVector, Vec<StateVector>)> {
    check_family(unitaries, psi)?;
    let parts = unitaries
        .iter()
        .map(|u| u.apply(psi))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = StateVector::zero(psi.qubits());
    for p in &parts {
        sum.add_assign(p);
    }
    Ok((sum, parts))
}

pub fn ci_vector(unitaries: &[SimUnitary], psi: &StateVector) -> Result<StateVector> {
    Ok(ci_expansion(unitaries, psi)?.0)
}

/// Choice-interference oracle, simulated at the level of its success law.
pub fn ci_oracle_query<R: Rng + ?Sized>(
    unitaries: &[SimUnitary],
    psi: &StateVector,
    lambda: u64,
    rng: &mut R,
) -> Result<OiOutcome> {
    if lambda == 0 {
        return Err(Error::Domain("λ must be a positive integer".into()));
    }
    let (sum, parts) = ci_expansion(unitaries, psi)?;
    let abs_mass: f64 = parts
        .iter()
        .flat_map(|p| p.amplitudes().iter().map(|a| a.norm()))
        .sum();
    draw_outcome(&sum, abs_mass, unitaries.len() as f64, lambda, rng)
}
