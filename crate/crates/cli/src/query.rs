//! Oracle query file: `{"unitaries": [...], "psi": [[re, im], ...], "lambda": 100}`.
//! Each unitary is `"x"`, `"z"`, `{"permutation": [..]}` or
//! `{"dense": [[[re, im], ...], ...]}` (row-major).

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use oilab_core::{SimUnitary, StateVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitarySpec {
    X,
    Z,
    Permutation(Vec<usize>),
    Dense(Vec<Vec<[f64; 2]>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub unitaries: Vec<UnitarySpec>,
    pub psi: StateVector,
    #[serde(default)]
    pub lambda: Option<u64>,
}

impl UnitarySpec {
    pub fn build(&self, index: usize) -> Result<SimUnitary> {
        let ctx = || format!("unitaries[{index}]");
        Ok(match self {
            UnitarySpec::X => SimUnitary::pauli_x(),
            UnitarySpec::Z => SimUnitary::pauli_z(),
            UnitarySpec::Permutation(table) => {
                let n = width_of(table.len()).with_context(ctx)?;
                SimUnitary::permutation(n, table.clone()).with_context(ctx)?
            }
            UnitarySpec::Dense(rows) => {
                let n = width_of(rows.len()).with_context(ctx)?;
                if rows.iter().any(|r| r.len() != rows.len()) {
                    bail!("{}: dense matrix must be square", ctx());
                }
                let matrix = rows
                    .iter()
                    .flatten()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                SimUnitary::dense(n, matrix).with_context(ctx)?
            }
        })
    }
}

fn width_of(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        bail!("dimension {dim} is not a power of two");
    }
    Ok(dim.trailing_zeros() as usize)
}
