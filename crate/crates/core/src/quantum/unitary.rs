use num_complex::Complex64;

use super::StateVector;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::invseq::InvPair;

const UNITARITY_TOLERANCE: f64 = 1e-9;

/// An `n`-qubit unitary, either a basis permutation or a dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum SimUnitary {
    /// `|x⟩ -> |table[x]⟩`.
    Permutation { n: usize, table: Vec<usize> },
    /// Row-major `2^n x 2^n` matrix.
    Dense { n: usize, matrix: Vec<Complex64> },
}

impl SimUnitary {
    pub fn permutation(n: usize, table: Vec<usize>) -> Result<Self> {
        let dim = 1usize << n;
        if table.len() != dim {
            return Err(Error::Domain(format!(
                "permutation table has {} entries, expected {dim}",
                table.len()
            )));
        }
        let mut seen = vec![false; dim];
        for &y in &table {
            if y >= dim || std::mem::replace(&mut seen[y], true) {
                return Err(Error::Domain(format!(
                    "permutation table is not a bijection (image {y})"
                )));
            }
        }
        Ok(SimUnitary::Permutation { n, table })
    }

    pub fn dense(n: usize, matrix: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        if matrix.len() != dim * dim {
            return Err(Error::Domain(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                dim * dim
            )));
        }
        // U^† U = I
        for i in 0..dim {
            for j in 0..dim {
                let entry: Complex64 = (0..dim)
                    .map(|r| matrix[r * dim + i].conj() * matrix[r * dim + j])
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (entry - expected).norm() > UNITARITY_TOLERANCE {
                    return Err(Error::Domain(format!(
                        "matrix is not unitary at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SimUnitary::Dense { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        SimUnitary::Permutation {
            n,
            table: (0..1 << n).collect(),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        SimUnitary::Dense {
            n: 1,
            matrix: vec![o, l, l, o],
        }
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        SimUnitary::Dense {
            n: 1,
            matrix: vec![l, o, o, -l],
        }
    }

    pub fn qubits(&self) -> usize {
        match self {
            SimUnitary::Permutation { n, .. } | SimUnitary::Dense { n, .. } => *n,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.qubits() != self.qubits() {
            return Err(Error::Domain(format!(
                "{}-qubit unitary applied to a {}-qubit state",
                self.qubits(),
                psi.qubits()
            )));
        }
        let mut out = StateVector::zero(self.qubits());
        self.apply_into(psi.amplitudes(), out.amplitudes_mut());
        Ok(out)
    }

    pub(crate) fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        match self {
            SimUnitary::Permutation { table, .. } => {
                for (x, &y) in table.iter().enumerate() {
                    out[y] = input[x];
                }
            }
            SimUnitary::Dense { matrix, .. } => {
                let dim = input.len();
                for (i, o) in out.iter_mut().enumerate() {
                    *o = matrix[i * dim..(i + 1) * dim]
                        .iter()
                        .zip(input)
                        .map(|(m, v)| m * v)
                        .sum();
                }
            }
        }
    }
}

/// `U_z |x⟩ = |C_→(x; z)⟩` for a pair with hard-wired randomness `z`.
pub fn permutation_unitary_from_circuit(pair: &InvPair, z: u64, caps: &Caps) -> Result<SimUnitary> {
    let (k, r) = (pair.state_width(), pair.randomness_width());
    if k > caps.max_qubits as usize {
        return Err(Error::resource("qubits", k as u64, caps.max_qubits));
    }
    if r < 64 && z >> r != 0 {
        return Err(Error::InputWidth {
            expected: r,
            found: (64 - z.leading_zeros()) as usize,
        });
    }
    let table: Vec<usize> = pair
        .forward_table(z, caps.enumeration_bits)?
        .into_iter()
        .map(|y| y as usize)
        .collect();
    SimUnitary::permutation(k, table).map_err(|_| Error::InvalidPair { z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::invseq::tests::{identity_pair, xor_first_bit};

    #[test]
    fn paulis_are_unitary() {
        for u in [SimUnitary::pauli_x(), SimUnitary::pauli_z()] {
            let SimUnitary::Dense { n, matrix } = u else {
                unreachable!()
            };
            assert!(SimUnitary::dense(n, matrix).is_ok());
        }
        let bad = vec![Complex64::new(1.0, 0.0); 4];
        assert!(SimUnitary::dense(1, bad).is_err());
        assert!(SimUnitary::permutation(1, vec![0, 0]).is_err());
    }

    #[test]
    fn identity_circuit_gives_identity() {
        let u = permutation_unitary_from_circuit(&identity_pair(3), 0, &Caps::default()).unwrap();
        assert_eq!(u, SimUnitary::identity(3));
    }

    #[test]
    fn xor_step_flips_first_bit() {
        let pair = xor_first_bit(3);
        let caps = Caps::default();
        assert_eq!(
            permutation_unitary_from_circuit(&pair, 0, &caps).unwrap(),
            SimUnitary::identity(3)
        );
        let SimUnitary::Permutation { table, .. } =
            permutation_unitary_from_circuit(&pair, 1, &caps).unwrap()
        else {
            unreachable!()
        };
        for x in 0..8 {
            assert_eq!(table[x], x ^ 0b100);
            assert_eq!(table[table[x]], x);
        }
        assert!(matches!(
            permutation_unitary_from_circuit(&pair, 2, &caps),
            Err(Error::InputWidth { .. })
        ));
    }

    #[test]
    fn non_bijective_forward_rejected() {
        let mut b = CircuitBuilder::new(3);
        let w = b.and(0, 1);
        let fwd = b.finish(vec![w, 2]).unwrap();
        let pair = InvPair::new(fwd.clone(), fwd, 2, 1).unwrap();
        assert!(matches!(
            permutation_unitary_from_circuit(&pair, 0, &Caps::default()),
            Err(Error::InvalidPair { z: 0 })
        ));
    }

    #[test]
    fn dense_and_permutation_agree() {
        let x_perm = SimUnitary::permutation(1, vec![1, 0]).unwrap();
        let psi =
            StateVector::new(1, vec![Complex64::new(0.6, 0.1), Complex64::new(0.2, -0.3)]).unwrap();
        assert_eq!(
            x_perm.apply(&psi).unwrap(),
            SimUnitary::pauli_x().apply(&psi).unwrap()
        );
    }
}
