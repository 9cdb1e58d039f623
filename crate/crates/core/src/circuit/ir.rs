use serde::{Deserialize, Serialize};

use super::bits::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    And,
    Or,
    Xor,
    Const0,
    Const1,
    Copy,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Not,
        GateKind::And,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Const0,
        GateKind::Const1,
        GateKind::Copy,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Const0 | GateKind::Const1 => 0,
            GateKind::Not | GateKind::Copy => 1,
            GateKind::And | GateKind::Or | GateKind::Xor => 2,
        }
    }
}

/// One gate. Unused input slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    inputs: [u32; 2],
    pub out: u32,
}

impl Gate {
    pub fn new(kind: GateKind, inputs: &[u32], out: u32) -> Result<Self> {
        if inputs.len() != kind.arity() {
            return Err(Error::MalformedCircuit(format!(
                "{kind:?} gate takes {} inputs, got {}",
                kind.arity(),
                inputs.len()
            )));
        }
        let mut slots = [0u32; 2];
        slots[..inputs.len()].copy_from_slice(inputs);
        Ok(Gate {
            kind,
            inputs: slots,
            out,
        })
    }

    pub fn inputs(&self) -> &[u32] {
        &self.inputs[..self.kind.arity()]
    }
}

/// Gate-level DAG computing `{0,1}^k_in -> {0,1}^k_out`.
///
/// Wires `0..k_in` are the inputs; gate `j` defines wire `k_in + j`. Gates
/// may read only wires defined before them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitFile", into = "CircuitFile")]
pub struct BoolCircuit {
    k_in: usize,
    gates: Vec<Gate>,
    outputs: Vec<u32>,
}

impl BoolCircuit {
    pub fn new(k_in: usize, gates: Vec<Gate>, outputs: Vec<u32>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::MalformedCircuit(
                "circuit must have at least one output".into(),
            ));
        }
        for (j, gate) in gates.iter().enumerate() {
            let wire = k_in + j;
            if gate.out as usize != wire {
                return Err(Error::MalformedCircuit(format!(
                    "gate {j} writes wire {}, expected consecutive wire {wire}",
                    gate.out
                )));
            }
            if let Some(&bad) = gate.inputs().iter().find(|&&w| w as usize >= wire) {
                return Err(Error::MalformedCircuit(format!(
                    "gate {j} reads wire {bad} which is not defined before wire {wire}"
                )));
            }
        }
        let wires = k_in + gates.len();
        if let Some(&bad) = outputs.iter().find(|&&w| w as usize >= wires) {
            return Err(Error::MalformedCircuit(format!(
                "output wire {bad} out of range (wires: {wires})"
            )));
        }
        if wires > u32::MAX as usize {
            return Err(Error::MalformedCircuit("too many wires".into()));
        }
        Ok(BoolCircuit {
            k_in,
            gates,
            outputs,
        })
    }

    /// `k` wires copied straight through.
    pub fn identity(k: usize) -> Self {
        BoolCircuit::new(k, Vec::new(), (0..k as u32).collect()).expect("identity is well formed")
    }

    pub fn k_in(&self) -> usize {
        self.k_in
    }

    pub fn k_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    pub fn wire_count(&self) -> usize {
        self.k_in + self.gates.len()
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Runs the gates over bit-sliced words: each `u64` carries 64 independent
    /// evaluations. `wires[..k_in]` must hold the inputs.
    pub(crate) fn run_gates(&self, wires: &mut [u64]) {
        for gate in &self.gates {
            let [a, b] = gate.inputs;
            let value = match gate.kind {
                GateKind::Not => !wires[a as usize],
                GateKind::And => wires[a as usize] & wires[b as usize],
                GateKind::Or => wires[a as usize] | wires[b as usize],
                GateKind::Xor => wires[a as usize] ^ wires[b as usize],
                GateKind::Const0 => 0,
                GateKind::Const1 => !0,
                GateKind::Copy => wires[a as usize],
            };
            wires[gate.out as usize] = value;
        }
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.k_in {
            return Err(Error::InputWidth {
                expected: self.k_in,
                found: x.len(),
            });
        }
        let mut wires = vec![0u64; self.wire_count()];
        for (w, &bit) in wires.iter_mut().zip(x.bits()) {
            *w = bit as u64;
        }
        self.run_gates(&mut wires);
        Ok(BitString::new(
            self.outputs
                .iter()
                .map(|&o| wires[o as usize] & 1 == 1)
                .collect(),
        ))
    }

    /// Evaluates on the big-endian integer encoding. Requires `k_in, k_out <= 64`.
    pub fn eval_u64(&self, x: u64) -> u64 {
        debug_assert!(self.k_in <= 64 && self.k_out() <= 64);
        let mut wires = vec![0u64; self.wire_count()];
        for (i, w) in wires[..self.k_in].iter_mut().enumerate() {
            *w = (x >> (self.k_in - 1 - i)) & 1;
        }
        self.run_gates(&mut wires);
        let k_out = self.k_out();
        self.outputs.iter().enumerate().fold(0, |acc, (j, &o)| {
            acc | ((wires[o as usize] & 1) << (k_out - 1 - j))
        })
    }

    /// Calls `f(x, C(x))` for every input `x` in increasing order.
    pub fn for_each_io(&self, cap_bits: u32, mut f: impl FnMut(u64, u64)) -> Result<()> {
        if self.k_in > cap_bits as usize || self.k_in > 63 {
            return Err(Error::resource(
                "exhaustive enumeration (input bits)",
                self.k_in as u64,
                cap_bits as u64,
            ));
        }
        if self.k_out() > 64 {
            return Err(Error::Domain(format!(
                "output width {} exceeds 64 bits",
                self.k_out()
            )));
        }
        const LANE_PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let total: u64 = 1 << self.k_in;
        let lanes = total.min(64);
        let k_out = self.k_out();
        let mut wires = vec![0u64; self.wire_count()];
        let mut base = 0u64;
        while base < total {
            for (i, wire) in wires.iter_mut().enumerate().take(self.k_in) {
                let p = self.k_in - 1 - i;
                *wire = if p < 6 {
                    LANE_PATTERNS[p]
                } else if (base >> p) & 1 == 1 {
                    !0
                } else {
                    0
                };
            }
            self.run_gates(&mut wires);
            for lane in 0..lanes {
                let mut y = 0u64;
                for (j, &o) in self.outputs.iter().enumerate() {
                    y |= ((wires[o as usize] >> lane) & 1) << (k_out - 1 - j);
                }
                f(base + lane, y);
            }
            base += lanes;
        }
        Ok(())
    }

    /// Full truth table indexed by the input encoding.
    pub fn truth_table(&self, cap_bits: u32) -> Result<Vec<u64>> {
        let mut table = Vec::with_capacity(1usize << self.k_in.min(cap_bits as usize));
        self.for_each_io(cap_bits, |_, y| table.push(y))?;
        Ok(table)
    }
}

/// Incremental construction with consecutive wire allocation.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    k_in: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(k_in: usize) -> Self {
        CircuitBuilder {
            k_in,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> u32 {
        assert!(i < self.k_in, "input {i} out of range");
        i as u32
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn push(&mut self, kind: GateKind, inputs: &[u32]) -> u32 {
        let out = (self.k_in + self.gates.len()) as u32;
        assert!(
            inputs.iter().all(|&w| w < out),
            "gate reads an undefined wire"
        );
        self.gates
            .push(Gate::new(kind, inputs, out).expect("arity checked by caller"));
        out
    }

    pub fn not(&mut self, a: u32) -> u32 {
        self.push(GateKind::Not, &[a])
    }

    pub fn and(&mut self, a: u32, b: u32) -> u32 {
        self.push(GateKind::And, &[a, b])
    }

    pub fn or(&mut self, a: u32, b: u32) -> u32 {
        self.push(GateKind::Or, &[a, b])
    }

    pub fn xor(&mut self, a: u32, b: u32) -> u32 {
        self.push(GateKind::Xor, &[a, b])
    }

    pub fn constant(&mut self, bit: bool) -> u32 {
        self.push(
            if bit {
                GateKind::Const1
            } else {
                GateKind::Const0
            },
            &[],
        )
    }

    pub fn copy(&mut self, a: u32) -> u32 {
        self.push(GateKind::Copy, &[a])
    }

    /// Inlines `circuit`, feeding its inputs from `inputs`; returns the wires
    /// carrying its outputs.
    pub fn inline(&mut self, circuit: &BoolCircuit, inputs: &[u32]) -> Vec<u32> {
        assert_eq!(inputs.len(), circuit.k_in(), "inlined circuit input width");
        let mut map: Vec<u32> = Vec::with_capacity(circuit.wire_count());
        map.extend_from_slice(inputs);
        for gate in circuit.gates() {
            let ins: Vec<u32> = gate.inputs().iter().map(|&w| map[w as usize]).collect();
            let out = self.push(gate.kind, &ins);
            map.push(out);
        }
        circuit.outputs().iter().map(|&o| map[o as usize]).collect()
    }

    pub fn finish(self, outputs: Vec<u32>) -> Result<BoolCircuit> {
        BoolCircuit::new(self.k_in, self.gates, outputs)
    }
}

/// On-disk circuit record.
#[derive(Serialize, Deserialize)]
struct CircuitFile {
    k_in: usize,
    k_out: usize,
    gates: Vec<GateFile>,
    outputs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GateFile {
    kind: GateKind,
    #[serde(rename = "in")]
    inputs: Vec<u32>,
    out: u32,
}

impl TryFrom<CircuitFile> for BoolCircuit {
    type Error = Error;

    fn try_from(file: CircuitFile) -> Result<Self> {
        if file.k_out != file.outputs.len() {
            return Err(Error::MalformedCircuit(format!(
                "k_out is {} but {} outputs are listed",
                file.k_out,
                file.outputs.len()
            )));
        }
        let gates = file
            .gates
            .into_iter()
            .map(|g| Gate::new(g.kind, &g.inputs, g.out))
            .collect::<Result<Vec<_>>>()?;
        BoolCircuit::new(file.k_in, gates, file.outputs)
    }
}

impl From<BoolCircuit> for CircuitFile {
    fn from(c: BoolCircuit) -> Self {
        CircuitFile {
            k_in: c.k_in,
            k_out: c.outputs.len(),
            gates: c
                .gates
                .iter()
                .map(|g| GateFile {
                    kind: g.kind,
                    inputs: g.inputs().to_vec(),
                    out: g.out,
                })
                .collect(),
            outputs: c.outputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> BoolCircuit {
        let mut b = CircuitBuilder::new(2);
        let w = b.and(0, 1);
        b.finish(vec![w]).unwrap()
    }

    #[test]
    fn identity_circuit() {
        let c = BoolCircuit::identity(2);
        assert_eq!(c.eval(&"01".parse().unwrap()).unwrap().to_string(), "01");
    }

    #[test]
    fn single_not() {
        let mut b = CircuitBuilder::new(1);
        let w = b.not(0);
        let c = b.finish(vec![w]).unwrap();
        assert_eq!(c.eval(&"0".parse().unwrap()).unwrap().to_string(), "1");
        assert_eq!(c.eval_u64(1), 0);
    }

    #[test]
    fn and_gate() {
        let c = and2();
        assert_eq!(c.eval(&"11".parse().unwrap()).unwrap().to_string(), "1");
        assert_eq!(c.eval(&"10".parse().unwrap()).unwrap().to_string(), "0");
    }

    #[test]
    fn width_mismatch() {
        let err = and2().eval(&"1".parse().unwrap()).unwrap_err();
        assert!(matches!(
            err,
            Error::InputWidth {
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn rejects_forward_references() {
        let g = Gate::new(GateKind::Not, &[3], 2).unwrap();
        assert!(BoolCircuit::new(2, vec![g], vec![2]).is_err());
        let g = Gate::new(GateKind::Not, &[0], 5).unwrap();
        assert!(BoolCircuit::new(2, vec![g], vec![2]).is_err());
        assert!(BoolCircuit::new(2, vec![], vec![2]).is_err());
        assert!(Gate::new(GateKind::And, &[0], 2).is_err());
    }

    #[test]
    fn bitsliced_matches_scalar() {
        let mut b = CircuitBuilder::new(8);
        let x = b.xor(0, 7);
        let y = b.and(x, 3);
        let z = b.or(y, 5);
        let n = b.not(z);
        let one = b.constant(true);
        let w = b.xor(n, one);
        let c = b.finish(vec![w, x, 6, y]).unwrap();
        let mut seen = 0;
        c.for_each_io(24, |x, y| {
            assert_eq!(x, seen);
            assert_eq!(y, c.eval_u64(x));
            let bits = c.eval(&BitString::from_u64(x, 8)).unwrap();
            assert_eq!(bits.to_u64(), Some(y));
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 256);
    }

    #[test]
    fn json_format() {
        let c = and2();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(
            text,
            r#"{"k_in":2,"k_out":1,"gates":[{"kind":"AND","in":[0,1],"out":2}],"outputs":[2]}"#
        );
        let back: BoolCircuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"k_in":2,"k_out":2,"gates":[],"outputs":[0]}"#;
        assert!(serde_json::from_str::<BoolCircuit>(bad).is_err());
    }

    #[test]
    fn enumeration_cap() {
        let c = BoolCircuit::identity(5);
        assert!(matches!(
            c.for_each_io(4, |_, _| {}),
            Err(Error::Resource { .. })
        ));
    }
}
