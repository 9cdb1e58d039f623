use super::{InvPair, InvertibleSequence, SisdInstance};
use crate::circuit::{BoolCircuit, CircuitBuilder, SdInstance};
use crate::error::Result;

/// Compiles an SD instance into a 1-sequentially invertible SISD instance with
/// the same statistical difference.
///
/// Each family acts on `k_I + k` bits laid out as `(x, y)`, `k_I = max(k_0, k_1)`.
/// Steps `1..=k_I` XOR one random bit into `x_i`, step `k_I + 1` maps
/// `(x, y) -> (x, y xor C_b(x_1..k_b))` with no randomness, and the last `k_I`
/// steps re-randomise `x` the same way. Every step is its own inverse.
pub fn reduce_sd_to_sisd(inst: &SdInstance) -> Result<SisdInstance> {
    let k_i = inst.c0().k_in().max(inst.c1().k_in());
    let k = inst.output_width();
    let seq0 = reduce_family(inst.c0(), k_i, k)?;
    let seq1 = reduce_family(inst.c1(), k_i, k)?;
    SisdInstance::new(seq0, seq1, inst.a().clone(), inst.b().clone(), 1)
}

fn reduce_family(c: &BoolCircuit, k_i: usize, k: usize) -> Result<InvertibleSequence> {
    let width = k_i + k;
    let mut pairs = Vec::with_capacity(2 * k_i + 1);
    for i in 0..k_i {
        pairs.push(self_inverse(xor_randomness_step(width, i)?, width, 1)?);
    }
    pairs.push(self_inverse(apply_circuit_step(c, k_i, k)?, width, 0)?);
    for i in 0..k_i {
        pairs.push(self_inverse(xor_randomness_step(width, i)?, width, 1)?);
    }
    InvertibleSequence::new(width, pairs)
}

fn self_inverse(c: BoolCircuit, k: usize, r: usize) -> Result<InvPair> {
    InvPair::new(c.clone(), c, k, r)
}

/// `((x, y), z) -> ((x_1, .., x_i xor z, .., x_kI), y)`; the random bit is wire `width`.
fn xor_randomness_step(width: usize, i: usize) -> Result<BoolCircuit> {
    let mut b = CircuitBuilder::new(width + 1);
    let flipped = b.xor(b.input(i), b.input(width));
    let mut outputs: Vec<u32> = (0..width as u32).collect();
    outputs[i] = flipped;
    b.finish(outputs)
}

/// `(x, y) -> (x, y xor C(x_1..k_b))`.
fn apply_circuit_step(c: &BoolCircuit, k_i: usize, k: usize) -> Result<BoolCircuit> {
    let mut b = CircuitBuilder::new(k_i + k);
    let prefix: Vec<u32> = (0..c.k_in() as u32).collect();
    let outs = b.inline(c, &prefix);
    let mut outputs: Vec<u32> = (0..k_i as u32).collect();
    for (j, &o) in outs.iter().enumerate() {
        let y = b.xor((k_i + j) as u32, o);
        outputs.push(y);
    }
    b.finish(outputs)
}
