//! Statistical-difference polarization: XOR lemma, direct products, and the
//! three-stage composition that pushes a promise `(a, b)` with `b^2 > a` to
//! `(2^-k, 1 - 2^-k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::caps::Caps;
use crate::circuit::{BoolCircuit, CircuitBuilder, SdInstance};
use crate::error::{Error, Result};
use crate::numeric::{dyadic, to_f64};

// slack for float evaluation of the worst-case bounds
const BOUND_SLACK: f64 = 1e-12;
const MAX_XOR_COPIES: u64 = 64;
const MAX_PRODUCT_COPIES: u64 = 1 << 40;

/// Copy counts for XOR(ℓ) → direct product(j) → XOR(m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationPlan {
    pub xor_copies: u64,
    pub product_copies: u64,
    pub final_xor_copies: u64,
}

impl PolarizationPlan {
    pub fn new(xor_copies: u64, product_copies: u64, final_xor_copies: u64) -> Result<Self> {
        if xor_copies == 0 || product_copies == 0 || final_xor_copies == 0 {
            return Err(Error::Domain(
                "polarization copy counts must be at least 1".into(),
            ));
        }
        Ok(PolarizationPlan {
            xor_copies,
            product_copies,
            final_xor_copies,
        })
    }

    /// Cheapest plan whose worst-case bounds guarantee `(2^-k, 1 - 2^-k)`.
    pub fn for_gap(a: &BigRational, b: &BigRational, k: u32) -> Result<Self> {
        if b * b <= *a {
            return Err(Error::Precondition(format!(
                "polarization needs b^2 > a, got a = {a}, b = {b}"
            )));
        }
        if k == 0 || k > 52 {
            return Err(Error::Domain(format!(
                "polarization parameter k = {k} outside 1..=52"
            )));
        }
        let (af, bf) = (to_f64(a), to_f64(b));
        let target = 0.5f64.powi(k as i32);
        let mut best: Option<(u128, PolarizationPlan)> = None;
        for l in 1..=MAX_XOR_COPIES {
            for m in 1..=MAX_XOR_COPIES {
                let Some(j) = product_copies_for(af, bf, l, m, target) else {
                    continue;
                };
                let plan = PolarizationPlan::new(l, j, m)?;
                let cost = plan.cost();
                if best.is_none_or(|(c, _)| cost < c) {
                    best = Some((cost, plan));
                }
            }
        }
        best.map(|(_, p)| p).ok_or_else(|| {
            Error::Precondition(format!(
                "no polarization plan reaches k = {k} for a = {a}, b = {b}"
            ))
        })
    }

    /// Number of copies of the input circuits the plan instantiates per side.
    pub fn cost(&self) -> u128 {
        self.xor_copies as u128 * self.product_copies as u128 * self.final_xor_copies as u128
    }

    /// Worst-case `(a', b')` after the three stages, evaluated in floating point.
    pub fn guaranteed_bounds(&self, a: f64, b: f64) -> (f64, f64) {
        let (a1, b1) = (
            a.powf(self.xor_copies as f64),
            b.powf(self.xor_copies as f64),
        );
        let j = self.product_copies as f64;
        let a2 = 1.0 - (1.0 - a1).powf(j);
        let b2 = 1.0 - (1.0 - b1 * b1).max(0.0).powf(j / 2.0);
        let m = self.final_xor_copies as f64;
        (a2.powf(m), b2.powf(m))
    }
}

fn product_copies_for(a: f64, b: f64, l: u64, m: u64, target: f64) -> Option<u64> {
    let b1 = b.powf(l as f64);
    let need_b = (1.0 - target).powf(1.0 / m as f64);
    let q = 1.0 - b1 * b1;
    let j = if q <= 0.0 {
        1
    } else {
        let est = 2.0 * (1.0 - need_b).ln() / q.ln();
        if !est.is_finite() || est > MAX_PRODUCT_COPIES as f64 {
            return None;
        }
        (est.ceil() as u64).max(1)
    };
    let plan = |j| PolarizationPlan {
        xor_copies: l,
        product_copies: j,
        final_xor_copies: m,
    };
    // float ceil can land one short of the bound
    (j..j + 4).find_map(|j| {
        let (a3, b3) = plan(j).guaranteed_bounds(a, b);
        (b3 >= 1.0 - target + BOUND_SLACK).then_some((a3 <= target - BOUND_SLACK).then_some(j))
    })?
}

/// Smallest `k` for which `(2^-k, 1 - 2^-k)` satisfies `b^2 - 2a + a^2 >= 1/2`.
pub fn default_polarization_k() -> u32 {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (1..64)
        .find(|&k| {
            let a = dyadic(1, k);
            let b = BigRational::one() - &a;
            &b * &b - BigRational::from_integer(2.into()) * &a + &a * &a >= half
        })
        .expect("k = 3 qualifies")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polarized {
    #[serde(skip)]
    pub instance: SdInstance,
    pub plan: PolarizationPlan,
}

/// XOR lemma construction. Output `p` samples `b_1..b_ℓ` with parity `p` and
/// emits `(C_{b_1}(x_1), .., C_{b_ℓ}(x_ℓ))`, so `Δ' = Δ^ℓ` exactly.
///
/// Input layout: `ℓ - 1` free selector bits, then `ℓ` blocks of
/// `max(k_0, k_1)` bits. Structurally equal circuits skip the selector logic.
pub fn xor_combine(
    c0: &BoolCircuit,
    c1: &BoolCircuit,
    copies: u64,
) -> Result<(BoolCircuit, BoolCircuit)> {
    if c0.k_out() != c1.k_out() {
        return Err(Error::Domain(
            "XOR combination needs equal output widths".into(),
        ));
    }
    if copies == 0 {
        return Err(Error::Domain(
            "XOR combination needs at least one copy".into(),
        ));
    }
    if copies == 1 {
        return Ok((c0.clone(), c1.clone()));
    }
    Ok((
        xor_side(c0, c1, copies as usize, false)?,
        xor_side(c0, c1, copies as usize, true)?,
    ))
}

fn xor_side(c0: &BoolCircuit, c1: &BoolCircuit, l: usize, parity: bool) -> Result<BoolCircuit> {
    let block = c0.k_in().max(c1.k_in());
    let selectors = l - 1;
    let mut b = CircuitBuilder::new(selectors + l * block);
    let same = c0 == c1;

    let mut sel: Vec<u32> = (0..selectors as u32).collect();
    if !same {
        let mut last = sel[0];
        for &w in &sel[1..] {
            last = b.xor(last, w);
        }
        if parity {
            last = b.not(last);
        }
        sel.push(last);
    }

    let mut outputs = Vec::with_capacity(l * c0.k_out());
    for (i, _) in (0..l).enumerate() {
        let base = (selectors + i * block) as u32;
        let y0 = b.inline(c0, &(base..base + c0.k_in() as u32).collect::<Vec<_>>());
        if same {
            outputs.extend(y0);
            continue;
        }
        let y1 = b.inline(c1, &(base..base + c1.k_in() as u32).collect::<Vec<_>>());
        for (w0, w1) in y0.into_iter().zip(y1) {
            // y0 xor (s and (y0 xor y1))
            let diff = b.xor(w0, w1);
            let pick = b.and(sel[i], diff);
            outputs.push(b.xor(w0, pick));
        }
    }
    b.finish(outputs)
}

/// `j` independent copies of `c`, outputs concatenated.
pub fn direct_product(c: &BoolCircuit, copies: u64) -> Result<BoolCircuit> {
    if copies == 0 {
        return Err(Error::Domain(
            "direct product needs at least one copy".into(),
        ));
    }
    if copies == 1 {
        return Ok(c.clone());
    }
    let k = c.k_in() as u32;
    let mut b = CircuitBuilder::new(c.k_in() * copies as usize);
    let mut outputs = Vec::with_capacity(c.k_out() * copies as usize);
    for i in 0..copies as u32 {
        outputs.extend(b.inline(c, &(i * k..(i + 1) * k).collect::<Vec<_>>()));
    }
    b.finish(outputs)
}

/// Polarizes to `(2^-k, 1 - 2^-k)` with the cheapest rigorous plan.
pub fn polarize(inst: &SdInstance, k: u32, caps: &Caps) -> Result<Polarized> {
    let plan = PolarizationPlan::for_gap(inst.a(), inst.b(), k)?;
    let a = dyadic(1, k);
    let b = BigRational::one() - &a;
    build(inst, plan, a, b, caps)
}

/// Applies an explicit plan. The output promise is the plan's worst-case
/// bounds, rounded outward to multiples of `2^-40`.
pub fn polarize_with_plan(
    inst: &SdInstance,
    plan: PolarizationPlan,
    caps: &Caps,
) -> Result<Polarized> {
    let (a3, b3) = plan.guaranteed_bounds(to_f64(inst.a()), to_f64(inst.b()));
    let scale = (1u64 << 40) as f64;
    let a = dyadic(((a3 * scale).ceil() + 1.0).min(scale) as u128, 40);
    let b = dyadic(((b3 * scale).floor() - 1.0).max(0.0) as u128, 40);
    if a > b {
        return Err(Error::Precondition(format!(
            "plan {plan:?} does not separate the promise ({a3:.6} vs {b3:.6})"
        )));
    }
    build(inst, plan, a, b, caps)
}

fn build(
    inst: &SdInstance,
    plan: PolarizationPlan,
    a: BigRational,
    b: BigRational,
    caps: &Caps,
) -> Result<Polarized> {
    let estimate = estimated_gates(inst, &plan);
    if estimate > caps.max_gates as u128 {
        return Err(Error::resource(
            "polarized circuit gates",
            estimate,
            caps.max_gates as u128,
        ));
    }
    let (x0, x1) = xor_combine(inst.c0(), inst.c1(), plan.xor_copies)?;
    let (p0, p1) = (
        direct_product(&x0, plan.product_copies)?,
        direct_product(&x1, plan.product_copies)?,
    );
    let (f0, f1) = xor_combine(&p0, &p1, plan.final_xor_copies)?;
    debug_assert!(a >= BigRational::zero() && b <= BigRational::one());
    Ok(Polarized {
        instance: SdInstance::new(f0, f1, a, b)?,
        plan,
    })
}

fn estimated_gates(inst: &SdInstance, plan: &PolarizationPlan) -> u128 {
    let out = inst.output_width() as u128;
    let mux = |l: u128, body: u128, width: u128| l * (body + 3 * width) + l;
    let stage1 = mux(
        plan.xor_copies as u128,
        (inst.c0().size() + inst.c1().size()) as u128,
        out,
    );
    let stage2 = stage1.saturating_mul(plan.product_copies as u128);
    let width2 = out * plan.xor_copies as u128 * plan.product_copies as u128;
    mux(
        plan.final_xor_copies as u128,
        stage2.saturating_mul(2),
        width2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{enumerate_distribution, random_circuit, tv_distance, tv_distance_exact};
    use crate::numeric::ratio;
    use num_traits::Pow;

    fn exact_delta(c0: &BoolCircuit, c1: &BoolCircuit) -> BigRational {
        let caps = Caps::default();
        tv_distance_exact(
            &enumerate_distribution(c0, &caps).unwrap(),
            &enumerate_distribution(c1, &caps).unwrap(),
        )
        .unwrap()
    }

    fn constant(k_in: usize, bit: bool) -> BoolCircuit {
        let mut b = CircuitBuilder::new(k_in);
        let w = b.constant(bit);
        b.finish(vec![w]).unwrap()
    }

    #[test]
    fn xor_lemma_is_exact() {
        for seed in 0..25u64 {
            let c0 = random_circuit(1 + seed as usize % 2, 2, 4, seed).unwrap();
            let c1 = random_circuit(2, 2, 4, seed + 500).unwrap();
            let delta = exact_delta(&c0, &c1);
            for l in 2..=3u64 {
                let (x0, x1) = xor_combine(&c0, &c1, l).unwrap();
                assert_eq!(
                    exact_delta(&x0, &x1),
                    Pow::pow(&delta, l as u32),
                    "seed {seed}, l {l}"
                );
            }
        }
    }

    #[test]
    fn direct_product_within_bounds() {
        let caps = Caps::default();
        for seed in 0..25u64 {
            let c0 = random_circuit(2, 2, 5, seed).unwrap();
            let c1 = random_circuit(2, 2, 5, seed + 900).unwrap();
            let d0 = enumerate_distribution(&c0, &caps).unwrap();
            let d1 = enumerate_distribution(&c1, &caps).unwrap();
            let delta = tv_distance(&d0, &d1).unwrap();
            for j in 2..=3u64 {
                let p = to_f64(&exact_delta(
                    &direct_product(&c0, j).unwrap(),
                    &direct_product(&c1, j).unwrap(),
                ));
                let hi = 1.0 - (1.0 - delta).powi(j as i32);
                let lo = 1.0 - (1.0 - delta * delta).powf(j as f64 / 2.0);
                assert!(
                    lo - 1e-12 <= p && p <= hi + 1e-12,
                    "seed {seed}: {lo} <= {p} <= {hi}"
                );
            }
        }
    }

    #[test]
    fn default_k_is_three() {
        assert_eq!(default_polarization_k(), 3);
    }

    #[test]
    fn plan_search() {
        let plan = PolarizationPlan::for_gap(&ratio(1, 16), &ratio(7, 8), 2).unwrap();
        assert_eq!(plan, PolarizationPlan::new(1, 2, 1).unwrap());
        assert!(matches!(
            PolarizationPlan::for_gap(&ratio(1, 2), &ratio(2, 3), 2),
            Err(Error::Precondition(_))
        ));
        // (1/3, 2/3) is polarizable but the rigorous plan is far beyond desk scale
        let plan = PolarizationPlan::for_gap(&ratio(1, 3), &ratio(2, 3), 2).unwrap();
        assert!(plan.cost() > 1_000, "{plan:?}");
        let (a, b) = plan.guaranteed_bounds(1.0 / 3.0, 2.0 / 3.0);
        assert!(a <= 0.25 && b >= 0.75);
    }

    #[test]
    fn identical_circuits_stay_identical() {
        let c = random_circuit(3, 2, 6, 3).unwrap();
        let inst = SdInstance::new(c.clone(), c, ratio(1, 16), ratio(7, 8)).unwrap();
        let out = polarize(&inst, 2, &Caps::default()).unwrap();
        assert_eq!(out.instance.c0(), out.instance.c1());
        assert_eq!(
            (out.instance.a(), out.instance.b()),
            (&ratio(1, 4), &ratio(3, 4))
        );
    }

    #[test]
    fn disjoint_circuits_stay_disjoint() {
        let inst = SdInstance::new(
            constant(1, false),
            constant(1, true),
            ratio(1, 16),
            ratio(7, 8),
        )
        .unwrap();
        for plan in [(1, 2, 1), (2, 2, 1), (1, 1, 3), (2, 2, 2)] {
            let plan = PolarizationPlan::new(plan.0, plan.1, plan.2).unwrap();
            let out = polarize_with_plan(&inst, plan, &Caps::default()).unwrap();
            assert!(
                exact_delta(out.instance.c0(), out.instance.c1()).is_one(),
                "{plan:?}"
            );
        }
    }

    #[test]
    fn far_pair_lands_above_three_quarters() {
        // C0 uniform on 4 inputs mapped to 2 bits, C1 puts 11/16 of its mass elsewhere
        let c0 = random_circuit(4, 2, 0, 0).unwrap();
        let mut found = None;
        for seed in 0..5000 {
            let c1 = random_circuit(4, 2, 6, seed).unwrap();
            if exact_delta(&c0, &c1) == ratio(11, 16) {
                found = Some(c1);
                break;
            }
        }
        let c1 = found.expect("a pair at 11/16");
        let inst = SdInstance::new(c0, c1, ratio(1, 16), ratio(2, 3)).unwrap();
        let out = polarize_with_plan(
            &inst,
            PolarizationPlan::new(1, 2, 1).unwrap(),
            &Caps::default(),
        )
        .unwrap();
        let d = exact_delta(out.instance.c0(), out.instance.c1());
        assert!(d >= ratio(3, 4), "{d}");
    }

    #[test]
    fn promise_sides_hold_by_enumeration() {
        let (a, b) = (ratio(1, 16), ratio(7, 8));
        let caps = Caps::default();
        let mut checked = (0, 0);
        for seed in 0..400u64 {
            let c0 = random_circuit(2, 1 + seed as usize % 2, 3, seed).unwrap();
            let c1 = random_circuit(2, 1 + seed as usize % 2, 3, seed + 7000).unwrap();
            let delta = exact_delta(&c0, &c1);
            let yes = delta <= a;
            if !yes && delta <= b {
                continue;
            }
            let inst = SdInstance::new(c0, c1, a.clone(), b.clone()).unwrap();
            let out = polarize(&inst, 2, &caps).unwrap();
            let d = exact_delta(out.instance.c0(), out.instance.c1());
            if yes {
                checked.0 += 1;
                assert!(d <= *out.instance.a(), "seed {seed}: {d}");
            } else {
                checked.1 += 1;
                assert!(d > *out.instance.b(), "seed {seed}: {d}");
            }
        }
        assert!(checked.0 > 10 && checked.1 > 10, "{checked:?}");
    }

    #[test]
    fn gate_cap() {
        let c0 = random_circuit(3, 2, 6, 1).unwrap();
        let c1 = random_circuit(3, 2, 6, 2).unwrap();
        let inst = SdInstance::new(c0, c1, ratio(1, 3), ratio(2, 3)).unwrap();
        let tight = Caps {
            max_gates: 10_000,
            ..Caps::default()
        };
        assert!(matches!(
            polarize(&inst, 2, &tight),
            Err(Error::Resource { .. })
        ));
        // within the default gate cap the compile succeeds, but the result is
        // far too wide to enumerate
        let out = polarize(&inst, 2, &Caps::default()).unwrap();
        assert!(out.instance.c0().k_in() > Caps::default().enumeration_bits as usize);
        assert!(matches!(
            enumerate_distribution(out.instance.c0(), &Caps::default()),
            Err(Error::Resource { .. })
        ));
    }
}
