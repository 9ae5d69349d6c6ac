//! The doubling-denominator sequence.
//!
//! For a point `Q` with abscissa `x_0` on `y² = x³ − m·x`, write `x_i` for the
//! abscissa of `2^i·Q`. Then `S_0 = x_0` and `S_i = 4(x_{i−1}³ − m·x_{i−1})`
//! for `i ≥ 1`, the denominator of `2^i·Q`. `Q` has order exactly `2^k` over a
//! prime field iff `S_1..S_{k−1}` are units and `S_k ≡ 0`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ecring::{Curve, XDouble};
use crate::error::{Error, Result};
use crate::numtheory::FormCandidate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct STrace {
    #[serde(with = "crate::decimal")]
    pub m: BigUint,
    #[serde(with = "crate::decimal")]
    pub modulus: BigUint,
    /// `x_0, x_1, …` up to the last abscissa computed.
    #[serde(with = "crate::decimal::vec")]
    pub x_values: Vec<BigUint>,
    /// `S_1, S_2, …` up to the step where the run stopped.
    #[serde(with = "crate::decimal::vec")]
    pub s_values: Vec<BigUint>,
    pub steps_completed: u32,
    pub four_factor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceOutcome {
    /// `gcd(S_i, N) = 1` for `i < k` and `S_k ≡ 0`.
    AllCoprimeAndFinalZero,
    /// `1 < gcd(S_i, N) < N` at some `i < k`.
    GcdHit {
        step: u32,
        #[serde(with = "crate::decimal")]
        divisor: BigUint,
    },
    /// Every `S_i` with `i < k` was a unit but `S_k ≢ 0`.
    FinalNonzero {
        #[serde(with = "crate::decimal")]
        residue: BigUint,
    },
    /// `S_i ≡ 0` at some `i < k`.
    EarlyInfinity { step: u32 },
}

/// Runs the sequence for `k` steps over `Z/NZ`.
pub fn run_sequence(
    modulus: &BigUint,
    m: &BigUint,
    x0: &BigUint,
    k: u32,
    four_factor: bool,
) -> Result<(SequenceOutcome, STrace)> {
    let curve = Curve::new(modulus.clone(), m.clone())?;
    run_sequence_on(&curve, x0, k, four_factor)
}

/// [`run_sequence`] on an existing curve (which may carry a special-form reducer).
pub fn run_sequence_on(
    curve: &Curve,
    x0: &BigUint,
    k: u32,
    four_factor: bool,
) -> Result<(SequenceOutcome, STrace)> {
    if k < 2 {
        return Err(Error::BelowRange(format!("sequence length {k}")));
    }
    let mut x = curve.reduce(x0);
    let mut trace = STrace {
        m: curve.m().clone(),
        modulus: curve.modulus().clone(),
        x_values: vec![x.clone()],
        s_values: Vec::with_capacity(k as usize),
        steps_completed: 0,
        four_factor,
    };
    for i in 1..=k {
        let cubic = curve.cubic(&x);
        let s = if four_factor { curve.reduce(&(cubic << 2usize)) } else { cubic };
        trace.s_values.push(s.clone());
        trace.steps_completed = i;
        if i == k {
            let outcome = if s.is_zero() {
                SequenceOutcome::AllCoprimeAndFinalZero
            } else {
                SequenceOutcome::FinalNonzero { residue: s }
            };
            return Ok((outcome, trace));
        }
        // gcd(S_i, N) is unaffected by the unit 4, so the x-only doubling's
        // denominator classifies this step.
        match curve.double_x_only(&x) {
            XDouble::X(next) => {
                trace.x_values.push(next.clone());
                x = next;
            }
            XDouble::Infinity => return Ok((SequenceOutcome::EarlyInfinity { step: i }, trace)),
            XDouble::Factor(divisor) => {
                return Ok((SequenceOutcome::GcdHit { step: i, divisor }, trace))
            }
        }
    }
    unreachable!("loop returns at i = k")
}

/// The Mersenne specialization: `N = 2^k − 1`, `m = 3`, `x_0 = −1`, no factor 4.
pub fn mersenne_sequence(k: u32) -> Result<(SequenceOutcome, STrace)> {
    if k < 3 {
        return Err(Error::BelowRange(format!("Mersenne exponent {k}")));
    }
    let form = FormCandidate::new(k, 1u32)?;
    let curve = Curve::over_form(&form, BigUint::from(3u32))?;
    let x0 = form.p() - 1u32;
    run_sequence_on(&curve, &x0, k, false)
}
