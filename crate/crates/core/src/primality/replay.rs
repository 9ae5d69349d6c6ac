//! Independent re-validation of verdict certificates.
//!
//! Only [`numtheory`](crate::numtheory) and [`ecring`](crate::ecring) are used
//! here. The doubling sequence is recomputed with its own loop over plain
//! long-division curves, so it also cross-checks the special-form reduction
//! used by the tests.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Algorithm, Certificate, CurveParams, ScalarCheck, Status, Verdict};
use crate::ecring::{Curve, FactorFound, Point, XDouble};
use crate::numtheory::{
    check_prime, gate_large_n, gate_small_n, jacobi, trial_division_big, FormCandidate,
    TrialOutcome,
};
use crate::sequence::{STrace, SequenceOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate rejected: {0}")]
pub struct ReplayError(pub String);

fn fail<T>(msg: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError(msg.into()))
}

fn ensure(cond: bool, msg: &str) -> Result<(), ReplayError> {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

/// Re-validates `verdict` for candidate `c`.
///
/// Undecided verdicts only need a matching certificate kind.
pub fn replay(c: &FormCandidate, verdict: &Verdict) -> Result<(), ReplayError> {
    let p = c.p();
    match (&verdict.certificate, verdict.status) {
        (Certificate::GateFailure { .. }, Status::NotApplicable) => Ok(()),
        (Certificate::RetriesExhausted { .. }, Status::Inconclusive) => Ok(()),
        (Certificate::FactorWitness { divisor, .. }, Status::Composite) => {
            ensure(divisor > &BigUint::one() && divisor < p, "witness outside (1, p)")?;
            ensure((p % divisor).is_zero(), "witness does not divide p")
        }
        (Certificate::OracleDecision { least_factor, .. }, status) => {
            let expected = match trial_division_big(p) {
                Ok(TrialOutcome::Prime) => (Status::Prime, None),
                Ok(TrialOutcome::Composite(f)) => (Status::Composite, Some(f)),
                Err(e) => return fail(e.to_string()),
            };
            ensure(expected == (status, *least_factor), "trial division disagrees")
        }
        (Certificate::Sequence { params, x0, outcome, trace }, status) => {
            replay_sequence_certificate(c, verdict.algorithm, status, params.as_ref(), x0, outcome, trace)
        }
        (Certificate::Order { params, base_scalar, base_infinity, checks, .. }, status) => {
            replay_order_certificate(c, verdict.algorithm, status, params, base_scalar, *base_infinity, checks)
        }
        (cert, status) => fail(format!("status {status:?} cannot carry {cert:?}")),
    }
}

/// `(x/p) = −1`, `((x³−y²)/p) = +1`, `m·x ≡ x³ − y²`, and the point is on the curve.
fn check_params(p: &BigUint, params: &CurveParams) -> Result<Curve, ReplayError> {
    let CurveParams { x, y, m } = params;
    ensure(x < p && y < p && m < p, "curve parameters not reduced")?;
    let jac = |v: BigInt| jacobi(&v, p).map_err(|e| ReplayError(e.to_string()));
    ensure(jac(BigInt::from(x.clone()))? == -1, "x is not a non-residue")?;
    let t = BigInt::from(x.pow(3u32)) - BigInt::from(y * y);
    ensure(jac(t.clone())? == 1, "x³ − y² is not a residue")?;
    let t = t.mod_floor(&BigInt::from(p.clone())).to_biguint().unwrap();
    ensure((m * x) % p == t, "m does not match (x³ − y²)/x")?;
    let curve = Curve::new(p.clone(), m.clone()).map_err(|e| ReplayError(e.to_string()))?;
    ensure(curve.on_curve(&params.point()), "point is not on the curve")?;
    Ok(curve)
}

fn recompute_sequence(curve: &Curve, x0: &BigUint, k: u32, four_factor: bool) -> (SequenceOutcome, STrace) {
    let mut trace = STrace {
        m: curve.m().clone(),
        modulus: curve.modulus().clone(),
        x_values: vec![x0 % curve.modulus()],
        s_values: Vec::new(),
        steps_completed: 0,
        four_factor,
    };
    let mut x = trace.x_values[0].clone();
    for i in 1..=k {
        let mut s = curve.cubic(&x);
        if four_factor {
            s = (s * 4u32) % curve.modulus();
        }
        trace.s_values.push(s.clone());
        trace.steps_completed = i;
        if i == k {
            let outcome = if s.is_zero() {
                SequenceOutcome::AllCoprimeAndFinalZero
            } else {
                SequenceOutcome::FinalNonzero { residue: s }
            };
            return (outcome, trace);
        }
        match curve.double_x_only(&x) {
            XDouble::X(next) => {
                trace.x_values.push(next.clone());
                x = next;
            }
            XDouble::Infinity => return (SequenceOutcome::EarlyInfinity { step: i }, trace),
            XDouble::Factor(divisor) => return (SequenceOutcome::GcdHit { step: i, divisor }, trace),
        }
    }
    unreachable!("k ≥ 2")
}

fn replay_sequence_certificate(
    c: &FormCandidate,
    algorithm: Algorithm,
    status: Status,
    params: Option<&CurveParams>,
    x0: &BigUint,
    outcome: &SequenceOutcome,
    trace: &STrace,
) -> Result<(), ReplayError> {
    let p = c.p();
    let (curve, four_factor) = match (algorithm, params) {
        (Algorithm::Mersenne, None) => {
            ensure(c.n().is_one() && c.k() >= 3, "not a Mersenne candidate")?;
            ensure(x0 == &(p - 1u32), "Mersenne start must be −1")?;
            let curve = Curve::new(p.clone(), BigUint::from(3u32)).map_err(|e| ReplayError(e.to_string()))?;
            (curve, false)
        }
        (Algorithm::SmallN, Some(params)) => {
            ensure(gate_small_n(c), "small-n gate does not hold")?;
            let curve = check_params(p, params)?;
            match curve.scalar_mul(c.n(), &params.point()) {
                Ok(Point::Affine { x, .. }) => ensure(&x == x0, "x0 is not the abscissa of n·Q'")?,
                Ok(Point::Infinity) => return fail("n·Q' is infinity"),
                Err(FactorFound(_)) => return fail("n·Q' exposes a factor"),
            }
            (curve, true)
        }
        _ => return fail("sequence certificate from an unexpected algorithm"),
    };
    let (re_outcome, re_trace) = recompute_sequence(&curve, x0, c.k(), four_factor);
    ensure(&re_outcome == outcome, "sequence outcome differs")?;
    ensure(&re_trace == trace, "sequence trace differs")?;
    let expected = match outcome {
        SequenceOutcome::AllCoprimeAndFinalZero => Status::Prime,
        _ => Status::Composite,
    };
    ensure(status == expected, "status does not follow from the sequence")
}

fn replay_order_certificate(
    c: &FormCandidate,
    algorithm: Algorithm,
    status: Status,
    params: &CurveParams,
    base_scalar: &BigUint,
    base_infinity: bool,
    checks: &[ScalarCheck],
) -> Result<(), ReplayError> {
    let curve = check_params(c.p(), params)?;
    let run = |s: &BigUint, pt: &Point| -> Result<Point, ReplayError> {
        curve.scalar_mul(s, pt).map_err(|FactorFound(d)| ReplayError(format!("unexpected factor {d}")))
    };
    let base = run(base_scalar, &params.point())?;
    ensure(base.is_infinity() == base_infinity, "base multiple differs")?;
    for check in checks {
        let got = run(&check.scalar, &base)?;
        ensure(got.is_infinity() == check.infinity, "scalar check differs")?;
    }

    let is_prime = |q: &BigUint| check_prime(q).is_prime_like();
    let expected = match algorithm {
        Algorithm::SmallN => {
            ensure(gate_small_n(c), "small-n gate does not hold")?;
            ensure(base_scalar == c.n() && base_infinity && checks.is_empty(), "malformed n·Q' check")?;
            Status::Composite
        }
        Algorithm::LargePrimeN => {
            ensure(gate_large_n(c) && is_prime(c.n()), "large-prime preconditions fail")?;
            ensure(base_scalar == &c.two_pow_k() && !base_infinity, "base must be a finite 2^k·Q")?;
            match checks {
                [last] if &last.scalar == c.n() => status_of(last.infinity),
                _ => return fail("expected exactly the check q·R"),
            }
        }
        Algorithm::TwoPrimeN => {
            ensure(gate_large_n(c), "large-n gate does not hold")?;
            ensure(base_scalar == &c.two_pow_k() && !base_infinity, "base must be a finite 2^k·Q")?;
            match checks {
                [a, b, last]
                    if &(&a.scalar * &b.scalar) == c.n()
                        && &last.scalar == c.n()
                        && is_prime(&a.scalar)
                        && is_prime(&b.scalar) =>
                {
                    ensure(!a.infinity && !b.infinity, "q_i·R vanished")?;
                    status_of(last.infinity)
                }
                _ => return fail("expected checks q1·R, q2·R, q1q2·R"),
            }
        }
        _ => return fail("order certificate from an unexpected algorithm"),
    };
    ensure(status == expected, "status does not follow from the scalar checks")
}

fn status_of(infinity: bool) -> Status {
    if infinity {
        Status::Prime
    } else {
        Status::Composite
    }
}
