//! Integer and modular-arithmetic substrate.
//!
//! Everything here is a pure function of its arguments. Residues are carried
//! as [`BigUint`] values reduced into `[0, N)`; signed inputs (Jacobi symbols of
//! negative numbers) go through [`BigInt`].

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest value [`trial_division`] accepts.
pub const ORACLE_BOUND: u64 = 1_000_000_000_000;

/// Default bound below which a candidate that fails every gate is settled by
/// trial division instead of being reported as not applicable.
pub const DEFAULT_FALLBACK_BOUND: u64 = 10_000;

/// First twelve primes; deterministic Miller–Rabin below 3.3·10^24.
pub const DEFAULT_MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// An integer `p = 2^k·n − 1` with `k ≥ 2` and `n` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormCandidate {
    k: u32,
    n: BigUint,
    p: BigUint,
    n_factors: Option<Vec<BigUint>>,
}

impl FormCandidate {
    pub fn new(k: u32, n: impl Into<BigUint>) -> Result<Self> {
        let n = n.into();
        if k < 2 {
            return Err(Error::InvalidCandidate(format!("k must be at least 2, got {k}")));
        }
        if n.is_zero() || n.is_even() {
            return Err(Error::InvalidCandidate(format!("n must be odd and positive, got {n}")));
        }
        let p = (&n << k as usize) - 1u32;
        Ok(FormCandidate { k, n, p, n_factors: None })
    }

    /// Attaches a factorization of `n` (as a product of the given factors).
    ///
    /// The product must equal `n`; primality of the factors is checked by the
    /// tests that consume them.
    pub fn with_factors(mut self, mut factors: Vec<BigUint>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|f| f <= &BigUint::one()) {
            return Err(Error::InvalidCandidate("factors of n must all exceed 1".into()));
        }
        let product: BigUint = factors.iter().product();
        if product != self.n {
            return Err(Error::InvalidCandidate(format!(
                "factor product {product} does not equal n = {}",
                self.n
            )));
        }
        factors.sort();
        self.n_factors = Some(factors);
        Ok(self)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn n_factors(&self) -> Option<&[BigUint]> {
        self.n_factors.as_deref()
    }

    /// `2^k`.
    pub fn two_pow_k(&self) -> BigUint {
        BigUint::one() << self.k as usize
    }
}

/// Result of inverting `a` modulo `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InverseOutcome {
    Inverse(BigUint),
    /// `1 < d < N` with `d = gcd(a, N)`.
    Divisor(BigUint),
    /// `a ≡ 0 (mod N)`.
    FullModulus,
}

fn check_odd_modulus(n: &BigUint) -> Result<()> {
    if n.is_even() || n < &BigUint::from(3u32) {
        return Err(Error::InvalidModulus(n.to_string()));
    }
    Ok(())
}

/// Jacobi symbol `(a / N)` for odd `N ≥ 3`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    check_odd_modulus(n)?;
    let modulus = BigInt::from_biguint(Sign::Plus, n.clone());
    let a = a.mod_floor(&modulus).to_biguint().expect("mod_floor is non-negative");
    Ok(jacobi_reduced(a, n.clone()))
}

/// Jacobi symbol for a non-negative `a`.
pub fn jacobi_unsigned(a: &BigUint, n: &BigUint) -> Result<i8> {
    check_odd_modulus(n)?;
    Ok(jacobi_reduced(a % n, n.clone()))
}

fn jacobi_reduced(mut a: BigUint, mut n: BigUint) -> i8 {
    let mut sign = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().expect("a is nonzero");
        a >>= tz;
        let n_mod_8 = (&n & BigUint::from(7u32)).to_u32().unwrap();
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            sign = -sign;
        }
        // reciprocity
        if a.bit(1) && n.bit(1) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Inverse of `a` modulo `N`, or the divisor exposed by the attempt.
pub fn mod_inverse(a: &BigUint, n: &BigUint) -> InverseOutcome {
    debug_assert!(n >= &BigUint::from(2u32));
    let a = a % n;
    if a.is_zero() {
        return InverseOutcome::FullModulus;
    }
    let g = a.gcd(n);
    if !g.is_one() {
        return InverseOutcome::Divisor(g);
    }
    InverseOutcome::Inverse(a.modinv(n).expect("gcd is one"))
}

/// `floor(sqrt(t))`.
pub fn isqrt(t: &BigUint) -> BigUint {
    t.sqrt()
}

/// `floor(t^(1/4))`.
pub fn iroot4(t: &BigUint) -> BigUint {
    t.nth_root(4)
}

/// Whether some `λ > 1` satisfies `n ≤ √p/λ` and `λ√p > (p^{1/4}+1)²`.
///
/// That is equivalent to `n·(p^{1/4}+1)² < p`. `p ≡ 3 (mod 4)` is never a
/// fourth power, so `p^{1/4} + 1 < iroot4(p) + 2` and the integer test
/// `n·(iroot4(p)+2)² ≤ p` implies the real one.
pub fn gate_small_n(c: &FormCandidate) -> bool {
    let r = iroot4(c.p()) + 2u32;
    c.n() * &r * &r <= *c.p()
}

/// Same feasibility test with `2^k` in place of `n`.
pub fn gate_large_n(c: &FormCandidate) -> bool {
    let r = iroot4(c.p()) + 2u32;
    ((&r * &r) << c.k() as usize) <= *c.p()
}

/// `t mod p` for `p = 2^k·n − 1`, using `2^k·n ≡ 1`.
pub fn reduce_special(t: &BigUint, c: &FormCandidate) -> BigUint {
    let k = c.k() as usize;
    let p = c.p();
    if t < p {
        return t.clone();
    }
    let mask = (BigUint::one() << k) - 1u32;
    let mut t = t.clone();
    // t = a·2^k·n + b with b < 2^k·n folds to a + b.
    while &t > p {
        let hi = &t >> k;
        let lo = &t & &mask;
        let (a, r) = if c.n().is_one() { (hi, BigUint::zero()) } else { hi.div_rem(c.n()) };
        t = a + (r << k) + lo;
    }
    if &t == p {
        t.set_zero();
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    Prime,
    /// Least prime factor.
    Composite(u64),
}

/// Exact primality by trial division, for `2 ≤ N ≤ ORACLE_BOUND`.
pub fn trial_division(n: u64) -> Result<TrialOutcome> {
    if n < 2 {
        return Err(Error::BelowRange(n.to_string()));
    }
    if n > ORACLE_BOUND {
        return Err(Error::AboveOracleBound { value: n.to_string(), bound: ORACLE_BOUND });
    }
    for d in [2u64, 3] {
        if n.is_multiple_of(d) {
            return Ok(if n == d { TrialOutcome::Prime } else { TrialOutcome::Composite(d) });
        }
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return Ok(TrialOutcome::Composite(d));
        }
        if n.is_multiple_of(d + 2) {
            return Ok(TrialOutcome::Composite(d + 2));
        }
        d += 6;
    }
    Ok(TrialOutcome::Prime)
}

/// [`trial_division`] for a big integer that must fit under the oracle bound.
pub fn trial_division_big(n: &BigUint) -> Result<TrialOutcome> {
    match n.to_u64() {
        Some(v) => trial_division(v),
        None => Err(Error::AboveOracleBound { value: n.to_string(), bound: ORACLE_BOUND }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrOutcome {
    ProbablePrime,
    Composite,
}

/// Strong probable-prime test of odd `N ≥ 3` to each of `bases`.
pub fn miller_rabin(n: &BigUint, bases: &[u64]) -> Result<MrOutcome> {
    check_odd_modulus(n)?;
    let n_minus_1 = n - 1u32;
    let n_minus_2 = n - 2u32;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is nonzero");
    let d = &n_minus_1 >> s;
    'bases: for &b in bases {
        let base = BigUint::from(b);
        if b < 2 || base > n_minus_2 {
            return Err(Error::InvalidBase { base: b.to_string(), modulus: n.to_string() });
        }
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return Ok(MrOutcome::Composite);
    }
    Ok(MrOutcome::ProbablePrime)
}

/// Miller–Rabin with [`DEFAULT_MR_BASES`], dropping bases outside `[2, N−2]`.
///
/// Accepts any `N`; values below 5 and even values are decided directly.
pub fn miller_rabin_default(n: &BigUint) -> MrOutcome {
    if n < &BigUint::from(2u32) {
        return MrOutcome::Composite;
    }
    if n < &BigUint::from(4u32) {
        return MrOutcome::ProbablePrime;
    }
    if n.is_even() {
        return MrOutcome::Composite;
    }
    let limit = n - 2u32;
    let bases: Vec<u64> = DEFAULT_MR_BASES
        .iter()
        .copied()
        .filter(|&b| BigUint::from(b) <= limit)
        .collect();
    miller_rabin(n, &bases).expect("bases filtered into range")
}

/// How a primality claim about an auxiliary number (such as `q | n`) was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeCheck {
    /// Exact, by trial division.
    Prime,
    /// Above the trial-division bound; no Miller–Rabin base is a witness.
    ProbablePrime,
    Composite,
}

impl PrimeCheck {
    pub fn is_prime_like(self) -> bool {
        !matches!(self, PrimeCheck::Composite)
    }
}

/// Trial division up to [`ORACLE_BOUND`], Miller–Rabin above it.
pub fn check_prime(n: &BigUint) -> PrimeCheck {
    if n < &BigUint::from(2u32) {
        return PrimeCheck::Composite;
    }
    match trial_division_big(n) {
        Ok(TrialOutcome::Prime) => PrimeCheck::Prime,
        Ok(TrialOutcome::Composite(_)) => PrimeCheck::Composite,
        Err(_) => match miller_rabin_default(n) {
            MrOutcome::ProbablePrime => PrimeCheck::ProbablePrime,
            MrOutcome::Composite => PrimeCheck::Composite,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classical {
    Prime,
    Composite,
}

/// Classical Lucas–Lehmer test of `M_k = 2^k − 1`: `S_0 = 4`, `S_{i+1} = S_i² − 2`,
/// prime iff `S_{k−2} ≡ 0`.
pub fn lucas_lehmer(k: u32) -> Result<Classical> {
    if k < 3 {
        return Err(Error::BelowRange(format!("Lucas-Lehmer exponent {k}")));
    }
    let form = FormCandidate::new(k, 1u32)?;
    let m = form.p().clone();
    let mut s = BigUint::from(4u32);
    for _ in 0..k - 2 {
        s = reduce_special(&(&s * &s + &m - 2u32), &form);
    }
    Ok(if s.is_zero() { Classical::Prime } else { Classical::Composite })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn jac(a: i64, n: u64) -> i8 {
        jacobi(&BigInt::from(a), &big(n)).unwrap()
    }

    fn small_primes(limit: u64) -> Vec<u64> {
        (3..limit).filter(|&v| trial_division(v) == Ok(TrialOutcome::Prime)).collect()
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jac(3, 31), -1);
        assert_eq!(jac(2, 31), 1);
        assert_eq!(jac(1, 9), 1);
        assert_eq!(jac(6, 15), 0);
        assert_eq!(jac(-1, 31), -1);
        assert_eq!(jac(-19, 59), -1);
        assert_eq!(jac(1001, 9907), -1);
    }

    #[test]
    fn jacobi_rejects_even_or_small_modulus() {
        assert!(jacobi(&BigInt::from(3), &big(10)).is_err());
        assert!(jacobi(&BigInt::from(3), &big(1)).is_err());
        assert!(jacobi_unsigned(&big(3), &big(0)).is_err());
    }

    #[test]
    fn jacobi_matches_euler_for_primes_below_10000() {
        for p in small_primes(10_000) {
            let e = (p - 1) / 2;
            let pb = big(p);
            for a in 1..p {
                let euler = big(a).modpow(&big(e), &pb);
                let expect = if euler.is_one() { 1 } else { -1 };
                assert_eq!(jacobi_reduced(big(a), pb.clone()), expect, "({a}/{p})");
            }
        }
    }

    proptest! {
        #[test]
        fn jacobi_is_multiplicative(a in 0u64..1_000_000, b in 0u64..1_000_000, n in 1u64..500_000) {
            let n = 2 * n + 1;
            let ja = jacobi_unsigned(&big(a), &big(n)).unwrap();
            let jb = jacobi_unsigned(&big(b), &big(n)).unwrap();
            let jab = jacobi_unsigned(&(big(a) * big(b)), &big(n)).unwrap();
            prop_assert_eq!(jab, ja * jb);
        }

        #[test]
        fn reduce_special_matches_long_division(k in 2u32..80, n in 0u64..1000, t in proptest::collection::vec(any::<u32>(), 0..12)) {
            let c = FormCandidate::new(k, 2 * n + 1).unwrap();
            let t = BigUint::new(t);
            prop_assert_eq!(reduce_special(&t, &c), &t % c.p());
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&big(8), &big(31)), InverseOutcome::Inverse(big(4)));
        assert_eq!(mod_inverse(&big(6), &big(15)), InverseOutcome::Divisor(big(3)));
        assert_eq!(mod_inverse(&big(15), &big(15)), InverseOutcome::FullModulus);
        assert_eq!(mod_inverse(&big(46), &big(15)), InverseOutcome::Inverse(big(1)));
    }

    #[test]
    fn mod_inverse_exhaustive_below_500() {
        for n in 2u64..500 {
            for a in 0..n {
                match mod_inverse(&big(a), &big(n)) {
                    InverseOutcome::Inverse(inv) => {
                        assert!(inv < big(n));
                        assert_eq!((big(a) * inv) % big(n), big(1 % n));
                    }
                    InverseOutcome::Divisor(d) => {
                        assert!(d > big(1) && d < big(n));
                        assert!((big(n) % &d).is_zero() && (big(a) % &d).is_zero());
                    }
                    InverseOutcome::FullModulus => assert_eq!(a, 0),
                }
            }
        }
    }

    #[test]
    fn integer_roots() {
        assert_eq!(isqrt(&big(24)), big(4));
        assert_eq!(iroot4(&big(383)), big(4));
        assert_eq!(iroot4(&big(16)), big(2));
        for t in 0u64..5000 {
            let r = isqrt(&big(t));
            assert!(&r * &r <= big(t) && (&r + 1u32).pow(2) > big(t));
            let r = iroot4(&big(t));
            assert!(r.pow(4) <= big(t) && (&r + 1u32).pow(4) > big(t));
        }
    }

    #[test]
    fn gate_examples() {
        let c = |k, n| FormCandidate::new(k, n as u64).unwrap();
        assert!(gate_small_n(&c(7, 3)));
        assert!(!gate_small_n(&c(3, 5)));
        assert!(!gate_small_n(&c(2, 1)));
        assert!(gate_large_n(&c(2, 2633)));
        assert_eq!(iroot4(c(2, 2633).p()), big(10));
        assert!(!gate_large_n(&c(2, 5)));
        assert!(gate_large_n(&c(2, 2503)));
    }

    #[test]
    fn gates_are_conservative() {
        for k in 2u32..12 {
            for n in (1u64..400).step_by(2) {
                let c = FormCandidate::new(k, n).unwrap();
                let p = c.p().to_u64().unwrap();
                let r = iroot4(c.p()).to_u64().unwrap();
                // p ≡ 3 (mod 4) is never a fourth power
                assert_eq!(p % 4, 3);
                assert_ne!(r.pow(4), p);
                if gate_small_n(&c) {
                    assert!(n * (r + 2).pow(2) <= p);
                    let real = n as f64 * ((p as f64).powf(0.25) + 1.0).powi(2);
                    assert!(real < p as f64);
                }
                if gate_large_n(&c) {
                    assert!((1u64 << k) * (r + 2).pow(2) <= p);
                }
            }
        }
    }

    #[test]
    fn reduce_special_examples() {
        let c = FormCandidate::new(5, 1u32).unwrap();
        assert_eq!(reduce_special(&big(978), &c), big(17));
        assert_eq!(reduce_special(&big(31), &c), big(0));
        assert_eq!(reduce_special(&big(32), &c), big(1));
        let c = FormCandidate::new(7, 3u32).unwrap();
        assert_eq!(reduce_special(c.p(), &c), big(0));
        assert_eq!(reduce_special(&(c.p() + 1u32), &c), big(1));
    }

    #[test]
    fn trial_division_examples() {
        assert_eq!(trial_division(10531), Ok(TrialOutcome::Prime));
        assert_eq!(trial_division(10011), Ok(TrialOutcome::Composite(3)));
        assert_eq!(trial_division(4), Ok(TrialOutcome::Composite(2)));
        assert_eq!(trial_division(2), Ok(TrialOutcome::Prime));
        assert_eq!(trial_division(1791), Ok(TrialOutcome::Composite(3)));
        assert_eq!(trial_division(999_983 * 999_979), Ok(TrialOutcome::Composite(999_979)));
        assert!(trial_division(1).is_err());
        assert!(trial_division(ORACLE_BOUND + 1).is_err());
    }

    #[test]
    fn miller_rabin_examples() {
        assert_eq!(miller_rabin(&big(31), &[2, 3]), Ok(MrOutcome::ProbablePrime));
        assert_eq!(miller_rabin(&big(2047), &[2]), Ok(MrOutcome::ProbablePrime));
        assert_eq!(miller_rabin(&big(561), &[2]), Ok(MrOutcome::Composite));
        assert!(miller_rabin(&big(31), &[30]).is_err());
        assert!(miller_rabin(&big(31), &[1]).is_err());
    }

    #[test]
    fn miller_rabin_default_agrees_with_trial_division() {
        for n in 2u64..20_000 {
            let td = trial_division(n).unwrap() == TrialOutcome::Prime;
            let mr = miller_rabin_default(&big(n)) == MrOutcome::ProbablePrime;
            assert_eq!(td, mr, "n = {n}");
        }
    }

    #[test]
    fn lucas_lehmer_examples() {
        assert_eq!(lucas_lehmer(3), Ok(Classical::Prime));
        assert_eq!(lucas_lehmer(5), Ok(Classical::Prime));
        assert_eq!(lucas_lehmer(11), Ok(Classical::Composite));
        assert!(lucas_lehmer(2).is_err());
    }

    #[test]
    fn lucas_lehmer_agrees_with_trial_division() {
        for k in 3u32..=30 {
            let td = trial_division((1u64 << k) - 1).unwrap() == TrialOutcome::Prime;
            assert_eq!(lucas_lehmer(k).unwrap() == Classical::Prime, td, "k = {k}");
        }
    }

    #[test]
    fn candidate_validation() {
        assert!(FormCandidate::new(1, 3u32).is_err());
        assert!(FormCandidate::new(3, 4u32).is_err());
        assert!(FormCandidate::new(3, 0u32).is_err());
        let c = FormCandidate::new(2, 2633u32).unwrap();
        assert_eq!(c.p(), &big(10531));
        assert!(c.clone().with_factors(vec![big(2633)]).is_ok());
        assert!(c.clone().with_factors(vec![big(7)]).is_err());
        assert!(c.with_factors(vec![big(1), big(2633)]).is_err());
    }
}
