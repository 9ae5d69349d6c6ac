use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CurveParams, ParamSearchConfig, ScanOrder};
use crate::error::{Error, Result};
use crate::numtheory::{jacobi_unsigned, mod_inverse, InverseOutcome};

/// Outcome of one curve/point construction attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Found(CurveParams),
    /// A proper divisor of `p` exposed by a Jacobi symbol or an inversion.
    Factor(BigUint),
    /// The scan budget ran out.
    Exhausted,
}

/// Finds `x` with `(x/p) = −1`, then `y` with `((x³−y²)/p) = +1`, and sets
/// `m = (x³ − y²)/x`. Successive calls keep `x` and move on to the next `y`.
pub(crate) struct ParamSearch<'a> {
    p: &'a BigUint,
    rng: Option<ChaCha8Rng>,
    next_x: BigUint,
    x: Option<BigUint>,
    next_y: BigUint,
    budget: u64,
}

impl<'a> ParamSearch<'a> {
    pub(crate) fn new(p: &'a BigUint, cfg: &ParamSearchConfig) -> Result<Self> {
        if p.is_even() || p < &BigUint::from(7u32) {
            return Err(Error::InvalidModulus(p.to_string()));
        }
        let rng = match cfg.scan {
            ScanOrder::Ascending => None,
            ScanOrder::Seeded { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Ok(ParamSearch {
            p,
            rng,
            next_x: BigUint::from(2u32),
            x: None,
            next_y: BigUint::one(),
            budget: cfg.scan_limit,
        })
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    fn draw_x(&mut self) -> Option<BigUint> {
        match &mut self.rng {
            Some(rng) => Some(rng.gen_biguint_range(&BigUint::from(2u32), self.p)),
            None => {
                if &self.next_x >= self.p {
                    return None;
                }
                let x = self.next_x.clone();
                self.next_x += 1u32;
                Some(x)
            }
        }
    }

    fn draw_y(&mut self) -> Option<BigUint> {
        match &mut self.rng {
            Some(rng) => Some(rng.gen_biguint_range(&BigUint::one(), self.p)),
            None => {
                if &self.next_y >= self.p {
                    return None;
                }
                let y = self.next_y.clone();
                self.next_y += 1u32;
                Some(y)
            }
        }
    }

    pub(crate) fn next(&mut self) -> Construction {
        let p = self.p;
        loop {
            let x = match self.x.clone() {
                Some(x) => x,
                None => loop {
                    if !self.spend() {
                        return Construction::Exhausted;
                    }
                    let Some(x) = self.draw_x() else { return Construction::Exhausted };
                    match jacobi_unsigned(&x, p).expect("p is odd and >= 7") {
                        -1 => {
                            self.x = Some(x.clone());
                            self.next_y = BigUint::one();
                            break x;
                        }
                        0 => return Construction::Factor(x.gcd(p)),
                        _ => {}
                    }
                },
            };
            let x3 = x.pow(3u32) % p;
            loop {
                if !self.spend() {
                    return Construction::Exhausted;
                }
                let Some(y) = self.draw_y() else {
                    // every y tried for this x
                    self.x = None;
                    break;
                };
                let y2 = &y * &y % p;
                let t = if x3 >= y2 { &x3 - &y2 } else { p - (&y2 - &x3) };
                if t.is_zero() {
                    continue;
                }
                match jacobi_unsigned(&t, p).expect("p is odd and >= 7") {
                    1 => {}
                    0 => return Construction::Factor(t.gcd(p)),
                    _ => continue,
                }
                let m = match mod_inverse(&x, p) {
                    InverseOutcome::Inverse(inv) => t * inv % p,
                    InverseOutcome::Divisor(d) => return Construction::Factor(d),
                    InverseOutcome::FullModulus => unreachable!("x is a unit"),
                };
                return Construction::Found(CurveParams { x, y, m });
            }
        }
    }
}

/// First construction for `p` under `cfg`.
pub fn construct_curve_point(p: &BigUint, cfg: &ParamSearchConfig) -> Result<Construction> {
    Ok(ParamSearch::new(p, cfg)?.next())
}
