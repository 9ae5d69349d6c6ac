//! Affine arithmetic on `y² = x³ − m·x` over `Z/NZ`.
//!
//! `N` need not be prime. Every division goes through
//! [`mod_inverse`](crate::numtheory::mod_inverse): a denominator sharing a
//! proper factor with `N` aborts the operation with that factor, and a
//! denominator divisible by `N` itself is read as reaching the point at
//! infinity. Over a prime modulus only the second case can happen and the
//! operations reduce to the usual group law.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{mod_inverse, reduce_special, FormCandidate, InverseOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    modulus: BigUint,
    m: BigUint,
    form: Option<FormCandidate>,
}

impl Curve {
    pub fn new(modulus: BigUint, m: BigUint) -> Result<Self> {
        if modulus.is_even() || modulus < BigUint::from(3u32) {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        let m = m % &modulus;
        if m.is_zero() {
            return Err(Error::DegenerateCurve);
        }
        Ok(Curve { modulus, m, form: None })
    }

    /// Curve over `Z/pZ` for `p = 2^k·n − 1`; reductions use the
    /// [`reduce_special`] fold instead of long division.
    pub fn over_form(form: &FormCandidate, m: BigUint) -> Result<Self> {
        let mut curve = Curve::new(form.p().clone(), m)?;
        curve.form = Some(form.clone());
        Ok(curve)
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn reduce(&self, t: &BigUint) -> BigUint {
        match &self.form {
            Some(form) => reduce_special(t, form),
            None => t % &self.modulus,
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        self.reduce(&(a * b))
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.modulus - (b - a)
        }
    }

    fn add_mod(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }

    /// `x³ − m·x mod N`.
    pub fn cubic(&self, x: &BigUint) -> BigUint {
        let x2 = self.mul(x, x);
        let t = self.sub(&x2, &self.m);
        self.mul(&t, x)
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                if x >= &self.modulus || y >= &self.modulus {
                    return false;
                }
                self.mul(y, y) == self.cubic(x)
            }
        }
    }

    /// `2P`. The abscissa follows `((x²+m)/(2y))²`; the ordinate uses the
    /// tangent slope `(3x²−m)/(2y)`.
    pub fn double(&self, p: &Point) -> CurveOpOutcome {
        let (x, y) = match p {
            Point::Infinity => return Ok(Point::Infinity),
            Point::Affine { x, y } => (x, y),
        };
        if y.is_zero() {
            return Ok(Point::Infinity);
        }
        let inv = match mod_inverse(&self.add_mod(y, y), &self.modulus) {
            InverseOutcome::Inverse(inv) => inv,
            InverseOutcome::Divisor(d) => return Err(FactorFound(d)),
            InverseOutcome::FullModulus => return Ok(Point::Infinity),
        };
        let x2 = self.mul(x, x);
        let half = self.mul(&self.add_mod(&x2, &self.m), &inv);
        let nx = self.mul(&half, &half);
        let slope_num = self.sub(&self.reduce(&(&x2 * 3u32)), &self.m);
        let slope = self.mul(&slope_num, &inv);
        let ny = self.sub(&self.mul(&slope, &self.sub(x, &nx)), y);
        Ok(Point::Affine { x: nx, y: ny })
    }

    /// `P + Q` by the chord law.
    pub fn add(&self, p: &Point, q: &Point) -> CurveOpOutcome {
        let (xp, yp, xq, yq) = match (p, q) {
            (Point::Infinity, _) => return Ok(q.clone()),
            (_, Point::Infinity) => return Ok(p.clone()),
            (Point::Affine { x: xp, y: yp }, Point::Affine { x: xq, y: yq }) => (xp, yp, xq, yq),
        };
        if xp == xq {
            if self.add_mod(yp, yq).is_zero() {
                return Ok(Point::Infinity);
            }
            if yp == yq {
                return self.double(p);
            }
            // y_P² ≡ y_Q² with y_P ≢ ±y_Q: the difference splits N.
            let d = self.sub(yp, yq).gcd(&self.modulus);
            return Err(FactorFound(d));
        }
        let inv = match mod_inverse(&self.sub(xq, xp), &self.modulus) {
            InverseOutcome::Inverse(inv) => inv,
            InverseOutcome::Divisor(d) => return Err(FactorFound(d)),
            InverseOutcome::FullModulus => unreachable!("x_P and x_Q differ modulo N"),
        };
        let slope = self.mul(&self.sub(yq, yp), &inv);
        let nx = self.sub(&self.sub(&self.mul(&slope, &slope), xp), xq);
        let ny = self.sub(&self.mul(&slope, &self.sub(xp, &nx)), yp);
        Ok(Point::Affine { x: nx, y: ny })
    }

    pub fn negate(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: self.neg(y) },
        }
    }

    /// `s·P` by left-to-right double-and-add, stopping at the first factor.
    pub fn scalar_mul(&self, s: &BigUint, p: &Point) -> CurveOpOutcome {
        let bits = s.bits();
        let mut acc = Point::Infinity;
        for i in (0..bits).rev() {
            acc = self.double(&acc)?;
            if s.bit(i) {
                acc = self.add(&acc, p)?;
            }
        }
        Ok(acc)
    }

    /// Abscissa of `2P` from the abscissa of `P` alone:
    /// `(x⁴ + 2m·x² + m²) / (4(x³ − m·x))`.
    pub fn double_x_only(&self, x: &BigUint) -> XDouble {
        let denom = self.reduce(&(self.cubic(x) << 2usize));
        let inv = match mod_inverse(&denom, &self.modulus) {
            InverseOutcome::Inverse(inv) => inv,
            InverseOutcome::Divisor(d) => return XDouble::Factor(d),
            InverseOutcome::FullModulus => return XDouble::Infinity,
        };
        let t = self.add_mod(&self.mul(x, x), &self.m);
        XDouble::X(self.mul(&self.mul(&t, &t), &inv))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Point {
    Infinity,
    Affine {
        #[serde(with = "crate::decimal")]
        x: BigUint,
        #[serde(with = "crate::decimal")]
        y: BigUint,
    },
}

impl Point {
    pub fn affine(x: impl Into<BigUint>, y: impl Into<BigUint>) -> Self {
        Point::Affine { x: x.into(), y: y.into() }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&BigUint> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }
}

/// A proper divisor `1 < d < N` found in a denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorFound(pub BigUint);

/// Either the resulting point or a factor of the modulus.
pub type CurveOpOutcome = std::result::Result<Point, FactorFound>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XDouble {
    X(BigUint),
    /// The denominator vanished modulo `N`: `P` is 2-torsion.
    Infinity,
    Factor(BigUint),
}
