//! Brute-force group computations on `y² = x³ − m·x` over small prime fields.
//!
//! Arithmetic here is plain `u64` with Fermat inversion and shares no code
//! with [`ecring`](crate::ecring), so the two can be checked against each
//! other. Sizes are capped at [`ENUMERATION_BOUND`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{trial_division, TrialOutcome};

pub const ENUMERATION_BOUND: u64 = 5000;
/// Primes below this get every `m` in `1..p`; larger primes get a sample.
pub const FULL_SWEEP_BELOW: u64 = 200;
pub const SAMPLED_M_PER_PRIME: usize = 5;
const SAMPLE_SEED: u64 = 0x5eed_2c0f_fee5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmallPoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl SmallPoint {
    pub fn to_point(self) -> crate::ecring::Point {
        match self {
            SmallPoint::Infinity => crate::ecring::Point::Infinity,
            SmallPoint::Affine { x, y } => crate::ecring::Point::affine(x, y),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SmallCurve {
    p: u64,
    m: u64,
}

impl SmallCurve {
    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        (x * x % p * x % p + p - self.m * x % p) % p
    }

    fn add(&self, a: SmallPoint, b: SmallPoint) -> SmallPoint {
        let p = self.p;
        let (x1, y1, x2, y2) = match (a, b) {
            (SmallPoint::Infinity, q) | (q, SmallPoint::Infinity) => return q,
            (SmallPoint::Affine { x: x1, y: y1 }, SmallPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return SmallPoint::Infinity;
            }
            (3 * x1 % p * x1 % p + p - self.m) % p * self.inv(2 * y1 % p) % p
        } else {
            (y2 + p - y1) % p * self.inv((x2 + p - x1) % p) % p
        };
        let x3 = (slope * slope % p + 2 * p - x1 - x2) % p;
        let y3 = (slope * ((x1 + p - x3) % p) % p + p - y1) % p;
        SmallPoint::Affine { x: x3, y: y3 }
    }

    fn mul(&self, mut s: u64, pt: SmallPoint) -> SmallPoint {
        let mut acc = SmallPoint::Infinity;
        let mut base = pt;
        while s > 0 {
            if s & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            s >>= 1;
        }
        acc
    }

    /// Order of `pt` given that it divides `group_order`.
    fn order_dividing(&self, pt: SmallPoint, group_order: u64) -> u64 {
        let mut ord = group_order;
        for l in prime_factors(group_order) {
            while ord.is_multiple_of(l) && self.mul(ord / l, pt) == SmallPoint::Infinity {
                ord /= l;
            }
        }
        ord
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Legendre symbol by Euler's criterion.
fn legendre(a: u64, p: u64) -> i8 {
    let c = SmallCurve { p, m: 1 };
    match c.pow(a, (p - 1) / 2) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn check_field(p: u64, m: u64) -> Result<SmallCurve> {
    if p > ENUMERATION_BOUND {
        return Err(Error::AboveOracleBound { value: p.to_string(), bound: ENUMERATION_BOUND });
    }
    if p % 4 != 3 {
        return Err(Error::NotThreeModFour(p));
    }
    if trial_division(p)? != TrialOutcome::Prime {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    if m.is_multiple_of(p) {
        return Err(Error::DegenerateCurve);
    }
    Ok(SmallCurve { p, m: m % p })
}

/// All points of `E(F_p)`, infinity first, then by `(x, y)`.
pub fn enumerate_points(p: u64, m: u64) -> Result<Vec<SmallPoint>> {
    let curve = check_field(p, m)?;
    Ok(enumerate(&curve))
}

fn enumerate(curve: &SmallCurve) -> Vec<SmallPoint> {
    let p = curve.p;
    let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
    for y in 0..p {
        roots[(y * y % p) as usize].push(y);
    }
    let mut points = vec![SmallPoint::Infinity];
    for x in 0..p {
        for &y in &roots[curve.rhs(x) as usize] {
            points.push(SmallPoint::Affine { x, y });
        }
    }
    points
}

/// Least `s ≥ 1` with `s·P = ∞`, by repeated addition.
pub fn point_order(p: u64, m: u64, pt: SmallPoint) -> Result<u64> {
    let curve = check_field(p, m)?;
    if let SmallPoint::Affine { x, y } = pt {
        if x >= p || y >= p || y * y % p != curve.rhs(x) {
            return Err(Error::InvalidConfig(format!("({x}, {y}) is not on the curve")));
        }
    }
    let mut acc = pt;
    let mut s = 1;
    while acc != SmallPoint::Infinity {
        acc = curve.add(acc, pt);
        s += 1;
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Cyclic,
    ProductOfTwo,
    /// Neither of the two expected shapes; always a violation.
    Unexpected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStructure {
    pub kind: StructureKind,
    /// Invariant factors: `[p+1]` or `[2, (p+1)/2]`; for `Unexpected`,
    /// `[exponent, total]`.
    pub orders: Vec<u64>,
}

impl GroupStructure {
    pub fn total(&self) -> u64 {
        match self.kind {
            StructureKind::Unexpected => self.orders[1],
            _ => self.orders.iter().product(),
        }
    }
}

pub fn group_structure(p: u64, m: u64) -> Result<GroupStructure> {
    let curve = check_field(p, m)?;
    Ok(structure_of(&curve, &enumerate(&curve)))
}

fn structure_of(curve: &SmallCurve, points: &[SmallPoint]) -> GroupStructure {
    let total = points.len() as u64;
    let two_torsion = points
        .iter()
        .filter(|pt| matches!(pt, SmallPoint::Affine { y: 0, .. }))
        .count();
    let mut exponent = 1;
    for &pt in points {
        let ord = curve.order_dividing(pt, total);
        exponent = exponent.max(ord);
        if ord == total {
            return GroupStructure { kind: StructureKind::Cyclic, orders: vec![total] };
        }
        if two_torsion == 3 && total.is_multiple_of(2) && ord == total / 2 {
            return GroupStructure { kind: StructureKind::ProductOfTwo, orders: vec![2, total / 2] };
        }
    }
    GroupStructure { kind: StructureKind::Unexpected, orders: vec![exponent, total] }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub p: u64,
    pub m: u64,
    /// 1: point count, 2: group structure, 3: order of a non-residue point.
    pub theorem: u8,
    pub point: Option<SmallPoint>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub p_max: u64,
    pub primes_checked: u64,
    pub curves_checked: u64,
    /// Points with non-residue abscissa whose order was checked.
    pub points_checked: u64,
    pub violations: Vec<Violation>,
}

impl TheoremReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The `m` values swept at prime `p`.
pub fn sweep_values(p: u64) -> Vec<u64> {
    if p < FULL_SWEEP_BELOW {
        return (1..p).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ p);
    let all: Vec<u64> = (1..p).collect();
    let mut picked: Vec<u64> = all.choose_multiple(&mut rng, SAMPLED_M_PER_PRIME).copied().collect();
    // keep both residue classes represented
    let first = legendre(picked[0], p);
    if picked.iter().all(|&m| legendre(m, p) == first) {
        let other = all
            .iter()
            .copied()
            .find(|&m| legendre(m, p) == -first)
            .expect("both classes exist for odd p");
        *picked.last_mut().unwrap() = other;
    }
    picked.sort_unstable();
    picked
}

/// Checks point count, group structure, and the non-residue order claim on
/// every prime `p ≡ 3 (mod 4)` up to `p_max`.
pub fn verify_theorems(p_max: u64) -> Result<TheoremReport> {
    if p_max > ENUMERATION_BOUND {
        return Err(Error::AboveOracleBound { value: p_max.to_string(), bound: ENUMERATION_BOUND });
    }
    let primes: Vec<u64> = (3..=p_max)
        .filter(|&p| p % 4 == 3 && trial_division(p) == Ok(TrialOutcome::Prime))
        .collect();
    let per_prime: Vec<(u64, u64, Vec<Violation>)> = primes.par_iter().map(|&p| verify_prime(p)).collect();

    let mut report = TheoremReport {
        p_max,
        primes_checked: primes.len() as u64,
        curves_checked: 0,
        points_checked: 0,
        violations: Vec::new(),
    };
    for (curves, points, violations) in per_prime {
        report.curves_checked += curves;
        report.points_checked += points;
        report.violations.extend(violations);
    }
    report.violations.sort();
    Ok(report)
}

fn verify_prime(p: u64) -> (u64, u64, Vec<Violation>) {
    let group_order = p + 1;
    let two_k = 1u64 << group_order.trailing_zeros();
    let mut violations = Vec::new();
    let mut curves = 0;
    let mut points_checked = 0;
    for m in sweep_values(p) {
        curves += 1;
        let curve = SmallCurve { p, m };
        let points = enumerate(&curve);
        let mut violate = |theorem, point, detail: String| {
            violations.push(Violation { p, m, theorem, point, detail })
        };

        if points.len() as u64 != group_order {
            violate(1, None, format!("{} points, expected {}", points.len(), group_order));
        }

        let structure = structure_of(&curve, &points);
        let m_residue = legendre(m, p);
        let expected = if m_residue == -1 {
            GroupStructure { kind: StructureKind::Cyclic, orders: vec![group_order] }
        } else {
            GroupStructure { kind: StructureKind::ProductOfTwo, orders: vec![2, group_order / 2] }
        };
        if structure != expected {
            violate(2, None, format!("found {structure:?}, expected {expected:?}"));
        }

        if m_residue == -1 {
            for &pt in &points {
                let SmallPoint::Affine { x, .. } = pt else { continue };
                if legendre(x, p) != -1 {
                    continue;
                }
                points_checked += 1;
                let ord = curve.order_dividing(pt, group_order);
                if !ord.is_multiple_of(two_k) {
                    violate(3, Some(pt), format!("order {ord} not divisible by {two_k}"));
                }
            }
        }
    }
    (curves, points_checked, violations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(x: u64, y: u64) -> SmallPoint {
        SmallPoint::Affine { x, y }
    }

    #[test]
    fn enumerate_p7_m3() {
        let pts = enumerate_points(7, 3).unwrap();
        assert_eq!(
            pts,
            vec![
                SmallPoint::Infinity,
                aff(0, 0),
                aff(2, 3),
                aff(2, 4),
                aff(3, 2),
                aff(3, 5),
                aff(6, 3),
                aff(6, 4)
            ]
        );
    }

    #[test]
    fn enumerate_p7_m2_has_three_two_torsion_points() {
        let pts = enumerate_points(7, 2).unwrap();
        assert_eq!(pts.len(), 8);
        let xs: Vec<u64> = pts
            .iter()
            .filter_map(|pt| match pt {
                SmallPoint::Affine { x, y: 0 } => Some(*x),
                _ => None,
            })
            .collect();
        assert_eq!(xs, vec![0, 3, 4]);
    }

    #[test]
    fn point_count_at_p7() {
        for m in 1..7 {
            assert_eq!(enumerate_points(7, m).unwrap().len(), 8);
        }
    }

    #[test]
    fn enumerate_rejects_bad_inputs() {
        assert_eq!(enumerate_points(13, 1), Err(Error::NotThreeModFour(13)));
        assert!(enumerate_points(5003, 1).is_err());
        assert!(enumerate_points(15, 1).is_err());
        assert_eq!(enumerate_points(7, 14), Err(Error::DegenerateCurve));
    }

    #[test]
    fn point_order_examples() {
        assert_eq!(point_order(7, 3, aff(6, 3)), Ok(8));
        assert_eq!(point_order(7, 3, aff(0, 0)), Ok(2));
        assert_eq!(point_order(7, 3, SmallPoint::Infinity), Ok(1));
        assert!(point_order(7, 3, aff(1, 1)).is_err());
    }

    #[test]
    fn fast_order_matches_repeated_addition() {
        for p in [3u64, 7, 11, 19, 23, 31, 43] {
            for m in 1..p {
                let curve = SmallCurve { p, m };
                for pt in enumerate(&curve) {
                    assert_eq!(curve.order_dividing(pt, p + 1), point_order(p, m, pt).unwrap());
                }
            }
        }
    }

    #[test]
    fn group_structure_examples() {
        assert_eq!(
            group_structure(7, 3).unwrap(),
            GroupStructure { kind: StructureKind::Cyclic, orders: vec![8] }
        );
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(
            group_structure(7, 2).unwrap(),
            GroupStructure { kind: StructureKind::ProductOfTwo, orders: vec![2, 4] }
        );
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(group_structure(23, 5).unwrap().orders, vec![24]);
        assert_eq!(group_structure(23, 5).unwrap().total(), 24);
        assert_eq!(legendre(5, 23), -1);
    }

    #[test]
    fn verify_small_ranges() {
        let r = verify_theorems(7).unwrap();
        assert_eq!(r.primes_checked, 2);
        assert_eq!(r.curves_checked, 8);
        assert!(r.is_clean());
        assert!(verify_theorems(100).unwrap().is_clean());
        assert!(verify_theorems(500).unwrap().is_clean());
        assert!(verify_theorems(5001).is_err());
    }

    #[test]
    fn sampling_is_fixed_and_mixed() {
        for p in [211u64, 223, 1999, 4999] {
            let ms = sweep_values(p);
            assert_eq!(ms, sweep_values(p));
            assert_eq!(ms.len(), SAMPLED_M_PER_PRIME);
            assert!(ms.iter().any(|&m| legendre(m, p) == 1));
            assert!(ms.iter().any(|&m| legendre(m, p) == -1));
        }
        assert_eq!(sweep_values(7), vec![1, 2, 3, 4, 5, 6]);
    }
}
