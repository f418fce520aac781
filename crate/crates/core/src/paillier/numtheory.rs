//! Extended Euclid, Bézout coefficients and modular inverses.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `a·x + b·y = gcd` with `gcd ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub x: BigInt,
    pub y: BigInt,
    pub gcd: BigUint,
}

/// Extended Euclidean algorithm.
///
/// For `a, b > 0` the returned pair is the one produced by the classical
/// recurrence, which satisfies `|x| ≤ b/(2g)` and `|y| ≤ a/(2g)` whenever
/// neither input divides the other. `a` and `b` must not both be zero.
pub fn bezout(a: &BigUint, b: &BigUint) -> Bezout {
    assert!(!(a.is_zero() && b.is_zero()), "bezout(0, 0) is undefined");
    let (mut old_r, mut r) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let quotient = &old_r / &r;
        let next_r = &old_r - &quotient * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &quotient * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &quotient * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    Bezout {
        x: old_s,
        y: old_t,
        gcd: old_r.to_biguint().expect("remainders stay non-negative"),
    }
}

/// Every coefficient pair with `a·x + b·y = g`, `|x| < b/g` and `|y| < a/g`.
///
/// All solutions are `(x₀ + k·b/g, y₀ − k·a/g)`, so at most two lie inside
/// the box; for coprime `a, b > 1` there are exactly two.
pub fn bounded_bezout_pairs(a: &BigUint, b: &BigUint) -> Vec<(BigInt, BigInt)> {
    let base = bezout(a, b);
    let g = BigInt::from(base.gcd.clone());
    let step_x = BigInt::from(b.clone()) / &g;
    let step_y = BigInt::from(a.clone()) / &g;
    let mut pairs = Vec::new();
    for k in -2i32..=2 {
        let k = BigInt::from(k);
        let x = &base.x + &k * &step_x;
        let y = &base.y - &k * &step_y;
        if x.abs() < step_x && y.abs() < step_y {
            pairs.push((x, y));
        }
    }
    pairs
}

/// `a⁻¹ mod m`, if it exists.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_zero() {
        return None;
    }
    let reduced = a % m;
    if reduced.is_zero() {
        return if m.is_one() {
            Some(BigUint::zero())
        } else {
            None
        };
    }
    let Bezout { x, gcd, .. } = bezout(&reduced, m);
    if !gcd.is_one() {
        return None;
    }
    let m_signed = BigInt::from(m.clone());
    let inverse = x.mod_floor(&m_signed);
    debug_assert_ne!(inverse.sign(), Sign::Minus);
    inverse.to_biguint()
}
