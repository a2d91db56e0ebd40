use std::fmt;
use std::str::FromStr;

use malachite::num::arithmetic::traits::Reciprocal;
use malachite::num::basic::traits::{One, Zero};
use malachite::{Integer, Natural, Rational};
use rand::Rng;
use serde_json::Value;

/// A computation field together with its element type.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Number of elements, if finite.
    fn order(&self) -> Option<u64>;
    /// The `idx`-th element in a fixed enumeration (finite fields only).
    fn nth(&self, idx: u64) -> Self::Elem;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    /// `"Q"` or the characteristic, as it appears in module files.
    fn label(&self) -> Value;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::ZERO
    }
    fn one(&self) -> Rational {
        Rational::ONE
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from(v)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (*a != 0).then(|| a.reciprocal())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth(&self, idx: u64) -> Rational {
        Rational::from(idx)
    }
    fn random<R: Rng>(&self, rng: &mut R) -> Rational {
        Rational::from(rng.gen_range(-1000i64..=1000))
    }
    fn label(&self) -> Value {
        Value::String("Q".into())
    }
    fn elem_to_json(&self, a: &Rational) -> Value {
        if let Ok(Ok(v)) = Integer::try_from(a).map(|i| i64::try_from(&i)) {
            return Value::from(v);
        }
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Option<Rational> {
        match v {
            Value::Number(n) => n.as_i64().map(Rational::from),
            Value::String(s) => Rational::from_str(s.trim()).ok(),
            _ => None,
        }
    }
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The primes `2, 3, 5, …` in order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&p| is_prime(p))
}

impl PrimeField {
    /// `None` unless `p` is a prime below `2^31`.
    pub fn new(p: u64) -> Option<PrimeField> {
        (is_prime(p) && p < 1 << 31).then_some(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces a rational; `None` if `p` divides the denominator.
    pub fn reduce(&self, r: &Rational) -> Option<u64> {
        let p = Natural::from(self.p);
        let num = u64::try_from(&(r.numerator_ref() % &p)).unwrap();
        let den = u64::try_from(&(r.denominator_ref() % &p)).unwrap();
        let v = self.mul(&num, &self.inv(&den)?);
        Some(if *r < 0 { self.neg(&v) } else { v })
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn nth(&self, idx: u64) -> u64 {
        idx % self.p
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn label(&self) -> Value {
        Value::from(self.p)
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        Value::from(*a)
    }
    fn elem_from_json(&self, v: &Value) -> Option<u64> {
        match v {
            Value::Number(n) => n.as_i64().map(|x| self.from_i64(x)),
            Value::String(s) => self.reduce(&Rational::from_str(s.trim()).ok()?),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_mod_p() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.reduce(&Rational::from_signeds(1, 3)), Some(5));
        assert_eq!(f.reduce(&Rational::from_signeds(-1, 3)), Some(2));
        assert_eq!(f.reduce(&Rational::from_signeds(1, 7)), None);
        assert_eq!(f.inv(&3), Some(5));
    }

    #[test]
    fn rational_json_round_trip() {
        let q = Rationals;
        for r in [Rational::from(-4), Rational::from_signeds(-2, 3), Rational::from(0)] {
            assert_eq!(q.elem_from_json(&q.elem_to_json(&r)), Some(r));
        }
    }
}
