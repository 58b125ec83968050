//! Exact coefficient fields: the rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted for GF(p); products of residues fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// A field element. Prime-field elements carry their modulus so that the
/// arithmetic operators need no context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    P { v: u64, p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::P { v: n.rem_euclid(*p as i64) as u64, p: *p },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::P { v: r.to_u64().unwrap_or(0), p: *p }
            }
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::Parse(format!("denominator {den} vanishes in the field")));
        }
        Ok(&self.from_bigint(num) * &d.inv())
    }

    /// Random element used by sampling procedures. Over the rationals the
    /// values are small integers, which keeps sampled witnesses readable.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Rationals => self.from_i64(rng.gen_range(-9..=9)),
            Field::Prime(p) => Scalar::P { v: rng.gen_range(0..*p), p: *p },
        }
    }

    /// Nonzero random element.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::P { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::P { v, .. } => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::P { p, .. } => Field::Prime(*p),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                Scalar::Q(q.recip())
            }
            Scalar::P { v, p } => {
                assert!(*v != 0, "inverse of zero");
                Scalar::P { v: pow_mod(*v, p - 2, *p), p: *p }
            }
        }
    }

    /// Small integer value when the element is one, as used by printers.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::P { v, p } => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
        }
    }

    /// Whether a printer should treat the element as negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::P { .. } => self.as_i64().map(|v| v < 0).unwrap_or(false),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::P { .. } => write!(f, "{}", self.as_i64().unwrap_or(0)),
        }
    }
}

fn mismatch() -> ! {
    panic!("scalars from different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => {
                Scalar::P { v: (a + b) % p, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => {
                Scalar::P { v: (a + p - b) % p, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::P { v: a, p }, Scalar::P { v: b, p: q }) if p == q => {
                Scalar::P { v: a * b % p, p: *p }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::P { v, p } => Scalar::P { v: (p - v) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_inverse_by_fermat() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        assert_eq!(two.inv(), f.from_i64(3));
        assert!((&two * &two.inv()).is_one());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn rational_ratio_in_lowest_terms() {
        let f = Field::Rationals;
        let s = f.ratio(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(s.to_string(), "-1/2");
    }

    #[test]
    fn ratio_with_vanishing_denominator() {
        let f = Field::prime(3).unwrap();
        assert!(f.ratio(&BigInt::from(1), &BigInt::from(3)).is_err());
    }

    #[test]
    fn symmetric_printing_mod_p() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1).to_string(), "-1");
        assert_eq!(f.from_i64(3).to_string(), "3");
    }
}
