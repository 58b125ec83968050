//! Univariate polynomials over the base field, used for minimal
//! polynomials and idempotent extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::field::{Field, Scalar};

/// Coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub field: Field,
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Poly {
        let f = c.field();
        Poly::new(f, vec![c])
    }

    /// `x - a`
    pub fn linear(a: &Scalar) -> Poly {
        let f = a.field();
        Poly::new(f, vec![-a, f.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().inv();
        Poly::new(self.field, self.coeffs.iter().map(|c| c * &l).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        Poly::new(
            self.field,
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.clone();
        let dd = d.degree().unwrap();
        let li = d.lead().inv();
        let mut q = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = &r.lead() * &li;
            let k = rd - dd;
            q[k] = &q[k] + &c;
            let mut t = vec![self.field.zero(); k];
            t.extend(d.coeffs.iter().map(|x| x * &c));
            r = r.sub(&Poly::new(self.field, t));
        }
        (Poly::new(self.field, q), r)
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(f.one()), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::constant(f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = r0.lead().inv();
        let sc = |p: &Poly| Poly::new(f, p.coeffs.iter().map(|c| c * &l).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.from_i64(i as i64)).collect(),
        )
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: BigInt, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field.one()).rem(m);
        while e > BigInt::zero() {
            if e.is_odd() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in the base field, with a bounded search over the
    /// rationals (rational root test on the cleared integer polynomial).
    pub fn roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        match self.field {
            Field::Rationals => rational_roots(self),
            Field::Prime(p) => prime_field_roots(self, p, rng),
        }
    }
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    let f = p.field;
    let mut den = BigInt::one();
    for c in &p.coeffs {
        if let Scalar::Q(q) = c {
            den = den.lcm(q.denom());
        }
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| match c {
            Scalar::Q(q) => q.numer() * (&den / q.denom()),
            _ => unreachable!(),
        })
        .collect();
    let mut out = Vec::new();
    let lowest = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lowest > 0 {
        out.push(f.zero());
    }
    let a0 = ints[lowest].abs();
    let an = ints.last().unwrap().abs();
    let (Some(d0), Some(dn)) = (divisors(&a0), divisors(&an)) else { return out };
    let mut seen = std::collections::BTreeSet::new();
    for a in &d0 {
        for b in &dn {
            for s in [1i64, -1] {
                let cand = f.ratio(&(a * BigInt::from(s)), b).unwrap();
                if seen.insert(cand.to_string()) && p.eval(&cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn prime_field_roots<R: Rng + ?Sized>(p: &Poly, q: u64, rng: &mut R) -> Vec<Scalar> {
    let f = p.field;
    let m = p.monic();
    if q <= 4096 {
        return (0..q as i64).map(|v| f.from_i64(v)).filter(|v| m.eval(v).is_zero()).collect();
    }
    // product of the distinct linear factors: gcd(m, x^q - x)
    let x = Poly::new(f, vec![f.zero(), f.one()]);
    let xq = x.powmod(BigInt::from(q), &m);
    let mut stack = vec![m.gcd(&xq.sub(&x))];
    let mut out = Vec::new();
    while let Some(g) = stack.pop() {
        match g.degree() {
            None | Some(0) => {}
            Some(1) => out.push(-&g.monic().coeffs[0]),
            Some(_) => loop {
                let c = f.random(rng);
                let h = Poly::new(f, vec![c, f.one()]).powmod(BigInt::from((q - 1) / 2), &g);
                let s = g.gcd(&h.sub(&Poly::constant(f.one())));
                let d = s.degree().unwrap_or(0);
                if d > 0 && d < g.degree().unwrap() {
                    let (rest, _) = g.divrem(&s);
                    stack.push(s);
                    stack.push(rest.monic());
                    break;
                }
            },
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn poly(f: Field, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|x| f.from_i64(*x)).collect())
    }

    #[test]
    fn ext_gcd_identity() {
        let f = Field::Rationals;
        let a = poly(f, &[0, 0, 1]);
        let b = poly(f, &[-1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, poly(f, &[1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn rational_and_modular_roots() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let f = Field::Rationals;
        // (2x - 1)(x + 3) x
        let p = poly(f, &[-1, 2]).mul(&poly(f, &[3, 1])).mul(&poly(f, &[0, 1]));
        let mut r: Vec<String> = p.roots(&mut rng).iter().map(|s| s.to_string()).collect();
        r.sort();
        assert_eq!(r, vec!["-3", "0", "1/2"]);
        let g = Field::prime(1_000_003).unwrap();
        let q = poly(g, &[-5, 1]).mul(&poly(g, &[7, 1])).mul(&poly(g, &[1, 0, 1]));
        let mut r: Vec<i64> = q.roots(&mut rng).iter().map(|s| s.as_i64().unwrap()).collect();
        r.sort();
        assert_eq!(r, vec![-7, 5]);
    }
}
