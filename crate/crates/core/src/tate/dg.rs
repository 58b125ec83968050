//! Free non-positive DG algebras over `A` built from exterior and
//! divided-power variables, materialized in a window of degrees.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{Ring, RingElem};
use crate::complexes::{Complex, FreeModule, ModComplex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Echelon, SVec};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Exterior,
    DividedPower,
}

/// Exponents per variable; exterior exponents are 0 or 1, a divided-power
/// exponent `j` stands for `T^{(j)}` of degree `j * rho`.
pub type Word = Vec<u32>;

/// An element: A-coefficients on basis words.
pub type DGElem = BTreeMap<Word, RingElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGVariable {
    pub name: String,
    pub kind: VarKind,
    /// Degree of `T` (negative).
    pub degree: i64,
    /// `d(T)`, a cycle of degree `degree + 1`, written over the earlier variables.
    pub cycle: DGElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    ring: Ring,
    vars: Vec<DGVariable>,
    window: usize,
}

/// Outcome of adjoining a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjunction {
    pub algebra: DGAlgebra,
    /// The killed cycle was already a boundary: legal, but homology is unchanged.
    pub was_boundary: bool,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl DGAlgebra {
    /// `A` in degree 0.
    pub fn base(ring: &Ring, window: usize) -> Result<DGAlgebra> {
        ring.require_artinian("DG algebras")?;
        Ok(DGAlgebra { ring: ring.clone(), vars: vec![], window })
    }

    /// The Koszul complex on `elems` as an exterior algebra.
    pub fn koszul(ring: &Ring, elems: &[RingElem], window: usize) -> Result<DGAlgebra> {
        let mut x = DGAlgebra::base(ring, window)?;
        for (i, a) in elems.iter().enumerate() {
            let t = x.scalar(a);
            x = x.adjoin(&format!("T{}", i + 1), &t)?.algebra;
        }
        Ok(x)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &[DGVariable] {
        &self.vars
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// The sub-algebra on the first `k` variables.
    pub fn prefix(&self, k: usize) -> DGAlgebra {
        DGAlgebra { ring: self.ring.clone(), vars: self.vars[..k.min(self.vars.len())].to_vec(), window: self.window }
    }

    pub fn with_window(&self, window: usize) -> DGAlgebra {
        DGAlgebra { window, ..self.clone() }
    }

    pub fn one(&self) -> DGElem {
        self.scalar(&self.ring.one())
    }

    pub fn scalar(&self, a: &RingElem) -> DGElem {
        let mut e = DGElem::new();
        if !a.is_zero() {
            e.insert(vec![0; self.vars.len()], a.clone());
        }
        e
    }

    /// The basis word of variable `v` to the power (or divided power) `j`.
    pub fn var_word(&self, v: usize, j: u32) -> Word {
        let mut w = vec![0; self.vars.len()];
        w[v] = j;
        w
    }

    pub fn word_elem(&self, w: &Word) -> DGElem {
        BTreeMap::from([(w.clone(), self.ring.one())])
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.iter().zip(&self.vars).map(|(e, v)| *e as i64 * v.degree).sum()
    }

    /// Degree of a homogeneous element.
    pub fn degree(&self, a: &DGElem) -> Option<i64> {
        let mut it = a.keys().map(|w| self.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn pad(&self, a: &DGElem) -> DGElem {
        let n = self.vars.len();
        a.iter()
            .map(|(w, c)| {
                let mut w = w.clone();
                w.resize(n, 0);
                (w, c.clone())
            })
            .collect()
    }

    /// Basis words of degree `n`, in descending exponent order (for
    /// exterior words this is the lexicographic order of index sets).
    pub fn words(&self, n: i64) -> Vec<Word> {
        fn go(vars: &[DGVariable], k: usize, left: i64, cur: &mut Word, out: &mut Vec<Word>) {
            if k == vars.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let rho = -vars[k].degree;
            let max = match vars[k].kind {
                VarKind::Exterior => 1,
                VarKind::DividedPower => left / rho,
            };
            let mut e = 0;
            while e <= max && e * rho <= left {
                cur[k] = e as u32;
                go(vars, k + 1, left - e * rho, cur, out);
                e += 1;
            }
            cur[k] = 0;
        }
        if n > 0 || n < -(self.window as i64) {
            return vec![];
        }
        let mut out = Vec::new();
        go(&self.vars, 0, -n, &mut vec![0; self.vars.len()], &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// `u v` on basis words: the coefficient and the resulting word.
    pub fn mul_words(&self, u: &Word, v: &Word) -> Option<(Scalar, Word)> {
        let f = self.ring.field();
        let mut coeff = f.one();
        let mut w = vec![0; self.vars.len()];
        let mut swaps = 0u32;
        let mut odd_in_u_above = 0u32;
        for k in (0..self.vars.len()).rev() {
            let (a, b) = (u[k], v[k]);
            match self.vars[k].kind {
                VarKind::Exterior => {
                    if a + b > 1 {
                        return None;
                    }
                    if b == 1 {
                        swaps += odd_in_u_above;
                    }
                    if a == 1 {
                        odd_in_u_above += 1;
                    }
                }
                VarKind::DividedPower => {
                    if a > 0 && b > 0 {
                        coeff = &coeff * &f.from_bigint(&binomial(a + b, a));
                        if coeff.is_zero() {
                            return None;
                        }
                    }
                }
            }
            w[k] = a + b;
        }
        if swaps % 2 == 1 {
            coeff = -&coeff;
        }
        Some((coeff, w))
    }

    pub fn add(&self, a: &DGElem, b: &DGElem) -> DGElem {
        let mut out = a.clone();
        for (w, c) in b {
            let s = match out.get(w) {
                Some(x) => self.ring.add(x, c),
                None => c.clone(),
            };
            if s.is_zero() {
                out.remove(w);
            } else {
                out.insert(w.clone(), s);
            }
        }
        out
    }

    pub fn neg(&self, a: &DGElem) -> DGElem {
        a.iter().map(|(w, c)| (w.clone(), self.ring.neg(c))).collect()
    }

    pub fn scale(&self, a: &DGElem, s: &Scalar) -> DGElem {
        a.iter().map(|(w, c)| (w.clone(), self.ring.scale(c, s))).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Product; terms below the window are dropped.
    pub fn mul(&self, a: &DGElem, b: &DGElem) -> DGElem {
        let (a, b) = (self.pad(a), self.pad(b));
        let mut out = DGElem::new();
        for (u, x) in &a {
            for (v, y) in &b {
                let Some((s, w)) = self.mul_words(u, v) else { continue };
                if self.word_degree(&w) < -(self.window as i64) {
                    continue;
                }
                let c = self.ring.scale(&self.ring.mul(x, y), &s);
                out = self.add(&out, &BTreeMap::from([(w, c)]));
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn d_factor(&self, k: usize, e: u32) -> DGElem {
        let t = self.pad(&self.vars[k].cycle);
        match self.vars[k].kind {
            VarKind::Exterior => t,
            VarKind::DividedPower => self.mul(&t, &self.word_elem(&self.var_word(k, e - 1))),
        }
    }

    /// `d` on a basis word by the Leibniz rule over its factors.
    pub fn d_word(&self, w: &Word) -> DGElem {
        let mut out = DGElem::new();
        let mut prefix = vec![0; self.vars.len()];
        let mut parity = 0u32;
        for k in 0..self.vars.len() {
            let e = w[k];
            if e == 0 {
                continue;
            }
            let mut suffix = w.clone();
            for s in suffix.iter_mut().take(k + 1) {
                *s = 0;
            }
            let term = self.mul(&self.mul(&self.word_elem(&prefix), &self.d_factor(k, e)), &self.word_elem(&suffix));
            out = self.add(&out, &if parity % 2 == 1 { self.neg(&term) } else { term });
            prefix[k] = e;
            if self.vars[k].kind == VarKind::Exterior {
                parity += 1;
            }
        }
        out
    }

    pub fn d(&self, a: &DGElem) -> DGElem {
        let mut out = DGElem::new();
        for (w, c) in &self.pad(a) {
            let dw = self.d_word(w);
            let term: DGElem = dw.iter().map(|(v, x)| (v.clone(), self.ring.mul(x, c))).collect();
            out = self.add(&out, &term);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// The underlying free complex in degrees `-window..=0`.
    pub fn complex(&self) -> Result<Complex> {
        let w = self.window as i64;
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in -w..=0 {
            let src = self.words(n);
            terms.insert(n, FreeModule::new(src.len()));
            if n < 0 {
                let tgt = self.words(n + 1);
                let idx: BTreeMap<&Word, usize> = tgt.iter().enumerate().map(|(k, x)| (x, k)).collect();
                let mut m = Matrix::zeros(tgt.len(), src.len());
                for (c, u) in src.iter().enumerate() {
                    for (v, x) in self.d_word(u) {
                        m.set(idx[&v], c, x);
                    }
                }
                diffs.insert(n, m);
            }
        }
        Complex::new(&self.ring, terms, diffs)
    }

    /// Coordinates of a homogeneous element of degree `n` in the k-expansion
    /// of the degree-`n` term of `complex()`.
    pub fn expand(&self, a: &DGElem, n: i64) -> SVec {
        let words = self.words(n);
        let idx: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(k, x)| (x, k)).collect();
        let nd = self.ring.dim();
        let mut e = Vec::new();
        for (w, c) in &self.pad(a) {
            if let Some(k) = idx.get(w) {
                for (b, x) in self.ring.coords(c) {
                    e.push((k * nd + b, x));
                }
            }
        }
        crate::linalg::sv_from_entries(e)
    }

    /// Inverse of `expand`.
    pub fn collapse(&self, v: &SVec, n: i64) -> DGElem {
        let words = self.words(n);
        let nd = self.ring.dim();
        let mut out = DGElem::new();
        for (k, x) in v {
            let (w, b) = (&words[k / nd], k % nd);
            let term = BTreeMap::from([(w.clone(), self.ring.monomial(self.ring.basis()[b], x.clone()))]);
            out = self.add(&out, &term);
        }
        out
    }

    /// `d t = 0` and whether `t` is a boundary, within the window.
    pub fn cycle_status(&self, t: &DGElem) -> Result<bool> {
        let n = self.degree(t).ok_or_else(|| Error::Invalid("cycle must be homogeneous".into()))?;
        if !self.d(t).is_empty() {
            return Err(Error::Invalid("the element to kill is not a cycle".into()));
        }
        if n - 1 < -(self.window as i64) {
            return Err(Error::Invalid("window too small to decide whether the cycle is a boundary".into()));
        }
        let m = ModComplex::from_free(&self.complex()?)?;
        let b = Echelon::from_rows(m.dim(n), &m.d(n - 1).col_vecs());
        Ok(b.contains(&self.expand(t, n)))
    }

    /// `X<T>` with `d T = t`: exterior for odd `deg T`, divided powers for even.
    pub fn adjoin(&self, name: &str, t: &DGElem) -> Result<Adjunction> {
        let q = match self.degree(t) {
            Some(q) => q,
            None if t.is_empty() => return Err(Error::Invalid("cannot kill the zero cycle".into())),
            None => return Err(Error::Invalid("cycle must be homogeneous".into())),
        };
        if q > 0 {
            return Err(Error::Invalid("cycle has positive degree".into()));
        }
        let was_boundary = self.cycle_status(t)?;
        let rho = q - 1;
        let kind = if rho % 2 == 0 { VarKind::DividedPower } else { VarKind::Exterior };
        let mut vars = self.vars.clone();
        vars.push(DGVariable { name: name.to_string(), kind, degree: rho, cycle: self.pad(t) });
        let algebra = DGAlgebra { ring: self.ring.clone(), vars, window: self.window };
        Ok(Adjunction { algebra, was_boundary })
    }

    /// Skew-commutativity, `x^2 = 0` for odd words, Leibniz and `d^2 = 0`
    /// on all basis words and pairs in the window; the first failure.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let all: Vec<Word> = (-(self.window as i64)..=0).flat_map(|n| self.words(n)).collect();
        for u in &all {
            let du = self.d_word(u);
            if !self.d(&du).is_empty() {
                return Err(format!("d^2 != 0 on {}", self.format_word(u)));
            }
            let pu = self.word_degree(u);
            for v in &all {
                let pv = self.word_degree(v);
                if pu + pv < -(self.window as i64) {
                    continue;
                }
                let (eu, ev) = (self.word_elem(u), self.word_elem(v));
                let uv = self.mul(&eu, &ev);
                let vu = self.mul(&ev, &eu);
                let sign = if (pu * pv) % 2 != 0 { -1 } else { 1 };
                if uv != self.scale(&vu, &self.ring.field().from_i64(sign)) {
                    return Err(format!("skew-commutativity fails for {} and {}", self.format_word(u), self.format_word(v)));
                }
                if u == v && pu % 2 != 0 && !uv.is_empty() {
                    return Err(format!("square of odd word {} is nonzero", self.format_word(u)));
                }
                if pu + pv - 1 < -(self.window as i64) {
                    continue;
                }
                let lhs = self.d(&uv);
                let s = if pu % 2 != 0 { -1 } else { 1 };
                let rhs = self.add(
                    &self.mul(&du, &ev),
                    &self.scale(&self.mul(&eu, &self.d_word(v)), &self.ring.field().from_i64(s)),
                );
                if lhs != rhs {
                    return Err(format!("Leibniz fails for {} and {}", self.format_word(u), self.format_word(v)));
                }
            }
        }
        Ok(())
    }

    pub fn format_word(&self, w: &Word) -> String {
        let parts: Vec<String> = w
            .iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| match (v.kind, e) {
                (VarKind::Exterior, _) | (_, 1) => v.name.clone(),
                (VarKind::DividedPower, e) => format!("{}^({e})", v.name),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, a: &DGElem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        a.iter()
            .map(|(w, c)| {
                let cs = self.ring.format(c);
                if w.iter().all(|e| *e == 0) {
                    cs
                } else if cs == "1" {
                    self.format_word(w)
                } else {
                    format!("({cs})*{}", self.format_word(w))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Ranks of the materialized terms, degree 0 first.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.window as i64).map(|n| self.words(-n).len()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::field::Field;

    #[test]
    fn koszul_matches_complex() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x^2", "y^2"], Backend::Artinian).unwrap();
        let k = DGAlgebra::koszul(&r, &[r.var(0), r.var(1)], 2).unwrap();
        let c = crate::resolutions::koszul_on_variables(&r).unwrap();
        assert_eq!(k.complex().unwrap(), c);
        assert_eq!(k.verify(), Ok(()));
    }

    #[test]
    fn divided_powers() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let k = DGAlgebra::koszul(&r, &[r.var(0)], 6).unwrap();
        let t = BTreeMap::from([(k.var_word(0, 1), r.var(0))]);
        let s = k.adjoin("S", &t).unwrap();
        assert!(!s.was_boundary);
        let y = s.algebra;
        assert_eq!(y.vars()[1].kind, VarKind::DividedPower);
        let s1 = y.word_elem(&y.var_word(1, 1));
        let s2 = y.word_elem(&y.var_word(1, 2));
        assert_eq!(y.mul(&s1, &s1), y.scale(&s2, &Field::Rationals.from_i64(2)));
        // d(S^(j)) = x T1 S^(j-1)
        let mut w = y.var_word(1, 1);
        w[0] = 1;
        assert_eq!(y.d(&s2), BTreeMap::from([(w, r.var(0))]));
        assert_eq!(y.verify(), Ok(()));
        assert_eq!(y.ranks(), vec![1; 7]);
    }
}
