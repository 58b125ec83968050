//! Local algebras `k[vars]/(monomial ideal)` with exact normal forms.

pub mod matlis;
pub mod mono;
pub mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

pub use matlis::MatlisModule;
pub use mono::{Mono, MAX_VARS};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{Echelon, KMat, SVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Artinian,
    /// Standard-graded ring; exact answers are guaranteed up to `window`.
    Graded { window: u32 },
}

/// Element of a [`LocalAlgebra`] in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElem(BTreeMap<Mono, Scalar>);

impl RingElem {
    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&Scalar> {
        self.0.get(m)
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous elements.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.0.keys().map(|m| m.deg());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn leading_degree(&self) -> Option<u32> {
        self.0.keys().map(|m| m.deg()).max()
    }
}

pub struct LocalAlgebra {
    field: Field,
    vars: Vec<String>,
    relations: Vec<Mono>,
    backend: Backend,
    basis: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

pub type Ring = Arc<LocalAlgebra>;

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for LocalAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.vars == o.vars && self.relations == o.relations && self.backend == o.backend
    }
}

impl Eq for LocalAlgebra {}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort();
    gens.dedup();
    let mut out: Vec<Mono> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.retain(|h| !g.divides(h));
            out.push(g);
        }
    }
    out.sort();
    out
}

impl LocalAlgebra {
    pub fn new(field: Field, vars: Vec<String>, relations: Vec<Mono>, backend: Backend) -> Result<Ring> {
        parse::check_var_count(&vars)?;
        let n = vars.len();
        for r in &relations {
            if r.0[n..].iter().any(|&e| e > 0) {
                return Err(Error::Invalid("relation uses an undeclared variable".into()));
            }
        }
        let relations = minimalize(relations);
        if relations.iter().any(|r| r.is_one()) {
            return Err(Error::Invalid("the unit ideal does not define a local algebra".into()));
        }
        if backend == Backend::Artinian {
            for v in 0..n {
                let pure = relations.iter().any(|r| r.0[v] > 0 && (0..n).all(|w| w == v || r.0[w] == 0));
                if !pure {
                    return Err(Error::Invalid(format!(
                        "artinian backend needs a pure power of `{}` among the relations",
                        vars[v]
                    )));
                }
            }
        }
        let mut a = LocalAlgebra { field, vars, relations, backend, basis: Vec::new(), index: HashMap::new() };
        let mut basis = Vec::new();
        let mut d = 0u32;
        loop {
            if let Backend::Graded { window } = backend {
                if d > window {
                    break;
                }
            }
            let layer = a.standard_monomials_of_degree(d);
            if layer.is_empty() && backend == Backend::Artinian {
                break;
            }
            basis.extend(layer);
            d += 1;
        }
        a.index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        a.basis = basis;
        Ok(Arc::new(a))
    }

    /// Builds an algebra from relation strings such as `"x^2"`.
    pub fn with_relations(field: Field, vars: &[&str], relations: &[&str], backend: Backend) -> Result<Ring> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| parse::parse_mono(r, &names, field))
            .collect::<Result<Vec<_>>>()?;
        LocalAlgebra::new(field, names, rels, backend)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn relations(&self) -> &[Mono] {
        &self.relations
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_artinian(&self) -> bool {
        self.backend == Backend::Artinian
    }

    pub fn window(&self) -> Option<u32> {
        match self.backend {
            Backend::Graded { window } => Some(window),
            Backend::Artinian => None,
        }
    }

    pub fn require_artinian(&self, what: &str) -> Result<()> {
        if self.is_artinian() {
            Ok(())
        } else {
            Err(Error::UnsupportedBackend(format!("{what} needs the artinian backend")))
        }
    }

    /// Standard monomials (Artinian: all of them; graded: up to the window)
    /// in basis order.
    pub fn basis(&self) -> &[Mono] {
        &self.basis
    }

    /// k-dimension of the algebra (graded: of the part inside the window).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn in_ideal(&self, m: &Mono) -> bool {
        self.relations.iter().any(|r| r.divides(m))
    }

    pub fn standard_monomials_of_degree(&self, d: u32) -> Vec<Mono> {
        let n = self.vars.len();
        let mut out = Vec::new();
        let mut cur = [0u16; MAX_VARS];
        fn rec(a: &LocalAlgebra, v: usize, n: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Mono>) {
            if v + 1 == n || n == 0 {
                if n == 0 {
                    if left == 0 {
                        out.push(Mono(*cur));
                    }
                    return;
                }
                cur[v] = left as u16;
                let m = Mono(*cur);
                if !a.in_ideal(&m) {
                    out.push(m);
                }
                cur[v] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[v] = e as u16;
                if a.in_ideal(&Mono(*cur)) {
                    continue;
                }
                rec(a, v + 1, n, left - e, cur, out);
            }
            cur[v] = 0;
        }
        rec(self, 0, n, d, &mut cur, &mut out);
        out.sort_by(|a, b| a.basis_cmp(b));
        out
    }

    pub fn describe(&self) -> String {
        let rels: Vec<String> = self.relations.iter().map(|r| r.format(&self.vars)).collect();
        let b = match self.backend {
            Backend::Artinian => "artinian".to_string(),
            Backend::Graded { window } => format!("graded<={window}"),
        };
        format!("{}[{}]/({}) [{}]", self.field, self.vars.join(","), rels.join(","), b)
    }

    // ---- elements ----

    pub fn zero(&self) -> RingElem {
        RingElem::default()
    }

    pub fn one(&self) -> RingElem {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> RingElem {
        self.monomial(Mono::ONE, c)
    }

    pub fn from_i64(&self, n: i64) -> RingElem {
        self.constant(self.field.from_i64(n))
    }

    pub fn monomial(&self, m: Mono, c: Scalar) -> RingElem {
        let mut t = BTreeMap::new();
        if !c.is_zero() && !self.in_ideal(&m) {
            t.insert(m, c);
        }
        RingElem(t)
    }

    pub fn var(&self, i: usize) -> RingElem {
        self.monomial(Mono::var(i), self.field.one())
    }

    pub fn var_by_name(&self, name: &str) -> Result<RingElem> {
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.var(i))
    }

    /// Reduces raw terms modulo the monomial ideal.
    pub fn normal_form(&self, terms: &BTreeMap<Mono, Scalar>) -> RingElem {
        RingElem(
            terms
                .iter()
                .filter(|(m, c)| !c.is_zero() && !self.in_ideal(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        )
    }

    pub fn parse(&self, s: &str) -> Result<RingElem> {
        Ok(self.normal_form(&parse::parse_poly(s, &self.vars, self.field)?))
    }

    pub fn format(&self, a: &RingElem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in a.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&m.format(&self.vars));
            } else {
                out.push_str(&format!("{}*{}", abs, m.format(&self.vars)));
            }
        }
        out
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut t = a.0.clone();
        for (m, c) in &b.0 {
            let e = t.entry(*m).or_insert_with(|| self.field.zero());
            *e = &*e + c;
            if e.is_zero() {
                t.remove(m);
            }
        }
        RingElem(t)
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem(a.0.iter().map(|(m, c)| (*m, -c)).collect())
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &RingElem, c: &Scalar) -> RingElem {
        if c.is_zero() {
            return self.zero();
        }
        RingElem(a.0.iter().map(|(m, x)| (*m, x * c)).collect())
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut t: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (m1, c1) in &a.0 {
            for (m2, c2) in &b.0 {
                let m = m1.mul(m2);
                if self.in_ideal(&m) {
                    continue;
                }
                let e = t.entry(m).or_insert_with(|| self.field.zero());
                *e = &*e + &(c1 * c2);
            }
        }
        t.retain(|_, c| !c.is_zero());
        RingElem(t)
    }

    pub fn mul_mono(&self, a: &RingElem, m: &Mono) -> RingElem {
        let mut t = BTreeMap::new();
        for (m1, c) in &a.0 {
            let p = m1.mul(m);
            if !self.in_ideal(&p) {
                t.insert(p, c.clone());
            }
        }
        RingElem(t)
    }

    pub fn pow(&self, a: &RingElem, k: u32) -> RingElem {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn constant_term(&self, a: &RingElem) -> Scalar {
        a.0.get(&Mono::ONE).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// True iff the constant term is nonzero.
    pub fn is_unit(&self, a: &RingElem) -> bool {
        !self.constant_term(a).is_zero()
    }

    pub fn in_max_ideal(&self, a: &RingElem) -> bool {
        !self.is_unit(a)
    }

    /// Inverse by the geometric series. On the graded backend the series is
    /// truncated at the window, which is exact for all computations inside it.
    pub fn inverse(&self, a: &RingElem) -> Option<RingElem> {
        let c = self.constant_term(a);
        if c.is_zero() {
            return None;
        }
        let ci = c.inv();
        // a = c (1 - n) with n in the maximal ideal
        let n = self.neg(&self.scale(&self.sub(a, &self.constant(c.clone())), &ci));
        let cap = self.window().unwrap_or(u32::MAX);
        let mut sum = self.one();
        let mut p = self.one();
        loop {
            p = self.truncate(&self.mul(&p, &n), cap);
            if p.is_zero() {
                break;
            }
            sum = self.add(&sum, &p);
        }
        Some(self.scale(&sum, &ci))
    }

    fn truncate(&self, a: &RingElem, cap: u32) -> RingElem {
        RingElem(a.0.iter().filter(|(m, _)| m.deg() <= cap).map(|(m, c)| (*m, c.clone())).collect())
    }

    /// Coordinates in the monomial basis. Monomials outside the basis
    /// (graded backend, beyond the window) are dropped.
    pub fn coords(&self, a: &RingElem) -> SVec {
        let mut v: SVec = a.0.iter().filter_map(|(m, c)| self.index_of(m).map(|i| (i, c.clone()))).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    pub fn from_coords(&self, v: &SVec) -> RingElem {
        RingElem(v.iter().map(|(i, c)| (self.basis[*i], c.clone())).collect())
    }

    /// Matrix of multiplication by `a` on the monomial basis.
    pub fn mult_matrix(&self, a: &RingElem) -> KMat {
        let n = self.dim();
        let mut m = KMat::zeros(n, n, self.field);
        for (j, b) in self.basis.iter().enumerate() {
            for (ma, c) in &a.0 {
                let p = ma.mul(b);
                if let Some(i) = self.index_of(&p) {
                    m.add_at(i, j, c);
                }
            }
        }
        m
    }

    /// Random element; restricted to the maximal ideal when `in_m` holds.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, in_m: bool) -> RingElem {
        let mut t = BTreeMap::new();
        for m in &self.basis {
            if in_m && m.is_one() {
                continue;
            }
            let c = self.field.random(rng);
            if !c.is_zero() {
                t.insert(*m, c);
            }
        }
        RingElem(t)
    }

    /// k-basis of the socle `(0 : m)`.
    pub fn socle(&self) -> Result<Vec<RingElem>> {
        self.require_artinian("socle")?;
        let n = self.dim();
        let mut rows = Vec::new();
        for v in 0..self.nvars() {
            let m = self.mult_matrix(&self.var(v));
            rows.extend(m.row_vecs());
        }
        let e = Echelon::from_rows(n, &rows);
        Ok(e.kernel(self.field).iter().map(|v| self.from_coords(v)).collect())
    }

    pub fn is_gorenstein_artinian(&self) -> Result<bool> {
        Ok(self.socle()?.len() == 1)
    }

    /// Monomial generating the socle, when the algebra is Gorenstein.
    pub fn socle_monomial(&self) -> Option<Mono> {
        let s = self.socle().ok()?;
        if s.len() != 1 || s[0].0.len() != 1 {
            return None;
        }
        s[0].0.keys().next().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kx2() -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap()
    }

    fn kxy22() -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x^2", "y^2"], Backend::Artinian).unwrap()
    }

    #[test]
    fn normal_form_drops_ideal_monomials() {
        let a = kx2();
        assert_eq!(a.format(&a.parse("x^2 + x + 1").unwrap()), "x + 1");
        let b = kxy22();
        assert_eq!(b.format(&b.parse("x*y").unwrap()), "x*y");
        let c = LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x*y"], Backend::Graded { window: 6 })
            .unwrap();
        assert!(c.parse("x^3*y").unwrap().is_zero());
    }

    #[test]
    fn units_and_inverses() {
        let a = kx2();
        let u = a.parse("1 + x").unwrap();
        assert!(a.is_unit(&u));
        assert_eq!(a.format(&a.inverse(&u).unwrap()), "-x + 1");
        assert!(!a.is_unit(&a.var(0)));
        let f = Field::prime(5).unwrap();
        let b = LocalAlgebra::with_relations(f, &["x", "y"], &["x^2", "y^2"], Backend::Artinian).unwrap();
        assert_eq!(b.format(&b.inverse(&b.from_i64(2)).unwrap()), "-2");
    }

    #[test]
    fn basis_order_and_dimension() {
        let b = kxy22();
        let names: Vec<String> = b.basis().iter().map(|m| m.format(b.var_names())).collect();
        assert_eq!(names, ["1", "x", "y", "x*y"]);
    }

    #[test]
    fn socles() {
        let a = kx2();
        assert_eq!(a.socle().unwrap(), vec![a.var(0)]);
        let b = kxy22();
        let s = b.socle().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(b.format(&s[0]), "x*y");
        let c =
            LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x^2", "x*y", "y^2"], Backend::Artinian)
                .unwrap();
        assert_eq!(c.socle().unwrap().len(), 2);
        assert!(!c.is_gorenstein_artinian().unwrap());
        let d = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^3"], Backend::Artinian).unwrap();
        assert!(d.is_gorenstein_artinian().unwrap());
    }

    #[test]
    fn artinian_needs_pure_powers() {
        let e = LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x^2", "x*y"], Backend::Artinian);
        assert!(e.is_err());
    }

    #[test]
    fn graded_socle_unsupported() {
        let g = LocalAlgebra::with_relations(Field::Rationals, &["x"], &[], Backend::Graded { window: 4 }).unwrap();
        assert!(matches!(g.socle(), Err(Error::UnsupportedBackend(_))));
        assert_eq!(g.dim(), 5);
    }
}
