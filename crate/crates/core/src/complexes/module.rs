//! Complexes of finite-length modules, given as k-spaces with a variable
//! action. These carry Matlis duals of free complexes.

use std::collections::BTreeMap;

use super::{Complex, FreeModule};
use crate::algebra::{LocalAlgebra, Mono, Ring, RingElem};
use crate::error::{Error, Result};
use crate::linalg::{sv_unit, Coordinates, Echelon, KMat, SVec};
use crate::matrix::Matrix;

/// A finite-length module: a k-space with one action matrix per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinModule {
    pub dim: usize,
    pub action: Vec<KMat>,
}

impl FinModule {
    pub fn zero(ring: &LocalAlgebra) -> FinModule {
        FinModule { dim: 0, action: (0..ring.nvars()).map(|_| KMat::zeros(0, 0, ring.field())).collect() }
    }

    /// `A^rank` on the basis `(g, b) |-> g * dim A + b`.
    pub fn free(ring: &LocalAlgebra, rank: usize) -> FinModule {
        let action = (0..ring.nvars())
            .map(|v| {
                let m = ring.mult_matrix(&ring.var(v));
                KMat::block_diag(&vec![&m; rank], ring.field())
            })
            .collect();
        FinModule { dim: rank * ring.dim(), action }
    }

    /// The residue field `k`.
    pub fn residue(ring: &LocalAlgebra) -> FinModule {
        FinModule { dim: 1, action: (0..ring.nvars()).map(|_| KMat::zeros(1, 1, ring.field())).collect() }
    }

    /// Contragredient: the k-dual with transposed action.
    pub fn dual(&self) -> FinModule {
        FinModule { dim: self.dim, action: self.action.iter().map(|m| m.transpose()).collect() }
    }

    pub fn sum(ring: &LocalAlgebra, parts: &[&FinModule]) -> FinModule {
        let dim = parts.iter().map(|p| p.dim).sum();
        let action = (0..ring.nvars())
            .map(|v| KMat::block_diag(&parts.iter().map(|p| &p.action[v]).collect::<Vec<_>>(), ring.field()))
            .collect();
        FinModule { dim, action }
    }

    /// Action of a monomial.
    pub fn mono_action(&self, m: &Mono, ring: &LocalAlgebra) -> KMat {
        let mut out = KMat::identity(self.dim, ring.field());
        for v in 0..ring.nvars() {
            for _ in 0..m.0[v] {
                out = self.action[v].mul(&out);
            }
        }
        out
    }

    pub fn elem_action(&self, a: &RingElem, ring: &LocalAlgebra) -> KMat {
        let mut out = KMat::zeros(self.dim, self.dim, ring.field());
        for (m, c) in a.terms() {
            out = out.add(&self.mono_action(m, ring).scale(c));
        }
        out
    }

    /// Checks that the actions commute and that the relations act as zero.
    pub fn verify(&self, ring: &LocalAlgebra) -> Result<()> {
        for a in &self.action {
            if a.rows != self.dim || a.cols != self.dim {
                return Err(Error::Shape("action matrix has the wrong size".into()));
            }
        }
        for (i, a) in self.action.iter().enumerate() {
            for b in &self.action[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Invalid("variable actions do not commute".into()));
                }
            }
        }
        for rel in ring.relations() {
            if !self.mono_action(rel, ring).is_zero() {
                return Err(Error::Invalid("a relation acts nontrivially".into()));
            }
        }
        Ok(())
    }

    /// Span of `m M`.
    pub fn radical_span(&self) -> Echelon {
        let mut e = Echelon::new(self.dim);
        for a in &self.action {
            for c in a.col_vecs() {
                e.insert(&c);
            }
        }
        e
    }

    /// Basis vectors of `M` whose classes form a basis of `M / m M`.
    pub fn minimal_generators(&self) -> Vec<SVec> {
        let mut e = self.radical_span();
        let f = self.action.first().map(|a| a.field);
        let mut out = Vec::new();
        for i in 0..self.dim {
            let u = sv_unit(i, f.unwrap_or(crate::field::Field::Rationals));
            if e.insert(&u) {
                out.push(u);
            }
        }
        out
    }

    /// For generators `g_t`, the k-matrix `A^s -> M`, `(t, b) |-> b . g_t`.
    pub fn generator_map(&self, gens: &[SVec], ring: &LocalAlgebra) -> KMat {
        let n = ring.dim();
        let mut cols = Vec::with_capacity(gens.len() * n);
        let acts: Vec<KMat> = ring.basis().iter().map(|b| self.mono_action(b, ring)).collect();
        for g in gens {
            for a in &acts {
                cols.push(a.apply(g));
            }
        }
        KMat::from_cols(self.dim, &cols, ring.field())
    }
}

impl FinModule {
    /// Echelon basis of the A-submodule generated by `gens`.
    pub fn submodule(&self, gens: &[SVec]) -> Echelon {
        let mut e = Echelon::new(self.dim);
        let mut todo: Vec<SVec> = gens.to_vec();
        while let Some(v) = todo.pop() {
            if e.insert(&v) {
                for a in &self.action {
                    todo.push(a.apply(&v));
                }
            }
        }
        e
    }

    /// `M / N` for an A-submodule `N` given by generators, with the
    /// projection `M -> M / N`.
    pub fn quotient(&self, gens: &[SVec], field: crate::field::Field) -> (FinModule, KMat) {
        let sub = self.submodule(gens);
        let mut e = sub.clone();
        let comp: Vec<usize> = (0..self.dim).filter(|i| e.insert(&sv_unit(*i, field))).collect();
        let mut all: Vec<SVec> = comp.iter().map(|i| sv_unit(*i, field)).collect();
        all.extend(sub.rows().iter().cloned());
        let coords = Coordinates::new(self.dim, &all, field);
        let q = comp.len();
        let project = |v: &SVec| -> SVec {
            coords.express(v).expect("basis spans").into_iter().filter(|(k, _)| *k < q).collect()
        };
        let proj_cols: Vec<SVec> = (0..self.dim).map(|i| project(&sv_unit(i, field))).collect();
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols: Vec<SVec> = comp.iter().map(|i| project(&a.col(*i))).collect();
                KMat::from_cols(q, &cols, field)
            })
            .collect();
        (FinModule { dim: q, action }, KMat::from_cols(q, &proj_cols, field))
    }
}

/// A complex of finite-length modules with k-linear A-equivariant differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModComplex {
    ring: Ring,
    lo: i64,
    terms: Vec<FinModule>,
    diffs: Vec<KMat>,
}

impl ModComplex {
    pub fn new(ring: &Ring, terms: BTreeMap<i64, FinModule>, diffs: BTreeMap<i64, KMat>) -> Result<ModComplex> {
        ring.require_artinian("complexes of finite-length modules")?;
        let nz: Vec<i64> = terms.iter().filter(|(_, m)| m.dim > 0).map(|(i, _)| *i).collect();
        let (lo, hi) = match (nz.first(), nz.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Ok(ModComplex { ring: ring.clone(), lo: 0, terms: vec![], diffs: vec![] }),
        };
        let dim = |i: i64| terms.get(&i).map(|m| m.dim).unwrap_or(0);
        for (i, d) in &diffs {
            if (d.rows, d.cols) != (dim(i + 1), dim(*i)) {
                return Err(Error::Shape(format!("d^{i} has the wrong size")));
            }
        }
        let mut ts = Vec::new();
        let mut ds = Vec::new();
        for i in lo..=hi {
            let m = terms.get(&i).cloned().unwrap_or_else(|| FinModule::zero(ring));
            m.verify(ring)?;
            ts.push(m);
            if i < hi {
                ds.push(diffs.get(&i).cloned().unwrap_or_else(|| KMat::zeros(dim(i + 1), dim(i), ring.field())));
            }
        }
        let c = ModComplex { ring: ring.clone(), lo, terms: ts, diffs: ds };
        c.validate()?;
        Ok(c)
    }

    /// `A^r` terms expanded over the monomial basis.
    pub fn from_free(x: &Complex) -> Result<ModComplex> {
        let r = x.ring();
        r.require_artinian("k-expansion")?;
        let terms = x.indices().map(|i| (i, FinModule::free(r, x.rank(i)))).collect();
        let diffs = x.indices().map(|i| (i, x.d(i).expand(r))).collect();
        ModComplex::new(r, terms, diffs)
    }

    pub fn stalk(ring: &Ring, m: FinModule, i: i64) -> Result<ModComplex> {
        ModComplex::new(ring, BTreeMap::from([(i, m)]), BTreeMap::new())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        (!self.terms.is_empty()).then(|| (self.lo, self.lo + self.terms.len() as i64 - 1))
    }

    #[allow(clippy::reversed_empty_ranges)]
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        match self.support() {
            Some((a, b)) => a..=b,
            None => 1..=0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn slot(&self, i: i64) -> Option<usize> {
        let (a, b) = self.support()?;
        (a..=b).contains(&i).then(|| (i - a) as usize)
    }

    pub fn dim(&self, i: i64) -> usize {
        self.slot(i).map(|k| self.terms[k].dim).unwrap_or(0)
    }

    pub fn module(&self, i: i64) -> FinModule {
        self.slot(i).map(|k| self.terms[k].clone()).unwrap_or_else(|| FinModule::zero(&self.ring))
    }

    pub fn d(&self, i: i64) -> KMat {
        match self.slot(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => KMat::zeros(self.dim(i + 1), self.dim(i), self.ring.field()),
        }
    }

    pub fn terms_map(&self) -> BTreeMap<i64, FinModule> {
        self.indices().map(|i| (i, self.module(i))).collect()
    }

    pub fn diffs_map(&self) -> BTreeMap<i64, KMat> {
        self.indices().map(|i| (i, self.d(i))).collect()
    }

    /// `d^2 = 0` and every differential commutes with the action.
    pub fn validate(&self) -> Result<()> {
        for i in self.indices() {
            if !self.d(i + 1).mul(&self.d(i)).is_zero() {
                return Err(Error::Invalid(format!("d^{}.d^{i} is nonzero", i + 1)));
            }
            let (s, t) = (self.module(i), self.module(i + 1));
            let d = self.d(i);
            for v in 0..self.ring.nvars() {
                if d.mul(&s.action[v]) != t.action[v].mul(&d) {
                    return Err(Error::Invalid(format!("d^{i} is not A-linear")));
                }
            }
        }
        Ok(())
    }

    pub fn shift(&self, m: i64) -> ModComplex {
        let diffs = if m % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg()).collect() };
        ModComplex { ring: self.ring.clone(), lo: self.lo - m, terms: self.terms.clone(), diffs }
    }

    /// `Hom_A(-, E)`: term `n` is `(M^{-n})*` with differential `-(-1)^n (d^{-n-1})^T`.
    pub fn matlis_dual(&self) -> ModComplex {
        let Some((lo, hi)) = self.support() else { return self.clone() };
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        for n in -hi..=-lo {
            terms.push(self.module(-n).dual());
            if n < -lo {
                let t = self.d(-n - 1).transpose();
                diffs.push(if n % 2 == 0 { t.neg() } else { t });
            }
        }
        ModComplex { ring: self.ring.clone(), lo: -hi, terms, diffs }
    }

    /// The canonical isomorphism `M -> EE(M)`, `(-1)^n` in degree `n`.
    pub fn double_dual_witness(&self) -> Result<ModChainMap> {
        let ee = self.matlis_dual().matlis_dual();
        let f = self.ring.field();
        let comps = self
            .indices()
            .map(|n| (n, KMat::identity(self.dim(n), f).scale(&f.from_i64(if n % 2 == 0 { 1 } else { -1 }))))
            .collect();
        ModChainMap::new(self, &ee, comps)
    }

    pub fn cohomology_dim(&self, i: i64) -> usize {
        let z = self.dim(i) - self.d(i).rank();
        z - self.d(i - 1).rank()
    }

    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.indices().map(|i| (i, self.cohomology_dim(i))).filter(|(_, d)| *d > 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.indices().all(|i| self.cohomology_dim(i) == 0)
    }

    /// Cycles `Z^i` and a basis of `Z^i` modulo `B^i`, as vectors of `M^i`.
    pub fn cycles_mod_boundaries(&self, i: i64) -> (Vec<SVec>, Vec<SVec>) {
        let z = self.d(i).kernel();
        let b: Vec<SVec> = self.d(i - 1).col_vecs();
        let mut e = Echelon::from_rows(self.dim(i), &b);
        let reps = z.iter().filter(|v| e.insert(v)).cloned().collect();
        (z, reps)
    }

    /// `H^i` as a module: a basis of representatives and the induced action.
    pub fn cohomology_module(&self, i: i64) -> FinModule {
        let (_, reps) = self.cycles_mod_boundaries(i);
        let b: Vec<SVec> = self.d(i - 1).col_vecs();
        let mut gens = reps.clone();
        gens.extend(b);
        let coords = Coordinates::new(self.dim(i), &gens, self.ring.field());
        let h = reps.len();
        let m = self.module(i);
        let action = m
            .action
            .iter()
            .map(|a| {
                let cols: Vec<SVec> = reps
                    .iter()
                    .map(|z| {
                        let c = coords.express(&a.apply(z)).expect("action preserves cycles");
                        c.into_iter().filter(|(k, _)| *k < h).collect()
                    })
                    .collect();
                KMat::from_cols(h, &cols, self.ring.field())
            })
            .collect();
        FinModule { dim: h, action }
    }

    /// When every term is free, the same complex written over `A` together
    /// with the isomorphism `from_free(result) -> self`.
    pub fn free_form(&self) -> Option<(Complex, ModChainMap)> {
        let r = &self.ring;
        let n = r.dim();
        let mut bases = BTreeMap::new();
        let mut terms = BTreeMap::new();
        for i in self.indices() {
            let m = self.module(i);
            let gens = m.minimal_generators();
            if gens.len() * n != m.dim {
                return None;
            }
            let p = m.generator_map(&gens, r);
            p.inverse()?;
            terms.insert(i, FreeModule::new(gens.len()));
            bases.insert(i, p);
        }
        let mut diffs = BTreeMap::new();
        for i in self.indices() {
            if self.dim(i + 1) == 0 || self.dim(i) == 0 {
                continue;
            }
            let (ps, pt) = (&bases[&i], &bases[&(i + 1)]);
            let moved = pt.inverse()?.mul(&self.d(i)).mul(ps);
            let (rs, rt) = (self.dim(i) / n, self.dim(i + 1) / n);
            let mut m = Matrix::zeros(rt, rs);
            for g in 0..rs {
                for (k, c) in moved.col(g * n) {
                    let (t, b) = (k / n, k % n);
                    let cur = m.get(t, g).clone();
                    m.set(t, g, r.add(&cur, &r.monomial(r.basis()[b], c)));
                }
            }
            diffs.insert(i, m);
        }
        let x = Complex::new(r, terms, diffs).ok()?;
        let fx = ModComplex::from_free(&x).ok()?;
        let iso = ModChainMap::new(&fx, self, bases).ok()?;
        Some((x, iso))
    }
}

/// An A-linear chain map between complexes of finite-length modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModChainMap {
    pub source: ModComplex,
    pub target: ModComplex,
    comps: BTreeMap<i64, KMat>,
}

impl ModChainMap {
    pub fn new(source: &ModComplex, target: &ModComplex, comps: BTreeMap<i64, KMat>) -> Result<ModChainMap> {
        let f = ModChainMap { source: source.clone(), target: target.clone(), comps };
        f.check()?;
        Ok(f)
    }

    pub fn comp(&self, i: i64) -> KMat {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| KMat::zeros(self.target.dim(i), self.source.dim(i), self.source.ring().field()))
    }

    pub fn comps(&self) -> &BTreeMap<i64, KMat> {
        &self.comps
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for (i, m) in &self.comps {
            if (m.rows, m.cols) != (t.dim(*i), s.dim(*i)) {
                return Err(Error::Shape(format!("component {i} has the wrong size")));
            }
            let (ms, mt) = (s.module(*i), t.module(*i));
            for v in 0..s.ring().nvars() {
                if m.mul(&ms.action[v]) != mt.action[v].mul(m) {
                    return Err(Error::Invalid(format!("component {i} is not A-linear")));
                }
            }
        }
        let lo = s.indices().start().min(t.indices().start()) - 1;
        let hi = s.indices().end().max(t.indices().end()) + 1;
        for i in lo..=hi {
            if t.d(i).mul(&self.comp(i)) != self.comp(i + 1).mul(&s.d(i)) {
                return Err(Error::Invalid(format!("square at degree {i} does not commute")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, g: &ModChainMap) -> ModChainMap {
        let comps = g.source.indices().map(|i| (i, self.comp(i).mul(&g.comp(i)))).collect();
        ModChainMap { source: g.source.clone(), target: self.target.clone(), comps }
    }

    /// The mapping cone over k, same convention as for free complexes.
    pub fn cone(&self) -> Result<ModComplex> {
        let (s, t) = (&self.source, &self.target);
        let r = s.ring();
        let lo = s.indices().start().saturating_sub(1).min(*t.indices().start());
        let hi = (s.indices().end() - 1).max(*t.indices().end());
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            terms.insert(n, FinModule::sum(r, &[&s.module(n + 1), &t.module(n)]));
            let (a, b, c, e) = (s.dim(n + 2), s.dim(n + 1), t.dim(n + 1), t.dim(n));
            let mut d = KMat::zeros(a + c, b + e, r.field());
            d.put(0, 0, &s.d(n + 1).neg());
            d.put(a, 0, &self.comp(n + 1).neg());
            d.put(a, b, &t.d(n));
            diffs.insert(n, d);
        }
        ModComplex::new(r, terms, diffs)
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        Ok(self.cone()?.is_acyclic())
    }

    /// `Hom_A(f, E)`: componentwise `(f^{-n})^T`.
    pub fn matlis_dual(&self) -> Result<ModChainMap> {
        let comps = self.comps.iter().map(|(i, m)| (-i, m.transpose())).collect();
        ModChainMap::new(&self.target.matlis_dual(), &self.source.matlis_dual(), comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Backend;
    use crate::field::Field;

    fn ring(rels: &[&str], vars: &[&str]) -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, vars, rels, Backend::Artinian).unwrap()
    }

    #[test]
    fn cohomology_of_two_term() {
        let r = ring(&["x^2"], &["x"]);
        let x = Complex::two_term(&r, -1, &r.parse("x").unwrap()).unwrap();
        let m = ModComplex::from_free(&x).unwrap();
        assert_eq!(m.cohomology_dim(0), 1);
        assert_eq!(m.cohomology_dim(-1), 1);
        let h = m.cohomology_module(0);
        assert!(h.action[0].is_zero());
    }

    #[test]
    fn matlis_dual_is_involutive() {
        let r = ring(&["x^2"], &["x"]);
        let x = Complex::two_term(&r, -1, &r.parse("x").unwrap()).unwrap();
        let m = ModComplex::from_free(&x).unwrap();
        let e = m.matlis_dual();
        assert_eq!(e.support(), Some((0, 1)));
        assert_eq!(e.dim(0), 2);
        let w = m.double_dual_witness().unwrap();
        assert!(w.is_quasi_iso().unwrap());
    }

    #[test]
    fn gorenstein_dual_has_free_form() {
        let r = ring(&["x^2", "y^2"], &["x", "y"]);
        let a = ModComplex::from_free(&Complex::stalk(&r, 0)).unwrap();
        let (x, iso) = a.matlis_dual().free_form().unwrap();
        assert_eq!(x.ranks(), BTreeMap::from([(0, 1)]));
        assert!(iso.is_quasi_iso().unwrap());
        let s = ring(&["x^2", "x*y", "y^2"], &["x", "y"]);
        let b = ModComplex::from_free(&Complex::stalk(&s, 0)).unwrap();
        assert!(b.matlis_dual().free_form().is_none());
    }
}
