use std::collections::BTreeMap;

use super::Complex;
use crate::algebra::RingElem;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;

/// A chain map `f : U -> V`. On the graded backend `degree` is the internal
/// degree `delta` of the map: entries have degree `src - tgt + delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    pub degree: i64,
    comps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Checked constructor: shapes, homogeneity and `d f = f d`.
    pub fn new(source: &Complex, target: &Complex, comps: BTreeMap<i64, Matrix>) -> Result<ChainMap> {
        let f = ChainMap::from_parts(source, target, comps)?;
        f.check_commutes()?;
        Ok(f)
    }

    /// Shapes and homogeneity only.
    pub fn from_parts(source: &Complex, target: &Complex, comps: BTreeMap<i64, Matrix>) -> Result<ChainMap> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch);
        }
        let mut kept = BTreeMap::new();
        for (i, m) in comps {
            if m.shape() != (target.rank(i), source.rank(i)) {
                return Err(Error::Shape(format!(
                    "component {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
            if !m.is_zero() {
                kept.insert(i, m);
            }
        }
        let mut degree = 0;
        if source.is_graded() {
            if let Some((i, m)) = kept.iter().next() {
                let (r, c, a) = m.nonzero().next().unwrap();
                let d = a
                    .homogeneous_degree()
                    .ok_or_else(|| Error::Invalid(format!("component {i} has an inhomogeneous entry")))?;
                degree = d as i64 - source.gen_degree(*i, c) + target.gen_degree(*i, r);
            }
            for (i, m) in &kept {
                source.check_homogeneous(m, *i, *i, degree, target, &format!("f^{i}"))?;
            }
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), degree, comps: kept })
    }

    /// Zero map of a prescribed internal degree.
    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), degree: 0, comps: BTreeMap::new() }
    }

    pub fn zero_of_degree(source: &Complex, target: &Complex, degree: i64) -> ChainMap {
        ChainMap { degree, ..ChainMap::zero(source, target) }
    }

    pub fn identity(x: &Complex) -> ChainMap {
        let comps = x.indices().map(|i| (i, Matrix::identity(x.rank(i), x.ring()))).collect();
        ChainMap::from_parts(x, x, comps).expect("identity has the right shape")
    }

    /// `a` times the identity.
    pub fn scalar(x: &Complex, a: &RingElem) -> ChainMap {
        let comps = x.indices().map(|i| (i, Matrix::scalar(x.rank(i), a))).collect();
        let mut f = ChainMap::from_parts(x, x, comps).expect("scalar map has the right shape");
        if f.comps.is_empty() {
            f.degree = a.homogeneous_degree().unwrap_or(0) as i64;
        }
        f
    }

    pub fn comp(&self, i: i64) -> Matrix {
        self.comps.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(self.target.rank(i), self.source.rank(i)))
    }

    pub fn comps(&self) -> &BTreeMap<i64, Matrix> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Checks `d_V f^i = f^{i+1} d_U` for every `i`.
    pub fn check_commutes(&self) -> Result<()> {
        let r = self.source.ring();
        let lo = self.source.indices().start().min(self.target.indices().start()) - 1;
        let hi = self.source.indices().end().max(self.target.indices().end()) + 1;
        for i in lo..=hi {
            let a = self.target.d(i).mul(&self.comp(i), r);
            let b = self.comp(i + 1).mul(&self.source.d(i), r);
            if a != b {
                return Err(Error::Invalid(format!("not a chain map: square at degree {i} does not commute")));
            }
        }
        Ok(())
    }

    /// `self . g`
    pub fn compose(&self, g: &ChainMap) -> ChainMap {
        assert_eq!(g.target, self.source, "composition of incompatible maps");
        let r = self.source.ring();
        let comps = g
            .comps
            .iter()
            .filter_map(|(i, m)| self.comps.get(i).map(|n| (*i, n.mul(m, r))))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap { source: g.source.clone(), target: self.target.clone(), degree: self.degree + g.degree, comps }
    }

    fn combine(&self, o: &ChainMap, sign: bool) -> ChainMap {
        assert!(self.source == o.source && self.target == o.target, "sum of maps with different ends");
        let r = self.source.ring();
        let mut comps = self.comps.clone();
        for (i, m) in &o.comps {
            let cur = comps.remove(i).unwrap_or_else(|| Matrix::zeros(m.rows(), m.cols()));
            let s = if sign { cur.sub(m, r) } else { cur.add(m, r) };
            if !s.is_zero() {
                comps.insert(*i, s);
            }
        }
        let degree = if self.is_zero() { o.degree } else { self.degree };
        ChainMap { source: self.source.clone(), target: self.target.clone(), degree, comps }
    }

    pub fn add(&self, o: &ChainMap) -> ChainMap {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &ChainMap) -> ChainMap {
        self.combine(o, true)
    }

    pub fn neg(&self) -> ChainMap {
        let r = self.source.ring();
        ChainMap { comps: self.comps.iter().map(|(i, m)| (*i, m.neg(r))).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        let r = self.source.ring();
        let comps = self.comps.iter().map(|(i, m)| (*i, m.scale(c, r))).filter(|(_, m)| !m.is_zero()).collect();
        ChainMap { comps, ..self.clone() }
    }

    /// Multiplies by a ring element (homogeneous on the graded backend).
    pub fn times(&self, a: &RingElem) -> ChainMap {
        let r = self.source.ring();
        let comps = self.comps.iter().map(|(i, m)| (*i, m.times(a, r))).filter(|(_, m)| !m.is_zero()).collect();
        let degree = self.degree + a.homogeneous_degree().unwrap_or(0) as i64;
        ChainMap { comps, degree, ..self.clone() }
    }

    /// `f[m]^i = f^{i+m}`.
    pub fn shift(&self, m: i64) -> ChainMap {
        ChainMap {
            source: self.source.shift(m),
            target: self.target.shift(m),
            degree: self.degree,
            comps: self.comps.iter().map(|(i, x)| (i - m, x.clone())).collect(),
        }
    }

    /// Replaces the ends by complexes with the same terms and differentials
    /// up to generator degrees (used after twisting).
    pub fn with_ends(&self, source: &Complex, target: &Complex) -> Result<ChainMap> {
        ChainMap::from_parts(source, target, self.comps.clone())
    }

    /// `f (+) g : U (+) U' -> V (+) V'`.
    pub fn direct_sum(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
        let s = Complex::direct_sum2(&f.source, &g.source)?;
        let t = Complex::direct_sum2(&f.target, &g.target)?;
        let comps = s.indices().map(|i| (i, Matrix::block_diag(&[&f.comp(i), &g.comp(i)]))).collect();
        ChainMap::from_parts(&s, &t, comps)
    }

    /// Each component is invertible over `A`.
    pub fn is_termwise_invertible(&self) -> bool {
        let r = self.source.ring();
        let lo = *self.source.indices().start().min(self.target.indices().start());
        let hi = *self.source.indices().end().max(self.target.indices().end());
        (lo..=hi).all(|i| {
            self.source.rank(i) == self.target.rank(i) && (self.source.rank(i) == 0 || self.comp(i).inverse(r).is_some())
        })
    }

    /// Termwise inverse, when every component is invertible.
    pub fn termwise_inverse(&self) -> Option<ChainMap> {
        if !self.is_termwise_invertible() {
            return None;
        }
        let r = self.source.ring();
        let comps = self.target.indices().map(|i| (i, self.comp(i).inverse(r).unwrap())).collect();
        let mut inv = ChainMap::from_parts(&self.target, &self.source, comps).ok()?;
        inv.degree = -self.degree;
        Some(inv)
    }
}

/// Components `s^i : U^i -> V^{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Homotopy {
    pub comps: BTreeMap<i64, Matrix>,
}

impl Homotopy {
    pub fn comp(&self, i: i64, source: &Complex, target: &Complex) -> Matrix {
        self.comps.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(target.rank(i - 1), source.rank(i)))
    }

    /// The map `d s + s d : U -> V`.
    pub fn boundary(&self, source: &Complex, target: &Complex, degree: i64) -> ChainMap {
        let r = source.ring();
        let mut comps = BTreeMap::new();
        for i in source.indices() {
            let a = target.d(i - 1).mul(&self.comp(i, source, target), r);
            let b = self.comp(i + 1, source, target).mul(&source.d(i), r);
            comps.insert(i, a.add(&b, r));
        }
        let mut f = ChainMap::from_parts(source, target, comps).expect("homotopy shapes");
        if f.is_zero() {
            f.degree = degree;
        }
        f
    }

    /// Certifies `f = d s + s d` exactly.
    pub fn witnesses(&self, f: &ChainMap) -> bool {
        let b = self.boundary(&f.source, &f.target, f.degree);
        b.comps == f.comps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    StrictCone,
    Claimed,
}

/// `U --u--> W --w--> V --v--> U[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub u: ChainMap,
    pub w: ChainMap,
    pub v: ChainMap,
    pub provenance: Provenance,
}

impl Triangle {
    pub fn new(u: ChainMap, w: ChainMap, v: ChainMap, provenance: Provenance) -> Result<Triangle> {
        if u.target != w.source || w.target != v.source {
            return Err(Error::Invalid("triangle maps do not compose".into()));
        }
        if v.target.terms_map() != u.source.shift(1).terms_map() || v.target.diffs_map() != u.source.shift(1).diffs_map() {
            return Err(Error::Invalid("last map of a triangle must land in U[1]".into()));
        }
        Ok(Triangle { u, w, v, provenance })
    }

    pub fn first(&self) -> &Complex {
        &self.u.source
    }

    pub fn middle(&self) -> &Complex {
        &self.u.target
    }

    pub fn last(&self) -> &Complex {
        &self.w.target
    }

    /// Rotation `W -> V -> U[1] -> W[1]` with third map `-u[1]`.
    pub fn rotate(&self) -> Result<Triangle> {
        Triangle::new(self.w.clone(), self.v.clone(), self.u.shift(1).neg(), Provenance::Claimed)
    }

    /// Rotation `V[-1] -> U -> W -> V` with first map `-v[-1]`.
    pub fn rotate_back(&self) -> Result<Triangle> {
        let first = self.v.shift(-1).neg().with_ends(&self.last().shift(-1), self.first())?;
        Triangle::new(first, self.u.clone(), self.w.clone(), Provenance::Claimed)
    }
}
