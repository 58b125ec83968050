//! Bounded cochain complexes of finite free modules over a local algebra.

mod cohomology;
mod map;
mod module;
mod ops;

use std::collections::BTreeMap;

pub use cohomology::{cohomology, graded_cohomology_dims, Cohomology};
pub use map::{ChainMap, Homotopy, Provenance, Triangle};
pub use module::{FinModule, ModChainMap, ModComplex};
pub use ops::{
    cone, cone_scale_map, cone_triangle, dual, dual_dual_witness, dual_map, dual_shift_witness, hom_complex,
    hom_element_to_maps, hom_layout, hom_maps_to_element, verify_cone_scale_diagram, HomBlock,
};
#[allow(unused_imports)]
pub(crate) use cohomology::{graded_matrix, graded_piece};

use crate::algebra::{LocalAlgebra, Ring};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A free module `A^rank`, with generator degrees on the graded backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeModule {
    pub rank: usize,
    pub degrees: Option<Vec<i64>>,
}

impl FreeModule {
    pub fn new(rank: usize) -> Self {
        FreeModule { rank, degrees: None }
    }

    pub fn graded(degrees: Vec<i64>) -> Self {
        FreeModule { rank: degrees.len(), degrees: Some(degrees) }
    }

    /// The rank-`n` module with all generators in degree 0 when `ring` is graded.
    pub fn for_ring(ring: &LocalAlgebra, n: usize) -> Self {
        if ring.is_artinian() {
            FreeModule::new(n)
        } else {
            FreeModule::graded(vec![0; n])
        }
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.degrees.as_ref().map(|d| d[g]).unwrap_or(0)
    }

    pub fn twist(&self, delta: i64) -> FreeModule {
        FreeModule { rank: self.rank, degrees: self.degrees.as_ref().map(|d| d.iter().map(|x| x + delta).collect()) }
    }

    pub fn sum(parts: &[&FreeModule]) -> FreeModule {
        let rank = parts.iter().map(|p| p.rank).sum();
        let degrees = if parts.iter().all(|p| p.degrees.is_some()) && !parts.is_empty() {
            Some(parts.iter().flat_map(|p| p.degrees.clone().unwrap()).collect())
        } else if parts.iter().any(|p| p.degrees.is_some()) {
            Some(parts.iter().flat_map(|p| (0..p.rank).map(|g| p.degree(g)).collect::<Vec<_>>()).collect())
        } else {
            None
        };
        FreeModule { rank, degrees }
    }
}

/// Outcome of checking `d^{i+1} d^i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Violation { index: i64, row: usize, col: usize, entry: String },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

/// Cohomologically indexed complex; `diffs[k]` maps term `lo+k` to `lo+k+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    lo: i64,
    terms: Vec<FreeModule>,
    diffs: Vec<Matrix>,
}

impl Complex {
    /// Builds a complex and requires `d^2 = 0`.
    pub fn new(ring: &Ring, terms: BTreeMap<i64, FreeModule>, diffs: BTreeMap<i64, Matrix>) -> Result<Complex> {
        let c = Complex::from_parts(ring, terms, diffs)?;
        match c.validate() {
            Validation::Ok => Ok(c),
            Validation::Violation { index, row, col, entry } => Err(Error::Invalid(format!(
                "d^{}.d^{} is nonzero at ({row}, {col}): {entry}",
                index + 1,
                index
            ))),
        }
    }

    /// Builds a complex checking shapes and homogeneity only.
    pub fn from_parts(ring: &Ring, terms: BTreeMap<i64, FreeModule>, diffs: BTreeMap<i64, Matrix>) -> Result<Complex> {
        let nonzero: Vec<i64> = terms.iter().filter(|(_, m)| m.rank > 0).map(|(i, _)| *i).collect();
        let graded = !ring.is_artinian();
        for (i, m) in &terms {
            match (&m.degrees, graded) {
                (None, true) if m.rank > 0 => {
                    return Err(Error::Invalid(format!("term {i} needs generator degrees on the graded backend")))
                }
                (Some(d), _) if d.len() != m.rank => {
                    return Err(Error::Shape(format!("term {i}: {} degrees for rank {}", d.len(), m.rank)))
                }
                (Some(_), false) => return Err(Error::Invalid(format!("term {i}: degrees given on the Artinian backend"))),
                _ => {}
            }
        }
        let rank = |i: i64| terms.get(&i).map(|m| m.rank).unwrap_or(0);
        for (i, d) in &diffs {
            if d.shape() != (rank(i + 1), rank(*i)) {
                return Err(Error::Shape(format!(
                    "d^{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    rank(i + 1),
                    rank(*i)
                )));
            }
        }
        let (lo, hi) = match (nonzero.first(), nonzero.last()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => return Ok(Complex::zero(ring)),
        };
        let zero_mod = |_: i64| if graded { FreeModule::graded(vec![]) } else { FreeModule::new(0) };
        let mut ts = Vec::new();
        let mut ds = Vec::new();
        for i in lo..=hi {
            ts.push(terms.get(&i).cloned().filter(|m| m.rank > 0).unwrap_or_else(|| zero_mod(i)));
            if i < hi {
                ds.push(diffs.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(rank(i + 1), rank(i))));
            }
        }
        for (i, d) in &diffs {
            if (*i < lo || *i >= hi) && !d.is_zero() {
                return Err(Error::Shape(format!("d^{i} is nonzero outside the support")));
            }
        }
        let c = Complex { ring: ring.clone(), lo, terms: ts, diffs: ds };
        if graded {
            for i in lo..hi {
                c.check_homogeneous(&c.diffs[(i - lo) as usize], i, i + 1, 0, &c, &format!("d^{i}"))?;
            }
        }
        Ok(c)
    }

    pub(crate) fn check_homogeneous(
        &self,
        m: &Matrix,
        src: i64,
        tgt: i64,
        delta: i64,
        target: &Complex,
        what: &str,
    ) -> Result<()> {
        if self.ring.is_artinian() {
            return Ok(());
        }
        for (r, c, a) in m.nonzero() {
            let want = self.gen_degree(src, c) - target.gen_degree(tgt, r) + delta;
            match a.homogeneous_degree() {
                Some(d) if d as i64 == want => {}
                _ => {
                    return Err(Error::Invalid(format!(
                        "{what}: entry ({r}, {c}) = {} is not homogeneous of degree {want}",
                        self.ring.format(a)
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn zero(ring: &Ring) -> Complex {
        Complex { ring: ring.clone(), lo: 0, terms: vec![], diffs: vec![] }
    }

    /// `A` placed in cohomological degree `i`.
    pub fn stalk(ring: &Ring, i: i64) -> Complex {
        Complex { ring: ring.clone(), lo: i, terms: vec![FreeModule::for_ring(ring, 1)], diffs: vec![] }
    }

    /// `A --a--> A` in degrees `lo, lo+1`; on the graded backend the target
    /// generator sits in degree 0.
    pub fn two_term(ring: &Ring, lo: i64, a: &crate::algebra::RingElem) -> Result<Complex> {
        let deg = a.homogeneous_degree().unwrap_or(0) as i64;
        let src = if ring.is_artinian() { FreeModule::new(1) } else { FreeModule::graded(vec![deg]) };
        let tgt = FreeModule::for_ring(ring, 1);
        Complex::new(
            ring,
            BTreeMap::from([(lo, src), (lo + 1, tgt)]),
            BTreeMap::from([(lo, Matrix::from_rows(vec![vec![a.clone()]], 1))]),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_graded(&self) -> bool {
        !self.ring.is_artinian()
    }

    /// Lowest and highest nonzero degree.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.terms.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.terms.len() as i64 - 1))
        }
    }

    /// Degrees `lo..=hi`, empty for the zero complex.
    #[allow(clippy::reversed_empty_ranges)]
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        match self.support() {
            Some((a, b)) => a..=b,
            None => 1..=0,
        }
    }

    fn slot(&self, i: i64) -> Option<usize> {
        let (a, b) = self.support()?;
        (a..=b).contains(&i).then(|| (i - a) as usize)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.slot(i).map(|k| self.terms[k].rank).unwrap_or(0)
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.indices().map(|i| (i, self.rank(i))).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(|m| m.rank).sum()
    }

    pub fn module(&self, i: i64) -> FreeModule {
        match self.slot(i) {
            Some(k) => self.terms[k].clone(),
            None => FreeModule::for_ring(&self.ring, 0),
        }
    }

    pub fn gen_degree(&self, i: i64, g: usize) -> i64 {
        self.slot(i).map(|k| self.terms[k].degree(g)).unwrap_or(0)
    }

    /// `d^i : X^i -> X^{i+1}`, a zero matrix of the right shape outside the support.
    pub fn d(&self, i: i64) -> Matrix {
        match self.slot(i) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => Matrix::zeros(self.rank(i + 1), self.rank(i)),
        }
    }

    pub fn terms_map(&self) -> BTreeMap<i64, FreeModule> {
        self.indices().map(|i| (i, self.module(i))).collect()
    }

    pub fn diffs_map(&self) -> BTreeMap<i64, Matrix> {
        self.indices().filter(|i| self.rank(*i) > 0 && self.rank(i + 1) > 0).map(|i| (i, self.d(i))).collect()
    }

    /// Checks `d^{i+1} d^i = 0`, reporting the first failing index.
    pub fn validate(&self) -> Validation {
        for i in self.indices() {
            let p = self.d(i + 1).mul(&self.d(i), &self.ring);
            let hit = p.nonzero().next().map(|(r, c, a)| (r, c, self.ring.format(a)));
            if let Some((row, col, entry)) = hit {
                return Validation::Violation { index: i, row, col, entry };
            }
        }
        Validation::Ok
    }

    /// Every differential entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.diffs.iter().all(|d| d.is_minimal(&self.ring))
    }

    /// `X[m]^i = X^{i+m}` with differential `(-1)^m d^{i+m}`.
    pub fn shift(&self, m: i64) -> Complex {
        let r = &self.ring;
        let diffs = if m % 2 == 0 { self.diffs.clone() } else { self.diffs.iter().map(|d| d.neg(r)).collect() };
        Complex { ring: r.clone(), lo: self.lo - m, terms: self.terms.clone(), diffs }
    }

    /// Adds `delta` to every generator degree (graded backend only).
    pub fn twist(&self, delta: i64) -> Complex {
        Complex {
            ring: self.ring.clone(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.twist(delta)).collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// Degreewise direct sum, summands in the given order.
    pub fn direct_sum(parts: &[&Complex]) -> Result<Complex> {
        let ring = match parts.first() {
            Some(p) => p.ring.clone(),
            None => return Err(Error::Invalid("empty direct sum".into())),
        };
        if parts.iter().any(|p| p.ring != ring) {
            return Err(Error::RingMismatch);
        }
        let lo = parts.iter().filter_map(|p| p.support()).map(|s| s.0).min();
        let hi = parts.iter().filter_map(|p| p.support()).map(|s| s.1).max();
        let (lo, hi) = match (lo, hi) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Complex::zero(&ring)),
        };
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for i in lo..=hi {
            let ms: Vec<FreeModule> = parts.iter().map(|p| p.module(i)).collect();
            terms.insert(i, FreeModule::sum(&ms.iter().collect::<Vec<_>>()));
            let ds: Vec<Matrix> = parts.iter().map(|p| p.d(i)).collect();
            diffs.insert(i, Matrix::block_diag(&ds.iter().collect::<Vec<_>>()));
        }
        Complex::from_parts(&ring, terms, diffs)
    }

    pub fn direct_sum2(a: &Complex, b: &Complex) -> Result<Complex> {
        Complex::direct_sum(&[a, b])
    }

    /// Lowest generator degree across all terms (graded backend).
    pub fn min_gen_degree(&self) -> Option<i64> {
        self.terms.iter().flat_map(|t| t.degrees.iter().flatten().copied()).min()
    }

    pub fn max_gen_degree(&self) -> Option<i64> {
        self.terms.iter().flat_map(|t| t.degrees.iter().flatten().copied()).max()
    }

    /// Restriction to the degrees in `keep` (a quotient or sub complex only
    /// when the caller guarantees it); used for brutal truncations.
    pub fn restrict(&self, keep: std::ops::RangeInclusive<i64>) -> Complex {
        let terms = self.indices().filter(|i| keep.contains(i)).map(|i| (i, self.module(i))).collect();
        let diffs = self
            .indices()
            .filter(|i| keep.contains(i) && keep.contains(&(i + 1)))
            .map(|i| (i, self.d(i)))
            .collect();
        Complex::from_parts(&self.ring, terms, diffs).expect("restriction keeps shapes")
    }
}
