//! Koszul complexes, free resolutions of modules and complexes, and the
//! injective resolutions obtained through Matlis duality.

use std::collections::BTreeMap;

use crate::algebra::{Ring, RingElem};
use crate::complexes::{Complex, FinModule, FreeModule, ModChainMap, ModComplex};
use crate::error::{Error, Result};
use crate::homotopy::minimize;
use crate::linalg::{Echelon, KMat, SVec};
use crate::matrix::Matrix;

/// Subsets of `0..n` of size `p`, in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex on `elems`, in degrees `-n..=0`. The basis of degree `-p`
/// is the `p`-subsets in lexicographic order and
/// `d(e_S) = sum_j (-1)^j a_{s_j} e_{S - s_j}`.
pub fn koszul(ring: &Ring, elems: &[RingElem]) -> Result<Complex> {
    if elems.is_empty() {
        return Err(Error::Invalid("Koszul complex needs at least one element".into()));
    }
    let n = elems.len();
    let graded = !ring.is_artinian();
    let mut degs = Vec::with_capacity(n);
    for a in elems {
        if graded {
            match a.homogeneous_degree() {
                Some(d) => degs.push(d as i64),
                None if a.is_zero() => degs.push(0),
                None => return Err(Error::Invalid(format!("{} is not homogeneous", ring.format(a)))),
            }
        }
    }
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for p in 0..=n {
        let basis = subsets(n, p);
        let module = if graded {
            FreeModule::graded(basis.iter().map(|s| s.iter().map(|i| degs[*i]).sum()).collect())
        } else {
            FreeModule::new(basis.len())
        };
        terms.insert(-(p as i64), module);
        if p > 0 {
            let lower = subsets(n, p - 1);
            let idx: BTreeMap<&Vec<usize>, usize> = lower.iter().enumerate().map(|(k, s)| (s, k)).collect();
            let mut d = Matrix::zeros(lower.len(), basis.len());
            for (c, s) in basis.iter().enumerate() {
                for j in 0..s.len() {
                    let mut t = s.clone();
                    let i = t.remove(j);
                    let a = if j % 2 == 0 { elems[i].clone() } else { ring.neg(&elems[i]) };
                    d.set(idx[&t], c, a);
                }
            }
            diffs.insert(-(p as i64), d);
        }
    }
    Complex::new(ring, terms, diffs)
}

/// Koszul complex on the variables.
pub fn koszul_on_variables(ring: &Ring) -> Result<Complex> {
    let vars: Vec<RingElem> = (0..ring.nvars()).map(|v| ring.var(v)).collect();
    koszul(ring, &vars)
}

/// `coker(A^m --relations--> A^gens)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub ring: Ring,
    pub gens: usize,
    pub degrees: Option<Vec<i64>>,
    /// `gens x m`; the columns are the relations.
    pub relations: Matrix,
}

impl ModulePresentation {
    pub fn new(ring: &Ring, gens: usize, degrees: Option<Vec<i64>>, relations: Matrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::Shape(format!("relation matrix has {} rows for {gens} generators", relations.rows())));
        }
        if degrees.as_ref().is_some_and(|d| d.len() != gens) {
            return Err(Error::Shape("one degree per generator expected".into()));
        }
        Ok(ModulePresentation { ring: ring.clone(), gens, degrees, relations })
    }

    /// `k = A / m`.
    pub fn residue_field(ring: &Ring) -> Self {
        let rel = Matrix::from_rows(vec![(0..ring.nvars()).map(|v| ring.var(v)).collect()], ring.nvars());
        let degrees = (!ring.is_artinian()).then(|| vec![0]);
        ModulePresentation { ring: ring.clone(), gens: 1, degrees, relations: rel }
    }

    pub fn free(ring: &Ring, n: usize) -> Self {
        let degrees = (!ring.is_artinian()).then(|| vec![0; n]);
        ModulePresentation { ring: ring.clone(), gens: n, degrees, relations: Matrix::zeros(n, 0) }
    }

    /// The presented module as a k-space with action.
    pub fn module(&self) -> Result<FinModule> {
        let r = &self.ring;
        r.require_artinian("finite-length modules")?;
        let free = FinModule::free(r, self.gens);
        let n = r.dim();
        let mut gens: Vec<SVec> = Vec::new();
        for j in 0..self.relations.cols() {
            let mut e = Vec::new();
            for t in 0..self.gens {
                for (b, c) in r.coords(self.relations.get(t, j)) {
                    e.push((t * n + b, c));
                }
            }
            gens.push(crate::linalg::sv_from_entries(e));
        }
        Ok(free.quotient(&gens, r.field()).0)
    }
}

/// A bounded-below slice of a free resolution `P -> C`.
#[derive(Clone, Debug)]
pub struct ProjResolution {
    pub complex: Complex,
    /// Quasi-isomorphism `P -> C` when `truncated` is false.
    pub map: ModChainMap,
    /// The lowest degree that was constructed.
    pub low: i64,
    /// More terms would be needed below `low`.
    pub truncated: bool,
}

/// Free resolution of a complex of finite-length modules, built from the top
/// degree down by killing the cohomology of the partial mapping cone. Terms
/// are produced down to degree `inf(support) - bound`; the result is
/// minimized.
pub fn proj_resolution(c: &ModComplex, bound: usize) -> Result<ProjResolution> {
    let r = c.ring();
    let f = r.field();
    let nd = r.dim();
    let Some((lo, hi)) = c.support() else {
        let z = Complex::zero(r);
        let map = ModChainMap::new(&ModComplex::from_free(&z)?, c, BTreeMap::new())?;
        return Ok(ProjResolution { complex: z, map, low: 0, truncated: false });
    };
    let low = lo - bound as i64;
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut dmat: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut dexp: BTreeMap<i64, KMat> = BTreeMap::new();
    let mut phi: BTreeMap<i64, KMat> = BTreeMap::new();
    let rank = |ranks: &BTreeMap<i64, usize>, m: i64| ranks.get(&m).copied().unwrap_or(0);
    let mut n = hi;
    let truncated = loop {
        let r1 = rank(&ranks, n + 1);
        let r2 = rank(&ranks, n + 2);
        let (p1, cn, cn1) = (r1 * nd, c.dim(n), c.dim(n + 1));
        // cycles of the partial cone in degree n: (p, x) with dp = 0, phi(p) = d x
        let mut t = KMat::zeros(r2 * nd + cn1, p1 + cn, f);
        if let Some(d) = dexp.get(&(n + 1)) {
            t.put(0, 0, d);
        }
        if let Some(ph) = phi.get(&(n + 1)) {
            t.put(r2 * nd, 0, ph);
        }
        t.put(r2 * nd, p1, &c.d(n).neg());
        let z = t.kernel();
        let space = FinModule::sum(r, &[&FinModule::free(r, r1), &c.module(n)]);
        let mut small = Echelon::new(p1 + cn);
        for col in c.d(n - 1).col_vecs() {
            small.insert(&col.into_iter().map(|(k, x)| (p1 + k, x)).collect());
        }
        for v in &z {
            for a in &space.action {
                small.insert(&a.apply(v));
            }
        }
        let chosen: Vec<SVec> = z.iter().filter(|v| small.insert(v)).cloned().collect();
        if n < low {
            break !chosen.is_empty();
        }
        let g = chosen.len();
        ranks.insert(n, g);
        let mut dm = Matrix::zeros(r1, g);
        let mut cs: Vec<SVec> = Vec::with_capacity(g);
        for (e, v) in chosen.iter().enumerate() {
            let mut cpart = Vec::new();
            for (k, x) in v {
                if *k < p1 {
                    let (tg, b) = (k / nd, k % nd);
                    let cur = dm.get(tg, e).clone();
                    dm.set(tg, e, r.add(&cur, &r.monomial(r.basis()[b], x.clone())));
                } else {
                    cpart.push((k - p1, x.clone()));
                }
            }
            cs.push(cpart);
        }
        phi.insert(n, c.module(n).generator_map(&cs, r));
        dexp.insert(n, dm.expand(r));
        dmat.insert(n, dm);
        n -= 1;
    };
    let terms: BTreeMap<i64, FreeModule> = ranks.iter().map(|(m, k)| (*m, FreeModule::new(*k))).collect();
    let diffs: BTreeMap<i64, Matrix> = dmat.into_iter().filter(|(m, _)| rank(&ranks, m + 1) > 0).collect();
    let p = Complex::new(r, terms, diffs)?;
    let mm = minimize(&p)?;
    let u = mm.minimal;
    let comps = u
        .indices()
        .map(|m| {
            let ph = phi.get(&m).cloned().unwrap_or_else(|| KMat::zeros(c.dim(m), p.rank(m) * nd, f));
            (m, ph.mul(&mm.from_min.comp(m).expand(r)))
        })
        .collect();
    let map = ModChainMap::new(&ModComplex::from_free(&u)?, c, comps)?;
    if !truncated && !map.is_quasi_iso()? {
        return Err(Error::Internal("resolution map is not a quasi-isomorphism".into()));
    }
    Ok(ProjResolution { complex: u, map, low, truncated })
}

/// `p(C)` for a bounded free complex.
pub fn proj_resolution_of_complex(c: &Complex, bound: usize) -> Result<ProjResolution> {
    proj_resolution(&ModComplex::from_free(c)?, bound)
}

/// Minimal free resolution of a module, degrees `0` down to `-bound`.
#[derive(Clone, Debug)]
pub struct ResolutionSlice {
    pub complex: Complex,
    pub resolved: ModulePresentation,
    pub minimal: bool,
    pub truncated: bool,
    pub bound: usize,
}

impl ResolutionSlice {
    /// Ranks in degrees `0, -1, ..., -bound`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.bound as i64).map(|j| self.complex.rank(-j)).collect()
    }
}

pub fn minimal_resolution(m: &ModulePresentation, bound: i64) -> Result<ResolutionSlice> {
    if bound < 0 {
        return Err(Error::Invalid("resolution bound must be non-negative".into()));
    }
    let r = &m.ring;
    if !r.is_artinian() {
        return Err(Error::UnsupportedBackend("minimal resolutions need the Artinian backend".into()));
    }
    let c = ModComplex::stalk(r, m.module()?, 0)?;
    let res = proj_resolution(&c, bound as usize)?;
    Ok(ResolutionSlice {
        minimal: res.complex.is_minimal(),
        complex: res.complex,
        resolved: m.clone(),
        truncated: res.truncated,
        bound: bound as usize,
    })
}

/// `E(p(E(C)))` with the quasi-isomorphism `C -> E(p(E(C)))`.
#[derive(Clone, Debug)]
pub struct InjResolution {
    pub complex: ModComplex,
    pub map: ModChainMap,
    pub truncated: bool,
}

impl InjResolution {
    /// Exponent `a_n` with term `n` isomorphic to `E^{a_n}`.
    pub fn e_exponents(&self) -> Option<BTreeMap<i64, usize>> {
        let r = self.complex.ring();
        self.complex
            .indices()
            .map(|n| {
                let m = self.complex.module(n).dual();
                let g = m.minimal_generators().len();
                (g * r.dim() == m.dim).then_some((n, g))
            })
            .collect()
    }
}

pub fn inj_resolution_via_matlis(c: &Complex, bound: usize) -> Result<InjResolution> {
    let fc = ModComplex::from_free(c)?;
    let res = proj_resolution(&fc.matlis_dual(), bound)?;
    let e = res.map.matlis_dual()?;
    let map = e.compose(&fc.double_dual_witness()?);
    let map = ModChainMap::new(&fc, &e.target, map.comps().clone())?;
    Ok(InjResolution { complex: e.target.clone(), map, truncated: res.truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::complexes::cohomology;
    use crate::field::Field;

    fn ring(vars: &[&str], rels: &[&str]) -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, vars, rels, Backend::Artinian).unwrap()
    }

    #[test]
    fn koszul_shapes() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = koszul_on_variables(&r).unwrap();
        assert_eq!(k.ranks().values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
        assert_eq!(k.d(-1), Matrix::from_rows(vec![vec![r.var(0), r.var(1)]], 2));
        assert_eq!(k.d(-2), Matrix::from_rows(vec![vec![r.neg(&r.var(1))], vec![r.var(0)]], 1));
        let g = LocalAlgebra::with_relations(Field::Rationals, &["x"], &[], Backend::Graded { window: 6 }).unwrap();
        let kx = koszul_on_variables(&g).unwrap();
        assert_eq!(cohomology(&kx, 0).unwrap().dim, 1);
        assert_eq!(cohomology(&kx, -1).unwrap().dim, 0);
    }

    #[test]
    fn betti_numbers() {
        let r = ring(&["x"], &["x^2"]);
        let s = minimal_resolution(&ModulePresentation::residue_field(&r), 4).unwrap();
        assert_eq!(s.betti(), vec![1; 5]);
        assert!(s.minimal && s.truncated);
        let r2 = ring(&["x", "y"], &["x^2", "y^2"]);
        let s = minimal_resolution(&ModulePresentation::residue_field(&r2), 4).unwrap();
        assert_eq!(s.betti(), vec![1, 2, 3, 4, 5]);
        let s = minimal_resolution(&ModulePresentation::free(&r2, 1), 3).unwrap();
        assert_eq!(s.betti(), vec![1, 0, 0, 0]);
        assert!(!s.truncated);
    }

    #[test]
    fn complexes_and_duals() {
        let r = ring(&["x"], &["x^2"]);
        let id = crate::complexes::cone(&crate::complexes::ChainMap::identity(&Complex::stalk(&r, 0))).unwrap();
        assert!(proj_resolution_of_complex(&id, 3).unwrap().complex.is_zero());
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let p = proj_resolution_of_complex(&x, 2).unwrap();
        assert!(crate::homotopy::iso_in_k(&p.complex, &x, 0).unwrap().is_isomorphic());
        let inj = inj_resolution_via_matlis(&Complex::stalk(&r, 0), 3).unwrap();
        assert_eq!(inj.e_exponents().unwrap(), BTreeMap::from([(0, 1)]));
        assert!(inj.map.is_quasi_iso().unwrap());
    }
}
