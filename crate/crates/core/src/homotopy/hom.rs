//! Morphisms in the homotopy category: chain maps modulo null-homotopic ones.

use std::collections::BTreeMap;

use rand::Rng;

use super::space::{transpose_cols, MapSpace, OpTerm};
use crate::complexes::{ChainMap, Complex, Homotopy};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sv_scale, Coordinates, Echelon, KMat, SVec};

/// Solver for `f = d s + s d` on a fixed pair of complexes.
#[derive(Clone, Debug)]
pub struct NullSolver {
    maps: MapSpace,
    homs: MapSpace,
    boundary: Vec<SVec>,
    coords: Coordinates,
}

impl NullSolver {
    pub fn new(u: &Complex, v: &Complex, degree: i64) -> NullSolver {
        let maps = MapSpace::between(u, v, 0, degree);
        let homs = MapSpace::between(u, v, -1, degree);
        let mut terms = Vec::new();
        for i in u.indices() {
            terms.push(OpTerm { src: i, tgt: i, left: Some(v.d(i - 1)), right: None, coeff: 1 });
            terms.push(OpTerm { src: i, tgt: i - 1, left: None, right: Some(u.d(i - 1)), coeff: 1 });
        }
        let boundary = homs.operator(&maps, &terms);
        let coords = Coordinates::new(maps.len(), &boundary, u.ring().field());
        NullSolver { maps, homs, boundary, coords }
    }

    /// A homotopy `s` with `f = d s + s d`, if one exists.
    pub fn solve(&self, f: &ChainMap) -> Option<Homotopy> {
        let v = self.maps.coords(f.comps())?;
        let c = self.coords.express(&v)?;
        let s = Homotopy { comps: self.homs.to_maps(&c) };
        debug_assert!(s.witnesses(f));
        Some(s)
    }

    pub fn boundary_columns(&self) -> &[SVec] {
        &self.boundary
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NullVerdict {
    /// Certified by an explicit homotopy.
    Null(Homotopy),
    /// The linear system `f = d s + s d` is inconsistent.
    NotNull,
}

impl NullVerdict {
    pub fn is_null(&self) -> bool {
        matches!(self, NullVerdict::Null(_))
    }
}

/// Decides whether `f` is null-homotopic, with a witness on success.
pub fn is_null_homotopic(f: &ChainMap) -> Result<NullVerdict> {
    f.check_commutes()?;
    let solver = NullSolver::new(&f.source, &f.target, f.degree);
    Ok(match solver.solve(f) {
        Some(s) if s.witnesses(f) => NullVerdict::Null(s),
        Some(_) => return Err(Error::Internal("homotopy solver returned a non-witness".into())),
        None => NullVerdict::NotNull,
    })
}

/// `f ~ g`
pub fn homotopic(f: &ChainMap, g: &ChainMap) -> Result<bool> {
    Ok(is_null_homotopic(&f.sub(g))?.is_null())
}

/// A k-basis of `Hom_K(U, V)` in a fixed internal degree, with coordinates.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Complex,
    pub target: Complex,
    pub degree: i64,
    null: NullSolver,
    cycles_dim: usize,
    classes: Vec<SVec>,
    coords: Coordinates,
}

impl HomSpace {
    pub fn new(u: &Complex, v: &Complex) -> Result<HomSpace> {
        HomSpace::of_degree(u, v, 0)
    }

    /// Maps of internal degree `delta` (graded backend; 0 otherwise).
    pub fn of_degree(u: &Complex, v: &Complex, delta: i64) -> Result<HomSpace> {
        if u.ring() != v.ring() {
            return Err(Error::RingMismatch);
        }
        let f = u.ring().field();
        let null = NullSolver::new(u, v, delta);
        let cond = MapSpace::between(u, v, 1, delta);
        let mut terms = Vec::new();
        for i in u.indices() {
            terms.push(OpTerm { src: i, tgt: i, left: Some(v.d(i)), right: None, coeff: 1 });
            terms.push(OpTerm { src: i, tgt: i - 1, left: None, right: Some(u.d(i - 1)), coeff: -1 });
        }
        let cols = null.maps.operator(&cond, &terms);
        let z = Echelon::from_rows(null.maps.len(), &transpose_cols(&cols, cond.len())).kernel(f);
        let mut ech = Echelon::new(null.maps.len());
        let mut gens = Vec::new();
        for b in &null.boundary {
            if ech.insert(b) {
                gens.push(b.clone());
            }
        }
        let classes: Vec<SVec> = z.iter().filter(|c| ech.insert(c)).cloned().collect();
        let mut all = classes.clone();
        all.extend(gens);
        let coords = Coordinates::new(null.maps.len(), &all, f);
        Ok(HomSpace { source: u.clone(), target: v.clone(), degree: delta, null, cycles_dim: z.len(), classes, coords })
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Dimension of the space of chain maps.
    pub fn cycles_dim(&self) -> usize {
        self.cycles_dim
    }

    /// Dimension of the null-homotopic maps.
    pub fn boundaries_dim(&self) -> usize {
        self.cycles_dim - self.classes.len()
    }

    fn to_map(&self, v: &SVec) -> ChainMap {
        let mut f = ChainMap::from_parts(&self.source, &self.target, self.null.maps.to_maps(v))
            .expect("coordinates give well-shaped maps");
        if f.is_zero() {
            f.degree = self.degree;
        }
        f
    }

    /// Representative of the `k`-th basis class.
    pub fn class(&self, k: usize) -> ChainMap {
        self.to_map(&self.classes[k])
    }

    pub fn basis(&self) -> Vec<ChainMap> {
        (0..self.dim()).map(|k| self.class(k)).collect()
    }

    /// `sum c_k class_k`
    pub fn combination(&self, c: &[Scalar]) -> ChainMap {
        let mut v: SVec = Vec::new();
        for (k, x) in c.iter().enumerate() {
            if !x.is_zero() {
                v = crate::linalg::sv_add(&v, &sv_scale(&self.classes[k], x));
            }
        }
        self.to_map(&v)
    }

    pub fn from_coords(&self, c: &SVec) -> ChainMap {
        let mut dense = vec![self.source.ring().field().zero(); self.dim()];
        for (k, x) in c {
            dense[*k] = x.clone();
        }
        self.combination(&dense)
    }

    /// Class coordinates of a chain map; `None` if `f` is not a chain map
    /// between these complexes of this degree.
    pub fn express(&self, f: &ChainMap) -> Option<SVec> {
        let v = self.null.maps.coords(f.comps())?;
        let c = self.coords.express(&v)?;
        Some(c.into_iter().filter(|(k, _)| *k < self.classes.len()).collect())
    }

    pub fn is_null(&self, f: &ChainMap) -> Option<bool> {
        self.express(f).map(|c| c.is_empty())
    }

    pub fn homotopy_for(&self, f: &ChainMap) -> Option<Homotopy> {
        self.null.solve(f)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainMap {
        let f = self.source.ring().field();
        let c: Vec<Scalar> = (0..self.dim()).map(|_| f.random(rng)).collect();
        self.combination(&c)
    }

    /// Matrix of multiplication by a ring element on class coordinates.
    pub fn action(&self, a: &crate::algebra::RingElem) -> Result<KMat> {
        let f = self.source.ring().field();
        let cols: Vec<SVec> = (0..self.dim())
            .map(|k| {
                let mut g = self.class(k).times(a);
                g.degree = self.degree;
                self.express(&g).ok_or_else(|| Error::Internal("A-action leaves Hom_K".into()))
            })
            .collect::<Result<_>>()?;
        Ok(KMat::from_cols(self.dim(), &cols, f))
    }

    /// Minimal number of generators: `dim H - dim m H`.
    pub fn mu(&self) -> Result<usize> {
        let r = self.source.ring();
        r.require_artinian("minimal generator counts")?;
        let mut e = Echelon::new(self.dim());
        for v in 0..r.nvars() {
            for c in self.action(&r.var(v))?.col_vecs() {
                e.insert(&c);
            }
        }
        Ok(self.dim() - e.rank())
    }
}

/// `Hom_K(U, V)`.
pub fn hom_space_k(u: &Complex, v: &Complex) -> Result<HomSpace> {
    HomSpace::new(u, v)
}

/// `mu(Hom_K(X, X[j]))`.
pub fn mu_hom(x: &Complex, j: i64) -> Result<usize> {
    HomSpace::new(x, &x.shift(j))?.mu()
}

/// Solves `op(y) ~ want` for `y` in `domain`, where `op` is k-linear and
/// respects homotopy. Returns a representative.
pub fn solve_in_k<F>(domain: &HomSpace, codomain: &HomSpace, op: F, want: &ChainMap) -> Result<Option<ChainMap>>
where
    F: Fn(&ChainMap) -> ChainMap,
{
    let f = domain.source.ring().field();
    let images: Vec<SVec> = domain
        .basis()
        .iter()
        .map(|b| {
            codomain.express(&op(b)).ok_or_else(|| {
                Error::Internal("image of a basis map is not a chain map of the expected type".into())
            })
        })
        .collect::<Result<_>>()?;
    let Some(w) = codomain.express(want) else {
        return Err(Error::Invalid("target map is not in the codomain".into()));
    };
    let c = Coordinates::new(codomain.dim(), &images, f);
    Ok(c.express(&w).map(|x| domain.from_coords(&x)))
}

/// Dimensions of `Hom_K(U, V)` per internal degree in `lo..=hi` (graded).
pub fn graded_hom_dims(u: &Complex, v: &Complex, lo: i64, hi: i64) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for d in lo..=hi {
        let h = HomSpace::of_degree(u, v, d)?;
        if h.dim() > 0 {
            out.insert(d, h.dim());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra, Ring};
    use crate::field::Field;

    fn dual_numbers() -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap()
    }

    #[test]
    fn hom_dimensions() {
        let r = dual_numbers();
        let a = Complex::stalk(&r, 0);
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let aa = HomSpace::new(&a, &a).unwrap();
        assert_eq!(aa.dim(), 2);
        let xx = HomSpace::new(&x, &x).unwrap();
        assert_eq!((xx.cycles_dim(), xx.boundaries_dim(), xx.dim()), (3, 1, 2));
        assert_eq!(HomSpace::new(&x, &a).unwrap().dim(), 1);
        assert_eq!(mu_hom(&x, 1).unwrap(), 1);
        assert_eq!(mu_hom(&x, 2).unwrap(), 0);
    }

    #[test]
    fn null_homotopies() {
        let r = dual_numbers();
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let f = ChainMap::scalar(&x, &r.var(0));
        match is_null_homotopic(&f).unwrap() {
            NullVerdict::Null(s) => {
                assert!(s.witnesses(&f));
                assert_eq!(s.comp(0, &x, &x), crate::matrix::Matrix::identity(1, &r));
            }
            NullVerdict::NotNull => panic!("x.id should be null"),
        }
        let a = Complex::stalk(&r, 0);
        assert_eq!(is_null_homotopic(&ChainMap::scalar(&a, &r.var(0))).unwrap(), NullVerdict::NotNull);
        assert!(is_null_homotopic(&ChainMap::zero(&x, &x)).unwrap().is_null());
        let h = HomSpace::new(&x, &x).unwrap();
        assert_eq!(h.is_null(&f), Some(true));
        assert_eq!(h.is_null(&ChainMap::identity(&x)), Some(false));
    }
}
