//! The Serre functor `F = p E D` and its pairing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::{dual, ChainMap, Complex, ModChainMap, ModComplex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::homotopy::{minimize, HomSpace, MinimalModel};
use crate::linalg::{sv_dot, KMat, SVec};
use crate::resolutions::proj_resolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SerreRoute {
    /// `E(D X)` has free terms and was rewritten over `A` directly.
    FreeForm,
    /// `E(D X)` was resolved.
    Resolution,
}

/// `F(X)` with the chain `X -> D X -> E D X <- P`, `P -> F(X)` minimal.
#[derive(Clone, Debug)]
pub struct SerreImage {
    pub input: Complex,
    pub dual: Complex,
    pub matlis: ModComplex,
    pub route: SerreRoute,
    /// Free complex `P` with a quasi-isomorphism `P -> E D X`.
    pub free: Complex,
    pub witness: ModChainMap,
    pub model: MinimalModel,
    pub output: Complex,
}

impl SerreImage {
    /// Re-checks the audit chain.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.witness.is_quasi_iso()?
            && self.witness.source == ModComplex::from_free(&self.free)?
            && self.witness.target == self.matlis
            && self.model.verify()?
            && self.output.is_minimal())
    }
}

/// `F(X) = minimize(p(E(D X)))`.
pub fn serre_functor(x: &Complex, bound: usize) -> Result<SerreImage> {
    let r = x.ring();
    r.require_artinian("the Serre functor")?;
    let d = dual(x)?;
    let e = ModComplex::from_free(&d)?.matlis_dual();
    let (route, free, witness) = match e.free_form() {
        Some((p, iso)) => (SerreRoute::FreeForm, p, iso),
        None => {
            let res = proj_resolution(&e, bound)?;
            if res.truncated {
                return Err(Error::TruncationTooSmall(format!("E(D X) needs terms below degree {}", res.low)));
            }
            (SerreRoute::Resolution, res.complex, res.map)
        }
    };
    let model = minimize(&free)?;
    let output = model.minimal.clone();
    Ok(SerreImage { input: x.clone(), dual: d, matlis: e, route, free, witness, model, output })
}

/// A functional `L` on `Hom_K(X, F X)` for which `(f, g) -> L(g f)` is a
/// perfect pairing `End_K(X) x Hom_K(X, F X) -> k`.
#[derive(Clone, Debug)]
pub struct SerreTrace {
    pub image: SerreImage,
    pub space: HomSpace,
    pub end: HomSpace,
    pub functional: SVec,
    pub seed: u64,
}

impl SerreTrace {
    pub fn eval(&self, g: &ChainMap) -> Result<Scalar> {
        let c = self.space.express(g).ok_or_else(|| Error::Internal("map is not in Hom_K(X, F X)".into()))?;
        Ok(sv_dot(&self.functional, &c, self.space.source.ring().field()))
    }

    /// `[L(g_j f_i)]` for bases `f_i` of `Hom_K(X, Y)` and `g_j` of `Hom_K(Y, F X)`.
    pub fn pairing_matrix(&self, xy: &HomSpace, yfx: &HomSpace) -> Result<KMat> {
        let f = self.space.source.ring().field();
        let mut m = KMat::zeros(xy.dim(), yfx.dim(), f);
        let (fs, gs) = (xy.basis(), yfx.basis());
        for (i, a) in fs.iter().enumerate() {
            for (j, b) in gs.iter().enumerate() {
                m.set(i, j, self.eval(&b.compose(a))?);
            }
        }
        Ok(m)
    }
}

const TRACE_ATTEMPTS: u64 = 32;

pub fn serre_trace(x: &Complex, seed: u64) -> Result<SerreTrace> {
    let image = serre_functor(x, default_bound(x))?;
    let space = HomSpace::new(x, &image.output)?;
    let end = HomSpace::new(x, x)?;
    let field = x.ring().field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TRACE_ATTEMPTS {
        let functional = crate::linalg::sv_from_entries((0..space.dim()).map(|k| (k, field.random(&mut rng))).collect());
        let t = SerreTrace { image: image.clone(), space: space.clone(), end: end.clone(), functional, seed };
        let m = t.pairing_matrix(&end, &space)?;
        if end.dim() == space.dim() && m.rank() == end.dim() {
            return Ok(t);
        }
        if end.dim() != space.dim() {
            return Err(Error::Internal(format!(
                "dim End_K(X) = {} but dim Hom_K(X, F X) = {}",
                end.dim(),
                space.dim()
            )));
        }
    }
    Err(Error::Internal("no functional gives a perfect pairing on End_K(X)".into()))
}

/// Enough for `E(D X)` over any fixture: support width plus `dim_k A`.
pub fn default_bound(x: &Complex) -> usize {
    let w = x.support().map(|(a, b)| (b - a) as usize).unwrap_or(0);
    w + x.ring().dim() + 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub hom_xy: usize,
    pub hom_y_fx: usize,
    /// Rank of the pairing matrix.
    pub pairing_rank: usize,
    pub squares_checked: usize,
    pub squares_failed: usize,
    pub seed: u64,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.hom_xy == self.hom_y_fx && self.pairing_rank == self.hom_xy && self.squares_failed == 0
    }
}

pub const NATURALITY_SAMPLES: usize = 8;

/// `dim Hom_K(X, Y) = dim Hom_K(Y, F X)`, perfectness of the pairing, and
/// naturality in `Y` on sampled endomorphisms `b` of `Y`: pairing `b f`
/// against `g` equals pairing `f` against `g b`, computed on reduced classes.
pub fn serre_pairing_check(x: &Complex, y: &Complex, seed: u64) -> Result<PairingReport> {
    let t = serre_trace(x, seed)?;
    let xy = HomSpace::new(x, y)?;
    let yfx = HomSpace::new(y, &t.image.output)?;
    let m = t.pairing_matrix(&xy, &yfx)?;
    let mut report = PairingReport {
        hom_xy: xy.dim(),
        hom_y_fx: yfx.dim(),
        pairing_rank: m.rank(),
        squares_checked: 0,
        squares_failed: 0,
        seed,
    };
    if xy.dim() == 0 || yfx.dim() == 0 {
        return Ok(report);
    }
    let yy = HomSpace::new(y, y)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e77e);
    let reduce = |h: &HomSpace, f: &ChainMap| -> Result<ChainMap> {
        let c = h.express(f).ok_or_else(|| Error::Internal("composite left its Hom space".into()))?;
        Ok(h.from_coords(&c))
    };
    for _ in 0..NATURALITY_SAMPLES {
        let b = yy.random(&mut rng);
        let f = xy.random(&mut rng);
        let g = yfx.random(&mut rng);
        let lhs = t.eval(&g.compose(&reduce(&xy, &b.compose(&f))?))?;
        let rhs = t.eval(&reduce(&yfx, &g.compose(&b))?.compose(&f))?;
        report.squares_checked += 1;
        if lhs != rhs {
            report.squares_failed += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra, Ring};
    use crate::field::Field;
    use crate::homotopy::{iso_in_k, width};
    use crate::resolutions::koszul_on_variables;

    fn ring(vars: &[&str], rels: &[&str]) -> Ring {
        LocalAlgebra::with_relations(Field::Rationals, vars, rels, Backend::Artinian).unwrap()
    }

    #[test]
    fn serre_images() {
        let r = ring(&["x"], &["x^2"]);
        let a = Complex::stalk(&r, 0);
        let s = serre_functor(&a, 4).unwrap();
        assert_eq!(s.route, SerreRoute::FreeForm);
        assert!(s.verify().unwrap());
        assert!(iso_in_k(&s.output, &a, 1).unwrap().is_isomorphic());

        let r2 = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = koszul_on_variables(&r2).unwrap();
        let s = serre_functor(&k, 6).unwrap();
        assert_eq!(width(&s.output).unwrap(), 2);
        assert_eq!(s.output.total_rank(), 4);

        let z = serre_functor(&Complex::zero(&r), 1).unwrap();
        assert!(z.output.is_zero());
    }

    #[test]
    fn non_gorenstein_needs_resolution() {
        let r = ring(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let a = Complex::stalk(&r, 0);
        assert!(matches!(serre_functor(&a, 4), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn pairing() {
        let r = ring(&["x"], &["x^2"]);
        let a = Complex::stalk(&r, 0);
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let p = serre_pairing_check(&a, &a, 3).unwrap();
        assert_eq!((p.hom_xy, p.hom_y_fx), (2, 2));
        assert!(p.passed());
        let p = serre_pairing_check(&x, &a, 3).unwrap();
        assert_eq!((p.hom_xy, p.hom_y_fx), (1, 1));
        assert!(p.passed());
        let p = serre_pairing_check(&x, &Complex::zero(&r), 3).unwrap();
        assert_eq!((p.hom_xy, p.hom_y_fx), (0, 0));
        assert!(p.passed());
    }
}
