//! Isomorphism decisions in `K(A)`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hom::{homotopic, HomSpace};
use super::minimize::minimize;
use crate::complexes::{graded_cohomology_dims, ChainMap, Complex, ModComplex};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

pub const RANDOM_SAMPLES: usize = 64;
pub const EXHAUSTIVE_DIM: usize = 12;
const EXHAUSTIVE_BUDGET: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `forward . backward ~ id` and `backward . forward ~ id`, both checked.
    Isomorphic { forward: ChainMap, backward: ChainMap },
    NotIsomorphic { separator: String },
    Undecided { samples: usize },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

fn cohomology_profile(x: &Complex, lo: i64, hi: i64) -> Result<BTreeMap<i64, BTreeMap<i64, usize>>> {
    let mut out = BTreeMap::new();
    if x.ring().is_artinian() {
        let m = ModComplex::from_free(x)?;
        for (i, d) in m.cohomology_dims() {
            if d > 0 {
                out.insert(i, BTreeMap::from([(0, d)]));
            }
        }
    } else {
        for i in x.indices() {
            let h = graded_cohomology_dims(x, i, lo, hi);
            if !h.is_empty() {
                out.insert(i, h);
            }
        }
    }
    Ok(out)
}

fn degree_profile(x: &Complex) -> BTreeMap<i64, Vec<i64>> {
    x.indices()
        .filter(|i| x.rank(*i) > 0)
        .map(|i| {
            let mut d: Vec<i64> = (0..x.rank(i)).map(|g| x.gen_degree(i, g)).collect();
            d.sort();
            (i, d)
        })
        .collect()
}

fn invertible_mod_m(f: &ChainMap) -> bool {
    let r = f.source.ring();
    f.source.indices().all(|i| f.comp(i).residue(r).inverse().is_some())
}

/// Lexicographic enumeration of all vectors in `values^n`.
fn for_each_vector<F: FnMut(&[Scalar]) -> bool>(n: usize, values: &[Scalar], mut visit: F) -> bool {
    let mut idx = vec![0usize; n];
    loop {
        let v: Vec<Scalar> = idx.iter().map(|k| values[*k].clone()).collect();
        if visit(&v) {
            return true;
        }
        let mut p = 0;
        loop {
            if p == n {
                return false;
            }
            idx[p] += 1;
            if idx[p] < values.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Decides `X ~= Y` in `K(A)`.
pub fn iso_in_k(x: &Complex, y: &Complex, seed: u64) -> Result<IsoVerdict> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = x.ring();
    let (mx, my) = (minimize(x)?, minimize(y)?);
    let (u, v) = (&mx.minimal, &my.minimal);

    let w = ring.window().unwrap_or(0) as i64;
    let lo = u.min_gen_degree().into_iter().chain(v.min_gen_degree()).min().unwrap_or(0);
    let hi = u.max_gen_degree().into_iter().chain(v.max_gen_degree()).max().unwrap_or(0) + w;
    let (hu, hv) = (cohomology_profile(u, lo, hi)?, cohomology_profile(v, lo, hi)?);
    if hu != hv {
        let i = hu.keys().chain(hv.keys()).find(|i| hu.get(i) != hv.get(i)).copied().unwrap();
        let dim = |h: &BTreeMap<i64, BTreeMap<i64, usize>>| h.get(&i).map(|m| m.values().sum::<usize>()).unwrap_or(0);
        let what = if ring.is_artinian() { "" } else { " (per internal degree)" };
        return Ok(IsoVerdict::NotIsomorphic {
            separator: format!("H^{i} dimensions differ{what}: {} vs {}", dim(&hu), dim(&hv)),
        });
    }
    if u.ranks() != v.ranks() {
        let i = u.indices().chain(v.indices()).find(|i| u.rank(*i) != v.rank(*i)).unwrap();
        return Ok(IsoVerdict::NotIsomorphic {
            separator: format!("minimal ranks in degree {i} differ: {} vs {}", u.rank(i), v.rank(i)),
        });
    }
    if degree_profile(u) != degree_profile(v) {
        return Ok(IsoVerdict::NotIsomorphic { separator: "minimal generator degrees differ".into() });
    }
    if u.is_zero() {
        return Ok(IsoVerdict::Isomorphic { forward: ChainMap::zero(x, y), backward: ChainMap::zero(y, x) });
    }

    let h = HomSpace::new(u, v)?;
    if h.dim() == 0 {
        return Ok(IsoVerdict::NotIsomorphic { separator: "Hom_K between the minimal models is zero".into() });
    }
    let finish = |f: &ChainMap| -> Result<Option<IsoVerdict>> {
        let Some(g) = f.termwise_inverse() else { return Ok(None) };
        let forward = my.from_min.compose(&f.compose(&mx.to_min));
        let backward = mx.from_min.compose(&g.compose(&my.to_min));
        if homotopic(&backward.compose(&forward), &ChainMap::identity(x))?
            && homotopic(&forward.compose(&backward), &ChainMap::identity(y))?
        {
            Ok(Some(IsoVerdict::Isomorphic { forward, backward }))
        } else {
            Err(Error::Internal("termwise inverse of a chain map failed the homotopy check".into()))
        }
    };

    let field = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_SAMPLES {
        let f = h.random(&mut rng);
        if invertible_mod_m(&f) {
            if let Some(v) = finish(&f)? {
                return Ok(v);
            }
        }
    }
    if h.dim() <= EXHAUSTIVE_DIM {
        let (values, complete): (Vec<Scalar>, bool) = match field {
            Field::Prime(p) if (p as f64).powi(h.dim() as i32) <= EXHAUSTIVE_BUDGET as f64 => {
                ((0..p as i64).map(|a| field.from_i64(a)).collect(), true)
            }
            _ => (vec![field.zero(), field.one()], false),
        };
        let mut found = None;
        let mut err = None;
        for_each_vector(h.dim(), &values, |c| {
            let f = h.combination(c);
            if !invertible_mod_m(&f) {
                return false;
            }
            match finish(&f) {
                Ok(Some(v)) => {
                    found = Some(v);
                    true
                }
                Ok(None) => false,
                Err(e) => {
                    err = Some(e);
                    true
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(v) = found {
            return Ok(v);
        }
        if complete {
            return Ok(IsoVerdict::NotIsomorphic {
                separator: format!("no class in Hom_K (dim {}) is invertible modulo the maximal ideal", h.dim()),
            });
        }
    }
    Ok(IsoVerdict::Undecided { samples: RANDOM_SAMPLES })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::complexes::cone;

    #[test]
    fn examples() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let y = Complex::two_term(&r, -1, &r.neg(&r.var(0))).unwrap();
        assert!(iso_in_k(&x, &y, 1).unwrap().is_isomorphic());
        let z = Complex::two_term(&r, -1, &r.zero()).unwrap();
        match iso_in_k(&x, &z, 1).unwrap() {
            IsoVerdict::NotIsomorphic { separator } => assert!(separator.starts_with("H^")),
            v => panic!("{v:?}"),
        }
        let g = LocalAlgebra::with_relations(Field::Rationals, &["x"], &[], Backend::Graded { window: 8 }).unwrap();
        let a = Complex::stalk(&g, 0);
        let c1 = cone(&ChainMap::scalar(&a, &g.var(0))).unwrap();
        let c2 = cone(&ChainMap::scalar(&a, &g.pow(&g.var(0), 2))).unwrap();
        assert!(matches!(iso_in_k(&c1, &c2, 1).unwrap(), IsoVerdict::NotIsomorphic { .. }));
        assert!(iso_in_k(&c2, &c2, 1).unwrap().is_isomorphic());
    }
}
