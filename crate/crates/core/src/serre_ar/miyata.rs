//! Splitting of triangles, cone-power families and finite-length certificates.

use rand::Rng;

use crate::algebra::RingElem;
use crate::complexes::{cone, ChainMap, Complex, Provenance, Triangle};
use crate::error::{Error, Result};
use crate::homotopy::{homotopic, iso_in_k, is_null_homotopic, solve_in_k, HomSpace, IsoVerdict, NullVerdict};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub enum MiyataVerdict {
    /// `W ~= U (+) V`, `v ~ 0`, and `w xi ~ id_V`.
    Split { xi: ChainMap, iso: ChainMap },
    HypothesisNotMet { separator: String },
    Undecided { samples: usize },
}

impl MiyataVerdict {
    pub fn is_split(&self) -> bool {
        matches!(self, MiyataVerdict::Split { .. })
    }
}

/// For `U -u-> W -w-> V -v-> U[1]`: if `W ~= U (+) V` then `v ~ 0` and a
/// section `xi` of `w` exists. A violation is an internal error.
pub fn miyata_split_test(t: &Triangle, seed: u64) -> Result<MiyataVerdict> {
    let (u, w, v) = (t.first(), t.middle(), t.last());
    let sum = Complex::direct_sum2(u, v)?;
    let v_null = is_null_homotopic(&t.v)?.is_null();
    match iso_in_k(w, &sum, seed)? {
        IsoVerdict::Isomorphic { forward, .. } => {
            if !v_null {
                return Err(Error::Internal("W ~= U (+) V but the third map is not null-homotopic".into()));
            }
            let domain = HomSpace::new(v, w)?;
            let codomain = HomSpace::new(v, v)?;
            let id = ChainMap::identity(v);
            let xi = solve_in_k(&domain, &codomain, |x| t.w.compose(x), &id)?
                .ok_or_else(|| Error::Internal("v ~ 0 but w has no section".into()))?;
            if !homotopic(&t.w.compose(&xi), &id)? {
                return Err(Error::Internal("section of w fails w xi ~ id".into()));
            }
            Ok(MiyataVerdict::Split { xi, iso: forward })
        }
        IsoVerdict::NotIsomorphic { separator } => {
            if v_null {
                return Err(Error::Internal("third map is null-homotopic but W is not U (+) V".into()));
            }
            Ok(MiyataVerdict::HypothesisNotMet { separator })
        }
        IsoVerdict::Undecided { samples } => Ok(MiyataVerdict::Undecided { samples }),
    }
}

/// Replaces the middle vertex by `phi(W)` for a random term-wise automorphism `phi`.
pub fn disguise<R: Rng + ?Sized>(t: &Triangle, rng: &mut R) -> Result<Triangle> {
    let w = t.middle();
    let r = w.ring();
    r.require_artinian("disguising automorphisms")?;
    let mut phi = std::collections::BTreeMap::new();
    let mut inv = std::collections::BTreeMap::new();
    for i in w.indices() {
        let n = w.rank(i);
        let m = loop {
            let mut m = Matrix::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    let e = if a == b {
                        r.add(&r.constant(r.field().random_unit(rng)), &r.random_elem(rng, true))
                    } else {
                        r.random_elem(rng, a > b)
                    };
                    m.set(a, b, e);
                }
            }
            if let Some(i) = m.inverse(r) {
                break (m, i);
            }
        };
        phi.insert(i, m.0);
        inv.insert(i, m.1);
    }
    let mut diffs = std::collections::BTreeMap::new();
    for i in w.indices() {
        if w.rank(i) > 0 && w.rank(i + 1) > 0 {
            diffs.insert(i, phi[&(i + 1)].mul(&w.d(i), r).mul(&inv[&i], r));
        }
    }
    let w2 = Complex::new(r, w.terms_map(), diffs)?;
    let p = ChainMap::new(w, &w2, phi)?;
    let q = ChainMap::new(&w2, w, inv)?;
    Triangle::new(p.compose(&t.u), t.w.compose(&q), t.v.clone(), Provenance::Claimed)
}

/// `K(n) = cone(r^n u)` for `n = 1..=n_max` with pairwise verdicts.
#[derive(Clone, Debug)]
pub struct ConeFamily {
    pub members: Vec<Complex>,
    /// `(n, m, verdict)` for `1 <= n < m <= n_max`.
    pub verdicts: Vec<(usize, usize, IsoVerdict)>,
}

impl ConeFamily {
    pub fn pairwise_non_isomorphic(&self) -> bool {
        self.verdicts.iter().all(|(_, _, v)| matches!(v, IsoVerdict::NotIsomorphic { .. }))
    }
}

pub fn cone_power_family(u: &ChainMap, r: &RingElem, n_max: usize, seed: u64) -> Result<ConeFamily> {
    let ring = u.source.ring();
    let members: Vec<Complex> = (1..=n_max).map(|n| cone(&u.times(&ring.pow(r, n as u32)))).collect::<Result<_>>()?;
    let mut verdicts = Vec::new();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            verdicts.push((a + 1, b + 1, iso_in_k(&members[a], &members[b], seed)?));
        }
    }
    Ok(ConeFamily { members, verdicts })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteLength {
    /// Artinian backend: every complex has finite-length cohomology.
    Certified,
    /// Every basis endomorphism is killed up to homotopy by a power of
    /// every variable, with the exponents found.
    CertifiedWithinWindow { window: u32, exponents: Vec<(usize, usize, u32)> },
    /// `x_var^n u` is not null-homotopic for any `n <= window`.
    RefutedWithinWindow { window: u32, endomorphism: usize, var: usize },
}

impl FiniteLength {
    pub fn certified(&self) -> bool {
        !matches!(self, FiniteLength::RefutedWithinWindow { .. })
    }
}

pub fn finite_length_certificate(x: &Complex) -> Result<FiniteLength> {
    let ring = x.ring();
    let Some(window) = ring.window() else {
        return Ok(FiniteLength::Certified);
    };
    let end = HomSpace::new(x, x)?;
    let mut exponents = Vec::new();
    for (k, u) in end.basis().iter().enumerate() {
        for v in 0..ring.nvars() {
            let var = ring.var(v);
            let n = (1..=window).find_map(|n| {
                let f = u.times(&ring.pow(&var, n));
                match is_null_homotopic(&f) {
                    Ok(NullVerdict::Null(_)) => Some(Ok(n)),
                    Ok(NullVerdict::NotNull) => None,
                    Err(e) => Some(Err(e)),
                }
            });
            match n {
                Some(n) => exponents.push((k, v, n?)),
                None => return Ok(FiniteLength::RefutedWithinWindow { window, endomorphism: k, var: v }),
            }
        }
    }
    Ok(FiniteLength::CertifiedWithinWindow { window, exponents })
}

/// A homotopy inverse of a quasi-isomorphism of bounded free complexes.
pub fn homotopy_inverse(f: &ChainMap) -> Result<Option<ChainMap>> {
    let (u, v) = (&f.source, &f.target);
    let domain = HomSpace::new(v, u)?;
    let codomain = HomSpace::new(u, u)?;
    let Some(g) = solve_in_k(&domain, &codomain, |g| g.compose(f), &ChainMap::identity(u))? else {
        return Ok(None);
    };
    if homotopic(&f.compose(&g), &ChainMap::identity(v))? {
        Ok(Some(g))
    } else {
        Ok(None)
    }
}
