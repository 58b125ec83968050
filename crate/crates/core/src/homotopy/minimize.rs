//! Minimal models by Gaussian cancellation of unit differential entries.

use std::collections::BTreeMap;

use super::hom::is_null_homotopic;
use crate::complexes::{ChainMap, Complex, FreeModule};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `X = U (+) contractible`, with `to_min : X -> U` and `from_min : U -> X`
/// satisfying `to_min . from_min = id` exactly.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub original: Complex,
    pub minimal: Complex,
    pub to_min: ChainMap,
    pub from_min: ChainMap,
    /// Number of cancelled unit entries.
    pub cancellations: usize,
}

impl MinimalModel {
    /// `to_min . from_min = id` exactly and `from_min . to_min ~ id`.
    pub fn verify(&self) -> Result<bool> {
        if self.to_min.compose(&self.from_min) != ChainMap::identity(&self.minimal) {
            return Ok(false);
        }
        let e = self.from_min.compose(&self.to_min).sub(&ChainMap::identity(&self.original));
        Ok(is_null_homotopic(&e)?.is_null())
    }
}

fn drop_gen(m: &FreeModule, k: usize) -> FreeModule {
    FreeModule {
        rank: m.rank - 1,
        degrees: m.degrees.as_ref().map(|d| d.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| *x).collect()),
    }
}

fn others(n: usize, k: usize) -> Vec<usize> {
    (0..n).filter(|j| *j != k).collect()
}

/// Cancels the unit entry `(r, c)` of `d^i`.
fn cancel(x: &Complex, i: i64, r: usize, c: usize) -> Result<(Complex, ChainMap, ChainMap)> {
    let ring = x.ring();
    let d = x.d(i);
    let (n0, n1) = (x.rank(i), x.rank(i + 1));
    let (rest0, rest1) = (others(n0, c), others(n1, r));
    let uinv = ring
        .inverse(d.get(r, c))
        .ok_or_else(|| Error::Internal("cancellation pivot is not a unit".into()))?;
    let b = d.submatrix(&rest1, &[c]);
    let cm = d.submatrix(&[r], &rest0);
    let dm = d.submatrix(&rest1, &rest0);
    let buinv = b.times(&uinv, ring);
    let new_d = dm.sub(&buinv.mul(&cm, ring), ring);

    let mut terms = x.terms_map();
    terms.insert(i, drop_gen(&x.module(i), c));
    terms.insert(i + 1, drop_gen(&x.module(i + 1), r));
    let mut diffs = x.diffs_map();
    diffs.insert(i, new_d);
    if x.rank(i - 1) > 0 {
        diffs.insert(i - 1, x.d(i - 1).submatrix(&rest0, &(0..x.rank(i - 1)).collect::<Vec<_>>()));
    }
    if x.rank(i + 2) > 0 {
        diffs.insert(i + 1, x.d(i + 1).submatrix(&(0..x.rank(i + 2)).collect::<Vec<_>>(), &rest1));
    }
    let y = Complex::from_parts(ring, terms, diffs)?;

    let mut f = BTreeMap::new();
    let mut g = BTreeMap::new();
    for j in x.indices() {
        let n = x.rank(j);
        if j == i {
            let mut fj = Matrix::zeros(n - 1, n);
            let mut gj = Matrix::zeros(n, n - 1);
            for (k, &o) in rest0.iter().enumerate() {
                fj.set(k, o, ring.one());
                gj.set(o, k, ring.one());
            }
            // row c of g^i is -u^{-1} C
            let top = cm.times(&ring.neg(&uinv), ring);
            for k in 0..rest0.len() {
                gj.set(c, k, top.get(0, k).clone());
            }
            f.insert(j, fj);
            g.insert(j, gj);
        } else if j == i + 1 {
            let mut fj = Matrix::zeros(n - 1, n);
            let mut gj = Matrix::zeros(n, n - 1);
            for (k, &o) in rest1.iter().enumerate() {
                fj.set(k, o, ring.one());
                gj.set(o, k, ring.one());
            }
            // column r of f^{i+1} is -B u^{-1}
            for k in 0..rest1.len() {
                fj.set(k, r, ring.neg(buinv.get(k, 0)));
            }
            f.insert(j, fj);
            g.insert(j, gj);
        } else {
            f.insert(j, Matrix::identity(n, ring));
            g.insert(j, Matrix::identity(n, ring));
        }
    }
    let f = ChainMap::from_parts(x, &y, f)?;
    let g = ChainMap::from_parts(&y, x, g)?;
    Ok((y, f, g))
}

fn first_unit(x: &Complex) -> Option<(i64, usize, usize)> {
    let ring = x.ring();
    x.indices().find_map(|i| x.d(i).unit_entry(ring).map(|(r, c)| (i, r, c)))
}

/// Minimal model by repeated cancellation, pivots taken at the lowest index
/// and first unit entry in row-major order.
pub fn minimize(x: &Complex) -> Result<MinimalModel> {
    let mut cur = x.clone();
    let mut to_min = ChainMap::identity(x);
    let mut from_min = ChainMap::identity(x);
    let mut n = 0;
    while let Some((i, r, c)) = first_unit(&cur) {
        let (y, f, g) = cancel(&cur, i, r, c)?;
        to_min = f.compose(&to_min);
        from_min = from_min.compose(&g);
        cur = y;
        n += 1;
    }
    debug_assert!(cur.is_minimal());
    Ok(MinimalModel { original: x.clone(), minimal: cur, to_min, from_min, cancellations: n })
}

/// `sup - inf` of the support of the minimal model.
pub fn width(x: &Complex) -> Result<i64> {
    let m = minimize(x)?;
    match m.minimal.support() {
        Some((a, b)) => Ok(b - a),
        None => Err(Error::ZeroComplex("width")),
    }
}

/// Total rank of the minimal model.
pub fn rank(x: &Complex) -> Result<usize> {
    Ok(minimize(x)?.minimal.total_rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};

    #[test]
    fn schur_complement_example() {
        let r = LocalAlgebra::with_relations(crate::field::Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let d = Matrix::from_rows(vec![vec![r.one(), r.zero()], vec![r.zero(), r.var(0)]], 2);
        let x = Complex::new(
            &r,
            BTreeMap::from([(-1, FreeModule::new(2)), (0, FreeModule::new(2))]),
            BTreeMap::from([(-1, d)]),
        )
        .unwrap();
        let m = minimize(&x).unwrap();
        assert_eq!(m.minimal, Complex::two_term(&r, -1, &r.var(0)).unwrap());
        assert!(m.verify().unwrap());
        let unit = Complex::two_term(&r, 0, &r.one()).unwrap();
        assert!(minimize(&unit).unwrap().minimal.is_zero());
        assert!(matches!(width(&unit), Err(Error::ZeroComplex(_))));
    }
}
