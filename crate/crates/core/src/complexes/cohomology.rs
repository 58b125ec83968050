use std::collections::BTreeMap;

use super::{Complex, FinModule, ModComplex};
use crate::algebra::Mono;
use crate::error::Result;
use crate::linalg::KMat;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub index: i64,
    /// Total k-dimension; on the graded backend the sum over the examined degrees.
    pub dim: usize,
    /// Artinian backend: `H^i` with its induced action.
    pub module: Option<FinModule>,
    /// Graded backend: nonzero dimensions per internal degree.
    pub per_degree: BTreeMap<i64, usize>,
    /// Graded backend: every internal degree up to this one was examined.
    pub certified_through: Option<i64>,
}

/// `H^i(X)`: exact over the Artinian backend, per internal degree up to the
/// window on the graded backend.
pub fn cohomology(x: &Complex, i: i64) -> Result<Cohomology> {
    let r = x.ring();
    if r.is_artinian() {
        let m = ModComplex::from_free(x)?;
        let module = m.cohomology_module(i);
        return Ok(Cohomology {
            index: i,
            dim: module.dim,
            module: Some(module),
            per_degree: BTreeMap::new(),
            certified_through: None,
        });
    }
    let w = r.window().unwrap_or(0) as i64;
    let lo = (0..x.rank(i)).map(|g| x.gen_degree(i, g)).min();
    let (per_degree, top) = match lo {
        Some(lo) => (graded_cohomology_dims(x, i, lo, lo + w), lo + w),
        None => (BTreeMap::new(), w),
    };
    Ok(Cohomology {
        index: i,
        dim: per_degree.values().sum(),
        module: None,
        per_degree,
        certified_through: Some(top),
    })
}

/// Basis of the internal-degree-`d` part of term `j`: pairs (generator, monomial).
pub(crate) fn graded_piece(x: &Complex, j: i64, d: i64) -> Vec<(usize, Mono)> {
    let r = x.ring();
    let mut out = Vec::new();
    for g in 0..x.rank(j) {
        let e = d - x.gen_degree(j, g);
        if e >= 0 {
            for m in r.standard_monomials_of_degree(e as u32) {
                out.push((g, m));
            }
        }
    }
    out
}

/// Matrix of a homogeneous A-matrix between graded pieces.
pub(crate) fn graded_matrix(m: &Matrix, src: &[(usize, Mono)], tgt: &[(usize, Mono)], x: &Complex) -> KMat {
    let r = x.ring();
    let idx: BTreeMap<(usize, Mono), usize> = tgt.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut out = KMat::zeros(tgt.len(), src.len(), r.field());
    for (col, (g, mono)) in src.iter().enumerate() {
        for row in 0..m.rows() {
            for (a, c) in m.get(row, *g).terms() {
                let p = a.mul(mono);
                if let Some(k) = idx.get(&(row, p)) {
                    out.add_at(*k, col, c);
                }
            }
        }
    }
    out
}

/// Dimensions of `H^i(X)_d` for `lo <= d <= hi`, nonzero entries only.
pub fn graded_cohomology_dims(x: &Complex, i: i64, lo: i64, hi: i64) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for d in lo..=hi {
        let (p0, p1, p2) = (graded_piece(x, i - 1, d), graded_piece(x, i, d), graded_piece(x, i + 1, d));
        let din = graded_matrix(&x.d(i - 1), &p0, &p1, x);
        let dout = graded_matrix(&x.d(i), &p1, &p2, x);
        let h = p1.len() - dout.rank() - din.rank();
        if h > 0 {
            out.insert(d, h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::complexes::{cone, ChainMap};
    use crate::field::Field;

    #[test]
    fn graded_cone_of_power() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x"], &[], Backend::Graded { window: 10 }).unwrap();
        let a = Complex::stalk(&r, 0);
        for n in 1..=4u32 {
            let f = ChainMap::scalar(&a, &r.pow(&r.var(0), n));
            let c = cone(&f).unwrap();
            let h = cohomology(&c, 0).unwrap();
            assert_eq!(h.dim, n as usize);
            assert_eq!(cohomology(&c, -1).unwrap().dim, 0);
        }
        let s = cohomology(&a, 0).unwrap();
        assert_eq!(s.dim, 11);
        assert_eq!(s.certified_through, Some(10));
    }

    #[test]
    fn artinian_two_term() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let x = Complex::two_term(&r, -1, &r.parse("x").unwrap()).unwrap();
        assert_eq!(cohomology(&x, 0).unwrap().dim, 1);
        assert_eq!(cohomology(&x, -1).unwrap().dim, 1);
        let c = cone(&ChainMap::identity(&Complex::stalk(&r, 0))).unwrap();
        assert!(c.indices().all(|i| cohomology(&c, i).unwrap().dim == 0));
    }
}
