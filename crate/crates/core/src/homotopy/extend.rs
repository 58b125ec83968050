//! Degree-descending extension of null-homotopies.

use std::collections::BTreeMap;

use super::space::{allowed, MapSpace, OpTerm};
use crate::complexes::{ChainMap, Homotopy};
use crate::error::{Error, Result};

/// Given `g : U -> W` and `s` with `g^n = d s^n + s^{n+1} d` for `n >= from`,
/// solves `d s^n = g^n - s^{n+1} d` for `n = from-1, ..., down_to` and
/// returns the extended homotopy. Components of `s` in degrees `>= from`
/// are kept as given.
pub fn extend_null_homotopy(g: &ChainMap, s: &Homotopy, from: i64, down_to: i64) -> Result<Homotopy> {
    let (u, w) = (&g.source, &g.target);
    let ring = u.ring();
    let hi = *u.indices().end();
    for n in from..=hi {
        let lhs = w.d(n - 1).mul(&s.comp(n, u, w), ring).add(&s.comp(n + 1, u, w).mul(&u.d(n), ring), ring);
        if lhs != g.comp(n) {
            return Err(Error::Invalid(format!("given homotopy does not cover g in degree {n}")));
        }
    }
    let mut out: BTreeMap<i64, crate::matrix::Matrix> = s.comps.iter().filter(|(n, _)| **n >= from).map(|(n, m)| (*n, m.clone())).collect();
    let mut n = from - 1;
    while n >= down_to {
        let cur = Homotopy { comps: out.clone() };
        let rhs = g.comp(n).sub(&cur.comp(n + 1, u, w).mul(&u.d(n), ring), ring);
        if u.rank(n) == 0 {
            n -= 1;
            continue;
        }
        let delta = g.degree;
        let unknowns = MapSpace::new(ring, &[(n, w.rank(n - 1), u.rank(n))], |_, r, c| {
            allowed(ring, u.gen_degree(n, c) - w.gen_degree(n - 1, r) + delta)
        });
        let values = MapSpace::new(ring, &[(n, w.rank(n), u.rank(n))], |_, r, c| {
            allowed(ring, u.gen_degree(n, c) - w.gen_degree(n, r) + delta)
        });
        let cols = unknowns.operator(&values, &[OpTerm { src: n, tgt: n, left: Some(w.d(n - 1)), right: None, coeff: 1 }]);
        let target = values
            .coords(&BTreeMap::from([(n, rhs)]))
            .ok_or_else(|| Error::Internal("residual has entries outside the expected degrees".into()))?;
        let coords = crate::linalg::Coordinates::new(values.len(), &cols, ring.field());
        let x = coords.express(&target).ok_or_else(|| Error::InfeasibleLift {
            degree: n,
            reason: "the residual is not a boundary in the target".into(),
        })?;
        if let Some(m) = unknowns.to_maps(&x).remove(&n) {
            out.insert(n, m);
        }
        n -= 1;
    }
    Ok(Homotopy { comps: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::complexes::Complex;
    use crate::field::Field;
    use crate::matrix::Matrix;

    #[test]
    fn one_lifting_step() {
        let r = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
        let g = ChainMap::scalar(&x, &r.var(0));
        let s = Homotopy { comps: BTreeMap::from([(0, Matrix::identity(1, &r))]) };
        let t = extend_null_homotopy(&g, &s, 0, -3).unwrap();
        assert!(t.witnesses(&g));
        assert_eq!(extend_null_homotopy(&g, &t, -1, -3).unwrap(), t);

        let a = Complex::stalk(&r, 0);
        let h = ChainMap::scalar(&a, &r.var(0));
        match extend_null_homotopy(&h, &Homotopy::default(), 1, -2) {
            Err(Error::InfeasibleLift { degree, .. }) => assert_eq!(degree, 0),
            other => panic!("{other:?}"),
        }
    }
}
