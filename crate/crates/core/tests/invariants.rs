//! Deterministic invariants over the fixture suite.

mod common;

use common::*;
use homforge_core::complexes::{ChainMap, Complex, ModComplex};
use homforge_core::homotopy::{iso_in_k, minimize, solve_in_k, HomSpace};
use homforge_core::matrix::Matrix;
use homforge_core::resolutions::{
    inj_resolution_via_matlis, koszul_on_variables, minimal_resolution, proj_resolution, ModulePresentation,
};
use homforge_core::tate::{tate_filtration, tate_resolve, verify_good_filtration};
use std::collections::BTreeMap;

/// Brutal truncations of a minimal complex are never retracts.
#[test]
fn truncations_are_not_retracts() {
    for r in [kx(2), kx(3), kxy()] {
        let u = koszul_on_variables(&r).unwrap();
        let (lo, hi) = u.support().unwrap();
        for k in lo + 1..=hi {
            let v = u.restrict(k..=hi);
            let inc = ChainMap::new(&v, &u, v.indices().map(|i| (i, Matrix::identity(v.rank(i), &r))).collect()).unwrap();
            let dom = HomSpace::new(&u, &v).unwrap();
            let cod = HomSpace::new(&v, &v).unwrap();
            let found = solve_in_k(&dom, &cod, |g| g.compose(&inc), &ChainMap::identity(&v)).unwrap();
            assert!(found.is_none(), "{}: sigma>={k} is a retract", r.describe());
        }
    }
}

#[test]
fn minimal_resolutions_resolve() {
    let r = kxy();
    let m = ModulePresentation::residue_field(&r);
    let res = minimal_resolution(&m, 5).unwrap();
    assert!(res.complex.validate().is_ok() && res.complex.is_minimal());
    let mc = ModComplex::from_free(&res.complex).unwrap();
    for i in -4..0 {
        assert_eq!(mc.cohomology_dim(i), 0);
    }
    let h0 = mc.cohomology_module(0);
    assert_eq!(h0.dim, 1);
    assert!(h0.action.iter().all(|a| a.is_zero()));
}

/// `E(p(E C))` has `E^{a_n}` in degree `n` with `a_n` the rank of `p(E C)` in degree `-n`.
#[test]
fn injective_resolution_exponents() {
    for r in [kx(2), kxy(), artinian(&["x", "y"], &["x^2", "x*y", "y^2"])] {
        let c = Complex::stalk(&r, 0);
        let inj = inj_resolution_via_matlis(&c, 3).unwrap();
        let p = proj_resolution(&ModComplex::from_free(&c).unwrap().matlis_dual(), 3).unwrap();
        let want: BTreeMap<i64, usize> = p.complex.indices().map(|i| (-i, p.complex.rank(i))).collect();
        let got = inj.e_exponents().unwrap();
        let got: BTreeMap<i64, usize> = got.into_iter().filter(|(_, a)| *a > 0).collect();
        let want: BTreeMap<i64, usize> = want.into_iter().filter(|(_, a)| *a > 0).collect();
        assert_eq!(got, want, "{}", r.describe());
        if !inj.truncated {
            assert!(inj.map.is_quasi_iso().unwrap());
        }
    }
}

/// Iterated extensions from the trivial filtration of `A` stay good.
#[test]
fn iterated_extensions_stay_good() {
    for r in [kx(3), kxy(), artinian(&["x", "y"], &["x^2", "x*y", "y^2"])] {
        let res = tate_resolve(&r, 4).unwrap();
        let f = tate_filtration(&res).unwrap();
        let rep = verify_good_filtration(&f).unwrap();
        assert!(rep.passed(), "{}: {:?}", r.describe(), rep.axioms);
    }
}

#[test]
fn minimal_models_of_fixtures() {
    for (name, x) in twelve_complexes() {
        let m = minimize(&x).unwrap();
        assert!(m.verify().unwrap(), "{name}");
        assert!(m.minimal.is_minimal(), "{name}");
        assert!(iso_in_k(&m.minimal, &x, 0).unwrap().is_isomorphic(), "{name}");
    }
}
