#![allow(dead_code)]

use std::collections::BTreeMap;

use homforge_core::algebra::{Backend, LocalAlgebra, Ring};
use homforge_core::complexes::{cone, dual, hom_complex, ChainMap, Complex, Homotopy, ModComplex};
use homforge_core::field::Field;
use homforge_core::linalg::{Echelon, SVec};
use homforge_core::matrix::Matrix;
use homforge_core::resolutions::{koszul, koszul_on_variables};
use rand::Rng;

pub fn artinian(vars: &[&str], rels: &[&str]) -> Ring {
    LocalAlgebra::with_relations(Field::Rationals, vars, rels, Backend::Artinian).unwrap()
}

pub fn kx(n: u32) -> Ring {
    artinian(&["x"], &[&format!("x^{n}")])
}

pub fn kxy() -> Ring {
    artinian(&["x", "y"], &["x^2", "y^2"])
}

pub fn graded_kx(window: u32) -> Ring {
    LocalAlgebra::with_relations(Field::Rationals, &["x"], &[], Backend::Graded { window }).unwrap()
}

pub fn stalk(r: &Ring) -> Complex {
    Complex::stalk(r, 0)
}

/// `[A --x--> A]` in degrees -1, 0.
pub fn two_term_x(r: &Ring) -> Complex {
    Complex::two_term(r, -1, &r.var(0)).unwrap()
}

/// Stalk, two-term and Koszul complexes over `r`.
pub fn pairing_fixtures(r: &Ring) -> Vec<(&'static str, Complex)> {
    vec![("stalk A", stalk(r)), ("[A -x-> A]", two_term_x(r)), ("Koszul", koszul_on_variables(r).unwrap())]
}

/// Twelve complexes over Artinian rings, built by every constructor.
pub fn twelve_complexes() -> Vec<(String, Complex)> {
    let (r2, r3, rxy) = (kx(2), kx(3), kxy());
    let rm = artinian(&["x", "y"], &["x^2", "x*y", "y^2"]);
    let a3 = stalk(&r3);
    let f = ChainMap::scalar(&a3, &r3.parse("x^2").unwrap());
    let g = ChainMap::new(&two_term_x(&r3), &a3, BTreeMap::from([(0, Matrix::scalar(1, &r3.parse("x^2").unwrap()))])).unwrap();
    let k = koszul_on_variables(&rxy).unwrap();
    vec![
        ("stalk A over k[x]/(x^2)".into(), stalk(&r2)),
        ("[A -x-> A] over k[x]/(x^2)".into(), two_term_x(&r2)),
        ("Koszul(x, y) over k[x,y]/(x^2,y^2)".into(), k.clone()),
        ("Koszul(x) over k[x]/(x^3)".into(), koszul(&r3, &[r3.var(0)]).unwrap()),
        ("cone(x^2) over k[x]/(x^3)".into(), cone(&f).unwrap()),
        ("cone([A -x-> A] -> A) over k[x]/(x^3)".into(), cone(&g).unwrap()),
        ("Koszul[3] over k[x,y]/(x^2,y^2)".into(), k.shift(3)),
        ("Koszul* over k[x,y]/(x^2,y^2)".into(), dual(&k).unwrap()),
        ("Hom([A -x-> A], [A -x-> A]) over k[x]/(x^2)".into(), hom_complex(&two_term_x(&r2), &two_term_x(&r2)).unwrap()),
        ("Koszul(x, y) over k[x,y]/(x^2,xy,y^2)".into(), koszul_on_variables(&rm).unwrap()),
        (
            "[A -x-> A] (+) A[1] over k[x]/(x^3)".into(),
            Complex::direct_sum2(&two_term_x(&r3), &a3.shift(1)).unwrap(),
        ),
        ("Koszul(xy, y) over k[x,y]/(x^2,y^2)".into(), koszul(&rxy, &[rxy.parse("x*y").unwrap(), rxy.var(1)]).unwrap()),
    ]
}

/// Rank of the map induced on `H^i` by a degree-0 map of k-expanded complexes.
pub fn induced_rank(f: &ChainMap, i: i64) -> usize {
    let r = f.source.ring();
    let (s, t) = (ModComplex::from_free(&f.source).unwrap(), ModComplex::from_free(&f.target).unwrap());
    let fi = f.comp(i).expand(r);
    let bt: Vec<SVec> = t.d(i - 1).col_vecs();
    let mut e = Echelon::from_rows(t.dim(i), &bt);
    let base = e.rank();
    for z in s.d(i).kernel() {
        e.insert(&fi.apply(&z));
    }
    e.rank() - base
}

pub fn random_elem<R: Rng>(r: &Ring, rng: &mut R, in_m: bool) -> homforge_core::algebra::RingElem {
    r.random_elem(rng, in_m)
}

/// `d s + s d` for a random degree -1 map `s`.
pub fn random_null_map<R: Rng>(u: &Complex, v: &Complex, rng: &mut R) -> ChainMap {
    let r = u.ring();
    let mut s = Homotopy::default();
    for i in u.indices() {
        let (rows, cols) = (v.rank(i - 1), u.rank(i));
        if rows > 0 && cols > 0 {
            let mut m = Matrix::zeros(rows, cols);
            for a in 0..rows {
                for b in 0..cols {
                    m.set(a, b, r.random_elem(rng, false));
                }
            }
            s.comps.insert(i, m);
        }
    }
    s.boundary(u, v, 0)
}
