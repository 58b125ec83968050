//! Randomized invariants. Complexes are built from a seed so shrinking stays cheap.

mod common;

use std::path::Path;

use common::*;
use homforge_core::algebra::{Backend, LocalAlgebra, Ring};
use homforge_core::complexes::{
    cone, dual, dual_dual_witness, hom_complex, ChainMap, Complex, FinModule, ModComplex,
};
use homforge_core::field::Field;
use homforge_core::homotopy::{end_algebra, iso_in_k, is_null_homotopic, minimize, rank, width, HomSpace};
use homforge_core::io::{complex_from_json, complex_to_json};
use homforge_core::matrix::Matrix;
use homforge_core::resolutions::{koszul, minimal_resolution, ModulePresentation};
use homforge_core::serre_ar::{homotopy_inverse, serre_functor};
use homforge_core::tate::{tate_resolve, DGAlgebra, VarKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rings() -> Vec<Ring> {
    vec![kx(2), kx(3), kxy(), artinian(&["x", "y"], &["x^2", "x*y", "y^2"])]
}

/// A random bounded complex over one of the Artinian suite rings.
fn random_complex(seed: u64) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rs = rings();
    let r = &rs[rng.gen_range(0..rs.len())];
    let elem = |rng: &mut ChaCha8Rng| loop {
        let a = r.random_elem(rng, true);
        if !a.is_zero() {
            break a;
        }
    };
    let x = match rng.gen_range(0..5) {
        0 => Complex::stalk(r, rng.gen_range(-2..=2)),
        1 => Complex::two_term(r, rng.gen_range(-2..=1), &elem(&mut rng)).unwrap(),
        2 => {
            let n = rng.gen_range(1..=2);
            let es: Vec<_> = (0..n).map(|_| elem(&mut rng)).collect();
            koszul(r, &es).unwrap()
        }
        3 => {
            let u = Complex::two_term(r, -1, &elem(&mut rng)).unwrap();
            let v = Complex::stalk(r, 0);
            let f = HomSpace::new(&u, &v).unwrap().random(&mut rng).add(&random_null_map(&u, &v, &mut rng));
            cone(&f).unwrap()
        }
        _ => Complex::direct_sum2(
            &Complex::two_term(r, -1, &elem(&mut rng)).unwrap(),
            &Complex::two_term(r, -1, &r.one()).unwrap(),
        )
        .unwrap(),
    };
    x.shift(rng.gen_range(-1..=1))
}

fn coeffs(r: &Ring, v: &[i64]) -> homforge_core::algebra::RingElem {
    let terms = r.basis().iter().zip(v).map(|(m, c)| (*m, r.field().from_i64(*c))).collect();
    r.normal_form(&terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in prop::collection::vec(-4i64..5, 10), b in prop::collection::vec(-4i64..5, 10),
                   c in prop::collection::vec(-4i64..5, 10), which in 0usize..3) {
        let r = [artinian(&["x", "y"], &["x^3", "x*y^2", "y^3"]),
                 LocalAlgebra::with_relations(Field::Prime(5), &["x", "y"], &["x^3", "y^2"], Backend::Artinian).unwrap(),
                 kx(4)][which].clone();
        let (a, b, c) = (coeffs(&r, &a), coeffs(&r, &b), coeffs(&r, &c));
        prop_assert_eq!(r.normal_form(a.terms()), a.clone());
        prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
        prop_assert!(r.add(&a, &r.neg(&a)).is_zero());
        prop_assert!(r.is_unit(&a) != r.in_max_ideal(&a));
        if let Some(i) = r.inverse(&a) {
            prop_assert_eq!(r.mul(&a, &i), r.one());
        }
    }

    #[test]
    fn socle_and_matlis(ex in 1u16..4, ey in 1u16..4, mixed in 0u16..3) {
        let mut rels = vec![format!("x^{}", ex + 1), format!("y^{}", ey + 1)];
        if mixed > 0 {
            rels.push(format!("x^{mixed}*y"));
        }
        let rs: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
        let r = artinian(&["x", "y"], &rs);
        prop_assert!(!r.socle().unwrap().is_empty());
        let a = FinModule::free(&r, 1);
        prop_assert_eq!(a.dual().dual(), a);
    }

    #[test]
    fn complex_invariants(seed in any::<u64>()) {
        let x = random_complex(seed);
        let r = x.ring().clone();
        prop_assert!(x.validate().is_ok());
        // shift sign, entry-wise
        for m in -2i64..=2 {
            let s = x.shift(m);
            for i in x.indices() {
                let want = if m % 2 == 0 { x.d(i) } else { x.d(i).neg(&r) };
                prop_assert_eq!(s.d(i - m), want);
            }
        }
        // Euler characteristic
        let mx = ModComplex::from_free(&x).unwrap();
        let chi_h: i64 = x.indices().map(|i| if i % 2 == 0 { 1 } else { -1 } * mx.cohomology_dim(i) as i64).sum();
        let chi_c: i64 = x.indices().map(|i| if i % 2 == 0 { 1 } else { -1 } * (x.rank(i) * r.dim()) as i64).sum();
        prop_assert_eq!(chi_h, chi_c);
        // dualities
        let w = dual_dual_witness(&x).unwrap();
        prop_assert!(w.is_termwise_invertible());
        prop_assert_eq!(dual(&dual(&x).unwrap()).unwrap().ranks(), x.ranks());
        let ee = mx.matlis_dual().matlis_dual();
        prop_assert!(x.indices().all(|i| ee.dim(i) == mx.dim(i) && ee.module(i) == mx.module(i)));
        prop_assert!(mx.double_dual_witness().unwrap().is_quasi_iso().unwrap());
        // JSON round trip
        let s = complex_to_json(&x);
        let back = complex_from_json(&s, Path::new("."), None).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(complex_to_json(&back), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn homotopy_invariants(seed in any::<u64>()) {
        let x = random_complex(seed);
        let y = random_complex(seed.wrapping_add(1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if x.ring() == y.ring() {
            // H^0 Hom(X, Y) against the homotopy solver
            let h = hom_complex(&x, &y).unwrap();
            let space = HomSpace::new(&x, &y).unwrap();
            prop_assert_eq!(ModComplex::from_free(&h).unwrap().cohomology_dim(0), space.dim());
            // null iff zero class
            let null = random_null_map(&x, &y, &mut rng);
            prop_assert!(is_null_homotopic(&null).unwrap().is_null());
            prop_assert!(space.express(&null).unwrap().is_empty());
            let f = space.random(&mut rng).add(&null);
            let zero_class = space.express(&f).unwrap().is_empty();
            prop_assert_eq!(is_null_homotopic(&f).unwrap().is_null(), zero_class);
        }
        // minimize is idempotent and its witnesses are homotopy inverse
        let m = minimize(&x).unwrap();
        prop_assert!(m.verify().unwrap());
        prop_assert_eq!(&minimize(&m.minimal).unwrap().minimal, &m.minimal);
        let back = m.from_min.compose(&m.to_min);
        prop_assert!(is_null_homotopic(&back.sub(&ChainMap::identity(&x))).unwrap().is_null());
        // width and rank ignore contractible summands
        let c = cone(&ChainMap::identity(&Complex::stalk(x.ring(), 0))).unwrap();
        let xc = Complex::direct_sum2(&x, &c).unwrap();
        // Hom_K(X, X[j]) = 0 beyond the width
        if !m.minimal.is_zero() {
            prop_assert_eq!(width(&xc).unwrap(), width(&x).unwrap());
            prop_assert_eq!(rank(&xc).unwrap(), rank(&x).unwrap());
            let w = width(&x).unwrap();
            for j in w + 1..=w + 2 {
                prop_assert_eq!(HomSpace::new(&m.minimal, &m.minimal.shift(j)).unwrap().dim(), 0);
            }
        }
        // iso_in_k reflexive and symmetric
        prop_assert!(iso_in_k(&x, &x, seed).unwrap().is_isomorphic());
        prop_assert!(iso_in_k(&xc, &x, seed).unwrap().is_isomorphic());
        prop_assert!(iso_in_k(&x, &xc, seed).unwrap().is_isomorphic());
        // quasi-isomorphisms have homotopy inverses
        prop_assert!(homotopy_inverse(&m.to_min).unwrap().is_some());
    }

    #[test]
    fn radical_is_nilpotent(seed in any::<u64>()) {
        let x = random_complex(seed);
        let e = end_algebra(&x).unwrap();
        prop_assert!(e.verify_radical());
        let n = e.dim() + 1;
        for a in &e.radical {
            let mut p = a.clone();
            for _ in 1..n {
                p = e.mul(&p, a);
            }
            prop_assert!(p.is_empty());
        }
    }

    #[test]
    fn serre_width(seed in any::<u64>()) {
        let x = minimize(&random_complex(seed)).unwrap().minimal;
        if !x.is_zero() && x.ring().is_gorenstein_artinian().unwrap() {
            let f = serre_functor(&x, 12).unwrap();
            prop_assert!(f.verify().unwrap());
            prop_assert_eq!(width(&f.output).unwrap(), width(&x).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn betti_ignores_presentation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = kxy();
        // coker of a 2x2 relation matrix, then a random change of generators
        let mut rel = Matrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                rel.set(i, j, r.random_elem(&mut rng, true));
            }
        }
        let mut p = Matrix::identity(2, &r);
        p.set(1, 0, r.random_elem(&mut rng, false));
        p.set(0, 0, r.add(&r.one(), &r.random_elem(&mut rng, true)));
        let m1 = ModulePresentation::new(&r, 2, None, rel.clone()).unwrap();
        let m2 = ModulePresentation::new(&r, 2, None, p.mul(&rel, &r)).unwrap();
        let (b1, b2) = (minimal_resolution(&m1, 4).unwrap(), minimal_resolution(&m2, 4).unwrap());
        prop_assert_eq!(b1.betti(), b2.betti());
        prop_assert!(b1.complex.is_minimal());
    }

    #[test]
    fn divided_power_coefficients(i in 1u32..5, j in 1u32..5) {
        let r = kx(2);
        let t = tate_resolve(&r, 10).unwrap().algebra;
        let s = t.vars().iter().position(|v| v.kind == VarKind::DividedPower).unwrap();
        let (c, w) = t.mul_words(&t.var_word(s, i), &t.var_word(s, j)).unwrap();
        prop_assert_eq!(w, t.var_word(s, i + j));
        let want = (1..=i as u64).fold(1u64, |acc, k| acc * (j as u64 + k) / k);
        prop_assert_eq!(c.to_string(), want.to_string());
    }

    #[test]
    fn dg_axioms_after_adjunction(which in 0usize..3) {
        let r = [kx(2), kxy(), artinian(&["x", "y"], &["x^2", "x*y", "y^2"])][which].clone();
        let t = tate_resolve(&r, 4).unwrap().algebra;
        for k in 0..=t.vars().len() {
            prop_assert_eq!(t.prefix(k).verify(), Ok(()));
        }
        let _ = DGAlgebra::base(&r, 2).unwrap();
    }
}
