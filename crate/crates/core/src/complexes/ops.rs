use std::collections::BTreeMap;

use super::{ChainMap, Complex, FreeModule, Provenance, Triangle};
use crate::algebra::RingElem;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

fn span(a: &Complex, da: i64, b: &Complex, db: i64) -> Option<(i64, i64)> {
    let s = [a.support().map(|(x, y)| (x + da, y + da)), b.support().map(|(x, y)| (x + db, y + db))];
    let lo = s.iter().flatten().map(|p| p.0).min()?;
    let hi = s.iter().flatten().map(|p| p.1).max()?;
    Some((lo, hi))
}

/// `cone(f)^n = U^{n+1} (+) V^n`, `d(u, v) = (-d u, d v - f u)`. On the
/// graded backend the `U` part is twisted by the internal degree of `f`.
pub fn cone(f: &ChainMap) -> Result<Complex> {
    let (u, v) = (&f.source, &f.target);
    let r = u.ring();
    if r != v.ring() {
        return Err(Error::RingMismatch);
    }
    let ut = u.twist(f.degree);
    let (lo, hi) = match span(u, -1, v, 0) {
        Some(s) => s,
        None => return Ok(Complex::zero(r)),
    };
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for n in lo..=hi {
        terms.insert(n, FreeModule::sum(&[&ut.module(n + 1), &v.module(n)]));
        let a = u.d(n + 1).neg(r);
        let b = Matrix::zeros(u.rank(n + 2), v.rank(n));
        let c = f.comp(n + 1).neg(r);
        let d = v.d(n);
        diffs.insert(n, Matrix::blocks(&a, &b, &c, &d));
    }
    Complex::new(r, terms, diffs)
}

/// `V --(0,v)--> cone(f) --(u,v) |-> -u--> U[1] --(-f[1])--> V[1]`.
pub fn cone_triangle(f: &ChainMap) -> Result<Triangle> {
    let (u, v) = (&f.source, &f.target);
    let r = u.ring();
    let c = cone(f)?;
    let u1 = u.twist(f.degree).shift(1);
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for n in c.indices() {
        let (a, b) = (u.rank(n + 1), v.rank(n));
        let mut i = Matrix::zeros(a + b, b);
        i.put(a, 0, &Matrix::identity(b, r));
        inc.insert(n, i);
        let mut p = Matrix::zeros(a, a + b);
        p.put(0, 0, &Matrix::identity(a, r).neg(r));
        proj.insert(n, p);
    }
    let incl = ChainMap::new(v, &c, inc)?;
    let projm = ChainMap::new(&c, &u1, proj)?;
    let conn = f.shift(1).neg().with_ends(&u1, &v.shift(1))?;
    conn.check_commutes()?;
    Triangle::new(incl, projm, conn, Provenance::StrictCone)
}

/// `psi(u, v) = (u, r v) : cone(f) -> cone(r f)`.
pub fn cone_scale_map(f: &ChainMap, a: &RingElem) -> Result<ChainMap> {
    let r = f.source.ring();
    let src = cone(f)?;
    let rf = f.times(a);
    let tgt = cone(&rf)?;
    let comps = src
        .indices()
        .map(|n| {
            let (p, q) = (f.source.rank(n + 1), f.target.rank(n));
            (n, Matrix::block_diag(&[&Matrix::identity(p, r), &Matrix::scalar(q, a)]))
        })
        .collect();
    let mut psi = ChainMap::new(&src, &tgt, comps)?;
    if psi.is_zero() {
        psi.degree = a.homogeneous_degree().unwrap_or(0) as i64;
    }
    Ok(psi)
}

/// Checks the two squares relating the cone triangles of `f` and `r f`: the
/// left one is multiplication by `r` on `V`, the right one the identity on `U[1]`.
pub fn verify_cone_scale_diagram(f: &ChainMap, a: &RingElem, psi: &ChainMap) -> Result<bool> {
    let t1 = cone_triangle(f)?;
    let t2 = cone_triangle(&f.times(a))?;
    psi.check_commutes()?;
    let left = psi.compose(&t1.u).comps() == t2.u.compose(&ChainMap::scalar(&f.target, a)).comps();
    let right = t2.w.compose(psi).comps() == t1.w.comps();
    let outer = f.times(a).comps() == ChainMap::scalar(&f.target, a).compose(f).comps();
    Ok(left && right && outer)
}

/// One `Hom(U^i, V^{i+n})` block inside term `n` of the Hom complex; the
/// entry `(b, a)` sits at `offset + b * cols + a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomBlock {
    pub i: i64,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

pub fn hom_layout(u: &Complex, v: &Complex, n: i64) -> Vec<HomBlock> {
    let mut out = Vec::new();
    let mut off = 0;
    for i in u.indices() {
        let (rows, cols) = (v.rank(i + n), u.rank(i));
        if rows > 0 && cols > 0 {
            out.push(HomBlock { i, offset: off, rows, cols });
            off += rows * cols;
        }
    }
    out
}

/// Splits a vector of term `n` of `Hom(U, V)` into matrices `U^i -> V^{i+n}`.
pub fn hom_element_to_maps(u: &Complex, v: &Complex, n: i64, x: &[RingElem]) -> BTreeMap<i64, Matrix> {
    let mut out = BTreeMap::new();
    for b in hom_layout(u, v, n) {
        let mut m = Matrix::zeros(b.rows, b.cols);
        for row in 0..b.rows {
            for col in 0..b.cols {
                m.set(row, col, x[b.offset + row * b.cols + col].clone());
            }
        }
        out.insert(b.i, m);
    }
    out
}

pub fn hom_maps_to_element(u: &Complex, v: &Complex, n: i64, maps: &BTreeMap<i64, Matrix>) -> Vec<RingElem> {
    let layout = hom_layout(u, v, n);
    let len = layout.last().map(|b| b.offset + b.rows * b.cols).unwrap_or(0);
    let mut x = vec![RingElem::default(); len];
    for b in layout {
        if let Some(m) = maps.get(&b.i) {
            for (row, col, a) in m.entries() {
                x[b.offset + row * b.cols + col] = a.clone();
            }
        }
    }
    x
}

/// The complex `Hom_A(U, V)` with `d f = d_V f - (-1)^n f d_U`.
pub fn hom_complex(u: &Complex, v: &Complex) -> Result<Complex> {
    let r = u.ring();
    if r != v.ring() {
        return Err(Error::RingMismatch);
    }
    let (lo, hi) = match (u.support(), v.support()) {
        (Some((ul, uh)), Some((vl, vh))) => (vl - uh, vh - ul),
        _ => return Ok(Complex::zero(r)),
    };
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for n in lo..=hi {
        let layout = hom_layout(u, v, n);
        let mut degs = Vec::new();
        for b in &layout {
            for row in 0..b.rows {
                for col in 0..b.cols {
                    degs.push(v.gen_degree(b.i + n, row) - u.gen_degree(b.i, col));
                }
            }
        }
        let rank = degs.len();
        terms.insert(n, if u.is_graded() { FreeModule::graded(degs) } else { FreeModule::new(rank) });
        let next = hom_layout(u, v, n + 1);
        let next_rank = next.last().map(|b| b.offset + b.rows * b.cols).unwrap_or(0);
        let find = |i: i64| next.iter().find(|b| b.i == i).copied();
        let sign = if n % 2 == 0 { r.from_i64(-1) } else { r.one() };
        let mut d = Matrix::zeros(next_rank, rank);
        for b in &layout {
            let dv = v.d(b.i + n);
            let du = u.d(b.i - 1);
            let same = find(b.i);
            let prev = find(b.i - 1);
            for row in 0..b.rows {
                for col in 0..b.cols {
                    let src = b.offset + row * b.cols + col;
                    if let Some(t) = same {
                        for c in 0..dv.rows() {
                            let e = dv.get(c, row);
                            if !e.is_zero() {
                                let k = t.offset + c * t.cols + col;
                                let s = r.add(d.get(k, src), e);
                                d.set(k, src, s);
                            }
                        }
                    }
                    if let Some(t) = prev {
                        for c in 0..du.cols() {
                            let e = du.get(col, c);
                            if !e.is_zero() {
                                let k = t.offset + row * t.cols + c;
                                let s = r.add(d.get(k, src), &r.mul(&sign, e));
                                d.set(k, src, s);
                            }
                        }
                    }
                }
            }
        }
        diffs.insert(n, d);
    }
    Complex::new(r, terms, diffs)
}

/// `U* = Hom_A(U, A)` with `A` in degree 0.
pub fn dual(u: &Complex) -> Result<Complex> {
    hom_complex(u, &Complex::stalk(u.ring(), 0))
}

/// `f* : V* -> U*`, componentwise `(f*)^n = (f^{-n})^T`.
pub fn dual_map(f: &ChainMap) -> Result<ChainMap> {
    let ds = dual(&f.target)?;
    let dt = dual(&f.source)?;
    let comps = f.comps().iter().map(|(i, m)| (-i, m.transpose())).collect();
    let mut g = ChainMap::new(&ds, &dt, comps)?;
    g.degree = f.degree;
    Ok(g)
}

/// The canonical isomorphism `U -> U**`, which is `(-1)^n` on `U^n`.
pub fn dual_dual_witness(u: &Complex) -> Result<ChainMap> {
    let dd = dual(&dual(u)?)?;
    let r = u.ring();
    let comps = u
        .indices()
        .map(|n| (n, Matrix::scalar(u.rank(n), &r.from_i64(if n % 2 == 0 { 1 } else { -1 }))))
        .collect();
    ChainMap::new(u, &dd, comps)
}

/// The canonical isomorphism `(U[1])* -> U*[-1]`, `(-1)^n` in degree `n`.
pub fn dual_shift_witness(u: &Complex) -> Result<ChainMap> {
    let a = dual(&u.shift(1))?;
    let b = dual(u)?.shift(-1);
    let r = u.ring();
    let comps = a
        .indices()
        .map(|n| (n, Matrix::scalar(a.rank(n), &r.from_i64(if n % 2 == 0 { 1 } else { -1 }))))
        .collect();
    ChainMap::new(&a, &b, comps)
}
