//! The preorder on triangles `X[-1] --u--> V -> W -> X` ending at a fixed `X`.

use crate::complexes::{cone_triangle, ChainMap, Complex, Triangle};
use crate::error::{Error, Result};
use crate::homotopy::{homotopic, is_indecomposable, is_null_homotopic, Decomposition, HomSpace};
use crate::linalg::{Coordinates, SVec};

use super::ar::is_iso_in_k;

/// `beta : V_s -> V_t`, `gamma : W_s -> W_t` with the identity on `X[-1]` and `X`.
#[derive(Clone, Debug)]
pub struct TriangleMorphism {
    pub beta: ChainMap,
    pub gamma: ChainMap,
}

#[derive(Clone, Debug)]
pub enum Dominance {
    Dominates(TriangleMorphism),
    Refuted(String),
}

impl Dominance {
    pub fn holds(&self) -> bool {
        matches!(self, Dominance::Dominates(_))
    }

    pub fn witness(&self) -> Option<&TriangleMorphism> {
        match self {
            Dominance::Dominates(m) => Some(m),
            Dominance::Refuted(_) => None,
        }
    }
}

/// Checks the shape: `X[-1] --u--> V -> W -> X`, `V` indecomposable, `u` not null.
pub fn check_shape(t: &Triangle, seed: u64) -> Result<()> {
    if !matches!(is_indecomposable(t.middle(), seed)?, Decomposition::Indecomposable) {
        return Err(Error::Invalid("second vertex is not certified indecomposable".into()));
    }
    if is_null_homotopic(&t.u)?.is_null() {
        return Err(Error::Invalid("first map is null-homotopic".into()));
    }
    Ok(())
}

fn coords(h: &HomSpace, f: &ChainMap) -> Result<SVec> {
    h.express(f).ok_or_else(|| Error::Internal("composite left its Hom space".into()))
}

fn place(v: &SVec, offset: usize) -> SVec {
    v.iter().map(|(k, x)| (k + offset, x.clone())).collect()
}

/// `s > t`: a morphism of triangles `s -> t` that is the identity on `X[-1]`
/// (hence on `X`). Solves the three homotopy-commutativity conditions jointly.
pub fn triangle_dominates(s: &Triangle, t: &Triangle, seed: u64) -> Result<Dominance> {
    check_shape(s, seed)?;
    check_shape(t, seed)?;
    if s.v.target != t.v.target {
        return Err(Error::Invalid("triangles end at different complexes".into()));
    }
    let (vs, ws, vt, wt) = (s.middle(), s.last(), t.middle(), t.last());
    let x1 = s.first();
    let x = &s.v.target;
    let hb = HomSpace::new(vs, vt)?;
    let hg = HomSpace::new(ws, wt)?;
    let c1 = HomSpace::new(x1, vt)?;
    let c2 = HomSpace::new(vs, wt)?;
    let c3 = HomSpace::new(ws, x)?;
    let (o2, o3) = (c1.dim(), c1.dim() + c2.dim());
    let width = o3 + c3.dim();
    // unknowns (beta, gamma): beta u_s, w_t beta - gamma w_s, v_t gamma
    let mut cols = Vec::new();
    for b in hb.basis() {
        let mut col = coords(&c1, &b.compose(&s.u))?;
        col.extend(place(&coords(&c2, &t.w.compose(&b))?, o2));
        cols.push(col);
    }
    for g in hg.basis() {
        let mut col = place(&coords(&c2, &g.compose(&s.w).neg())?, o2);
        col.extend(place(&coords(&c3, &t.v.compose(&g))?, o3));
        cols.push(col);
    }
    let mut want = coords(&c1, &t.u)?;
    want.extend(place(&coords(&c3, &s.v)?, o3));
    let solver = Coordinates::new(width, &cols, x.ring().field());
    let Some(sol) = solver.express(&want) else {
        return Ok(Dominance::Refuted("no morphism of triangles restricting to the identity on X[-1]".into()));
    };
    let split = hb.dim();
    let bc: SVec = sol.iter().filter(|(k, _)| *k < split).cloned().collect();
    let gc: SVec = sol.iter().filter(|(k, _)| *k >= split).map(|(k, x)| (k - split, x.clone())).collect();
    let m = TriangleMorphism { beta: hb.from_coords(&bc), gamma: hg.from_coords(&gc) };
    if !(homotopic(&m.beta.compose(&s.u), &t.u)?
        && homotopic(&m.gamma.compose(&s.w), &t.w.compose(&m.beta))?
        && homotopic(&t.v.compose(&m.gamma), &s.v)?)
    {
        return Err(Error::Internal("solved triangle morphism fails its squares".into()));
    }
    Ok(Dominance::Dominates(m))
}

/// `s > t` and `t > s` force the composite `s -> t -> s` to be an isomorphism.
pub fn antisymmetry_holds(st: &TriangleMorphism, ts: &TriangleMorphism) -> Result<bool> {
    Ok(is_iso_in_k(&ts.beta.compose(&st.beta))? && is_iso_in_k(&ts.gamma.compose(&st.gamma))?)
}

/// `X[-1] --id--> X[-1] -> cone(id) -> X`: the cone of the identity is a
/// contractible complex `P` mapping onto `X` term-wise with kernel `X[-1]`.
pub fn standard_triangle_from_projective_cover(x: &Complex) -> Result<Triangle> {
    if x.is_zero() {
        return Err(Error::Invalid("X is zero".into()));
    }
    if !x.is_minimal() {
        return Err(Error::Invalid("X must be minimal".into()));
    }
    let x1 = x.shift(-1);
    let t = cone_triangle(&ChainMap::identity(&x1))?.rotate_back()?;
    if is_null_homotopic(&t.u)?.is_null() {
        return Err(Error::Internal("u is null-homotopic for a nonzero minimal X".into()));
    }
    Ok(t)
}

/// `X[-1] --u--> V -> cone(u) -> X` for a map `u : X[-1] -> V`.
pub fn triangle_from_map(u: &ChainMap) -> Result<Triangle> {
    cone_triangle(u)?.rotate_back()
}
