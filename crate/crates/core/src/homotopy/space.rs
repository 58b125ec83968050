//! Families of A-matrices coordinatized over k, one coordinate per
//! (block, row, column, monomial).

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{LocalAlgebra, Mono, Ring};
use crate::complexes::Complex;
use crate::field::Scalar;
use crate::linalg::{sv_from_entries, SVec};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
struct Block {
    key: i64,
    rows: usize,
    cols: usize,
}

#[derive(Clone, Debug)]
pub struct MapSpace {
    ring: Ring,
    blocks: Vec<Block>,
    vars: Vec<(usize, usize, usize, Mono)>,
    index: HashMap<(usize, usize, usize, Mono), usize>,
}

/// `coeff * left * X * right`, sending block `src` to block `tgt`.
pub struct OpTerm {
    pub src: i64,
    pub tgt: i64,
    pub left: Option<Matrix>,
    pub right: Option<Matrix>,
    pub coeff: i64,
}

/// Monomials allowed in an entry of internal degree `deg`.
pub fn allowed(ring: &LocalAlgebra, deg: i64) -> Vec<Mono> {
    if ring.is_artinian() {
        ring.basis().to_vec()
    } else if deg < 0 {
        vec![]
    } else {
        ring.standard_monomials_of_degree(deg as u32)
    }
}

impl MapSpace {
    pub fn new<F>(ring: &Ring, shapes: &[(i64, usize, usize)], entry: F) -> MapSpace
    where
        F: Fn(i64, usize, usize) -> Vec<Mono>,
    {
        let mut vars = Vec::new();
        let mut index = HashMap::new();
        let blocks: Vec<Block> = shapes.iter().map(|&(key, rows, cols)| Block { key, rows, cols }).collect();
        for (b, blk) in blocks.iter().enumerate() {
            for r in 0..blk.rows {
                for c in 0..blk.cols {
                    for m in entry(blk.key, r, c) {
                        index.insert((b, r, c, m), vars.len());
                        vars.push((b, r, c, m));
                    }
                }
            }
        }
        MapSpace { ring: ring.clone(), blocks, vars, index }
    }

    /// Maps `U^i -> V^{i+shift}` of internal degree `delta`.
    pub fn between(u: &Complex, v: &Complex, shift: i64, delta: i64) -> MapSpace {
        let shapes: Vec<(i64, usize, usize)> = u
            .indices()
            .filter(|i| u.rank(*i) > 0 && v.rank(i + shift) > 0)
            .map(|i| (i, v.rank(i + shift), u.rank(i)))
            .collect();
        let ring = u.ring().clone();
        MapSpace::new(&ring, &shapes, |i, r, c| allowed(&ring, u.gen_degree(i, c) - v.gen_degree(i + shift, r) + delta))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    fn block_of(&self, key: i64) -> Option<usize> {
        self.blocks.iter().position(|b| b.key == key)
    }

    pub fn to_maps(&self, v: &SVec) -> BTreeMap<i64, Matrix> {
        let mut out: BTreeMap<i64, Matrix> =
            self.blocks.iter().map(|b| (b.key, Matrix::zeros(b.rows, b.cols))).collect();
        for (j, c) in v {
            let (b, r, col, m) = self.vars[*j];
            let blk = &self.blocks[b];
            let mat = out.get_mut(&blk.key).unwrap();
            let e = self.ring.add(mat.get(r, col), &self.ring.monomial(m, c.clone()));
            mat.set(r, col, e);
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    /// Coordinates of a family of matrices; `None` when some entry uses a
    /// monomial outside the space.
    pub fn coords(&self, maps: &BTreeMap<i64, Matrix>) -> Option<SVec> {
        let mut e = Vec::new();
        for (key, m) in maps {
            if m.is_zero() {
                continue;
            }
            let b = self.block_of(*key)?;
            for (r, c, a) in m.nonzero() {
                for (mono, x) in a.terms() {
                    e.push((*self.index.get(&(b, r, c, *mono))?, x.clone()));
                }
            }
        }
        Some(sv_from_entries(e))
    }

    /// Columns of the linear operator `X |-> sum of terms`, as coordinates in `target`.
    pub fn operator(&self, target: &MapSpace, terms: &[OpTerm]) -> Vec<SVec> {
        let r = &self.ring;
        let f = r.field();
        let mut cols = Vec::with_capacity(self.vars.len());
        for &(b, row, col, m) in &self.vars {
            let key = self.blocks[b].key;
            let mut acc: Vec<(usize, Scalar)> = Vec::new();
            for t in terms.iter().filter(|t| t.src == key) {
                let Some(tb) = target.block_of(t.tgt) else { continue };
                let lefts: Vec<(usize, crate::algebra::RingElem)> = match &t.left {
                    Some(l) => (0..l.rows()).filter(|i| !l.get(*i, row).is_zero()).map(|i| (i, l.get(i, row).clone())).collect(),
                    None => vec![(row, r.one())],
                };
                let rights: Vec<(usize, crate::algebra::RingElem)> = match &t.right {
                    Some(rm) => (0..rm.cols()).filter(|j| !rm.get(col, *j).is_zero()).map(|j| (j, rm.get(col, j).clone())).collect(),
                    None => vec![(col, r.one())],
                };
                let coeff = f.from_i64(t.coeff);
                for (i, a) in &lefts {
                    let am = r.mul_mono(a, &m);
                    if am.is_zero() {
                        continue;
                    }
                    for (j, c) in &rights {
                        let p = r.mul(&am, c);
                        for (mono, x) in p.terms() {
                            match target.index.get(&(tb, *i, *j, *mono)) {
                                Some(k) => acc.push((*k, x * &coeff)),
                                None => debug_assert!(false, "operator leaves the target space"),
                            }
                        }
                    }
                }
            }
            cols.push(sv_from_entries(acc));
        }
        cols
    }
}

/// Rows of the matrix whose columns are given.
pub fn transpose_cols(cols: &[SVec], nrows: usize) -> Vec<SVec> {
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c {
            rows[*i].push((j, x.clone()));
        }
    }
    rows.into_iter().map(sv_from_entries).collect()
}
