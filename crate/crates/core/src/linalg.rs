//! Exact linear algebra over a [`Field`]: sparse vectors, an incrementally
//! maintained reduced row echelon form, and small dense matrices.

use std::collections::HashMap;

use crate::field::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SVec = Vec<(usize, Scalar)>;

pub fn sv_unit(i: usize, f: Field) -> SVec {
    vec![(i, f.one())]
}

pub fn sv_get(v: &SVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

pub fn sv_scale(v: &SVec, c: &Scalar) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// `a + c * b`.
pub fn sv_axpy(a: &SVec, c: &Scalar, b: &SVec) -> SVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, &b[j].1 * c));
            j += 1;
        } else {
            let s = &a[i].1 + &(&b[j].1 * c);
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_add(a: &SVec, b: &SVec) -> SVec {
    match b.first() {
        None => a.clone(),
        Some((_, x)) => sv_axpy(a, &x.field().one(), b),
    }
}

pub fn sv_sub(a: &SVec, b: &SVec) -> SVec {
    match b.first() {
        None => a.clone(),
        Some((_, x)) => sv_axpy(a, &-x.field().one(), b),
    }
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sv_from_entries(mut e: Vec<(usize, Scalar)>) -> SVec {
    e.sort_by_key(|x| x.0);
    let mut out: SVec = Vec::with_capacity(e.len());
    for (i, x) in e {
        if let Some(last) = out.last_mut() {
            if last.0 == i {
                last.1 = &last.1 + &x;
                continue;
            }
        }
        out.push((i, x));
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn sv_dot(a: &SVec, b: &SVec, f: Field) -> Scalar {
    let (mut i, mut j) = (0, 0);
    let mut s = f.zero();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s = &s + &(&a[i].1 * &b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Row space in fully reduced echelon form, maintained incrementally.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SVec>,
    pivot: Vec<usize>,
    row_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot: Vec::new(), row_of: HashMap::new() }
    }

    pub fn from_rows<'a, I: IntoIterator<Item = &'a SVec>>(ncols: usize, rows: I) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivot
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.row_of.contains_key(&c)
    }

    /// Remainder of `v` modulo the row space; zero at every pivot column.
    pub fn reduce(&self, v: &SVec) -> SVec {
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter_map(|(c, x)| self.row_of.get(c).map(|r| (*r, x.clone())))
            .collect();
        let mut out = v.clone();
        for (r, x) in hits {
            out = sv_axpy(&out, &-&x, &self.rows[r]);
        }
        out
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns whether it enlarged the row space.
    pub fn insert(&mut self, v: &SVec) -> bool {
        self.insert_below(v, usize::MAX)
    }

    /// Inserts `v` only if its remainder has a leading column below `limit`.
    /// Columns at or beyond `limit` are bookkeeping columns.
    pub fn insert_below(&mut self, v: &SVec, limit: usize) -> bool {
        let w = self.reduce(v);
        let Some((lead, x)) = w.first().cloned() else {
            return false;
        };
        if lead >= limit {
            return false;
        }
        let w = sv_scale(&w, &x.inv());
        for r in 0..self.rows.len() {
            if let Some(c) = sv_get(&self.rows[r], lead).cloned() {
                self.rows[r] = sv_axpy(&self.rows[r], &-&c, &w);
            }
        }
        self.row_of.insert(lead, self.rows.len());
        self.pivot.push(lead);
        self.rows.push(w);
        true
    }

    /// Basis of `{x : r·x = 0 for every row r}`.
    pub fn kernel(&self, f: Field) -> Vec<SVec> {
        let mut acc: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                if !self.row_of.contains_key(c) {
                    acc.entry(*c).or_default().push((self.pivot[r], -x));
                }
            }
        }
        (0..self.ncols)
            .filter(|c| !self.row_of.contains_key(c))
            .map(|c| {
                let mut e = acc.remove(&c).unwrap_or_default();
                e.push((c, f.one()));
                sv_from_entries(e)
            })
            .collect()
    }
}

/// Solves the system `{ row · x = rhs }` over `ncols` unknowns; free
/// unknowns are set to zero.
pub fn solve(eqs: &[(SVec, Scalar)], ncols: usize) -> Option<SVec> {
    let mut e = Echelon::new(ncols + 1);
    for (row, rhs) in eqs {
        let mut r = row.clone();
        if !rhs.is_zero() {
            r.push((ncols, rhs.clone()));
        }
        e.insert(&r);
    }
    if e.is_pivot(ncols) {
        return None;
    }
    let mut x = Vec::new();
    for (r, row) in e.rows.iter().enumerate() {
        if let Some(v) = sv_get(row, ncols) {
            x.push((e.pivot[r], v.clone()));
        }
    }
    Some(sv_from_entries(x))
}

/// Expresses vectors in terms of a fixed generating list.
#[derive(Clone, Debug)]
pub struct Coordinates {
    width: usize,
    count: usize,
    ech: Echelon,
    independent: Vec<usize>,
}

impl Coordinates {
    /// `gens` live in a space of dimension `width`.
    pub fn new(width: usize, gens: &[SVec], f: Field) -> Self {
        let mut ech = Echelon::new(width + gens.len());
        let mut independent = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            let mut v = g.clone();
            v.push((width + j, f.one()));
            if ech.insert_below(&v, width) {
                independent.push(j);
            }
        }
        Coordinates { width, count: gens.len(), ech, independent }
    }

    /// Indices of a maximal independent sublist, in order.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    pub fn rank(&self) -> usize {
        self.independent.len()
    }

    /// Coefficients `c` with `v = sum c_j gens[j]`, or `None` when `v` is
    /// outside the span.
    pub fn express(&self, v: &SVec) -> Option<SVec> {
        let w = self.ech.reduce(v);
        if w.iter().any(|(c, _)| *c < self.width) {
            return None;
        }
        Some(
            w.iter()
                .map(|(c, x)| (c - self.width, -x))
                .collect(),
        )
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.ech.reduce(v).iter().all(|(c, _)| *c >= self.width)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Small dense matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMat {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl KMat {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        KMat { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = KMat::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &Scalar) {
        let k = i * self.cols + j;
        self.data[k] = &self.data[k] + x;
    }

    pub fn from_cols(rows: usize, cols: &[SVec], field: Field) -> Self {
        let mut m = KMat::zeros(rows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> SVec {
        (0..self.rows)
            .filter(|&i| !self.get(i, j).is_zero())
            .map(|i| (i, self.get(i, j).clone()))
            .collect()
    }

    pub fn row(&self, i: usize) -> SVec {
        (0..self.cols)
            .filter(|&j| !self.get(i, j).is_zero())
            .map(|j| (j, self.get(i, j).clone()))
            .collect()
    }

    pub fn row_vecs(&self) -> Vec<SVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<SVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> KMat {
        let mut t = KMat::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &KMat) -> KMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = KMat::zeros(self.rows, o.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        m.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut e = Vec::new();
        for (j, x) in v {
            for i in 0..self.rows {
                let a = self.get(i, *j);
                if !a.is_zero() {
                    e.push((i, a * x));
                }
            }
        }
        sv_from_entries(e)
    }

    pub fn scale(&self, c: &Scalar) -> KMat {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = &*x * c;
        }
        m
    }

    pub fn add(&self, o: &KMat) -> KMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(o.data.iter()) {
            *x = &*x + y;
        }
        m
    }

    pub fn sub(&self, o: &KMat) -> KMat {
        self.add(&o.scale(&-self.field.one()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, &self.row_vecs()).rank()
    }

    /// Null space basis.
    pub fn kernel(&self) -> Vec<SVec> {
        Echelon::from_rows(self.cols, &self.row_vecs()).kernel(self.field)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Option<KMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = KMat::identity(n, self.field);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let u = a.get(c, c).inv();
            for j in 0..n {
                a.data[c * n + j] = &a.data[c * n + j] * &u;
                inv.data[c * n + j] = &inv.data[c * n + j] * &u;
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let x = &a.data[i * n + j] - &(&f * &a.data[c * n + j]);
                    a.data[i * n + j] = x;
                    let y = &inv.data[i * n + j] - &(&f * &inv.data[c * n + j]);
                    inv.data[i * n + j] = y;
                }
            }
        }
        Some(inv)
    }

    pub fn neg(&self) -> KMat {
        self.scale(&-self.field.one())
    }

    /// Writes `b` with its top-left corner at `(i0, j0)`.
    pub fn put(&mut self, i0: usize, j0: usize, b: &KMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(i0 + i, j0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> KMat {
        let mut m = KMat::zeros(rows.len(), cols.len(), self.field);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(parts: &[&KMat], field: Field) -> KMat {
        let r: usize = parts.iter().map(|p| p.rows).sum();
        let c: usize = parts.iter().map(|p| p.cols).sum();
        let mut m = KMat::zeros(r, c, field);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m.set(r0 + i, c0 + j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rationals.from_i64(n)
    }

    #[test]
    fn kernel_of_rank_one_rows() {
        let f = Field::Rationals;
        let rows = vec![vec![(0, q(1)), (1, q(2))], vec![(0, q(2)), (1, q(4))]];
        let e = Echelon::from_rows(3, &rows);
        assert_eq!(e.rank(), 1);
        let k = e.kernel(f);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                assert!(sv_dot(r, v, f).is_zero());
            }
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let eqs = vec![(vec![(0, q(1))], q(1)), (vec![(0, q(2))], q(3))];
        assert!(solve(&eqs, 1).is_none());
        let eqs = vec![(vec![(0, q(1)), (1, q(1))], q(3)), (vec![(1, q(1))], q(1))];
        assert_eq!(solve(&eqs, 2).unwrap(), vec![(0, q(2)), (1, q(1))]);
    }

    #[test]
    fn coordinates_recover_combination() {
        let f = Field::Rationals;
        let g = vec![vec![(0, q(1)), (1, q(1))], vec![(1, q(1))], vec![(0, q(2)), (1, q(3))]];
        let c = Coordinates::new(2, &g, f);
        assert_eq!(c.independent(), &[0, 1]);
        let v = vec![(0, q(5)), (1, q(7))];
        let coef = c.express(&v).unwrap();
        let mut back = Vec::new();
        for (j, x) in &coef {
            back = sv_axpy(&back, x, &g[*j]);
        }
        assert_eq!(back, v);
    }

    #[test]
    fn dense_inverse_roundtrip() {
        let f = Field::prime(7).unwrap();
        let m = KMat::from_cols(
            2,
            &[vec![(0, f.from_i64(2)), (1, f.from_i64(1))], vec![(0, f.from_i64(1)), (1, f.from_i64(1))]],
            f,
        );
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), KMat::identity(2, f));
    }
}
