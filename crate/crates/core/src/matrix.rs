//! Matrices with entries in a local algebra. Matrices act on column
//! vectors, so the composite `g . f` is the product `g * f`.

use crate::algebra::{LocalAlgebra, Mono, RingElem};
use crate::field::Scalar;
use crate::linalg::KMat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![RingElem::default(); rows * cols] }
    }

    pub fn identity(n: usize, r: &LocalAlgebra) -> Self {
        Matrix::scalar(n, &r.one())
    }

    /// `a` times the identity.
    pub fn scalar(n: usize, a: &RingElem) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, a.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElem>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: RingElem) {
        self.data[i * self.cols + j] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> {
        self.data.iter().enumerate().map(move |(k, a)| (k / self.cols.max(1), k % self.cols.max(1), a))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> {
        self.entries().filter(|e| !e.2.is_zero())
    }

    pub fn mul(&self, o: &Matrix, r: &LocalAlgebra) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let p = r.mul(a, b);
                        let s = r.add(m.get(i, j), &p);
                        m.set(i, j, s);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Matrix, r: &LocalAlgebra) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(o.data.iter()).map(|(a, b)| r.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix, r: &LocalAlgebra) -> Matrix {
        self.add(&o.neg(r), r)
    }

    pub fn neg(&self, r: &LocalAlgebra) -> Matrix {
        self.map(|a| r.neg(a))
    }

    pub fn scale(&self, c: &Scalar, r: &LocalAlgebra) -> Matrix {
        self.map(|a| r.scale(a, c))
    }

    /// Multiplies every entry by a ring element.
    pub fn times(&self, a: &RingElem, r: &LocalAlgebra) -> Matrix {
        self.map(|b| r.mul(a, b))
    }

    pub fn map<F: Fn(&RingElem) -> RingElem>(&self, f: F) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for (i, j, a) in self.entries() {
            m.set(j, i, a.clone());
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(i0, j0)`.
    pub fn put(&mut self, i0: usize, j0: usize, block: &Matrix) {
        for (i, j, a) in block.entries() {
            self.set(i0 + i, j0 + j, a.clone());
        }
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let r = parts.iter().map(|p| p.rows).sum();
        let c = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut i0, mut j0) = (0, 0);
        for p in parts {
            m.put(i0, j0, p);
            i0 += p.rows;
            j0 += p.cols;
        }
        m
    }

    /// 2x2 block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Matrix::zeros(a.rows + c.rows, a.cols + b.cols);
        m.put(0, 0, a);
        m.put(0, a.cols, b);
        m.put(a.rows, 0, c);
        m.put(a.rows, a.cols, d);
        m
    }

    /// Every entry lies in the maximal ideal.
    pub fn is_minimal(&self, r: &LocalAlgebra) -> bool {
        self.data.iter().all(|a| r.in_max_ideal(a))
    }

    /// First entry with a nonzero constant term.
    pub fn unit_entry(&self, r: &LocalAlgebra) -> Option<(usize, usize)> {
        self.entries().find(|e| r.is_unit(e.2)).map(|e| (e.0, e.1))
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self, r: &LocalAlgebra) -> KMat {
        let mut m = KMat::zeros(self.rows, self.cols, r.field());
        for (i, j, a) in self.entries() {
            m.set(i, j, r.constant_term(a));
        }
        m
    }

    /// k-linear expansion over the monomial basis: index `(g, b)` of a free
    /// module becomes `g * dim + b`.
    pub fn expand(&self, r: &LocalAlgebra) -> KMat {
        let n = r.dim();
        let mut m = KMat::zeros(self.rows * n, self.cols * n, r.field());
        for (i, j, a) in self.nonzero() {
            for (bj, b) in r.basis().iter().enumerate() {
                for (ma, c) in a.terms() {
                    if let Some(bi) = r.index_of(&ma.mul(b)) {
                        m.add_at(i * n + bi, j * n + bj, c);
                    }
                }
            }
        }
        m
    }

    /// Inverse over the local ring by elimination with unit pivots.
    pub fn inverse(&self, r: &LocalAlgebra) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, r);
        for c in 0..n {
            let p = (c..n).find(|&i| r.is_unit(a.get(i, c)))?;
            if p != c {
                a.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            let u = r.inverse(a.get(c, c))?;
            a.scale_row(c, &u, r);
            inv.scale_row(c, &u, r);
            for i in 0..n {
                if i != c && !a.get(i, c).is_zero() {
                    let f = r.neg(a.get(i, c));
                    a.add_row_multiple(i, c, &f, r);
                    inv.add_row_multiple(i, c, &f, r);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, u: &RingElem, r: &LocalAlgebra) {
        for c in 0..self.cols {
            let v = r.mul(u, self.get(i, c));
            self.set(i, c, v);
        }
    }

    /// row_i += f * row_j
    fn add_row_multiple(&mut self, i: usize, j: usize, f: &RingElem, r: &LocalAlgebra) {
        for c in 0..self.cols {
            let v = r.add(self.get(i, c), &r.mul(f, self.get(j, c)));
            self.set(i, c, v);
        }
    }

    /// Largest monomial degree among entries (graded bookkeeping).
    pub fn max_degree(&self) -> Option<u32> {
        self.data.iter().filter_map(|a| a.leading_degree()).max()
    }

    pub fn format(&self, r: &LocalAlgebra) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| r.format(self.get(i, j))).collect()).collect()
    }

    /// Monomials that occur in any entry.
    pub fn support_monomials(&self) -> Vec<Mono> {
        let mut v: Vec<Mono> = self.data.iter().flat_map(|a| a.terms().keys().copied()).collect();
        v.sort();
        v.dedup();
        v
    }
}
