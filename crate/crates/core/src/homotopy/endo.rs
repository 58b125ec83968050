//! Endomorphism algebras `End_K(X)`, their radicals and idempotents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hom::HomSpace;
use crate::complexes::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{sv_add, sv_axpy, sv_from_entries, sv_scale, sv_unit, Coordinates, Echelon, KMat, SVec};
use crate::poly::Poly;

/// `End_K(X)` with structure constants in the homotopy-class basis.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub complex: Complex,
    pub space: HomSpace,
    /// `table[i][j]` = coordinates of `b_i . b_j`.
    pub table: Vec<Vec<SVec>>,
    pub identity: SVec,
    /// Basis of the Jacobson radical, in coordinates.
    pub radical: Vec<SVec>,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.complex.ring().field()
    }

    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        let mut out = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                out = sv_axpy(&out, &(x * y), &self.table[*i][*j]);
            }
        }
        out
    }

    /// Matrix of `b |-> a b`.
    pub fn left_mult(&self, a: &SVec) -> KMat {
        let f = self.field();
        let cols: Vec<SVec> = (0..self.dim()).map(|j| self.mul(a, &sv_unit(j, f))).collect();
        KMat::from_cols(self.dim(), &cols, f)
    }

    pub fn element(&self, a: &SVec) -> ChainMap {
        self.space.from_coords(a)
    }

    pub fn radical_dim(&self) -> usize {
        self.radical.len()
    }

    /// The radical is a two-sided ideal and `rad^{dim+1} = 0`.
    pub fn verify_radical(&self) -> bool {
        let f = self.field();
        let e = Echelon::from_rows(self.dim(), &self.radical);
        for r in &self.radical {
            for j in 0..self.dim() {
                let b = sv_unit(j, f);
                if !e.contains(&self.mul(r, &b)) || !e.contains(&self.mul(&b, r)) {
                    return false;
                }
            }
        }
        let mut power = self.radical.clone();
        for _ in 0..=self.dim() {
            if power.is_empty() {
                return true;
            }
            let mut next = Echelon::new(self.dim());
            for a in &power {
                for r in &self.radical {
                    next.insert(&self.mul(a, r));
                }
            }
            power = next.rows().to_vec();
        }
        power.is_empty()
    }

    /// Minimal polynomial of `a` by the first dependence among its powers.
    pub fn minpoly(&self, a: &SVec) -> Poly {
        let f = self.field();
        let mut powers: Vec<SVec> = vec![self.identity.clone()];
        loop {
            let c = Coordinates::new(self.dim(), &powers, f);
            let next = self.mul(powers.last().unwrap(), a);
            if let Some(x) = c.express(&next) {
                let mut coeffs = vec![f.zero(); powers.len() + 1];
                for (k, v) in x {
                    coeffs[k] = -&v;
                }
                coeffs[powers.len()] = f.one();
                return Poly::new(f, coeffs);
            }
            powers.push(next);
        }
    }

    /// `p(a)`
    pub fn eval(&self, p: &Poly, a: &SVec) -> SVec {
        let mut acc: SVec = Vec::new();
        for c in p.coeffs.iter().rev() {
            acc = sv_add(&self.mul(&acc, a), &sv_scale(&self.identity, c));
        }
        acc
    }

    /// A nontrivial idempotent split off from the minimal polynomial of `a`.
    pub fn split_idempotent(&self, a: &SVec, rng: &mut ChaCha8Rng) -> Option<SVec> {
        let q = self.minpoly(a);
        for lambda in q.roots(rng) {
            let lin = Poly::linear(&lambda);
            let mut s = q.clone();
            let mut pw = Poly::constant(self.field().one());
            while s.eval(&lambda).is_zero() {
                s = s.divrem(&lin).0;
                pw = pw.mul(&lin);
            }
            if s.degree() == Some(0) {
                continue;
            }
            let (_, _, t) = pw.ext_gcd(&s);
            let e = self.eval(&t.mul(&s), a);
            if self.mul(&e, &e) == e && !e.is_empty() && e != self.identity {
                return Some(e);
            }
        }
        None
    }
}

/// `End_K(X)` with its radical.
pub fn end_algebra(x: &Complex) -> Result<EndAlgebra> {
    let space = HomSpace::new(x, x)?;
    let basis = space.basis();
    let n = basis.len();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = space
                .express(&basis[i].compose(&basis[j]))
                .ok_or_else(|| Error::Internal("composition left End_K".into()))?;
        }
    }
    let identity = space
        .express(&ChainMap::identity(x))
        .ok_or_else(|| Error::Internal("identity is not an endomorphism".into()))?;
    let mut alg = EndAlgebra { complex: x.clone(), space, table, identity, radical: vec![] };
    alg.radical = match alg.field() {
        Field::Rationals => trace_form_radical(&alg),
        Field::Prime(p) => modular_radical(&alg, p),
    };
    if !alg.verify_radical() {
        return Err(Error::Internal("computed radical is not a nilpotent ideal".into()));
    }
    Ok(alg)
}

fn trace(m: &KMat) -> Scalar {
    let mut t = m.get(0, 0).field().zero();
    for i in 0..m.rows {
        t = &t + m.get(i, i);
    }
    t
}

/// Kernel of `(a, b) |-> tr(L_{ab})`.
fn trace_form_radical(alg: &EndAlgebra) -> Vec<SVec> {
    let n = alg.dim();
    if n == 0 {
        return vec![];
    }
    let f = alg.field();
    let tr: Vec<Scalar> = (0..n).map(|k| trace(&alg.left_mult(&sv_unit(k, f)))).collect();
    let rows: Vec<SVec> = (0..n)
        .map(|i| {
            sv_from_entries(
                (0..n)
                    .map(|j| {
                        let mut s = f.zero();
                        for (k, c) in &alg.table[i][j] {
                            s = &s + &(c * &tr[*k]);
                        }
                        (j, s)
                    })
                    .collect(),
            )
        })
        .collect();
    Echelon::from_rows(n, &rows).kernel(f)
}

fn lift(m: &KMat) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| BigInt::from(m.get(i, j).as_i64().unwrap())).collect()).collect()
}

fn mat_mul_mod(a: &[Vec<BigInt>], b: &[Vec<BigInt>], q: &BigInt) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] = (&out[i][j] + &a[i][k] * &b[k][j]).mod_floor(q);
            }
        }
    }
    out
}

/// `(Tr(L~^{p^i}) mod p^{i+1}) / p^i` for an integer lift `L~`.
fn g_i(m: &KMat, p: u64, i: u32) -> Scalar {
    let pb = BigInt::from(p);
    let q = pb.pow(i + 1);
    let mut base = lift(m);
    let n = base.len();
    let mut acc: Vec<Vec<BigInt>> =
        (0..n).map(|r| (0..n).map(|c| BigInt::from((r == c) as u8)).collect()).collect();
    let mut e = pb.pow(i);
    while !e.is_zero() {
        if e.is_odd() {
            acc = mat_mul_mod(&acc, &base, &q);
        }
        base = mat_mul_mod(&base, &base, &q);
        e >>= 1;
    }
    let mut t = BigInt::zero();
    for (r, row) in acc.iter().enumerate() {
        t += &row[r];
    }
    let t = t.mod_floor(&q) / pb.pow(i);
    Field::Prime(p).from_i64(t.to_i64().unwrap())
}

/// Radical in characteristic `p`: `I_{-1} = A`, and `I_i` is the set of
/// `a` in `I_{i-1}` with `g_i(a b) = 0` for all `b`; the radical is `I_l`
/// with `l = floor(log_p dim)`.
fn modular_radical(alg: &EndAlgebra, p: u64) -> Vec<SVec> {
    let n = alg.dim();
    if n == 0 {
        return vec![];
    }
    let f = alg.field();
    let mut l = 0u32;
    while (p as u128).pow(l + 1) <= n as u128 {
        l += 1;
    }
    let mut ideal: Vec<SVec> = (0..n).map(|k| sv_unit(k, f)).collect();
    for i in 0..=l {
        // constraint rows indexed by b, columns by the current basis
        let rows: Vec<SVec> = (0..n)
            .map(|t| {
                let b = sv_unit(t, f);
                sv_from_entries(ideal.iter().enumerate().map(|(s, v)| (s, g_i(&alg.left_mult(&alg.mul(v, &b)), p, i))).collect())
            })
            .collect();
        let ker = Echelon::from_rows(ideal.len(), &rows).kernel(f);
        ideal = ker
            .iter()
            .map(|c| {
                let mut v = Vec::new();
                for (s, x) in c {
                    v = sv_axpy(&v, x, &ideal[*s]);
                }
                v
            })
            .collect();
    }
    ideal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `End_K(X)` is local with residue field `k`.
    Indecomposable,
    Decomposable { idempotent: ChainMap },
    Zero,
    /// Semisimple quotient of dimension > 1 with no idempotent found.
    Undecided { quotient_dim: usize },
}

/// Candidate elements: basis vectors, pairwise sums, then random ones.
fn find_idempotent(alg: &EndAlgebra, seed: u64) -> Option<SVec> {
    let f = alg.field();
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cands: Vec<SVec> = (0..n).map(|k| sv_unit(k, f)).collect();
    for i in 0..n {
        for j in i + 1..n {
            cands.push(sv_add(&sv_unit(i, f), &sv_unit(j, f)));
        }
    }
    for _ in 0..32 {
        cands.push(sv_from_entries((0..n).map(|k| (k, f.random(&mut rng))).collect()));
    }
    cands.iter().find_map(|a| alg.split_idempotent(a, &mut rng))
}

/// Decides whether `End_K(X)` is local.
pub fn is_indecomposable(x: &Complex, seed: u64) -> Result<Decomposition> {
    let alg = end_algebra(x)?;
    decompose(&alg, seed)
}

pub fn decompose(alg: &EndAlgebra, seed: u64) -> Result<Decomposition> {
    if alg.dim() == 0 {
        return Ok(Decomposition::Zero);
    }
    let q = alg.dim() - alg.radical_dim();
    if q == 1 {
        return Ok(Decomposition::Indecomposable);
    }
    Ok(match find_idempotent(alg, seed) {
        Some(e) => Decomposition::Decomposable { idempotent: alg.element(&e) },
        None => Decomposition::Undecided { quotient_dim: q },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};

    #[test]
    fn examples() {
        for field in [Field::Rationals, Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
            let r = LocalAlgebra::with_relations(field, &["x"], &["x^2"], Backend::Artinian).unwrap();
            let a = Complex::stalk(&r, 0);
            let e = end_algebra(&a).unwrap();
            assert_eq!((e.dim(), e.radical_dim()), (2, 1));
            assert_eq!(decompose(&e, 0).unwrap(), Decomposition::Indecomposable);
            let x = Complex::two_term(&r, -1, &r.var(0)).unwrap();
            let e = end_algebra(&x).unwrap();
            assert_eq!((e.dim(), e.radical_dim()), (2, 1));
            let s = Complex::direct_sum2(&a, &a.shift(1)).unwrap();
            let e = end_algebra(&s).unwrap();
            assert_eq!((e.dim(), e.radical_dim()), (4, 2));
            match decompose(&e, 0).unwrap() {
                Decomposition::Decomposable { idempotent } => {
                    assert!(crate::homotopy::homotopic(&idempotent.compose(&idempotent), &idempotent).unwrap());
                }
                d => panic!("{d:?}"),
            }
        }
    }
}
