//! Good filtrations of DG algebras and their extension across one adjoined
//! variable.

use std::collections::{BTreeMap, BTreeSet};

use super::dg::{DGAlgebra, VarKind, Word};
use crate::complexes::{Complex, FreeModule, ModComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `pieces[i][n]` is the set of basis words spanning `F(i)^n`; for `i`
/// past the last stored piece, `F(i)` is the last piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub algebra: DGAlgebra,
    pub parameter: i64,
    pieces: Vec<BTreeMap<i64, BTreeSet<Word>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub window: usize,
    pub parameter: i64,
    pub axioms: Vec<AxiomCheck>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn axiom(&self, k: usize) -> &AxiomCheck {
        &self.axioms[k - 1]
    }
}

fn all_words(x: &DGAlgebra) -> BTreeMap<i64, BTreeSet<Word>> {
    (-(x.window() as i64)..=0).map(|n| (n, x.words(n).into_iter().collect())).collect()
}

impl Filtration {
    pub fn new(algebra: &DGAlgebra, parameter: i64, pieces: Vec<BTreeMap<i64, BTreeSet<Word>>>) -> Result<Filtration> {
        if pieces.is_empty() {
            return Err(Error::Invalid("a filtration needs at least one piece".into()));
        }
        for p in &pieces {
            for (n, ws) in p {
                if let Some(w) = ws.iter().find(|w| w.len() != algebra.vars().len() || algebra.word_degree(w) != *n) {
                    return Err(Error::Invalid(format!("word {} is not a basis word of degree {n}", algebra.format_word(w))));
                }
            }
        }
        Ok(Filtration { algebra: algebra.clone(), parameter, pieces })
    }

    /// `F(0)` = the degree-0 part `A`, `F(i)` = everything for `i >= 1`, `c = 0`.
    pub fn trivial(x: &DGAlgebra) -> Filtration {
        let zero = BTreeMap::from([(0, BTreeSet::from([vec![0; x.vars().len()]]))]);
        Filtration { algebra: x.clone(), parameter: 0, pieces: vec![zero, all_words(x)] }
    }

    /// Every piece equal to `X`.
    pub fn constant(x: &DGAlgebra, parameter: i64) -> Filtration {
        Filtration { algebra: x.clone(), parameter, pieces: vec![all_words(x)] }
    }

    /// Number of stored pieces; later pieces repeat the last one.
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pieces(&self) -> &[BTreeMap<i64, BTreeSet<Word>>] {
        &self.pieces
    }

    pub fn piece(&self, i: i64, n: i64) -> BTreeSet<Word> {
        if i < 0 {
            return BTreeSet::new();
        }
        let i = (i as usize).min(self.pieces.len() - 1);
        self.pieces[i].get(&n).cloned().unwrap_or_default()
    }

    pub fn contains(&self, i: i64, w: &Word) -> bool {
        self.piece(i, self.algebra.word_degree(w)).contains(w)
    }

    /// Removes one word from `F(i)^n`.
    pub fn without(&self, i: usize, w: &Word) -> Filtration {
        let mut out = self.clone();
        while out.pieces.len() <= i {
            out.pieces.push(out.pieces.last().unwrap().clone());
        }
        let n = self.algebra.word_degree(w);
        if let Some(s) = out.pieces[i].get_mut(&n) {
            s.remove(w);
        }
        out
    }

    /// The sub-complex `F(i)` as a free complex.
    pub fn subcomplex(&self, i: i64) -> Result<Complex> {
        let x = &self.algebra;
        let w = x.window() as i64;
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in -w..=0 {
            let src: Vec<Word> = self.piece(i, n).into_iter().collect();
            terms.insert(n, FreeModule::new(src.len()));
            if n < 0 {
                let tgt: Vec<Word> = self.piece(i, n + 1).into_iter().collect();
                let idx: BTreeMap<&Word, usize> = tgt.iter().enumerate().map(|(k, x)| (x, k)).collect();
                let mut m = Matrix::zeros(tgt.len(), src.len());
                for (c, u) in src.iter().enumerate() {
                    for (v, a) in x.d_word(u) {
                        let r = idx.get(&v).ok_or_else(|| Error::Invalid(format!("F({i}) is not closed under d")))?;
                        m.set(*r, c, a);
                    }
                }
                diffs.insert(n, m);
            }
        }
        Complex::new(x.ring(), terms, diffs)
    }
}

/// Extends a good filtration of `X` with parameter `c` to `Z = X<T>`,
/// where `T` is the last variable of `z` and `d T = t` lies in `F(r)`.
pub fn good_filtration_extend(f: &Filtration, z: &DGAlgebra, r: i64) -> Result<Filtration> {
    let x = &f.algebra;
    let nx = x.vars().len();
    if z.vars().len() != nx + 1 || z.vars()[..nx] != *x.vars() || z.ring() != x.ring() {
        return Err(Error::Invalid("the extended algebra must be X with one more variable".into()));
    }
    if r < 0 {
        return Err(Error::Invalid("r must be non-negative".into()));
    }
    let var = &z.vars()[nx];
    if let Some(w) = var.cycle.keys().find(|w| !f.contains(r, &w[..nx].to_vec())) {
        return Err(Error::Invalid(format!("t is not in F({r}): word {} is missing", x.format_word(&w[..nx].to_vec()))));
    }
    let c = f.parameter;
    let rho = var.degree;
    let full = all_words(z);
    let lift = |w: &Word, e: u32| -> Word {
        let mut v = w.clone();
        v.push(e);
        v
    };
    let window = z.window() as i64;
    let piece = |i: i64| -> BTreeMap<i64, BTreeSet<Word>> {
        let mut out = BTreeMap::new();
        for n in -window..=0 {
            let mut s = BTreeSet::new();
            match var.kind {
                VarKind::Exterior => {
                    s.extend(f.piece(i + r + c, n).iter().map(|w| lift(w, 0)));
                    s.extend(f.piece(i, n - rho).iter().map(|w| lift(w, 1)));
                }
                VarKind::DividedPower => {
                    for e in 0..=i {
                        let src = f.piece((i - e) * (r + c), n - rho * e);
                        s.extend(src.iter().map(|w| lift(w, e as u32)));
                    }
                }
            }
            s.retain(|w| full[&n].contains(w));
            out.insert(n, s);
        }
        out
    };
    let mut pieces = vec![];
    let mut i = 0;
    loop {
        let p = piece(i);
        let done = p == full && i as usize >= f.len();
        pieces.push(p);
        if done {
            break;
        }
        i += 1;
        if i > 4096 {
            return Err(Error::Internal("extended filtration does not exhaust the window".into()));
        }
    }
    let parameter = match var.kind {
        VarKind::Exterior => r + 2 * c,
        VarKind::DividedPower => 1,
    };
    Ok(Filtration { algebra: z.clone(), parameter, pieces })
}

/// Itemized check of the five axioms of a good filtration in the
/// materialized window.
pub fn verify_good_filtration(f: &Filtration) -> Result<FiltrationReport> {
    let x = &f.algebra;
    let window = x.window();
    let last = f.len() as i64 - 1;
    let full = all_words(x);
    let mut axioms = vec![];

    let mut bad = None;
    'a1: for i in 0..=last {
        for n in -(window as i64)..=0 {
            for w in f.piece(i, n) {
                for v in x.d_word(&w).keys() {
                    if !f.contains(i, v) {
                        bad = Some(format!("d({}) involves {} outside F({i})^{}", x.format_word(&w), x.format_word(v), n + 1));
                        break 'a1;
                    }
                }
            }
        }
    }
    axioms.push(AxiomCheck {
        axiom: 1,
        name: "sub-complex, term-wise summand",
        passed: bad.is_none(),
        detail: bad.unwrap_or_else(|| "closed under d; pieces are spanned by basis words".into()),
    });

    let mut bad = None;
    'a2: for i in 0..last {
        for n in -(window as i64)..=0 {
            if let Some(w) = f.piece(i, n).difference(&f.piece(i + 1, n)).next() {
                bad = Some(format!("{} is in F({i}) but not F({})", x.format_word(w), i + 1));
                break 'a2;
            }
        }
    }
    if bad.is_none() {
        if let Some((n, w)) = full.iter().find_map(|(n, s)| s.difference(&f.piece(last, *n)).next().map(|w| (*n, w.clone()))) {
            bad = Some(format!("{} (degree {n}) lies in no piece", x.format_word(&w)));
        }
    }
    axioms.push(AxiomCheck {
        axiom: 2,
        name: "nested and exhausting",
        passed: bad.is_none(),
        detail: bad.clone().unwrap_or_else(|| format!("F({last}) is everything in degrees >= -{window}")),
    });
    axioms.push(AxiomCheck {
        axiom: 3,
        name: "summand of the next piece",
        passed: bad.is_none(),
        detail: bad.unwrap_or_else(|| "each piece is spanned by a subset of the basis words of the next".into()),
    });

    let c = f.parameter;
    let mut bad = None;
    'a4: for i in 0..=last {
        for j in i..=last {
            for n in -(window as i64)..=0 {
                for m in -(window as i64) - n..=0 {
                    let (pi, pj) = (f.piece(i, n), f.piece(j, m));
                    for u in &pi {
                        for v in &pj {
                            for dir in [(u, v), (v, u)] {
                                if let Some((_, w)) = x.mul_words(dir.0, dir.1) {
                                    if !f.contains(i + j + c, &w) {
                                        bad = Some(format!(
                                            "{} * {} = {} is not in F({})",
                                            x.format_word(dir.0),
                                            x.format_word(dir.1),
                                            x.format_word(&w),
                                            i + j + c
                                        ));
                                        break 'a4;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    axioms.push(AxiomCheck {
        axiom: 4,
        name: "multiplicativity",
        passed: bad.is_none(),
        detail: bad.unwrap_or_else(|| format!("F(i)F(j) in F(i+j+{c}) on all basis-word pairs")),
    });

    let mut lengths = vec![];
    let mut bad = None;
    for i in 1..=last.max(1) {
        match f.subcomplex(i) {
            Ok(s) => {
                let m = ModComplex::from_free(&s)?;
                let total: usize = (-(window as i64) + 1..=0).map(|n| m.cohomology_dim(n)).sum();
                lengths.push(format!("F({i}): {total}"));
            }
            Err(_) => {
                bad = Some(format!("F({i}) is not a complex"));
                break;
            }
        }
    }
    axioms.push(AxiomCheck {
        axiom: 5,
        name: "finite length cohomology for i >= 1",
        passed: bad.is_none(),
        detail: bad.unwrap_or_else(|| {
            format!("A Artinian; k-dimension of H in degrees -{}..0: {}", window as i64 - 1, lengths.join(", "))
        }),
    });
    Ok(FiltrationReport { window, parameter: c, axioms })
}
