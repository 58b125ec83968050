//! Tate resolutions by killing cycles, and good filtrations.

mod dg;
mod filtration;

pub use dg::{Adjunction, DGAlgebra, DGElem, DGVariable, VarKind, Word};
pub use filtration::{good_filtration_extend, verify_good_filtration, AxiomCheck, Filtration, FiltrationReport};

use crate::algebra::Ring;
use crate::complexes::ModComplex;
use crate::error::Result;
use crate::linalg::Echelon;

/// Homology of `X` against `X<T>` in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjoinReport {
    pub window: usize,
    pub rho: i64,
    /// `(q, dim H^q(X), dim H^q(X<T>))` for `rho+1 < q <= 0`.
    pub unchanged: Vec<(i64, usize, usize)>,
    /// `(dim H^{rho+1}(X), dim A[t], dim H^{rho+1}(X<T>))`, when in the window.
    pub killed: Option<(usize, usize, usize)>,
}

impl AdjoinReport {
    pub fn passed(&self) -> bool {
        self.unchanged.iter().all(|(_, a, b)| a == b) && self.killed.is_none_or(|(h, at, after)| h - at == after)
    }
}

/// Compares cohomology before and after adjoining the last variable of `z`.
pub fn verify_adjoin_homology(x: &DGAlgebra, z: &DGAlgebra) -> Result<AdjoinReport> {
    let var = z.vars().last().ok_or_else(|| crate::error::Error::Invalid("nothing was adjoined".into()))?;
    let rho = var.degree;
    let window = x.window().min(z.window());
    let (x, z) = (x.with_window(window), z.with_window(window));
    let (mx, mz) = (ModComplex::from_free(&x.complex()?)?, ModComplex::from_free(&z.complex()?)?);
    let w = window as i64;
    let unchanged = (rho + 2..=0).filter(|q| *q > -w).map(|q| (q, mx.cohomology_dim(q), mz.cohomology_dim(q))).collect();
    let q = rho + 1;
    let killed = (q > -w).then(|| {
        let mut b = Echelon::from_rows(mx.dim(q), &mx.d(q - 1).col_vecs());
        let rb = b.rank();
        let ring = x.ring();
        let t: DGElem = var.cycle.iter().map(|(w, c)| (w[..x.vars().len()].to_vec(), c.clone())).collect();
        for m in ring.basis() {
            let mt: DGElem = t
                .iter()
                .map(|(w, c)| (w.clone(), ring.mul_mono(c, m)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            b.insert(&x.expand(&mt, q));
        }
        (mx.cohomology_dim(q), b.rank() - rb, mz.cohomology_dim(q))
    });
    Ok(AdjoinReport { window, rho, unchanged, killed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateResolution {
    pub algebra: DGAlgebra,
    pub bound: usize,
    /// Variables adjoined at each stage, starting with the Koszul stage.
    pub stages: Vec<Vec<usize>>,
}

impl TateResolution {
    /// Ranks in degrees `0, -1, ..., -bound`.
    pub fn betti(&self) -> Vec<usize> {
        self.algebra.ranks()
    }

    /// `H^q = 0` for `-bound < q < 0` and `H^0 = k`.
    pub fn is_acyclic(&self) -> Result<bool> {
        let m = ModComplex::from_free(&self.algebra.complex()?)?;
        Ok(m.cohomology_dim(0) == 1 && (1 - self.bound as i64..0).all(|q| m.cohomology_dim(q) == 0))
    }
}

/// A good filtration of the Tate algebra, built one variable at a time from
/// the trivial filtration of `A`, each step with the least admissible `r`.
pub fn tate_filtration(res: &TateResolution) -> Result<Filtration> {
    let z = &res.algebra;
    let mut f = Filtration::trivial(&z.prefix(0));
    for k in 0..z.vars().len() {
        let next = z.prefix(k + 1);
        let words: Vec<Word> = z.vars()[k].cycle.keys().map(|w| w[..k].to_vec()).collect();
        let r = (0..f.len() as i64).find(|&i| words.iter().all(|w| f.contains(i, w))).unwrap_or(f.len() as i64);
        f = good_filtration_extend(&f, &next, r)?;
    }
    Ok(f)
}

/// Tate's resolution of the residue field, truncated below `-bound`.
pub fn tate_resolve(ring: &Ring, bound: usize) -> Result<TateResolution> {
    let gens: Vec<_> = (0..ring.nvars()).map(|i| ring.var(i)).filter(|v| !v.is_zero()).collect();
    let mut y = DGAlgebra::koszul(ring, &gens, bound)?;
    let mut stages = vec![(0..y.vars().len()).collect::<Vec<_>>()];
    for i in 2..=bound as i64 {
        let q = 1 - i;
        let m = ModComplex::from_free(&y.complex()?)?;
        let (_, reps) = m.cycles_mod_boundaries(q);
        let mut stage = vec![];
        let mut next = y.clone();
        for (k, rep) in reps.iter().enumerate() {
            let t = y.collapse(rep, q);
            let name = format!("S{}_{}", i, k + 1);
            next = next.adjoin(&name, &t)?.algebra;
            stage.push(next.vars().len() - 1);
        }
        y = next;
        stages.push(stage);
    }
    Ok(TateResolution { algebra: y, bound, stages })
}

/// Residue field of `ring`, for comparisons with minimal resolutions.
pub fn residue_betti(ring: &Ring, bound: usize) -> Result<Vec<usize>> {
    let k = crate::resolutions::ModulePresentation::residue_field(ring);
    let r = crate::resolutions::minimal_resolution(&k, bound as i64)?;
    Ok(r.betti())
}
