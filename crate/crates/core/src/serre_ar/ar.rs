//! Auslander-Reiten triangles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::serre::serre_trace;
use crate::complexes::{cone, cone_triangle, dual, dual_map, dual_shift_witness, ChainMap, Complex, Triangle};
use crate::error::{Error, Result};
use crate::homotopy::{end_algebra, is_indecomposable, is_null_homotopic, minimize, Decomposition, HomSpace};
use crate::linalg::SVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `N -> E -> M --h--> N[1]`, ending at `M`.
    Right,
    /// `M[-1] --g--> N -> E -> M`, starting at `N`, with `g = -h[-1]`.
    Left,
}

#[derive(Clone, Debug)]
pub struct ARTriangle {
    pub triangle: Triangle,
    pub side: Side,
}

impl ARTriangle {
    /// `h` for a right triangle, `g` for a left one.
    pub fn connecting(&self) -> &ChainMap {
        match self.side {
            Side::Right => &self.triangle.v,
            Side::Left => &self.triangle.u,
        }
    }

    /// `M`.
    pub fn end(&self) -> &Complex {
        match self.side {
            Side::Right => self.triangle.last(),
            Side::Left => &self.triangle.v.target,
        }
    }

    /// `N`.
    pub fn start(&self) -> &Complex {
        match self.side {
            Side::Right => self.triangle.first(),
            Side::Left => self.triangle.middle(),
        }
    }

    /// The right triangle `h[-1]`-cone `N -> cone(-h[-1]) -> M --h--> N[1]` for any `h : M -> N[1]`.
    pub fn from_connecting(h: &ChainMap) -> Result<ARTriangle> {
        let m1 = h.source.shift(-1);
        let n = h.target.shift(-1);
        let g = h.shift(-1).neg().with_ends(&m1, &n)?;
        let triangle = cone_triangle(&g)?;
        Ok(ARTriangle { triangle, side: Side::Right })
    }
}

/// The right AR triangle `F(X)[-1] -> cone(h)[-1] -> X --h--> F(X)`, with
/// `h` dual under the Serre pairing to a functional on `End_K(X)` that
/// kills the radical and takes the value 1 on the identity.
pub fn ar_triangle_ending_at(x: &Complex, seed: u64) -> Result<ARTriangle> {
    match is_indecomposable(x, seed)? {
        Decomposition::Indecomposable => {}
        Decomposition::Zero => return Err(Error::Invalid("the zero complex has no AR triangle".into())),
        Decomposition::Decomposable { .. } => return Err(Error::Invalid("complex is decomposable".into())),
        Decomposition::Undecided { quotient_dim } => {
            return Err(Error::Invalid(format!(
                "indecomposability undecided (End/rad has dimension {quotient_dim})"
            )))
        }
    }
    let trace = serre_trace(x, seed)?;
    let alg = end_algebra(x)?;
    let field = x.ring().field();
    // phi(b_i) for the End basis: rad -> 0, id -> 1; solve sum_j c_j L(g_j b_i) = phi(b_i)
    let mut conds: Vec<SVec> = alg.radical.clone();
    conds.push(alg.identity.clone());
    let g_basis = trace.space.basis();
    let mut rows = Vec::new();
    for c in &conds {
        let f = alg.space.from_coords(c);
        let row: Vec<(usize, crate::field::Scalar)> = g_basis
            .iter()
            .enumerate()
            .map(|(j, g)| Ok((j, trace.eval(&g.compose(&f))?)))
            .collect::<Result<_>>()?;
        rows.push(crate::linalg::sv_from_entries(row));
    }
    let mut rhs = vec![field.zero(); conds.len()];
    *rhs.last_mut().unwrap() = field.one();
    let eqs: Vec<(SVec, crate::field::Scalar)> = rows.into_iter().zip(rhs).collect();
    let c = crate::linalg::solve(&eqs, trace.space.dim())
        .ok_or_else(|| Error::Internal("socle functional has no preimage under the Serre pairing".into()))?;
    let h = trace.space.from_coords(&c);
    ARTriangle::from_connecting(&h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Passed(String),
    Failed(String),
    Vacuous,
    Undecided(String),
}

impl Check {
    pub fn ok(&self) -> bool {
        matches!(self, Check::Passed(_) | Check::Vacuous)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ARReport {
    pub side: Side,
    /// `M` and `N` indecomposable.
    pub ar1: Check,
    /// Connecting map not null-homotopic.
    pub ar2: Check,
    /// Sampled factorization property.
    pub ar3: Check,
    pub seed: u64,
    pub samples: usize,
}

impl ARReport {
    pub fn passed(&self) -> bool {
        self.ar1.ok() && self.ar2.ok() && self.ar3.ok()
    }
}

pub const AR_RANDOM_SAMPLES: usize = 32;

/// `t` is an isomorphism in `K(A)`: its cone is contractible.
pub fn is_iso_in_k(t: &ChainMap) -> Result<bool> {
    Ok(minimize(&cone(t)?)?.minimal.is_zero())
}

/// `{A, A[1], A[-1], X, X[1], X[-1]}`.
pub fn standard_family(x: &Complex) -> Vec<Complex> {
    let a = Complex::stalk(x.ring(), 0);
    vec![a.clone(), a.shift(1), a.shift(-1), x.clone(), x.shift(1), x.shift(-1)]
}

fn indecomposable_check(c: &Complex, what: &str, seed: u64) -> Result<Check> {
    Ok(match is_indecomposable(c, seed)? {
        Decomposition::Indecomposable => Check::Passed(format!("{what} indecomposable")),
        Decomposition::Zero => Check::Failed(format!("{what} is zero in K")),
        Decomposition::Decomposable { .. } => Check::Failed(format!("{what} has a nontrivial idempotent")),
        Decomposition::Undecided { quotient_dim } => Check::Undecided(format!("{what}: End/rad of dimension {quotient_dim}")),
    })
}

/// RAR1-3 (right) or LAR1-3 (left); the third item is checked on the basis
/// and `AR_RANDOM_SAMPLES` random elements of each Hom space.
pub fn verify_ar(t: &ARTriangle, family: &[Complex], seed: u64) -> Result<ARReport> {
    let (m, n) = (t.end().clone(), t.start().clone());
    let ar1 = match (indecomposable_check(&m, "M", seed)?, indecomposable_check(&n, "N", seed)?) {
        (Check::Passed(_), Check::Passed(_)) => Check::Passed("M and N indecomposable".into()),
        (Check::Passed(_), other) | (other, _) => other,
    };
    let conn = t.connecting();
    let ar2 = if is_null_homotopic(conn)?.is_null() {
        Check::Failed("connecting map is null-homotopic".into())
    } else {
        Check::Passed("connecting map is not null-homotopic".into())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut ar3 = if family.is_empty() { Check::Vacuous } else { Check::Passed(String::new()) };
    'outer: for (k, d) in family.iter().enumerate() {
        let space = match t.side {
            Side::Right => HomSpace::new(d, &m)?,
            Side::Left => HomSpace::new(&n, d)?,
        };
        if space.dim() == 0 {
            continue;
        }
        let mut maps = space.basis();
        maps.extend((0..AR_RANDOM_SAMPLES).map(|_| space.random(&mut rng)));
        for s in maps {
            samples += 1;
            if is_iso_in_k(&s)? {
                continue;
            }
            let comp = match t.side {
                Side::Right => conn.compose(&s),
                Side::Left => s.compose(conn),
            };
            if !is_null_homotopic(&comp)?.is_null() {
                let what = match t.side {
                    Side::Right => "h . t",
                    Side::Left => "s . g",
                };
                ar3 = Check::Failed(format!("family member {k}: a non-isomorphism with {what} not null-homotopic"));
                break 'outer;
            }
        }
    }
    if let Check::Passed(s) = &mut ar3 {
        *s = format!("{samples} sampled maps over {} family members", family.len());
    }
    Ok(ARReport { side: t.side, ar1, ar2, ar3, seed, samples })
}

pub fn verify_right_ar(t: &ARTriangle, family: &[Complex], seed: u64) -> Result<ARReport> {
    if t.side != Side::Right {
        return Err(Error::Invalid("expected a right AR triangle".into()));
    }
    verify_ar(t, family, seed)
}

/// `M[-1] --(-h[-1])--> N -> E -> M`.
pub fn rotate_right_to_left(t: &ARTriangle) -> Result<ARTriangle> {
    if t.side != Side::Right {
        return Err(Error::Invalid("expected a right AR triangle".into()));
    }
    if t.end().is_zero() {
        return Err(Error::Invalid("not an AR triangle: M is zero".into()));
    }
    Ok(ARTriangle { triangle: t.triangle.rotate_back()?, side: Side::Left })
}

fn inverse(f: &ChainMap) -> Result<ChainMap> {
    f.termwise_inverse().ok_or_else(|| Error::Internal("canonical dual isomorphism is not invertible".into()))
}

/// Applies `(-)* = Hom_A(-, A)` to the three maps; a right triangle ending
/// at `M` becomes a left one starting at `M*` and conversely.
pub fn ar_dual(t: &ARTriangle) -> Result<ARTriangle> {
    let tr = &t.triangle;
    match t.side {
        Side::Right => {
            // N -u-> E -w-> M -h-> N[1]  becomes  N*[-1] -> M* -w*-> E* -u*-> N*
            let n = tr.first();
            let sigma = inverse(&dual_shift_witness(n)?)?;
            let g = dual_map(&tr.v)?.compose(&sigma).neg();
            let triangle = Triangle::new(g, dual_map(&tr.w)?, dual_map(&tr.u)?, crate::complexes::Provenance::Claimed)?;
            Ok(ARTriangle { triangle, side: Side::Left })
        }
        Side::Left => {
            // M[-1] -g-> N -u-> E -w-> M  becomes  M* -w*-> E* -u*-> N* -> M*[1]
            let m = &tr.v.target;
            let tau = dual_shift_witness(&m.shift(-1))?.shift(1);
            let tau_inv = inverse(&tau)?;
            let target = dual(m)?.shift(1);
            let h = tau_inv.compose(&dual_map(&tr.u)?).neg().with_ends(&dual(tr.middle())?, &target)?;
            let triangle = Triangle::new(dual_map(&tr.v)?, dual_map(&tr.w)?, h, crate::complexes::Provenance::Claimed)?;
            Ok(ARTriangle { triangle, side: Side::Right })
        }
    }
}

/// Class coordinates of the connecting map.
pub fn connecting_coordinates(t: &ARTriangle) -> Result<SVec> {
    let h = t.connecting();
    let space = HomSpace::new(&h.source, &h.target)?;
    space.express(h).ok_or_else(|| Error::Internal("connecting map left its Hom space".into()))
}
