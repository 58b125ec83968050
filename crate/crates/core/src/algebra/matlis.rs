//! The injective hull `E` of the residue field as the k-dual of `A`.

use super::{Ring, RingElem};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, KMat, SVec};

/// `E = Hom_k(A, k)` on the dual monomial basis, with `(a.f)(b) = f(ab)`.
#[derive(Clone, Debug)]
pub struct MatlisModule {
    pub ring: Ring,
    /// Action of each variable on the dual basis.
    pub action: Vec<KMat>,
}

impl MatlisModule {
    pub fn new(ring: &Ring) -> Result<MatlisModule> {
        ring.require_artinian("the Matlis module")?;
        let action = (0..ring.nvars()).map(|v| ring.mult_matrix(&ring.var(v)).transpose()).collect();
        let e = MatlisModule { ring: ring.clone(), action };
        e.verify()?;
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Matrix of the action of an arbitrary ring element.
    pub fn act_matrix(&self, a: &RingElem) -> KMat {
        self.ring.mult_matrix(a).transpose()
    }

    /// Checks that the double contragredient reproduces multiplication on `A`
    /// and that `End_A(E)` has the k-dimension of `A`.
    pub fn verify(&self) -> Result<()> {
        let r = &self.ring;
        for (v, m) in self.action.iter().enumerate() {
            if m.transpose() != r.mult_matrix(&r.var(v)) {
                return Err(Error::Internal("double dual action differs from multiplication".into()));
            }
        }
        if commutant_dim(&self.action, self.dim()) != r.dim() {
            return Err(Error::Internal("End_A(E) does not have the dimension of A".into()));
        }
        Ok(())
    }

    /// Generator of `E` when `A` is Gorenstein: the dual of the socle monomial.
    pub fn generator(&self) -> Option<SVec> {
        let s = self.ring.socle_monomial()?;
        let i = self.ring.index_of(&s)?;
        Some(vec![(i, self.ring.field().one())])
    }

    /// The k-matrix of `A -> E, a |-> a.g` for a generator `g`; invertible
    /// exactly when `A` is Gorenstein.
    pub fn iso_from_a(&self) -> Option<KMat> {
        let g = self.generator()?;
        let cols: Vec<SVec> =
            self.ring.basis().iter().map(|m| self.act_matrix(&self.ring.monomial(*m, self.ring.field().one())).apply(&g)).collect();
        let m = KMat::from_cols(self.dim(), &cols, self.ring.field());
        m.inverse().map(|_| m)
    }
}

/// Dimension of the space of matrices commuting with every given action.
pub fn commutant_dim(action: &[KMat], n: usize) -> usize {
    // unknown X (n x n) flattened row-major; equations (X M - M X) = 0
    let mut rows = Vec::new();
    for m in action {
        for i in 0..n {
            for j in 0..n {
                let mut e = Vec::new();
                for k in 0..n {
                    let a = m.get(k, j);
                    if !a.is_zero() {
                        e.push((i * n + k, a.clone()));
                    }
                    let b = m.get(i, k);
                    if !b.is_zero() {
                        e.push((k * n + j, -b));
                    }
                }
                rows.push(crate::linalg::sv_from_entries(e));
            }
        }
    }
    let e = Echelon::from_rows(n * n, &rows);
    n * n - e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Backend, LocalAlgebra};
    use crate::field::Field;

    #[test]
    fn dual_action_on_kx2() {
        let a = LocalAlgebra::with_relations(Field::Rationals, &["x"], &["x^2"], Backend::Artinian).unwrap();
        let e = MatlisModule::new(&a).unwrap();
        // basis {1*, x*}: x.1* = 0, x.x* = 1*
        let x = &e.action[0];
        assert!(x.col(0).is_empty());
        assert_eq!(x.col(1), vec![(0, Field::Rationals.one())]);
        assert!(e.iso_from_a().is_some());
    }

    #[test]
    fn field_case_is_trivial() {
        let k = LocalAlgebra::with_relations(Field::Rationals, &[], &[], Backend::Artinian).unwrap();
        let e = MatlisModule::new(&k).unwrap();
        assert_eq!(e.dim(), 1);
        assert!(e.action.is_empty());
    }

    #[test]
    fn non_gorenstein_has_no_generator() {
        let a = LocalAlgebra::with_relations(Field::Rationals, &["x", "y"], &["x^2", "x*y", "y^2"], Backend::Artinian)
            .unwrap();
        let e = MatlisModule::new(&a).unwrap();
        assert_eq!(e.dim(), 3);
        assert!(e.iso_from_a().is_none());
    }
}
