//! Computations in the homotopy category `K(A)`.

mod endo;
mod extend;
mod hom;
mod iso;
mod minimize;
pub mod space;

pub use endo::{decompose, end_algebra, is_indecomposable, Decomposition, EndAlgebra};
pub use extend::extend_null_homotopy;
pub use hom::{
    graded_hom_dims, hom_space_k, homotopic, is_null_homotopic, mu_hom, solve_in_k, HomSpace, NullSolver,
    NullVerdict,
};
pub use iso::{iso_in_k, IsoVerdict, EXHAUSTIVE_DIM, RANDOM_SAMPLES};
pub use minimize::{minimize, rank, width, MinimalModel};
