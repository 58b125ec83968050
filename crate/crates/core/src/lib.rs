pub mod error;
pub mod field;
pub mod linalg;
pub mod algebra;
pub mod matrix;
pub mod complexes;
pub mod poly;
pub mod homotopy;
pub mod resolutions;
pub mod tate;
pub mod serre_ar;
pub mod io;
