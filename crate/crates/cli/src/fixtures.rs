//! Fixture files compiled into the binary for the suites.

use homforge_core::algebra::Ring;
use homforge_core::complexes::Complex;
use homforge_core::error::Result;
use homforge_core::io::{complex_from_json, ring_from_json};
use homforge_core::resolutions::koszul_on_variables;
use std::path::Path;

pub const KX2: &str = include_str!("../fixtures/kx2.json");
pub const KX3: &str = include_str!("../fixtures/kx3.json");
pub const KXY: &str = include_str!("../fixtures/kxy.json");
pub const KXY_M2: &str = include_str!("../fixtures/kxy_m2.json");
pub const KX_GRADED: &str = include_str!("../fixtures/kx_graded.json");
pub const STALK: &str = include_str!("../fixtures/stalkA.json");
pub const TWO_TERM_X: &str = include_str!("../fixtures/two_term_x.json");

pub fn ring(src: &str) -> Result<Ring> {
    ring_from_json(src)
}

pub fn complex(src: &str, r: &Ring) -> Result<Complex> {
    complex_from_json(src, Path::new("."), Some(r))
}

/// Stalk, two-term and Koszul complexes over `r`.
pub fn standard(r: &Ring) -> Result<Vec<(&'static str, Complex)>> {
    Ok(vec![
        ("stalk A", complex(STALK, r)?),
        ("[A -x-> A]", complex(TWO_TERM_X, r)?),
        ("Koszul", koszul_on_variables(r)?),
    ])
}
