//! Serre functor, Auslander-Reiten triangles, domination of triangles,
//! Miyata splitting and cone-power families.

mod ar;
mod domination;
mod miyata;
mod serre;

pub use ar::{
    ar_dual, ar_triangle_ending_at, connecting_coordinates, is_iso_in_k, rotate_right_to_left, standard_family,
    verify_ar, verify_right_ar, ARReport, ARTriangle, Check, Side, AR_RANDOM_SAMPLES,
};
pub use domination::{
    antisymmetry_holds, check_shape, standard_triangle_from_projective_cover, triangle_dominates, triangle_from_map,
    Dominance, TriangleMorphism,
};
pub use miyata::{
    cone_power_family, disguise, finite_length_certificate, homotopy_inverse, miyata_split_test, ConeFamily,
    FiniteLength, MiyataVerdict,
};
pub use serre::{
    default_bound, serre_functor, serre_pairing_check, serre_trace, PairingReport, SerreImage, SerreRoute,
    SerreTrace, NATURALITY_SAMPLES,
};
