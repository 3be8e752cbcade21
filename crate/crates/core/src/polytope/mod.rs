//! Simple polytopes, their volume polynomials and the associated
//! Hodge-Lefschetz modules.

pub mod algebra;
pub mod geometry;

pub use algebra::{
    af_check, ample_cone, build_pkt_module, h_vector, mixed_volume, volume_polynomial,
    PolytopeAlgebra, VOLUME_VALIDATION_POINTS,
};
pub use geometry::{volume_oracle, SimplePolytope};
