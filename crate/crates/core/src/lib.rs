//! Exact construction and verification of polarized Hodge-Lefschetz modules.

pub mod descent;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod hl;
pub mod koszul;
pub mod mixed;
pub mod polytope;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod torus;
pub mod wire;

pub use error::{Error, Result};
pub use hl::HLModule;
pub use report::{CheckReport, Verdict, Witness};
