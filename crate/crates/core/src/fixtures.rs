//! The bundled fixture corpus under `fixtures/`.

use crate::error::{Error, Result};
use crate::polytope::SimplePolytope;
use crate::torus::TorusSpec;
use crate::wire::{parse_polytope, parse_torus};

pub const POLYTOPES: &[(&str, &str)] = &[
    ("segment", include_str!("../../../fixtures/segment.json")),
    ("triangle", include_str!("../../../fixtures/triangle.json")),
    ("square", include_str!("../../../fixtures/square.json")),
    ("simplex3", include_str!("../../../fixtures/simplex3.json")),
    ("cube3", include_str!("../../../fixtures/cube3.json")),
    ("cube4", include_str!("../../../fixtures/cube4.json")),
    ("prism", include_str!("../../../fixtures/prism.json")),
    ("pentagon", include_str!("../../../fixtures/pentagon.json")),
    (
        "square-perturbed",
        include_str!("../../../fixtures/square-perturbed.json"),
    ),
    (
        "cube3-perturbed",
        include_str!("../../../fixtures/cube3-perturbed.json"),
    ),
    (
        "prism-perturbed",
        include_str!("../../../fixtures/prism-perturbed.json"),
    ),
];

pub const TORI: &[(&str, &str)] = &[
    ("torus1", include_str!("../../../fixtures/torus1.json")),
    ("torus2", include_str!("../../../fixtures/torus2.json")),
    ("torus3", include_str!("../../../fixtures/torus3.json")),
];

/// The polytopes every construction and theorem check is run against.
pub const CORE_POLYTOPES: &[&str] = &[
    "segment",
    "triangle",
    "square",
    "simplex3",
    "cube3",
    "cube4",
    "prism",
    "square-perturbed",
    "cube3-perturbed",
    "prism-perturbed",
];

pub fn polytope(name: &str) -> Result<SimplePolytope> {
    let (_, text) = POLYTOPES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no polytope fixture `{name}`")))?;
    parse_polytope(text)
}

pub fn torus(name: &str) -> Result<TorusSpec> {
    let (_, text) = TORI
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no torus fixture `{name}`")))?;
    parse_torus(text)
}
