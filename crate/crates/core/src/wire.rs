//! JSON formats for modules, polytopes, tori and operator tuples.
//!
//! Scalars are strings (`"3/2"`, `"1/2-i"`); plain JSON integers are
//! accepted on input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::exact::{GaussianRational, Matrix, Rational};
use crate::hl::{validate_structure, BasisLabel, ConeDescription, Generator, HLModule};
use crate::mixed::OperatorTuple;
use crate::polytope::SimplePolytope;
use crate::report::CheckReport;
use crate::torus::TorusSpec;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn rational(&self) -> Result<Rational> {
        match self {
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    pub fn gaussian(&self) -> Result<GaussianRational> {
        match self {
            Scalar::Int(n) => Ok(GaussianRational::from_int(*n)),
            Scalar::Text(s) => s.parse(),
        }
    }
}

fn rationals(v: &[Scalar]) -> Result<Vec<Rational>> {
    v.iter().map(Scalar::rational).collect()
}

fn encode_rationals(v: &[Rational]) -> Vec<Scalar> {
    v.iter().map(|x| Scalar::Text(format_rational(x))).collect()
}

fn decode_matrix(rows: &[Vec<Scalar>], what: &str) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(Scalar::gaussian).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn encode_matrix(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| Scalar::Text(x.to_string())).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeJson {
    Halfspaces(Vec<Vec<Scalar>>),
    Hermitian(Vec<Vec<Vec<Scalar>>>),
}

impl ConeJson {
    fn from_cone(c: &ConeDescription) -> Self {
        match c {
            ConeDescription::Halfspaces(rows) => {
                ConeJson::Halfspaces(rows.iter().map(|r| encode_rationals(r)).collect())
            }
            ConeDescription::Hermitian(hs) => {
                ConeJson::Hermitian(hs.iter().map(encode_matrix).collect())
            }
        }
    }

    fn to_cone(&self) -> Result<ConeDescription> {
        Ok(match self {
            ConeJson::Halfspaces(rows) => ConeDescription::Halfspaces(
                rows.iter().map(|r| rationals(r)).collect::<Result<_>>()?,
            ),
            ConeJson::Hermitian(hs) => ConeDescription::Hermitian(
                hs.iter()
                    .map(|h| decode_matrix(h, "cone hermitian"))
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub weight: usize,
    pub basis: Vec<BasisLabel>,
    pub conjugation: Vec<Vec<Scalar>>,
    pub form: Vec<Vec<Scalar>>,
    pub generators: Vec<GeneratorJson>,
    pub reference: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeJson>,
}

impl ModuleJson {
    pub fn from_module(m: &HLModule) -> Self {
        ModuleJson {
            weight: m.weight(),
            basis: m.basis().to_vec(),
            conjugation: encode_matrix(m.conjugation()),
            form: encode_matrix(m.form()),
            generators: m
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    matrix: encode_matrix(&g.matrix),
                })
                .collect(),
            reference: encode_rationals(m.reference()),
            cone: m.cone().map(ConeJson::from_cone),
        }
    }

    pub fn to_module(&self) -> Result<HLModule> {
        let n = self.basis.len();
        // a 0x0 matrix has no rows to carry its width
        let square = |rows: &[Vec<Scalar>], what: &str| -> Result<Matrix> {
            if n == 0 && rows.is_empty() {
                Ok(Matrix::zeros(0, 0))
            } else {
                decode_matrix(rows, what)
            }
        };
        let generators = self
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    matrix: square(&g.matrix, &g.name)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = HLModule::new(
            self.weight,
            self.basis.clone(),
            square(&self.conjugation, "conjugation")?,
            square(&self.form, "form")?,
            generators,
            rationals(&self.reference)?,
        )?;
        match &self.cone {
            Some(c) => m.with_cone(c.to_cone()?),
            None => Ok(m),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a module without checking its invariants.
pub fn parse_module(text: &str) -> Result<HLModule> {
    parse_json::<ModuleJson>(text)?.to_module()
}

/// Parses a module and runs [`validate_structure`] on it; the module is
/// returned only when validation passes.
pub fn import_module(text: &str) -> Result<(Option<HLModule>, CheckReport)> {
    let m = parse_module(text)?;
    let report = validate_structure(&m);
    Ok((report.passed().then_some(m), report))
}

pub fn export_module(m: &HLModule) -> String {
    serde_json::to_string_pretty(&ModuleJson::from_module(m)).expect("module serializes")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub name: String,
    pub dim: usize,
    pub normals: Vec<Vec<Scalar>>,
    pub support: Vec<Scalar>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &SimplePolytope) -> Self {
        PolytopeJson {
            name: p.name().to_string(),
            dim: p.dim(),
            normals: p.normals().iter().map(|n| encode_rationals(n)).collect(),
            support: encode_rationals(p.support()),
        }
    }

    pub fn build(&self) -> Result<SimplePolytope> {
        let normals = self
            .normals
            .iter()
            .map(|n| rationals(n))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = normals.iter().find(|n| n.len() != self.dim) {
            return Err(Error::DimMismatch(format!(
                "normal of length {} in a dimension-{} polytope",
                bad.len(),
                self.dim
            )));
        }
        SimplePolytope::build(&self.name, normals, rationals(&self.support)?)
    }
}

pub fn parse_polytope(text: &str) -> Result<SimplePolytope> {
    parse_json::<PolytopeJson>(text)?.build()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusJson {
    pub dim: usize,
    pub hermitians: Vec<Vec<Vec<Scalar>>>,
    pub reference: Vec<Scalar>,
}

impl TorusJson {
    pub fn from_spec(s: &TorusSpec) -> Self {
        TorusJson {
            dim: s.dim,
            hermitians: s.hermitians.iter().map(encode_matrix).collect(),
            reference: encode_rationals(&s.reference),
        }
    }

    pub fn to_spec(&self) -> Result<TorusSpec> {
        let hermitians = self
            .hermitians
            .iter()
            .enumerate()
            .map(|(j, h)| decode_matrix(h, &format!("hermitian {}", j + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusSpec::new(
            self.dim,
            hermitians,
            rationals(&self.reference)?,
        ))
    }
}

pub fn parse_torus(text: &str) -> Result<TorusSpec> {
    parse_json::<TorusJson>(text)?.to_spec()
}

/// Coefficient vector from a map of generator names to scalars; missing
/// generators get zero.
pub fn named_coeffs(m: &HLModule, named: &BTreeMap<String, Scalar>) -> Result<Vec<Rational>> {
    let names = m.generator_names();
    let mut out = vec![Rational::from_integer(0.into()); names.len()];
    for (key, value) in named {
        let pos = names
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{key}`")))?;
        out[pos] = value.rational()?;
    }
    Ok(out)
}

/// `d1=1,d3=2/3` style coefficients.
pub fn parse_ops(m: &HLModule, text: &str) -> Result<Vec<Rational>> {
    let mut named = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got `{part}`")))?;
        named.insert(k.trim().to_string(), Scalar::Text(v.trim().to_string()));
    }
    named_coeffs(m, &named)
}

/// `[{"T": {"d1": "1"}}, …]`, certified entry by entry.
pub fn parse_tuple(m: &HLModule, text: &str) -> Result<OperatorTuple> {
    let entries: Vec<BTreeMap<String, BTreeMap<String, Scalar>>> = parse_json(text)?;
    let mut coeffs = Vec::with_capacity(entries.len());
    for e in &entries {
        if e.len() != 1 {
            return Err(Error::Parse(
                "each tuple entry must have exactly one key".into(),
            ));
        }
        let named = e.values().next().expect("one entry");
        coeffs.push(named_coeffs(m, named)?);
    }
    OperatorTuple::new(m, coeffs)
}

pub fn export_tuple(m: &HLModule, tuple: &OperatorTuple) -> String {
    let names = m.generator_names();
    let entries: Vec<BTreeMap<String, BTreeMap<String, Scalar>>> = tuple
        .coeffs()
        .iter()
        .map(|c| {
            let named = names
                .iter()
                .zip(c)
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(n, x)| (n.clone(), Scalar::Text(format_rational(x))))
                .collect();
            BTreeMap::from([("T".to_string(), named)])
        })
        .collect();
    serde_json::to_string(&entries).expect("tuple serializes")
}
