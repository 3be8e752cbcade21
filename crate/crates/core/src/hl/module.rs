use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Matrix, Rational, Vector};

/// Grade and bidegree of one basis vector of the complexified space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub id: usize,
    pub ell: i32,
    pub p: i32,
    pub q: i32,
}

/// A named element of the commuting operator family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub matrix: Matrix,
}

/// Exact description of the polarizing cone in generator coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeDescription {
    /// `⟨a, c⟩ > 0` for every row `a`.
    Halfspaces(Vec<Vec<Rational>>),
    /// `Σ c_j H_j` positive definite.
    Hermitian(Vec<Matrix>),
}

impl ConeDescription {
    fn arity(&self) -> usize {
        match self {
            ConeDescription::Halfspaces(rows) => rows.first().map_or(0, Vec::len),
            ConeDescription::Hermitian(hs) => hs.len(),
        }
    }

    /// Whether `c` lies in the open cone.
    pub fn contains(&self, c: &[Rational]) -> Result<bool> {
        if c.len() != self.arity()
            && !matches!(self, ConeDescription::Halfspaces(r) if r.is_empty())
        {
            return Err(Error::DimMismatch(format!(
                "{} coefficients for a cone in dimension {}",
                c.len(),
                self.arity()
            )));
        }
        match self {
            ConeDescription::Halfspaces(rows) => Ok(rows.iter().all(|a| {
                let v: Rational = a.iter().zip(c).map(|(x, y)| x * y).sum();
                v > Rational::zero()
            })),
            ConeDescription::Hermitian(hs) => {
                let n = hs.first().map_or(0, Matrix::rows);
                let mut sum = Matrix::zeros(n, n);
                for (x, h) in c.iter().zip(hs) {
                    sum = sum.add(&h.scale(&GaussianRational::real(x.clone())));
                }
                sum.hermitian_pd()
            }
        }
    }
}

/// A weight-`k` graded, bigraded space with polarization form, commuting
/// degree −2 operator family and a reference element `N₀`.
///
/// Vectors are coordinate columns in the fixed basis. The conjugation is the
/// antilinear map `v ↦ C·v̄`, and the form is bilinear: `Q(u, v) = uᵀ Q v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLModule {
    weight: usize,
    basis: Vec<BasisLabel>,
    conjugation: Matrix,
    form: Matrix,
    generators: Vec<Generator>,
    reference: Vec<Rational>,
    cone: Option<ConeDescription>,
}

impl HLModule {
    /// Assembles a module, rejecting only shape errors. Use
    /// [`crate::hl::validate_structure`] for the algebraic invariants.
    pub fn new(
        weight: usize,
        basis: Vec<BasisLabel>,
        conjugation: Matrix,
        form: Matrix,
        generators: Vec<Generator>,
        reference: Vec<Rational>,
    ) -> Result<Self> {
        let n = basis.len();
        let shape = |name: &str, m: &Matrix| -> Result<()> {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimMismatch(format!(
                    "{name} is {}x{}, basis has {n} vectors",
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(())
        };
        shape("conjugation", &conjugation)?;
        shape("form", &form)?;
        for g in &generators {
            shape(&format!("generator `{}`", g.name), &g.matrix)?;
        }
        if reference.len() != generators.len() {
            return Err(Error::DimMismatch(format!(
                "reference has {} coefficients for {} generators",
                reference.len(),
                generators.len()
            )));
        }
        let mut names = BTreeSet::new();
        for g in &generators {
            if !names.insert(g.name.as_str()) {
                return Err(Error::Parse(format!(
                    "duplicate generator name `{}`",
                    g.name
                )));
            }
        }
        Ok(HLModule {
            weight,
            basis,
            conjugation,
            form,
            generators,
            reference,
            cone: None,
        })
    }

    /// Attaches an exact description of the polarizing cone.
    pub fn with_cone(mut self, cone: ConeDescription) -> Result<Self> {
        if cone.arity() != self.generators.len() {
            return Err(Error::DimMismatch(format!(
                "cone in dimension {} for {} generators",
                cone.arity(),
                self.generators.len()
            )));
        }
        self.cone = Some(cone);
        Ok(self)
    }

    pub fn cone(&self) -> Option<&ConeDescription> {
        self.cone.as_ref()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn k(&self) -> i32 {
        self.weight as i32
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn conjugation(&self) -> &Matrix {
        &self.conjugation
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn reference(&self) -> &[Rational] {
        &self.reference
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// Replaces the form (mutation fixtures, negative controls).
    pub fn with_form(mut self, form: Matrix) -> Result<Self> {
        if form.rows() != self.dim() || form.cols() != self.dim() {
            return Err(Error::DimMismatch("form shape".into()));
        }
        self.form = form;
        Ok(self)
    }

    pub fn with_reference(mut self, reference: Vec<Rational>) -> Result<Self> {
        if reference.len() != self.generators.len() {
            return Err(Error::DimMismatch("reference length".into()));
        }
        self.reference = reference;
        Ok(self)
    }

    /// `Σ c_j G_j`.
    pub fn operator(&self, coeffs: &[Rational]) -> Result<Matrix> {
        if coeffs.len() != self.generators.len() {
            return Err(Error::DimMismatch(format!(
                "{} coefficients for {} generators",
                coeffs.len(),
                self.generators.len()
            )));
        }
        let mut out = Matrix::zeros(self.dim(), self.dim());
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if !c.is_zero() {
                out = out.add(&g.matrix.scale(&GaussianRational::real(c.clone())));
            }
        }
        Ok(out)
    }

    /// The matrix of `N₀`.
    pub fn reference_operator(&self) -> Matrix {
        self.operator(&self.reference)
            .expect("reference length checked at construction")
    }

    /// Indices of basis vectors in `V_ℓ`.
    pub fn grade_indices(&self, ell: i32) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.ell == ell)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn grade_dim(&self, ell: i32) -> usize {
        self.basis.iter().filter(|b| b.ell == ell).count()
    }

    /// Indices of basis vectors in `V^{p,q}`.
    pub fn bidegree_indices(&self, p: i32, q: i32) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.p == p && b.q == q)
            .map(|(i, _)| i)
            .collect()
    }

    /// Distinct bidegrees occurring in grade `ell`, sorted.
    pub fn bidegrees_in_grade(&self, ell: i32) -> Vec<(i32, i32)> {
        let set: BTreeSet<(i32, i32)> = self
            .basis
            .iter()
            .filter(|b| b.ell == ell)
            .map(|b| (b.p, b.q))
            .collect();
        set.into_iter().collect()
    }

    /// Indices of basis vectors in `W_ℓ = ⊕_{a ≤ ℓ} V_a`.
    pub fn filtration_indices(&self, ell: i32) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.ell <= ell)
            .map(|(i, _)| i)
            .collect()
    }

    /// `dim V_ℓ` for `ℓ = k, k-1, …, -k`.
    pub fn grade_dims(&self) -> Vec<(i32, usize)> {
        (-self.k()..=self.k())
            .rev()
            .map(|l| (l, self.grade_dim(l)))
            .collect()
    }

    pub fn unit_vector(&self, i: usize) -> Vector {
        let mut v = vec![GaussianRational::zero(); self.dim()];
        v[i] = num_traits::One::one();
        v
    }

    /// `Q(u, v)`.
    pub fn pair(&self, u: &[GaussianRational], v: &[GaussianRational]) -> GaussianRational {
        crate::exact::matrix::dot(u, &self.form.apply(v))
    }

    /// Antilinear conjugation `v ↦ C·v̄`.
    pub fn conj_vector(&self, v: &[GaussianRational]) -> Vector {
        self.conjugation.apply(&crate::exact::matrix::conj_vec(v))
    }

    /// Largest grade whose coordinate in `v` is nonzero.
    pub fn top_grade(&self, v: &[GaussianRational]) -> Option<i32> {
        v.iter()
            .zip(&self.basis)
            .filter(|(x, _)| !x.is_zero())
            .map(|(_, b)| b.ell)
            .max()
    }
}

/// `T^e · X` for a column block `X`, without forming `T^e`.
pub fn power_apply(t: &Matrix, x: &Matrix, e: usize) -> Matrix {
    let mut out = x.clone();
    for _ in 0..e {
        out = t.mul(&out);
    }
    out
}

/// Product `T_1 ⋯ T_m` (identity for the empty product).
pub fn product(n: usize, ops: &[Matrix]) -> Matrix {
    ops.iter().fold(Matrix::identity(n), |acc, t| acc.mul(t))
}

/// Columns of the identity selected by `idx`, i.e. the coordinate inclusion.
pub fn inclusion(n: usize, idx: &[usize]) -> Matrix {
    Matrix::from_fn(n, idx.len(), |r, c| {
        if idx[c] == r {
            num_traits::One::one()
        } else {
            GaussianRational::zero()
        }
    })
}
