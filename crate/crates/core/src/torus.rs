//! Cohomology of a complex torus as an exterior algebra on `e_1..e_k`,
//! `ē_1..ē_k`, with Kähler operators from Hermitian matrices.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::factorial;
use crate::exact::{GaussianRational, Matrix, Rational, Vector};
use crate::hl::{BasisLabel, ConeDescription, Generator, HLModule};

/// Complex dimension, Hermitian generators and the reference combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSpec {
    pub dim: usize,
    pub hermitians: Vec<Matrix>,
    pub reference: Vec<Rational>,
}

impl TorusSpec {
    pub fn new(dim: usize, hermitians: Vec<Matrix>, reference: Vec<Rational>) -> Self {
        TorusSpec {
            dim,
            hermitians,
            reference,
        }
    }

    /// A single generator `h` used as its own reference.
    pub fn single(h: Matrix) -> Self {
        TorusSpec::new(h.rows(), vec![h], vec![Rational::one()])
    }

    /// `Σ c_j h_j` for the reference coefficients.
    pub fn reference_hermitian(&self) -> Result<Matrix> {
        combine(self.dim, &self.hermitians, &self.reference)
    }
}

fn combine(k: usize, hs: &[Matrix], coeffs: &[Rational]) -> Result<Matrix> {
    if coeffs.len() != hs.len() {
        return Err(Error::DimMismatch(format!(
            "{} coefficients for {} Hermitian generators",
            coeffs.len(),
            hs.len()
        )));
    }
    let mut out = Matrix::zeros(k, k);
    for (c, h) in coeffs.iter().zip(hs) {
        out = out.add(&h.scale(&GaussianRational::real(c.clone())));
    }
    Ok(out)
}

/// Monomials of the exterior algebra as bitmasks over `2k` generators:
/// bit `a` is `e_{a+1}` for `a < k`, bit `k+b` is `ē_{b+1}`.
#[derive(Clone, Debug)]
pub struct ExteriorBasis {
    k: usize,
    masks: Vec<u32>,
}

impl ExteriorBasis {
    /// Ordered by total degree, then lexicographically by generator indices.
    pub fn new(k: usize) -> Self {
        let mut masks: Vec<u32> = (0..1u32 << (2 * k)).collect();
        masks.sort_by_key(|&m| {
            let idx: Vec<u32> = (0..2 * k as u32).filter(|b| m >> b & 1 == 1).collect();
            (m.count_ones(), idx)
        });
        ExteriorBasis { k, masks }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn index_of(&self, mask: u32) -> usize {
        self.masks
            .iter()
            .position(|&m| m == mask)
            .expect("mask in basis")
    }

    /// `(#e, #ē)` of a monomial.
    pub fn type_of(&self, mask: u32) -> (usize, usize) {
        let low = (1u32 << self.k) - 1;
        (
            (mask & low).count_ones() as usize,
            (mask >> self.k).count_ones() as usize,
        )
    }

    pub fn label(&self, i: usize) -> BasisLabel {
        let k = self.k as i32;
        let (a, b) = self.type_of(self.masks[i]);
        BasisLabel {
            id: i,
            ell: k - (a + b) as i32,
            p: k - b as i32,
            q: k - a as i32,
        }
    }

    pub fn top_mask(&self) -> u32 {
        (1u32 << (2 * self.k)) - 1
    }
}

/// Sign of `m_a ∧ m_b` relative to the sorted monomial, or `None` if they
/// share a generator.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // inversions: generators of `a` that sit above generators of `b`
    let mut inv = 0u32;
    let mut rest = a;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        inv += (b & ((1u32 << bit) - 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if inv.is_multiple_of(2) { 1 } else { -1 })
}

/// Wedge product of two coordinate vectors.
pub fn wedge(basis: &ExteriorBasis, u: &[GaussianRational], v: &[GaussianRational]) -> Vector {
    let mut out = vec![GaussianRational::zero(); basis.len()];
    for (i, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            let (a, b) = (basis.masks[i], basis.masks[j]);
            if let Some(s) = wedge_sign(a, b) {
                let term = x * y;
                let slot = &mut out[basis.index_of(a | b)];
                if s > 0 {
                    *slot += &term;
                } else {
                    *slot -= &term;
                }
            }
        }
    }
    out
}

/// Matrix of `α ↦ ω ∧ α` for `ω = i Σ h_{ab} e_a ∧ ē_b`.
pub fn kahler_operator(basis: &ExteriorBasis, h: &Matrix) -> Matrix {
    let k = basis.k;
    let n = basis.len();
    let i = GaussianRational::i();
    let mut out = Matrix::zeros(n, n);
    for a in 0..k {
        for b in 0..k {
            let coeff = &i * &h[(a, b)];
            if coeff.is_zero() {
                continue;
            }
            let two = (1u32 << a) | (1u32 << (k + b));
            for (col, &m) in basis.masks.iter().enumerate() {
                if let Some(s) = wedge_sign(two, m) {
                    let row = basis.index_of(two | m);
                    let term = if s > 0 { coeff.clone() } else { -coeff.clone() };
                    out[(row, col)] += &term;
                }
            }
        }
    }
    out
}

/// Antilinear conjugation `e_j ↔ ē_j` as the real matrix `C` with
/// `conj(v) = C·v̄`.
pub fn conjugation_matrix(basis: &ExteriorBasis) -> Matrix {
    let k = basis.k;
    let n = basis.len();
    let mut out = Matrix::zeros(n, n);
    for (col, &m) in basis.masks.iter().enumerate() {
        // conjugate generator by generator, in sorted order
        let mut acc: u32 = 0;
        let mut sign = 1;
        for g in 0..2 * k as u32 {
            if m >> g & 1 == 0 {
                continue;
            }
            let swapped = if (g as usize) < k {
                g + k as u32
            } else {
                g - k as u32
            };
            sign *= wedge_sign(acc, 1 << swapped).expect("distinct generators");
            acc |= 1 << swapped;
        }
        out[(basis.index_of(acc), col)] = GaussianRational::from_int(sign as i64);
    }
    out
}

/// The exterior algebra with its calibrated integral.
#[derive(Clone, Debug)]
pub struct TorusAlgebra {
    spec: TorusSpec,
    basis: ExteriorBasis,
    /// `∫` of the sorted top monomial.
    top_integral: GaussianRational,
    module: HLModule,
}

impl TorusAlgebra {
    pub fn new(spec: &TorusSpec) -> Result<Self> {
        let k = spec.dim;
        if k == 0 || k > 4 {
            return Err(Error::DimMismatch(format!(
                "torus dimension {k} outside 1..=4"
            )));
        }
        if spec
            .hermitians
            .iter()
            .any(|h| h.rows() != k || h.cols() != k)
        {
            return Err(Error::DimMismatch(format!(
                "Hermitian generators must be {k}x{k}"
            )));
        }
        if spec.hermitians.iter().any(|h| !h.is_hermitian()) {
            return Err(Error::NotHermitian);
        }
        let h0 = spec.reference_hermitian()?;
        if !h0.hermitian_pd()? {
            return Err(Error::Precondition(
                "reference Hermitian form is not positive definite".into(),
            ));
        }
        let basis = ExteriorBasis::new(k);
        let n = basis.len();
        let l0 = kahler_operator(&basis, &h0);
        let mut one = vec![GaussianRational::zero(); n];
        one[0] = GaussianRational::one();
        let top = l0.pow(k).apply(&one);
        let w = top[basis.index_of(basis.top_mask())].clone();
        let top_integral = &GaussianRational::real(factorial(k)) * &w.inv().expect("ω₀^k ≠ 0");

        let labels: Vec<BasisLabel> = (0..n).map(|i| basis.label(i)).collect();
        let mut form = Matrix::zeros(n, n);
        for (r, &a) in basis.masks.iter().enumerate() {
            let d = a.count_ones() as usize;
            let sign = if (d * d.saturating_sub(1) / 2).is_multiple_of(2) {
                1
            } else {
                -1
            };
            let b = basis.top_mask() ^ a;
            let s = wedge_sign(a, b).expect("complementary") * sign;
            let val = if s > 0 {
                top_integral.clone()
            } else {
                -top_integral.clone()
            };
            form[(r, basis.index_of(b))] = val;
        }
        let generators = spec
            .hermitians
            .iter()
            .enumerate()
            .map(|(j, h)| Generator {
                name: format!("h{}", j + 1),
                matrix: kahler_operator(&basis, h),
            })
            .collect();
        let module = HLModule::new(
            k,
            labels,
            conjugation_matrix(&basis),
            form,
            generators,
            spec.reference.clone(),
        )?
        .with_cone(ConeDescription::Hermitian(spec.hermitians.clone()))?;
        Ok(TorusAlgebra {
            spec: spec.clone(),
            basis,
            top_integral,
            module,
        })
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn basis(&self) -> &ExteriorBasis {
        &self.basis
    }

    pub fn module(&self) -> &HLModule {
        &self.module
    }

    pub fn into_module(self) -> HLModule {
        self.module
    }

    /// Calibrated `∫ α`, reading only the top-degree coordinate.
    pub fn integral(&self, v: &[GaussianRational]) -> GaussianRational {
        &v[self.basis.index_of(self.basis.top_mask())] * &self.top_integral
    }

    pub fn wedge(&self, u: &[GaussianRational], v: &[GaussianRational]) -> Vector {
        wedge(&self.basis, u, v)
    }

    /// Coordinate vector of `e_{s_1} ∧ … ∧ ē_{t_1} ∧ …` (1-based indices).
    pub fn monomial(&self, e: &[usize], ebar: &[usize]) -> Vector {
        let mut v = vec![GaussianRational::zero(); self.basis.len()];
        let mut acc: u32 = 0;
        let mut sign = 1;
        let gens = e
            .iter()
            .map(|&a| a - 1)
            .chain(ebar.iter().map(|&b| self.basis.k + b - 1));
        for g in gens {
            match wedge_sign(acc, 1 << g) {
                Some(s) => sign *= s,
                None => return v,
            }
            acc |= 1 << g;
        }
        v[self.basis.index_of(acc)] = GaussianRational::from_int(sign as i64);
        v
    }
}

/// Builds the polarized Hodge-Lefschetz module of a torus.
pub fn build_torus_module(spec: &TorusSpec) -> Result<HLModule> {
    Ok(TorusAlgebra::new(spec)?.into_module())
}
