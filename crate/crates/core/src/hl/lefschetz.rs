//! Lefschetz property, primitive decomposition, sl₂-completion and
//! polarization for a single degree −2 operator.

use num_traits::Zero;

use super::module::{inclusion, power_apply, HLModule};
use crate::error::{Error, Result};
use crate::exact::matrix::{dot, span_rank};
use crate::exact::{GaussianRational, Matrix, Rational, Vector};
use crate::report::{encode_vector, CheckReport, Witness};

/// Checks that `T^ℓ : V_ℓ → V_{-ℓ}` is invertible for every `ℓ ≥ 1`.
///
/// Fails with `DimMismatch` when `dim V_ℓ ≠ dim V_{-ℓ}`.
pub fn lefschetz_check(m: &HLModule, t: &Matrix) -> Result<CheckReport> {
    let mut report = CheckReport::new("lefschetz-property", "hard-lefschetz");
    for ell in 1..=m.k() {
        let src = m.grade_indices(ell);
        let dst = m.grade_indices(-ell);
        if src.len() != dst.len() {
            return Err(Error::DimMismatch(format!(
                "dim V_{ell} = {} but dim V_-{ell} = {}",
                src.len(),
                dst.len()
            )));
        }
        if src.is_empty() {
            continue;
        }
        let image = power_apply(t, &inclusion(m.dim(), &src), ell as usize);
        let block = restrict_rows(&image, &dst);
        let rank = block.rank();
        if rank == src.len() {
            report.pass(format!("T^{ell}: V_{ell} -> V_-{ell}"));
        } else {
            report.fail(
                format!("T^{ell}: V_{ell} -> V_-{ell}"),
                Witness::Rank {
                    grade: ell,
                    expected: src.len(),
                    found: rank,
                },
            );
        }
    }
    Ok(report)
}

pub fn lefschetz_property(m: &HLModule, t: &Matrix) -> Result<bool> {
    Ok(lefschetz_check(m, t)?.passed())
}

fn restrict_rows(x: &Matrix, rows: &[usize]) -> Matrix {
    let cols: Vec<usize> = (0..x.cols()).collect();
    x.submatrix(rows, &cols)
}

/// Kernel of `op` restricted to the coordinate subspace spanned by `idx`,
/// returned as vectors of the full space.
pub(crate) fn kernel_on(op: &Matrix, idx: &[usize], n: usize) -> Vec<Vector> {
    if idx.is_empty() {
        return Vec::new();
    }
    let (ker, _) = op.select_columns(idx).kernel_basis();
    ker.into_iter()
        .map(|k| {
            let mut v = vec![GaussianRational::zero(); n];
            for (c, x) in idx.iter().zip(k) {
                v[*c] = x;
            }
            v
        })
        .collect()
}

/// `P_ℓ(T) = ker(T^{ℓ+1}) ∩ V_ℓ`.
pub fn primitive_subspace(m: &HLModule, t: &Matrix, ell: i32) -> Result<Vec<Vector>> {
    if ell < 0 {
        return Err(Error::Precondition(
            "primitive grade must be non-negative".into(),
        ));
    }
    if !lefschetz_property(m, t)? {
        return Err(Error::Precondition(
            "operator lacks the Lefschetz property".into(),
        ));
    }
    if ell > m.k() {
        return Ok(Vec::new());
    }
    Ok(primitive_unchecked(m, t, ell))
}

fn primitive_unchecked(m: &HLModule, t: &Matrix, ell: i32) -> Vec<Vector> {
    let idx = m.grade_indices(ell);
    if idx.is_empty() {
        return Vec::new();
    }
    let op = power_apply(t, &inclusion(m.dim(), &idx), ell as usize + 1);
    let (ker, _) = op.kernel_basis();
    let incl = inclusion(m.dim(), &idx);
    ker.iter().map(|k| incl.apply(k)).collect()
}

/// `V_m = P_m ⊕ T·V_{m+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzDecomposition {
    pub grade: i32,
    pub primitive: Vec<Vector>,
    pub image: Vec<Vector>,
}

impl LefschetzDecomposition {
    pub fn dims(&self) -> (usize, usize) {
        (self.primitive.len(), self.image.len())
    }
}

/// Splits `V_mgrade` into its primitive part and `T·V_{mgrade+2}`, certifying
/// the sum is direct and exhaustive.
pub fn lefschetz_decomposition(
    m: &HLModule,
    t: &Matrix,
    mgrade: i32,
) -> Result<LefschetzDecomposition> {
    if mgrade < 0 {
        return Err(Error::Precondition(
            "decomposition grade must be non-negative".into(),
        ));
    }
    if !lefschetz_property(m, t)? {
        return Err(Error::Precondition(
            "operator lacks the Lefschetz property".into(),
        ));
    }
    let primitive = primitive_unchecked(m, t, mgrade);
    let above = m.grade_indices(mgrade + 2);
    let image: Vec<Vector> = above.iter().map(|&j| t.column(j)).collect();
    let dim = m.grade_dim(mgrade);
    let mut all = primitive.clone();
    all.extend(image.iter().cloned());
    let rank = span_rank(m.dim(), &all);
    if all.len() != dim || rank != dim {
        let meet = crate::exact::matrix::intersect(m.dim(), &primitive, &image);
        let witness = meet
            .first()
            .map(|v| encode_vector(v).join(", "))
            .unwrap_or_else(|| "none (dimension deficit)".into());
        return Err(Error::Verification(format!(
            "Lefschetz decomposition of V_{mgrade} fails: dims {}+{} vs {dim}, rank {rank}; intersection vector [{witness}]",
            primitive.len(),
            image.len()
        )));
    }
    Ok(LefschetzDecomposition {
        grade: mgrade,
        primitive,
        image,
    })
}

/// `{Y, N, N⁺}` with `[N⁺, N] = Y`, `[Y, N⁺] = 2N⁺`, `[Y, N] = −2N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub y: Matrix,
    pub n: Matrix,
    pub n_plus: Matrix,
}

impl Sl2Triple {
    /// Which of the three bracket identities hold exactly.
    pub fn relations(&self) -> [bool; 3] {
        let two = GaussianRational::from_int(2);
        [
            self.n_plus.commutator(&self.n) == self.y,
            self.y.commutator(&self.n_plus) == self.n_plus.scale(&two),
            self.y.commutator(&self.n) == self.n.scale(&-two),
        ]
    }

    pub fn holds(&self) -> bool {
        self.relations().iter().all(|&b| b)
    }
}

/// Multiplication by `ℓ` on `V_ℓ`.
pub fn grading_operator(m: &HLModule) -> Matrix {
    Matrix::from_fn(m.dim(), m.dim(), |r, c| {
        if r == c {
            GaussianRational::from_int(m.basis()[r].ell as i64)
        } else {
            GaussianRational::zero()
        }
    })
}

/// Completes a Lefschetz operator to an sl₂-triple.
///
/// `N⁺` is read off the primitive decomposition: on a string
/// `u, Tu, …, T^ℓ u` with `u ∈ P_ℓ` it acts by
/// `N⁺ T^j u = j(ℓ − j + 1) T^{j−1} u`. All three relations are then
/// verified exactly.
pub fn sl2_complete(m: &HLModule, t: &Matrix) -> Result<Sl2Triple> {
    if !lefschetz_property(m, t)? {
        return Err(Error::Precondition(
            "operator lacks the Lefschetz property".into(),
        ));
    }
    let n = m.dim();
    let mut basis: Vec<Vector> = Vec::with_capacity(n);
    let mut images: Vec<Vector> = Vec::with_capacity(n);
    for ell in 0..=m.k() {
        for u in primitive_unchecked(m, t, ell) {
            let mut string = vec![u];
            for _ in 0..ell {
                let next = t.apply(string.last().expect("non-empty"));
                string.push(next);
            }
            for j in 0..=ell as usize {
                basis.push(string[j].clone());
                if j == 0 {
                    images.push(vec![GaussianRational::zero(); n]);
                } else {
                    let c = GaussianRational::from_int((j as i64) * (ell as i64 - j as i64 + 1));
                    images.push(string[j - 1].iter().map(|x| x * &c).collect());
                }
            }
        }
    }
    if basis.len() != n {
        return Err(Error::Internal(format!(
            "primitive strings span {} of {n} dimensions",
            basis.len()
        )));
    }
    let b = Matrix::from_columns(n, &basis);
    let img = Matrix::from_columns(n, &images);
    let b_inv = b
        .inverse()
        .map_err(|_| Error::Internal("primitive strings are linearly dependent".into()))?;
    let triple = Sl2Triple {
        y: grading_operator(m),
        n: t.clone(),
        n_plus: img.mul(&b_inv),
    };
    if !triple.holds() {
        return Err(Error::Internal(format!(
            "sl2 relations fail: {:?}",
            triple.relations()
        )));
    }
    Ok(triple)
}

/// `H[a, b] = i^{p−q} Q(k_a, op · conj(k_b))` on the span of `kernel`.
pub(crate) fn twisted_hermitian(
    m: &HLModule,
    kernel: &[Vector],
    op: &Matrix,
    p: i32,
    q: i32,
) -> Matrix {
    let phase = GaussianRational::i_pow((p - q) as i64);
    let partners: Vec<Vector> = kernel
        .iter()
        .map(|v| m.form().apply(&op.apply(&m.conj_vector(v))))
        .collect();
    Matrix::from_fn(kernel.len(), kernel.len(), |a, b| {
        &phase * &dot(&kernel[a], &partners[b])
    })
}

/// Runs Sylvester on `H` and records the outcome as one sub-check.
pub(crate) fn record_positivity(
    report: &mut CheckReport,
    name: String,
    m: &HLModule,
    h: &Matrix,
    kernel: &[Vector],
    (grade, p, q): (i32, i32, i32),
) {
    match h.sylvester() {
        Err(_) => report.fail(name, Witness::note("twisted form is not Hermitian")),
        Ok(cert) if cert.is_positive() => report.pass(name),
        Ok(cert) => {
            let idx = cert.failure.expect("failed certificate has index");
            let coeffs = cert.witness.expect("failed certificate has witness");
            let mut v = vec![GaussianRational::zero(); m.dim()];
            for (c, k) in coeffs.iter().zip(kernel) {
                for (slot, x) in v.iter_mut().zip(k) {
                    if !x.is_zero() && !c.is_zero() {
                        *slot += &(c * x);
                    }
                }
            }
            let value = cert.minors.last().expect("non-empty minors");
            report.fail(
                name,
                Witness::Minor {
                    grade,
                    p,
                    q,
                    index: idx,
                    value: crate::report::encode_rational(value),
                    vector: encode_vector(&v),
                },
            )
        }
    }
}

/// Positivity of `i^{p−q} Q(u, T^ℓ ū)` on every `(p,q)`-part of every
/// primitive subspace, and mutual orthogonality of distinct parts.
pub fn polarization_check(m: &HLModule, t: &Matrix) -> Result<CheckReport> {
    if !lefschetz_property(m, t)? {
        return Err(Error::Precondition(
            "operator lacks the Lefschetz property".into(),
        ));
    }
    let mut report = CheckReport::new("polarization", "hodge-riemann");
    for ell in 0..=m.k() {
        let idx = m.grade_indices(ell);
        if idx.is_empty() {
            continue;
        }
        let t_ell = t.pow(ell as usize);
        let kill = t.mul(&t_ell);
        let mut pieces: Vec<((i32, i32), Vec<Vector>)> = Vec::new();
        for (p, q) in m.bidegrees_in_grade(ell) {
            let kernel = kernel_on(&kill, &m.bidegree_indices(p, q), m.dim());
            if kernel.is_empty() {
                continue;
            }
            let h = twisted_hermitian(m, &kernel, &t_ell, p, q);
            record_positivity(
                &mut report,
                format!("l={ell} (p,q)=({p},{q}) positive"),
                m,
                &h,
                &kernel,
                (ell, p, q),
            );
            pieces.push(((p, q), kernel));
        }
        for i in 0..pieces.len() {
            for j in 0..pieces.len() {
                if i == j {
                    continue;
                }
                let ((p, q), ref a) = pieces[i];
                let ((p2, q2), ref b) = pieces[j];
                let bad = a.iter().find_map(|u| {
                    b.iter().find_map(|v| {
                        let val = m.pair(u, &t_ell.apply(&m.conj_vector(v)));
                        (!val.is_zero()).then(|| u.clone())
                    })
                });
                let name = format!("l={ell} ({p},{q}) orthogonal to ({p2},{q2})");
                match bad {
                    None => report.pass(name),
                    Some(u) => report.fail(name, Witness::vector(&u, "non-orthogonal vector")),
                }
            }
        }
    }
    Ok(report)
}

/// Lefschetz property together with polarization of every primitive part.
pub fn cone_membership(m: &HLModule, t: &Matrix) -> Result<bool> {
    if !lefschetz_property(m, t)? {
        return Ok(false);
    }
    Ok(polarization_check(m, t)?.passed())
}

/// Certifies `Σ c_j G_j` as an element of the polarizing cone: the module's
/// cone description, when present, must contain `c`, and the operator must
/// pass [`cone_membership`].
pub fn cone_contains(m: &HLModule, coeffs: &[Rational]) -> Result<bool> {
    if let Some(cone) = m.cone() {
        if !cone.contains(coeffs)? {
            return Ok(false);
        }
    }
    cone_membership(m, &m.operator(coeffs)?)
}
