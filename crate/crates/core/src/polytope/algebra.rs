use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::{volume_oracle, SimplePolytope};
use crate::error::{Error, Result};
use crate::exact::poly::{monomials_of_degree, poly_determinant, Exponent};
use crate::exact::rational::{factorial, rat, Rational};
use crate::exact::{GaussianRational, Matrix, MultiPoly};
use crate::hl::{validate_structure, BasisLabel, ConeDescription, Generator, HLModule};
use crate::report::{CheckReport, Witness};

const VALIDATION_SEED: u64 = 0x5eed_0f_f1e1d;

/// Number of random supports at which the symbolic volume is compared
/// against the vertex-formula oracle.
pub const VOLUME_VALIDATION_POINTS: usize = 20;

/// `ν(x) = vol(P(x))` as a homogeneous degree-`k` polynomial in the support
/// numbers, summed over a triangulation with symbolic vertices.
///
/// The result is checked against [`volume_oracle`] at the reference support
/// and at [`VOLUME_VALIDATION_POINTS`] random nearby supports.
pub fn volume_polynomial(p: &SimplePolytope) -> Result<MultiPoly> {
    let r = p.facet_count();
    let k = p.dim();
    let forms = p.vertex_forms()?;
    let linear = |v: usize, c: usize| MultiPoly::linear(&forms[v][c]);
    let mut nu = MultiPoly::zero(r);
    for (chain, sign) in p.simplices() {
        let rows: Vec<Vec<MultiPoly>> = chain[1..]
            .iter()
            .map(|&v| {
                (0..k)
                    .map(|c| linear(v, c).sub(&linear(chain[0], c)))
                    .collect()
            })
            .collect();
        let det = poly_determinant(&rows, r);
        nu = if *sign > 0 {
            nu.add(&det)
        } else {
            nu.sub(&det)
        };
    }
    let nu = nu.scale(&(Rational::one() / factorial(k)));

    let check = |x: &[Rational]| -> Result<bool> {
        let expected = volume_oracle(p, x)?;
        let got = nu.eval(x);
        if got != expected {
            return Err(Error::Internal(format!(
                "volume polynomial gives {got}, vertex formula gives {expected}"
            )));
        }
        Ok(true)
    };
    check(p.support())?;
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let mut done = 0;
    let mut scale: i64 = 8;
    for _ in 0..40 * VOLUME_VALIDATION_POINTS {
        if done == VOLUME_VALIDATION_POINTS {
            break;
        }
        let x: Vec<Rational> = p
            .support()
            .iter()
            .map(|x0| x0 + rat(rng.gen_range(-4..=4), scale))
            .collect();
        match check(&x) {
            Ok(_) => done += 1,
            Err(Error::CombinatoricsChanged(_)) => scale = (scale * 2).min(1 << 20),
            Err(e) => return Err(e),
        }
    }
    if done < VOLUME_VALIDATION_POINTS {
        return Err(Error::Internal(
            "could not sample supports of the same combinatorial type".into(),
        ));
    }
    Ok(nu)
}

/// Graded pieces of `A = ℚ[∂_1..∂_r]/Ann(ν)`.
#[derive(Clone, Debug)]
struct Degree {
    /// All monomials of this degree, graded-lex descending.
    monomials: Vec<Exponent>,
    lookup: HashMap<Exponent, usize>,
    /// Indices into `monomials` of the chosen basis.
    basis: Vec<usize>,
    /// `coords[(b, m)]`: coefficient of basis element `b` in the class of
    /// monomial `m`.
    coords: Matrix,
}

/// The algebra `ℚ[∂]/Ann(ν)` of a simple polytope, realised as the span of
/// the derivatives `∂^α ν`, and the Hodge-Lefschetz module it carries.
#[derive(Clone, Debug)]
pub struct PolytopeAlgebra {
    polytope: SimplePolytope,
    nu: MultiPoly,
    degrees: Vec<Degree>,
    module: HLModule,
}

impl PolytopeAlgebra {
    pub fn new(p: &SimplePolytope) -> Result<Self> {
        let nu = volume_polynomial(p)?;
        let r = p.facet_count();
        let k = p.dim();
        let mut degrees = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let monomials = monomials_of_degree(r, j as u32);
            let derivs: Vec<MultiPoly> = monomials.iter().map(|a| nu.apply_diff_op(a)).collect();
            let mut support: BTreeMap<Exponent, usize> = BTreeMap::new();
            for d in &derivs {
                for (e, _) in d.terms() {
                    let next = support.len();
                    support.entry(e.clone()).or_insert(next);
                }
            }
            let mut rows = vec![Vec::new(); support.len()];
            for (e, i) in support {
                rows[i] = e;
            }
            let m = Matrix::from_fn(rows.len(), monomials.len(), |row, col| {
                GaussianRational::real(derivs[col].coefficient(&rows[row]))
            });
            let (rref, pivots) = m.rref();
            let coords =
                Matrix::from_fn(pivots.len(), monomials.len(), |b, c| rref[(b, c)].clone());
            let lookup = monomials
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, e)| (e, i))
                .collect();
            degrees.push(Degree {
                monomials,
                lookup,
                basis: pivots,
                coords,
            });
        }
        let module = assemble(p, &nu, &degrees)?;
        let report = validate_structure(&module);
        if !report.passed() {
            let first = report
                .first_failure()
                .map(|s| s.name.clone())
                .unwrap_or_default();
            return Err(Error::Verification(format!(
                "polytope module fails `{first}`"
            )));
        }
        Ok(PolytopeAlgebra {
            polytope: p.clone(),
            nu,
            degrees,
            module,
        })
    }

    pub fn polytope(&self) -> &SimplePolytope {
        &self.polytope
    }

    pub fn volume_polynomial(&self) -> &MultiPoly {
        &self.nu
    }

    pub fn module(&self) -> &HLModule {
        &self.module
    }

    pub fn into_module(self) -> HLModule {
        self.module
    }

    /// `dim A^j` for `j = 0..=k`.
    pub fn graded_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.basis.len()).collect()
    }

    /// Basis monomials of `A^j`.
    pub fn basis_monomials(&self, j: usize) -> Vec<Exponent> {
        let d = &self.degrees[j];
        d.basis.iter().map(|&i| d.monomials[i].clone()).collect()
    }

    /// Coordinates of the class of `∂^α` in the module basis.
    pub fn class_of(&self, alpha: &[u32]) -> Result<Vec<GaussianRational>> {
        let j: usize = alpha.iter().map(|&a| a as usize).sum();
        let mut out = vec![GaussianRational::zero(); self.module.dim()];
        if j >= self.degrees.len() {
            return Ok(out);
        }
        let d = &self.degrees[j];
        let col = *d
            .lookup
            .get(alpha)
            .ok_or_else(|| Error::DimMismatch(format!("exponent of length {}", alpha.len())))?;
        let offset: usize = self.degrees[..j].iter().map(|d| d.basis.len()).sum();
        for b in 0..d.basis.len() {
            out[offset + b] = d.coords[(b, col)].clone();
        }
        Ok(out)
    }
}

fn assemble(p: &SimplePolytope, nu: &MultiPoly, degrees: &[Degree]) -> Result<HLModule> {
    let r = p.facet_count();
    let k = p.dim();
    let offsets: Vec<usize> = degrees
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.basis.len();
            Some(o)
        })
        .collect();
    let n: usize = degrees.iter().map(|d| d.basis.len()).sum();

    let mut labels = Vec::with_capacity(n);
    for (j, d) in degrees.iter().enumerate() {
        for _ in &d.basis {
            let id = labels.len();
            labels.push(BasisLabel {
                id,
                ell: k as i32 - 2 * j as i32,
                p: (k - j) as i32,
                q: (k - j) as i32,
            });
        }
    }

    let mut generators = Vec::with_capacity(r);
    for i in 0..r {
        let mut m = Matrix::zeros(n, n);
        for j in 0..k {
            let (src, dst) = (&degrees[j], &degrees[j + 1]);
            for (b, &mono) in src.basis.iter().enumerate() {
                let mut e = src.monomials[mono].clone();
                e[i] += 1;
                let col = dst.lookup[&e];
                for t in 0..dst.basis.len() {
                    m[(offsets[j + 1] + t, offsets[j] + b)] = dst.coords[(t, col)].clone();
                }
            }
        }
        generators.push(Generator {
            name: format!("d{}", i + 1),
            matrix: m,
        });
    }

    let mut form = Matrix::zeros(n, n);
    for j in 0..=k {
        let sign = if j % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let (a, b) = (&degrees[j], &degrees[k - j]);
        for (x, &ma) in a.basis.iter().enumerate() {
            let da = nu.apply_diff_op(&a.monomials[ma]);
            for (y, &mb) in b.basis.iter().enumerate() {
                let val = da
                    .apply_diff_op(&b.monomials[mb])
                    .constant_value()
                    .unwrap_or_else(Rational::zero);
                form[(offsets[j] + x, offsets[k - j] + y)] = GaussianRational::real(&sign * val);
            }
        }
    }

    HLModule::new(
        k,
        labels,
        Matrix::identity(n),
        form,
        generators,
        p.support().to_vec(),
    )?
    .with_cone(ample_cone(p)?)
}

/// Supports of the same combinatorial type: every vertex, as a linear form in
/// the support, lies strictly inside each facet it is not on.
pub fn ample_cone(p: &SimplePolytope) -> Result<ConeDescription> {
    let r = p.facet_count();
    let mut rows = BTreeSet::new();
    for (inc, forms) in p.incidence().iter().zip(p.vertex_forms()?) {
        for j in (0..r).filter(|j| !inc.contains(j)) {
            let mut row = vec![Rational::zero(); r];
            row[j] = Rational::one();
            for (a, form) in p.normals()[j].iter().zip(&forms) {
                for (x, f) in row.iter_mut().zip(form) {
                    *x -= a * f;
                }
            }
            rows.insert(row);
        }
    }
    Ok(ConeDescription::Halfspaces(rows.into_iter().collect()))
}

/// Builds the polarized Hodge-Lefschetz module of a simple polytope.
pub fn build_pkt_module(p: &SimplePolytope) -> Result<HLModule> {
    Ok(PolytopeAlgebra::new(p)?.into_module())
}

/// `dim A^j` for `j = 0..=k`, checked to be symmetric and unimodal.
pub fn h_vector(m: &HLModule) -> Result<Vec<usize>> {
    if m.basis().iter().any(|b| b.p != b.q) {
        return Err(Error::Precondition(
            "h-vector needs a module with p = q throughout".into(),
        ));
    }
    let k = m.k();
    let h: Vec<usize> = (0..=k).map(|j| m.grade_dim(k - 2 * j)).collect();
    let symmetric = h.iter().eq(h.iter().rev());
    let half = h.len() / 2;
    let unimodal = (0..half).all(|j| h[j] <= h[j + 1]);
    if !symmetric || !unimodal {
        return Err(Error::Verification(format!(
            "h-vector {h:?} is not symmetric and unimodal"
        )));
    }
    Ok(h)
}

/// `V(P(c_1), …, P(c_k)) = (1/k!) ∂_{c_1}⋯∂_{c_k} ν`.
pub fn mixed_volume(nu: &MultiPoly, supports: &[Vec<Rational>]) -> Result<Rational> {
    let k = nu.degree().unwrap_or(0) as usize;
    if supports.len() != k {
        return Err(Error::DimMismatch(format!(
            "{} supports for a degree-{k} volume",
            supports.len()
        )));
    }
    let mut cur = nu.clone();
    for c in supports {
        if c.len() != nu.nvars() {
            return Err(Error::DimMismatch(format!(
                "support of length {} for {} facets",
                c.len(),
                nu.nvars()
            )));
        }
        cur = cur.apply_linear_op(c);
    }
    Ok(cur.constant_value().unwrap_or_else(Rational::zero) / factorial(k))
}

/// `V(c₁,c₂,rest)² ≥ V(c₁,c₁,rest)·V(c₂,c₂,rest)`.
pub fn af_check(
    nu: &MultiPoly,
    c1: &[Rational],
    c2: &[Rational],
    rest: &[Vec<Rational>],
) -> Result<CheckReport> {
    let with = |a: &[Rational], b: &[Rational]| {
        let mut s = vec![a.to_vec(), b.to_vec()];
        s.extend(rest.iter().cloned());
        mixed_volume(nu, &s)
    };
    let v12 = with(c1, c2)?;
    let v11 = with(c1, c1)?;
    let v22 = with(c2, c2)?;
    let lhs = &v12 * &v12;
    let rhs = &v11 * &v22;
    let mut report = CheckReport::new("alexandrov-fenchel", "alexandrov-fenchel");
    let name = "V(c1,c2,..)^2 >= V(c1,c1,..) V(c2,c2,..)";
    if lhs >= rhs {
        report.pass(name);
    } else {
        report.fail(name, Witness::note(format!("{lhs} < {rhs}")));
    }
    report.set_data("v12", crate::report::encode_rational(&v12));
    report.set_data("v11", crate::report::encode_rational(&v11));
    report.set_data("v22", crate::report::encode_rational(&v22));
    report.set_data("defect", crate::report::encode_rational(&(lhs - rhs)));
    Ok(report)
}
