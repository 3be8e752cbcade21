//! Descent of a polarized Hodge-Lefschetz module along `T·V`, its iterated
//! and quotient variants.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::matrix::span_rank;
use crate::exact::rational::rat;
use crate::exact::{GaussianRational, Matrix, Rational, Vector};
use crate::hl::lefschetz::kernel_on;
use crate::hl::{
    cone_contains, inclusion, lefschetz_property, product, validate_structure, BasisLabel,
    Generator, HLModule,
};
use crate::mixed::OperatorTuple;
use crate::report::{encode_vector, CheckReport, Witness};

/// `λ` values at which `T + λN₀` must have the Lefschetz property.
pub fn premise_lambdas() -> Vec<Rational> {
    (0..=8).map(|e| rat(1, 1 << e)).collect()
}

/// Output of a descent: the new module, `Ṽ ⊆ V` as columns of `embedding`,
/// a preimage of each column in `lift`, and coordinates `projection` of
/// `P·u` for `u ∈ V`.
#[derive(Clone, Debug)]
pub struct DescentResult {
    pub module: HLModule,
    pub embedding: Matrix,
    pub lift: Matrix,
    pub projection: Matrix,
}

/// Checks `T + λN₀` for the sampled `λ`, and `T` itself when `interior`.
pub fn check_premise(m: &HLModule, coeffs: &[Rational], interior: bool) -> Result<()> {
    let t = m.operator(coeffs)?;
    let n0 = m.reference_operator();
    for lambda in premise_lambdas() {
        let op = t.add(&n0.scale(&GaussianRational::real(lambda.clone())));
        if !lefschetz_property(m, &op)? {
            return Err(Error::Precondition(format!(
                "T + {lambda}·N0 lacks the Lefschetz property"
            )));
        }
    }
    if interior && !cone_contains(m, coeffs)? {
        return Err(Error::Precondition(
            "T is not in the polarizing cone".into(),
        ));
    }
    Ok(())
}

/// Elements of the parent cone still polarize a descended module.
fn inherit_cone(parent: &HLModule, m: HLModule) -> Result<HLModule> {
    match parent.cone() {
        Some(c) => m.with_cone(c.clone()),
        None => Ok(m),
    }
}

/// Indices `i` (ascending) whose images `P e_i` form a basis of `P·V`,
/// chosen bidegree by bidegree.
fn image_pivots(m: &HLModule, p: &Matrix) -> Vec<usize> {
    let bidegrees: BTreeSet<(i32, i32)> = m.basis().iter().map(|b| (b.p, b.q)).collect();
    let mut chosen = Vec::new();
    for (a, b) in bidegrees {
        let idx = m.bidegree_indices(a, b);
        let (_, pivots) = p.select_columns(&idx).rref();
        chosen.extend(pivots.iter().map(|&j| idx[j]));
    }
    chosen.sort_unstable();
    chosen
}

fn shifted_labels(m: &HLModule, chosen: &[usize], shift: i32) -> Vec<BasisLabel> {
    chosen
        .iter()
        .enumerate()
        .map(|(id, &i)| {
            let b = m.basis()[i];
            BasisLabel {
                id,
                ell: b.ell - shift,
                p: b.p - shift,
                q: b.q - shift,
            }
        })
        .collect()
}

/// `X` with `A X = B`, for `A` of full column rank and `B` in its span.
fn express(a: &Matrix, b: &Matrix, what: &str) -> Result<Matrix> {
    a.solve_matrix(b)
        .map_err(|_| Error::Internal(format!("{what} does not preserve the subspace")))
}

/// `Q(u, P v) = 0` for every `u ∈ ker P`, so `Q̃(Pu, Pv) := Q(u, Pv)` is
/// well defined.
fn check_form_defined(m: &HLModule, p: &Matrix) -> Result<()> {
    let (ker, _) = p.kernel_basis();
    let qp = m.form().mul(p);
    for u in &ker {
        let row = Matrix::from_columns(m.dim(), std::slice::from_ref(u))
            .transpose()
            .mul(&qp);
        if !row.is_zero() {
            return Err(Error::Precondition(format!(
                "form-ill-defined: u = {:?} lies in ker T but Q(u, T·) != 0",
                encode_vector(u)
            )));
        }
    }
    Ok(())
}

/// Module structure on `P·V` with grades shifted down by `shift`.
fn descend_along(m: &HLModule, p: &Matrix, shift: usize) -> Result<DescentResult> {
    if shift > m.weight() {
        return Err(Error::Precondition(format!(
            "cannot descend a weight-{} module {shift} times",
            m.weight()
        )));
    }
    check_form_defined(m, p)?;
    let n = m.dim();
    let chosen = image_pivots(m, p);
    let lift = inclusion(n, &chosen);
    let embedding = p.mul(&lift);
    let labels = shifted_labels(m, &chosen, shift as i32);

    let form = lift.transpose().mul(m.form()).mul(&embedding);
    let conjugation = express(
        &embedding,
        &m.conjugation().mul(&embedding.conj()),
        "conjugation",
    )?;
    let generators = m
        .generators()
        .iter()
        .map(|g| {
            Ok(Generator {
                name: g.name.clone(),
                matrix: express(&embedding, &g.matrix.mul(&embedding), &g.name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let projection = express(&embedding, p, "projection")?;
    let module = inherit_cone(
        m,
        HLModule::new(
            m.weight() - shift,
            labels,
            conjugation,
            form,
            generators,
            m.reference().to_vec(),
        )?,
    )?;
    Ok(DescentResult {
        module,
        embedding,
        lift,
        projection,
    })
}

/// `Ṽ = T·V` with `Ṽ_ℓ = T·V_{ℓ+1}` and `Q̃(Tu, Tv) = Q(u, Tv)`.
pub fn descent(m: &HLModule, coeffs: &[Rational]) -> Result<DescentResult> {
    if m.weight() == 0 {
        return Err(Error::Precondition("descent needs positive weight".into()));
    }
    check_premise(m, coeffs, false)?;
    descend_along(m, &m.operator(coeffs)?, 1)
}

/// `Ṽ = T_1⋯T_t·V` of weight `k−t`, in one step.
pub fn repeated_descent(m: &HLModule, tuple: &OperatorTuple) -> Result<DescentResult> {
    for c in tuple.coeffs() {
        check_premise(m, c, false)?;
    }
    descend_along(m, &product(m.dim(), tuple.matrices()), tuple.len())
}

/// `t` successive single descents, each along the same coefficients.
pub fn iterated_descent(m: &HLModule, tuple: &OperatorTuple) -> Result<DescentResult> {
    let mut cur = DescentResult {
        module: m.clone(),
        embedding: Matrix::identity(m.dim()),
        lift: Matrix::identity(m.dim()),
        projection: Matrix::identity(m.dim()),
    };
    for c in tuple.coeffs() {
        let step = descent(&cur.module, c)?;
        cur = DescentResult {
            embedding: cur.embedding.mul(&step.embedding),
            lift: cur.lift.mul(&step.lift),
            projection: step.projection.mul(&cur.projection),
            module: step.module,
        };
    }
    Ok(cur)
}

/// Full validation of a descended module, including Lefschetz and
/// polarization for `Ñ₀`.
pub fn descent_report(result: &DescentResult) -> CheckReport {
    let mut report = CheckReport::new("descent", "descent");
    let v = validate_structure(&result.module);
    report.absorb("descended", &v);
    let dims: Vec<(i32, usize)> = result.module.grade_dims();
    report.set_data("weight", result.module.weight());
    report.set_data("dims", dims.iter().map(|d| d.1).collect::<Vec<_>>());
    report
}

/// Compares one-step and iterated descent: equal graded dimensions per
/// bidegree, and forms related by the base change between the two bases of
/// `T_1⋯T_t·V`.
pub fn compare_descents(m: &HLModule, tuple: &OperatorTuple) -> Result<CheckReport> {
    let rep = repeated_descent(m, tuple)?;
    let it = iterated_descent(m, tuple)?;
    let mut report = CheckReport::new("repeated-descent", "repeated-descent");
    let bidegrees: BTreeSet<(i32, i32)> = rep
        .module
        .basis()
        .iter()
        .chain(it.module.basis())
        .map(|b| (b.p, b.q))
        .collect();
    let mismatch = bidegrees.iter().find(|&&(p, q)| {
        rep.module.bidegree_indices(p, q).len() != it.module.bidegree_indices(p, q).len()
    });
    match mismatch {
        None => report.pass("graded dimensions agree"),
        Some(&(p, q)) => report.fail(
            "graded dimensions agree",
            Witness::note(format!("dimension of ({p},{q}) differs")),
        ),
    }
    match rep.embedding.solve_matrix(&it.embedding) {
        Ok(b) if rep.module.dim() == it.module.dim() => {
            if b.determinant()?.is_zero() {
                report.fail("same subspace", Witness::note("base change is singular"));
            } else {
                report.pass("same subspace");
            }
            let pulled = b.transpose().mul(rep.module.form()).mul(&b);
            if pulled == *it.module.form() {
                report.pass("forms related by base change");
            } else {
                report.fail(
                    "forms related by base change",
                    Witness::note("B^T Q_rep B differs from Q_iter"),
                );
            }
        }
        _ => report.fail(
            "same subspace",
            Witness::note("iterated image not inside one-step image"),
        ),
    }
    report.set_data("weight", rep.module.weight());
    Ok(report)
}

/// Quotient presentation `V / ker(T^t)` with its isomorphism to `T^t·V`.
#[derive(Clone, Debug)]
pub struct QuotientDescent {
    pub quotient: HLModule,
    /// Representatives in `V` of the quotient basis.
    pub representatives: Matrix,
    pub image: DescentResult,
    /// `Φ[u] = T^t u` in the image basis.
    pub isomorphism: Matrix,
    pub report: CheckReport,
}

/// Builds `V/ker(T^t)` with representatives completing a kernel basis in
/// each bidegree, induces the structure, and checks the canonical map to
/// the image presentation.
pub fn quotient_descent(m: &HLModule, coeffs: &[Rational], t: usize) -> Result<QuotientDescent> {
    let tuple = OperatorTuple::new_unchecked(m, vec![coeffs.to_vec(); t])?;
    let image = repeated_descent(m, &tuple)?;
    let n = m.dim();
    let pt = product(n, tuple.matrices());
    let (kernel, _) = pt.kernel_basis();

    let bidegrees: BTreeSet<(i32, i32)> = m.basis().iter().map(|b| (b.p, b.q)).collect();
    let mut reps: Vec<usize> = Vec::new();
    for (a, b) in bidegrees {
        let idx = m.bidegree_indices(a, b);
        let mut span: Vec<Vector> = kernel_on(&pt, &idx, n);
        for &i in &idx {
            let mut trial = span.clone();
            trial.push(m.unit_vector(i));
            if span_rank(n, &trial) > span.len() {
                span = trial;
                reps.push(i);
            }
        }
    }
    reps.sort_unstable();
    let r = inclusion(n, &reps);
    let labels = shifted_labels(m, &reps, t as i32);
    // coordinates modulo the kernel: solve [R | K] x = y, keep the R part
    let mut cols = r.columns();
    cols.extend(kernel.iter().cloned());
    let frame = Matrix::from_columns(n, &cols);
    let modk = |y: &Matrix| -> Result<Matrix> {
        let x = express(&frame, y, "quotient map")?;
        Ok(x.submatrix(
            &(0..reps.len()).collect::<Vec<_>>(),
            &(0..y.cols()).collect::<Vec<_>>(),
        ))
    };
    let conjugation = modk(&m.conjugation().mul(&r.conj()))?;
    let generators = m
        .generators()
        .iter()
        .map(|g| {
            Ok(Generator {
                name: g.name.clone(),
                matrix: modk(&g.matrix.mul(&r))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let form = r.transpose().mul(m.form()).mul(&pt).mul(&r);
    let quotient = inherit_cone(
        m,
        HLModule::new(
            m.weight() - t,
            labels,
            conjugation,
            form,
            generators,
            m.reference().to_vec(),
        )?,
    )?;
    let phi = express(&image.embedding, &pt.mul(&r), "canonical map")?;

    let mut report = CheckReport::new("quotient-descent", "quotient-descent");
    let invertible = phi.is_square() && !phi.determinant()?.is_zero();
    report.record(
        "canonical map is invertible",
        invertible,
        (!invertible).then(|| Witness::note("singular")),
    );
    let graded = quotient.basis().iter().enumerate().all(|(c, lb)| {
        (0..phi.rows()).all(|row| {
            let b = image.module.basis()[row];
            phi[(row, c)].is_zero() || (b.p, b.q) == (lb.p, lb.q)
        })
    });
    report.record(
        "canonical map preserves bidegree",
        graded,
        (!graded).then(|| Witness::note("mixes bidegrees")),
    );
    for (gq, gi) in quotient.generators().iter().zip(image.module.generators()) {
        let ok = phi.mul(&gq.matrix) == gi.matrix.mul(&phi);
        report.record(
            format!("canonical map intertwines {}", gq.name),
            ok,
            (!ok).then(|| Witness::note("operators differ")),
        );
    }
    let conj_ok = image.module.conjugation().mul(&phi.conj()) == phi.mul(quotient.conjugation());
    report.record(
        "canonical map commutes with conjugation",
        conj_ok,
        (!conj_ok).then(|| Witness::note("conjugations differ")),
    );
    let form_ok = phi.transpose().mul(image.module.form()).mul(&phi) == *quotient.form();
    report.record(
        "canonical map is an isometry",
        form_ok,
        (!form_ok).then(|| Witness::note("forms differ")),
    );
    report.absorb("quotient", &validate_structure(&quotient));
    report.set_data("dim", quotient.dim());
    Ok(QuotientDescent {
        quotient,
        representatives: r,
        image,
        isomorphism: phi,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::polytope::{build_pkt_module, SimplePolytope};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn square() -> HLModule {
        let sp = SimplePolytope::build(
            "square",
            vec![ints(&[1, 0]), ints(&[-1, 0]), ints(&[0, 1]), ints(&[0, -1])],
            ints(&[1, 0, 1, 0]),
        )
        .unwrap();
        build_pkt_module(&sp).unwrap()
    }

    #[test]
    fn square_descent() {
        let m = square();
        let d = descent(&m, m.reference()).unwrap();
        assert_eq!(d.module.weight(), 1);
        assert_eq!(d.module.grade_dims(), vec![(1, 1), (0, 0), (-1, 1)]);
        assert!(descent_report(&d).passed());
    }

    #[test]
    fn zero_operator_gives_zero_module() {
        let m = square();
        let d = descent(&m, &ints(&[0, 0, 0, 0])).unwrap();
        assert_eq!(d.module.dim(), 0);
        assert!(validate_structure(&d.module).passed());
    }

    #[test]
    fn twice_equals_once() {
        let m = square();
        let tuple = OperatorTuple::new(&m, vec![ints(&[1, 1, 1, 1]), ints(&[2, 1, 1, 1])]).unwrap();
        let r = compare_descents(&m, &tuple).unwrap();
        assert!(r.passed(), "{r}");
        let top = repeated_descent(&m, &tuple).unwrap();
        assert_eq!(top.module.dim(), 1);
        assert!(top.module.form()[(0, 0)].re > Rational::zero());
        let zero = repeated_descent(&m, &OperatorTuple::reference(&m, 0).unwrap()).unwrap();
        assert_eq!(zero.module, m);
    }

    #[test]
    fn quotient_matches_image() {
        let m = square();
        let q = quotient_descent(&m, m.reference(), 1).unwrap();
        assert_eq!(q.quotient.dim(), 2);
        assert!(q.report.passed(), "{}", q.report);
        let q0 = quotient_descent(&m, m.reference(), 0).unwrap();
        assert_eq!(q0.quotient.dim(), 4);
    }
}
