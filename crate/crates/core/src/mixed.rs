//! Mixed Hard Lefschetz, mixed Lefschetz decomposition, mixed Hodge-Riemann
//! relations and the kernel weight bound for tuples of cone elements.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::matrix::{intersect, span_rank};
use crate::exact::{Matrix, Rational, Vector};
use crate::hl::lefschetz::{kernel_on, record_positivity, twisted_hermitian};
use crate::hl::{cone_contains, product, HLModule};
use crate::report::{encode_rational, CheckReport, Witness};

/// `T_1, …, T_t` given by coefficient vectors over the module's generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTuple {
    coeffs: Vec<Vec<Rational>>,
    matrices: Vec<Matrix>,
    certified: bool,
}

impl OperatorTuple {
    /// Builds the tuple, certifying that every entry lies in the polarizing
    /// cone.
    pub fn new(m: &HLModule, coeffs: Vec<Vec<Rational>>) -> Result<Self> {
        let tuple = OperatorTuple::new_unchecked(m, coeffs)?;
        for (j, c) in tuple.coeffs.iter().enumerate() {
            if !cone_contains(m, c)? {
                return Err(Error::Precondition(format!(
                    "tuple entry {} is not in the polarizing cone",
                    j + 1
                )));
            }
        }
        Ok(OperatorTuple {
            certified: true,
            ..tuple
        })
    }

    /// Builds the tuple without cone certification (boundary probes).
    pub fn new_unchecked(m: &HLModule, coeffs: Vec<Vec<Rational>>) -> Result<Self> {
        let matrices = coeffs
            .iter()
            .map(|c| m.operator(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorTuple {
            coeffs,
            matrices,
            certified: false,
        })
    }

    /// `t` copies of `N₀`.
    pub fn reference(m: &HLModule, t: usize) -> Result<Self> {
        OperatorTuple::new(m, vec![m.reference().to_vec(); t])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// The same entries in another order.
    pub fn permuted(&self, order: &[usize]) -> OperatorTuple {
        OperatorTuple {
            coeffs: order.iter().map(|&i| self.coeffs[i].clone()).collect(),
            matrices: order.iter().map(|&i| self.matrices[i].clone()).collect(),
            certified: self.certified,
        }
    }

    /// Entry `j` multiplied by a positive rational.
    pub fn rescaled(&self, j: usize, s: &Rational) -> Result<OperatorTuple> {
        if *s <= Rational::zero() {
            return Err(Error::Precondition(
                "rescaling factor must be positive".into(),
            ));
        }
        let mut out = self.clone();
        out.coeffs[j] = out.coeffs[j].iter().map(|c| c * s).collect();
        out.matrices[j] = out.matrices[j].scale(&crate::exact::GaussianRational::real(s.clone()));
        Ok(out)
    }

    fn product(&self, n: usize, upto: usize) -> Matrix {
        product(n, &self.matrices[..upto])
    }
}

fn check_len(tuple: &OperatorTuple, max: i32, what: &str) -> Result<()> {
    if tuple.len() as i32 > max {
        return Err(Error::Precondition(format!(
            "{what} needs a tuple of length at most {max}, got {}",
            tuple.len()
        )));
    }
    Ok(())
}

fn tuple_data(report: &mut CheckReport, tuple: &OperatorTuple) {
    let coeffs: Vec<Vec<String>> = tuple
        .coeffs()
        .iter()
        .map(|c| c.iter().map(encode_rational).collect())
        .collect();
    report.set_data("tuple", coeffs);
}

/// `ker(T_1⋯T_t) ⊆ W_{t−1}`: kernel vectors have no component in grades `≥ t`.
pub fn kernel_weight_bound(m: &HLModule, tuple: &OperatorTuple) -> Result<CheckReport> {
    check_len(tuple, m.k(), "kernel weight bound")?;
    let t = tuple.len() as i32;
    let n = m.dim();
    let (kernel, _) = tuple.product(n, tuple.len()).kernel_basis();
    let mut report = CheckReport::new("kernel-weight-bound", "kernel-bound");
    let name = format!("ker(T1..T{t}) in W_{}", t - 1);
    match kernel
        .iter()
        .find(|v| m.top_grade(v).is_some_and(|g| g >= t))
    {
        None => report.pass(name),
        Some(v) => {
            let g = m.top_grade(v).expect("nonzero");
            report.fail(
                name,
                Witness::vector(v, format!("kernel vector reaching grade {g}")),
            )
        }
    }
    report.set_data("kernel_dim", kernel.len());
    tuple_data(&mut report, tuple);
    Ok(report)
}

/// `T_1⋯T_t : V_t → V_{−t}` is an isomorphism.
pub fn mixed_hlt_check(m: &HLModule, tuple: &OperatorTuple) -> Result<CheckReport> {
    check_len(tuple, m.k(), "mixed Hard Lefschetz")?;
    let t = tuple.len() as i32;
    let src = m.grade_indices(t);
    let dst = m.grade_indices(-t);
    if src.len() != dst.len() {
        return Err(Error::DimMismatch(format!(
            "dim V_{t} = {} but dim V_-{t} = {}",
            src.len(),
            dst.len()
        )));
    }
    let block = tuple.product(m.dim(), tuple.len()).submatrix(&dst, &src);
    let det = block.determinant()?;
    let mut report = CheckReport::new("mixed-hlt", "mixed-hard-lefschetz");
    let name = format!("T1..T{t}: V_{t} -> V_-{t} invertible");
    if det.is_zero() {
        let (ker, _) = block.kernel_basis();
        let mut v = vec![crate::exact::GaussianRational::zero(); m.dim()];
        for (slot, x) in src.iter().zip(&ker[0]) {
            v[*slot] = x.clone();
        }
        report.fail(
            name,
            Witness::vector(&v, "kernel vector of the restricted product"),
        );
    } else {
        report.pass(name);
    }
    report.set_data("determinant", det.to_string());
    report.set_data("dim", src.len());
    tuple_data(&mut report, tuple);
    Ok(report)
}

/// `V_t = (ker(T_1⋯T_{t+1}) ∩ V_t) ⊕ T_{t+1}·V_{t+2}` for a tuple of length
/// `t+1`.
pub fn mixed_decomposition_check(m: &HLModule, tuple: &OperatorTuple) -> Result<CheckReport> {
    if tuple.is_empty() {
        return Err(Error::Precondition(
            "mixed decomposition needs a non-empty tuple".into(),
        ));
    }
    check_len(tuple, m.k() - 1, "mixed decomposition")?;
    let n = m.dim();
    let t = tuple.len() as i32 - 1;
    let idx = m.grade_indices(t);
    let kernel = kernel_on(&tuple.product(n, tuple.len()), &idx, n);
    let last = &tuple.matrices()[tuple.len() - 1];
    let image_cols: Vec<Vector> = m
        .grade_indices(t + 2)
        .iter()
        .map(|&j| last.column(j))
        .collect();
    let image = crate::exact::matrix::independent_subset(n, &image_cols);

    let mut report = CheckReport::new("mixed-decomposition", "mixed-lefschetz-decomposition");
    let dims_name = format!("dim ker + dim image = dim V_{t}");
    if kernel.len() + image.len() == idx.len() {
        report.pass(dims_name);
    } else {
        report.fail(
            dims_name,
            Witness::Rank {
                grade: t,
                expected: idx.len(),
                found: kernel.len() + image.len(),
            },
        );
    }
    let mut both = kernel.clone();
    both.extend(image.iter().cloned());
    let meet = intersect(n, &kernel, &image);
    if span_rank(n, &both) == kernel.len() + image.len() && meet.is_empty() {
        report.pass("summands meet in zero");
    } else {
        let v = meet.into_iter().next().expect("nonzero intersection");
        report.fail(
            "summands meet in zero",
            Witness::vector(&v, "vector in both summands"),
        );
    }
    report.set_data("grade", t);
    report.set_data("dims", [kernel.len(), image.len()]);
    tuple_data(&mut report, tuple);
    Ok(report)
}

/// Positivity of `i^{p−q} Q(u, T_1⋯T_t · conj u)` on `V^{p,q} ∩ ker(T_1⋯T_{t+1})`
/// for every `(p,q)` with `p+q = k+t`, for a tuple of length `t+1`.
pub fn mixed_hrr_check(m: &HLModule, tuple: &OperatorTuple) -> Result<CheckReport> {
    if tuple.is_empty() {
        return Err(Error::Precondition(
            "mixed Hodge-Riemann needs a non-empty tuple".into(),
        ));
    }
    check_len(tuple, m.k() - 1, "mixed Hodge-Riemann")?;
    let n = m.dim();
    let t = tuple.len() as i32 - 1;
    let kill = tuple.product(n, tuple.len());
    let op = tuple.product(n, tuple.len() - 1);
    let mut report = CheckReport::new("mixed-hrr", "mixed-hodge-riemann");
    let mut dims = BTreeMap::new();
    for (p, q) in m.bidegrees_in_grade(t) {
        let kernel = kernel_on(&kill, &m.bidegree_indices(p, q), n);
        dims.insert(format!("{p},{q}"), kernel.len());
        if kernel.is_empty() {
            continue;
        }
        let h = twisted_hermitian(m, &kernel, &op, p, q);
        record_positivity(
            &mut report,
            format!("(p,q)=({p},{q}) positive"),
            m,
            &h,
            &kernel,
            (t, p, q),
        );
    }
    report.set_data("grade", t);
    report.set_data("kernel_dims", dims);
    tuple_data(&mut report, tuple);
    Ok(report)
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
    fn worked_square_instance() {
        let m = square();
        let tuple = OperatorTuple::new(&m, vec![ints(&[1, 1, 1, 1]), ints(&[2, 2, 1, 1])]).unwrap();
        let r = mixed_hlt_check(&m, &tuple).unwrap();
        assert!(r.passed());
        assert_eq!(r.data["determinant"], "12");
    }

    #[test]
    fn reference_tuples_pass() {
        let m = square();
        for t in 0..=2 {
            let tuple = OperatorTuple::reference(&m, t).unwrap();
            assert!(kernel_weight_bound(&m, &tuple).unwrap().passed());
            assert!(mixed_hlt_check(&m, &tuple).unwrap().passed());
        }
        let one = OperatorTuple::reference(&m, 1).unwrap();
        assert!(mixed_decomposition_check(&m, &one).unwrap().passed());
        assert!(mixed_hrr_check(&m, &one).unwrap().passed());
        let two = OperatorTuple::reference(&m, 2).unwrap();
        assert!(matches!(
            mixed_hrr_check(&m, &two),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            kernel_weight_bound(&m, &OperatorTuple::reference(&m, 3).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn boundary_element_fails() {
        let m = square();
        let seg = ints(&[1, 1, 0, 0]);
        assert!(matches!(
            OperatorTuple::new(&m, vec![seg.clone()]),
            Err(Error::Precondition(_))
        ));
        let tuple = OperatorTuple::new_unchecked(&m, vec![seg.clone(), seg]).unwrap();
        assert!(!mixed_hlt_check(&m, &tuple).unwrap().passed());
    }
}
