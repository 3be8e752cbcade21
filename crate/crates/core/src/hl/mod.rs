//! Polarized Hodge-Lefschetz modules: data model and the single-operator
//! theory (Lefschetz property, primitive decomposition, sl₂-triples,
//! polarization, weight filtrations).

pub mod filtration;
pub mod lefschetz;
pub mod module;
pub mod validate;

pub use filtration::{grading_filtration, hodge_filtration, weight_filtration, Filtration};
pub use lefschetz::{
    cone_contains, cone_membership, grading_operator, lefschetz_check, lefschetz_decomposition,
    lefschetz_property, polarization_check, primitive_subspace, sl2_complete,
    LefschetzDecomposition, Sl2Triple,
};
pub use module::{
    inclusion, power_apply, product, BasisLabel, ConeDescription, Generator, HLModule,
};
pub use validate::validate_structure;

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::exact::{GaussianRational, Matrix};

    pub(crate) fn label(id: usize, ell: i32, p: i32, q: i32) -> BasisLabel {
        BasisLabel { id, ell, p, q }
    }

    /// V₀ one-dimensional, Q = [1], no operators.
    pub(crate) fn weight_zero() -> HLModule {
        HLModule::new(
            0,
            vec![label(0, 0, 0, 0)],
            Matrix::identity(1),
            Matrix::identity(1),
            vec![],
            vec![],
        )
        .unwrap()
    }

    /// V₁ = ⟨e₀⟩, V₋₁ = ⟨e₁⟩, T e₀ = e₁, Q skew with Q(e₀, e₁) = 1.
    pub(crate) fn weight_one() -> HLModule {
        let t = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
        HLModule::new(
            1,
            vec![label(0, 1, 1, 1), label(1, -1, 0, 0)],
            Matrix::identity(2),
            Matrix::from_ints(&[&[0, 1], &[-1, 0]]),
            vec![Generator {
                name: "t".into(),
                matrix: t,
            }],
            vec![int(1)],
        )
        .unwrap()
    }

    #[test]
    fn smallest_modules_validate() {
        assert!(validate_structure(&weight_zero()).passed());
        let r = validate_structure(&weight_one());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn lefschetz_on_weight_one() {
        let m = weight_one();
        let t = m.reference_operator();
        assert!(lefschetz_property(&m, &t).unwrap());
        assert!(!lefschetz_property(&m, &Matrix::zeros(2, 2)).unwrap());
    }

    #[test]
    fn lefschetz_dimension_mismatch() {
        let m = HLModule::new(
            1,
            vec![label(0, 1, 1, 1)],
            Matrix::identity(1),
            Matrix::identity(1),
            vec![],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            lefschetz_property(&m, &Matrix::zeros(1, 1)),
            Err(crate::Error::DimMismatch(_))
        ));
    }

    #[test]
    fn sl2_on_two_dimensional_irreducible() {
        let m = weight_one();
        let triple = sl2_complete(&m, &m.reference_operator()).unwrap();
        assert_eq!(triple.n_plus, Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        assert!(triple.holds());
    }

    #[test]
    fn primitive_above_top_is_empty() {
        let m = weight_one();
        let t = m.reference_operator();
        assert!(primitive_subspace(&m, &t, 5).unwrap().is_empty());
        assert_eq!(primitive_subspace(&m, &t, 1).unwrap().len(), 1);
    }

    #[test]
    fn weight_filtration_examples() {
        let zero = weight_filtration(&Matrix::zeros(3, 3), 0).unwrap();
        assert_eq!((zero.dim_at(-1), zero.dim_at(0)), (0, 3));

        // single Jordan block: N e₁ = e₀
        let jordan = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let w = weight_filtration(&jordan, 1).unwrap();
        assert_eq!(
            (w.dim_at(-2), w.dim_at(-1), w.dim_at(0), w.dim_at(1)),
            (0, 1, 1, 2)
        );
        assert_eq!(w.get(-1)[0][1], GaussianRational::from_int(0));
        assert!(w.is_increasing());
        assert!(matches!(
            weight_filtration(&jordan, 0),
            Err(crate::Error::NotNilpotent(1))
        ));
    }

    #[test]
    fn lefschetz_matches_weight_filtration_on_weight_one() {
        let m = weight_one();
        let t = m.reference_operator();
        let w = weight_filtration(&t, 1).unwrap();
        assert!(w.same_as(&grading_filtration(&m)));
        let w0 = weight_filtration(&Matrix::zeros(2, 2), 1).unwrap();
        assert!(!w0.same_as(&grading_filtration(&m)));
    }

    #[test]
    fn negated_reference_fails_polarization_in_odd_grade() {
        let m = weight_one();
        let neg = m.reference_operator().neg();
        assert!(cone_membership(&m, &m.reference_operator()).unwrap());
        assert!(!cone_membership(&m, &neg).unwrap());
    }
}
