use hlmod_core::descent::{
    compare_descents, descent, descent_report, quotient_descent, repeated_descent,
};
use hlmod_core::exact::rational::{int, rat};
use hlmod_core::exact::{GaussianRational, Matrix, Rational};
use hlmod_core::fixtures;
use hlmod_core::hl::{
    grading_filtration, lefschetz_decomposition, lefschetz_property, polarization_check,
    sl2_complete, validate_structure, weight_filtration, BasisLabel, Generator, HLModule,
};
use hlmod_core::koszul::{purity_check, KoszulComplex};
use hlmod_core::mixed::*;
use hlmod_core::polytope::build_pkt_module;
use hlmod_core::sampling::ConeSampler;
use hlmod_core::Error;
use num_traits::Zero;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn module(name: &str) -> HLModule {
    build_pkt_module(&fixtures::polytope(name).unwrap()).unwrap()
}

#[test]
fn constant_tuples_agree_with_lefschetz() {
    let m = module("cube3");
    let mut sampler = ConeSampler::new(&m, 21);
    let c = sampler.sample().unwrap();
    let t = m.operator(&c).unwrap();
    assert!(lefschetz_property(&m, &t).unwrap());
    for len in 0..=3 {
        let tuple = OperatorTuple::new(&m, vec![c.clone(); len]).unwrap();
        assert!(mixed_hlt_check(&m, &tuple).unwrap().passed());
    }
    // a boundary element fails both ways, power by power
    let seg = ints(&[1, 1, 0, 0, 0, 0]);
    let b = m.operator(&seg).unwrap();
    assert!(!lefschetz_property(&m, &b).unwrap());
    for len in 1..=3usize {
        let tuple = OperatorTuple::new_unchecked(&m, vec![seg.clone(); len]).unwrap();
        let grade = len as i32;
        let src = m.grade_indices(grade);
        let dst = m.grade_indices(-grade);
        let invertible = !b
            .pow(len)
            .submatrix(&dst, &src)
            .determinant()
            .unwrap()
            .is_zero();
        assert_eq!(mixed_hlt_check(&m, &tuple).unwrap().passed(), invertible);
    }
}

#[test]
fn mixed_hlt_is_symmetric() {
    let m = module("cube3");
    let mut sampler = ConeSampler::new(&m, 8);
    let tuple = sampler.tuple(3).unwrap();
    let det = mixed_hlt_check(&m, &tuple).unwrap().data["determinant"].clone();
    for order in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
        let r = mixed_hlt_check(&m, &tuple.permuted(&order)).unwrap();
        assert!(r.passed());
        assert_eq!(r.data["determinant"], det);
    }
}

#[test]
fn mixed_hrr_invariant_under_rescaling() {
    let m = module("cube4");
    let mut sampler = ConeSampler::new(&m, 9);
    let tuple = sampler.tuple(2).unwrap();
    assert!(mixed_hrr_check(&m, &tuple).unwrap().passed());
    for s in [rat(1, 7), rat(5, 2)] {
        let scaled = tuple.rescaled(1, &s).unwrap();
        assert!(mixed_hrr_check(&m, &scaled).unwrap().passed());
    }
    assert!(tuple.rescaled(0, &int(-1)).is_err());
}

#[test]
fn reference_tuples_reduce_to_single_operator_theory() {
    for name in ["square", "cube3", "cube4", "prism"] {
        let m = module(name);
        let n0 = m.reference_operator();
        let pol = polarization_check(&m, &n0).unwrap();
        assert!(pol.passed());
        for t in 0..m.k() - 1 {
            let tuple = OperatorTuple::reference(&m, t as usize + 1).unwrap();
            let dec = mixed_decomposition_check(&m, &tuple).unwrap();
            let single = lefschetz_decomposition(&m, &n0, t).unwrap();
            let dims = &dec.data["dims"];
            assert_eq!(
                (
                    dims[0].as_u64().unwrap() as usize,
                    dims[1].as_u64().unwrap() as usize
                ),
                single.dims(),
                "{name} t={t}"
            );
            assert!(mixed_hrr_check(&m, &tuple).unwrap().passed());
        }
    }
}

#[test]
fn cube3_mixed_decomposition_dims() {
    let m = module("cube3");
    let mut sampler = ConeSampler::new(&m, 4);
    for _ in 0..5 {
        let tuple = sampler.tuple(2).unwrap();
        let r = mixed_decomposition_check(&m, &tuple).unwrap();
        assert!(r.passed());
        assert_eq!(r.data["dims"], serde_json::json!([2, 1]));
    }
}

#[test]
fn square_kernel_bound_example() {
    let m = module("square");
    let r = kernel_weight_bound(&m, &OperatorTuple::reference(&m, 1).unwrap()).unwrap();
    assert!(r.passed());
    assert_eq!(r.data["kernel_dim"], 2);
    let empty = OperatorTuple::reference(&m, 0).unwrap();
    assert_eq!(
        kernel_weight_bound(&m, &empty).unwrap().data["kernel_dim"],
        0
    );
}

#[test]
fn random_tuples_on_all_fixtures() {
    for (i, name) in fixtures::CORE_POLYTOPES.iter().enumerate() {
        let m = module(name);
        let mut sampler = ConeSampler::new(&m, 100 + i as u64);
        for len in 0..=m.weight() {
            for _ in 0..3 {
                let tuple = sampler.tuple(len).unwrap();
                assert!(kernel_weight_bound(&m, &tuple).unwrap().passed(), "{name}");
                assert!(mixed_hlt_check(&m, &tuple).unwrap().passed(), "{name}");
                if len >= 1 && len < m.weight() {
                    assert!(
                        mixed_decomposition_check(&m, &tuple).unwrap().passed(),
                        "{name}"
                    );
                    assert!(mixed_hrr_check(&m, &tuple).unwrap().passed(), "{name}");
                }
            }
        }
    }
}

#[test]
fn length_bounds_are_rejected() {
    let m = module("square");
    let long = OperatorTuple::reference(&m, 3).unwrap();
    assert!(matches!(
        mixed_hlt_check(&m, &long),
        Err(Error::Precondition(_))
    ));
    let two = OperatorTuple::reference(&m, 2).unwrap();
    assert!(matches!(
        mixed_decomposition_check(&m, &two),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn sl2_on_every_fixture() {
    for (i, name) in fixtures::CORE_POLYTOPES.iter().enumerate() {
        let m = module(name);
        let mut sampler = ConeSampler::new(&m, 300 + i as u64);
        let mut ops = vec![m.reference_operator()];
        for _ in 0..3 {
            ops.push(m.operator(&sampler.sample().unwrap()).unwrap());
        }
        for t in ops {
            let triple = sl2_complete(&m, &t).unwrap();
            assert_eq!(triple.relations(), [true; 3], "{name}");
        }
    }
}

#[test]
fn sl2_completion_is_unique() {
    let m = module("cube3");
    let triple = sl2_complete(&m, &m.reference_operator()).unwrap();
    let n = m.dim();
    // every degree +2 perturbation of N⁺ breaks a relation
    for r in 0..n {
        for c in 0..n {
            if m.basis()[r].ell != m.basis()[c].ell + 2 {
                continue;
            }
            let mut e = Matrix::zeros(n, n);
            e[(r, c)] = GaussianRational::from_int(1);
            let mut perturbed = triple.clone();
            perturbed.n_plus = triple.n_plus.add(&e);
            assert!(!perturbed.holds());
        }
    }
}

#[test]
fn cone_elements_define_the_grading_filtration() {
    let m = module("cube3");
    let grading = grading_filtration(&m);
    let mut sampler = ConeSampler::new(&m, 12);
    for _ in 0..4 {
        let t = m.operator(&sampler.sample().unwrap()).unwrap();
        let w = weight_filtration(&t, m.weight()).unwrap();
        assert!(w.same_as(&grading));
    }
    assert!(matches!(
        weight_filtration(&m.reference_operator(), 1),
        Err(Error::NotNilpotent(2))
    ));
}

#[test]
fn descent_dims() {
    let sq = module("square");
    let d = descent(&sq, sq.reference()).unwrap();
    assert_eq!(d.module.grade_dims(), vec![(1, 1), (0, 0), (-1, 1)]);
    let c3 = module("cube3");
    let d = descent(&c3, c3.reference()).unwrap();
    let dims: Vec<usize> = d.module.grade_dims().iter().map(|x| x.1).collect();
    assert_eq!(dims, vec![1, 0, 3, 0, 1]);
    assert!(descent_report(&d).passed());
}

#[test]
fn descent_dims_are_ranks() {
    for (i, name) in fixtures::CORE_POLYTOPES.iter().enumerate() {
        let m = module(name);
        let mut sampler = ConeSampler::new(&m, 40 + i as u64);
        let c = sampler.sample().unwrap();
        let t = m.operator(&c).unwrap();
        let d = descent(&m, &c).unwrap();
        for ell in -m.k()..m.k() {
            let cols: Vec<_> = m
                .grade_indices(ell + 1)
                .iter()
                .map(|&j| t.column(j))
                .collect();
            let rank = hlmod_core::exact::matrix::span_rank(m.dim(), &cols);
            assert_eq!(d.module.grade_dim(ell), rank, "{name} grade {ell}");
        }
        let report = descent_report(&d);
        assert!(report.passed(), "{name}: {report}");
    }
}

#[test]
fn repeated_and_quotient_descent() {
    for (i, name) in ["square", "cube3", "prism", "cube4"].iter().enumerate() {
        let m = module(name);
        let mut sampler = ConeSampler::new(&m, 70 + i as u64);
        for len in 1..=m.weight() {
            let tuple = sampler.tuple(len).unwrap();
            let r = compare_descents(&m, &tuple).unwrap();
            assert!(r.passed(), "{name}: {r}");
        }
        let c = sampler.sample().unwrap();
        for t in 0..=m.weight() {
            let q = quotient_descent(&m, &c, t).unwrap();
            assert!(q.report.passed(), "{name} t={t}: {}", q.report);
        }
    }
    let sq = module("square");
    let top = repeated_descent(&sq, &OperatorTuple::reference(&sq, 2).unwrap()).unwrap();
    assert_eq!((top.module.weight(), top.module.dim()), (0, 1));
    assert!(top.module.form()[(0, 0)].re > Rational::zero());
    let q = quotient_descent(&sq, sq.reference(), 1).unwrap();
    assert_eq!(q.quotient.dim(), 2);
}

#[test]
fn ill_defined_form_is_reported() {
    let m = module("square");
    let t = m.reference_operator();
    // a kernel vector of N₀ in V₀, paired against the top of V₋₂
    let v0 = m.grade_indices(0);
    let (ker, _) = t.select_columns(&v0).kernel_basis();
    let a = v0[ker[0].iter().position(|x| !x.is_zero()).unwrap()];
    let bottom = m.grade_indices(-2)[0];
    let mut form = m.form().clone();
    form[(a, bottom)] = &form[(a, bottom)] + &GaussianRational::from_int(1);
    let bad = m.clone().with_form(form).unwrap();
    match descent(&bad, bad.reference()) {
        Err(Error::Precondition(msg)) => assert!(msg.starts_with("form-ill-defined"), "{msg}"),
        other => panic!("expected form-ill-defined, got {other:?}"),
    }
}

#[test]
fn descent_premise_is_checked() {
    let m = module("square");
    assert!(matches!(
        descent(&m, &ints(&[-1, 0, -1, 0])),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn koszul_terms_on_square() {
    let m = module("square");
    let tuple = OperatorTuple::new(&m, vec![ints(&[1, 1, 1, 1]), ints(&[2, 2, 1, 1])]).unwrap();
    let kc = KoszulComplex::new(&m, &tuple).unwrap();
    assert_eq!(kc.term_dim(0), 4);
    assert_eq!(kc.summand_dims(1), vec![(vec![1], 2), (vec![2], 2)]);
    assert_eq!(kc.term_dim(2), 1);
    assert!(kc.differential(1).mul(kc.differential(0)).is_zero());
    assert!(purity_check(&kc).passed());
}

#[test]
fn purity_on_all_fixtures() {
    for (i, name) in fixtures::CORE_POLYTOPES.iter().enumerate() {
        let m = module(name);
        let mut sampler = ConeSampler::new(&m, 500 + i as u64);
        for len in 1..=3 {
            let tuple = sampler.tuple(len).unwrap();
            let kc = KoszulComplex::new(&m, &tuple).unwrap();
            let r = purity_check(&kc);
            assert!(r.passed(), "{name} len={len}: {r}");
        }
    }
}

#[test]
fn purity_boundary_case() {
    let m = HLModule::new(
        0,
        vec![
            BasisLabel {
                id: 0,
                ell: 0,
                p: 0,
                q: 0,
            },
            BasisLabel {
                id: 1,
                ell: 0,
                p: 0,
                q: 0,
            },
        ],
        Matrix::identity(2),
        Matrix::identity(2),
        vec![Generator {
            name: "z".into(),
            matrix: Matrix::zeros(2, 2),
        }],
        vec![int(1)],
    )
    .unwrap();
    assert!(validate_structure(&m).passed());
    let kc = KoszulComplex::new(&m, &OperatorTuple::reference(&m, 1).unwrap()).unwrap();
    let r = purity_check(&kc);
    assert!(r.passed());
    assert_eq!(r.data["cohomology_dims"], serde_json::json!([2, 0]));
}
