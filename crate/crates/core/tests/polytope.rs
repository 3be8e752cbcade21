use hlmod_core::exact::rational::{int, rat};
use hlmod_core::exact::{GaussianRational, Matrix, MultiPoly, Rational};
use hlmod_core::fixtures;
use hlmod_core::hl::{
    cone_contains, cone_membership, lefschetz_property, polarization_check, validate_structure,
};
use hlmod_core::mixed::OperatorTuple;
use hlmod_core::polytope::*;
use hlmod_core::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// h(t) = Σ_i f*_{i-1} (t-1)^{k-i} over the face numbers of the polar
/// simplicial polytope, f*_{i-1} = f_{k-i}; `f` runs over dimensions 0..=k.
fn h_from_f(f: &[usize]) -> Vec<i64> {
    let k = f.len() - 1;
    let mut h = vec![0i64; k + 1];
    let face = |i: usize| f[k - i] as i64;
    for i in 0..=k {
        // (t-1)^{k-i} = Σ_j C(k-i, j) t^j (-1)^{k-i-j}
        let e = k - i;
        let mut binom = 1i64;
        for j in 0..=e {
            let sign = if (e - j).is_multiple_of(2) { 1 } else { -1 };
            h[j] += face(i) * binom * sign;
            binom = binom * (e - j) as i64 / (j + 1) as i64;
        }
    }
    // coefficients of t^j give h_{k-j}; the sequence is symmetric anyway
    h.reverse();
    h
}

#[test]
fn f_vectors_are_known() {
    let known: &[(&str, &[usize])] = &[
        ("segment", &[2]),
        ("triangle", &[3, 3]),
        ("square", &[4, 4]),
        ("simplex3", &[4, 6, 4]),
        ("cube3", &[8, 12, 6]),
        ("cube4", &[16, 32, 24, 8]),
        ("prism", &[6, 9, 5]),
        ("pentagon", &[5, 5]),
    ];
    for (name, f) in known {
        let p = fixtures::polytope(name).unwrap();
        let lib = p.f_vector();
        assert_eq!(&lib[..lib.len() - 1], *f, "{name}");
    }
}

#[test]
fn h_vectors_match_f_vector_transform() {
    for (name, _) in fixtures::POLYTOPES {
        let p = fixtures::polytope(name).unwrap();
        let f = p.f_vector();
        let m = build_pkt_module(&p).unwrap();
        let h: Vec<i64> = h_vector(&m).unwrap().iter().map(|&x| x as i64).collect();
        assert_eq!(h, h_from_f(&f), "{name}");
        let total: usize = h.iter().map(|&x| x as usize).sum();
        assert_eq!(total, p.vertices().len(), "{name}");
    }
}

#[test]
fn explicit_volume_polynomials() {
    let sq = volume_polynomial(&fixtures::polytope("square").unwrap()).unwrap();
    let a = MultiPoly::linear(&ints(&[1, 1, 0, 0]));
    let b = MultiPoly::linear(&ints(&[0, 0, 1, 1]));
    assert_eq!(sq, a.mul(&b));

    let tr = volume_polynomial(&fixtures::polytope("triangle").unwrap()).unwrap();
    let s = MultiPoly::linear(&ints(&[1, 1, 1]));
    assert_eq!(tr, s.mul(&s).scale(&rat(1, 2)));

    let seg = volume_polynomial(&fixtures::polytope("segment").unwrap()).unwrap();
    assert_eq!(seg, MultiPoly::linear(&ints(&[1, 1])));
}

#[test]
fn volume_polynomial_matches_oracle_at_fresh_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in fixtures::CORE_POLYTOPES {
        let p = fixtures::polytope(name).unwrap();
        let nu = volume_polynomial(&p).unwrap();
        let mut hits = 0;
        for _ in 0..200 {
            let x: Vec<Rational> = p
                .support()
                .iter()
                .map(|x0| x0 + rat(rng.gen_range(-5..=5), 32))
                .collect();
            match volume_oracle(&p, &x) {
                Ok(v) => {
                    assert_eq!(nu.eval(&x), v, "{name} at {x:?}");
                    hits += 1;
                }
                Err(Error::CombinatoricsChanged(_)) => {}
                Err(e) => panic!("{name}: {e}"),
            }
            if hits == VOLUME_VALIDATION_POINTS {
                break;
            }
        }
        assert_eq!(hits, VOLUME_VALIDATION_POINTS, "{name}");
    }
}

#[test]
fn euler_identity() {
    for name in fixtures::CORE_POLYTOPES {
        let p = fixtures::polytope(name).unwrap();
        let nu = volume_polynomial(&p).unwrap();
        let r = p.facet_count();
        let mut euler = MultiPoly::zero(r);
        for i in 0..r {
            euler = euler.add(&MultiPoly::var(r, i).mul(&nu.partial(i)));
        }
        assert_eq!(euler, nu.scale(&int(p.dim() as i64)), "{name}");
        assert!(nu.is_homogeneous(p.dim() as u32));
        assert_eq!(nu.eval(p.support()), p.triangulation_volume());
    }
}

#[test]
fn fixture_modules_validate() {
    for name in fixtures::CORE_POLYTOPES {
        let m = build_pkt_module(&fixtures::polytope(name).unwrap()).unwrap();
        assert!(validate_structure(&m).passed(), "{name}");
        let n0 = m.reference_operator();
        assert!(lefschetz_property(&m, &n0).unwrap());
        assert!(polarization_check(&m, &n0).unwrap().passed());
    }
}

#[test]
fn square_dims_and_grades() {
    let m = build_pkt_module(&fixtures::polytope("square").unwrap()).unwrap();
    assert_eq!(
        m.grade_dims(),
        vec![(2, 1), (1, 0), (0, 2), (-1, 0), (-2, 1)]
    );
    assert!(m.basis().iter().all(|b| b.p == b.q));
}

/// Without the sign twist the raw pairing makes each `∂_i` symmetric.
#[test]
fn raw_pairing_makes_operators_symmetric() {
    let m = build_pkt_module(&fixtures::polytope("cube3").unwrap()).unwrap();
    let k = m.k();
    let raw = Matrix::from_fn(m.dim(), m.dim(), |r, c| {
        let j = (k - m.basis()[r].ell) / 2;
        let x = m.form()[(r, c)].clone();
        if j % 2 == 0 {
            x
        } else {
            -x
        }
    });
    for g in m.generators() {
        let t = &g.matrix;
        assert_eq!(
            t.transpose().mul(&raw),
            raw.mul(t),
            "{} symmetric for raw",
            g.name
        );
        assert_ne!(
            t.transpose().mul(&raw),
            raw.mul(t).neg(),
            "{} skew for raw",
            g.name
        );
        assert_eq!(t.transpose().mul(m.form()), m.form().mul(t).neg());
    }
}

#[test]
fn square_primitive_class_sign() {
    // u = [∂1] - [∂3] is primitive and S_raw(u, u) = -2
    let alg = PolytopeAlgebra::new(&fixtures::polytope("square").unwrap()).unwrap();
    let m = alg.module();
    let a = alg.class_of(&[1, 0, 0, 0]).unwrap();
    let b = alg.class_of(&[0, 0, 1, 0]).unwrap();
    let u: Vec<GaussianRational> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    assert!(m.reference_operator().apply(&u).iter().all(Zero::is_zero));
    assert_eq!(m.pair(&u, &u), GaussianRational::from_int(2));
}

#[test]
fn mixed_volume_examples() {
    let nu = volume_polynomial(&fixtures::polytope("square").unwrap()).unwrap();
    let c1 = ints(&[1, 1, 1, 1]);
    let c2 = ints(&[2, 2, 1, 1]);
    assert_eq!(
        mixed_volume(&nu, &[c1.clone(), c2.clone()]).unwrap(),
        int(6)
    );
    let sum: Vec<Rational> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
    assert_eq!(nu.eval(&sum) - nu.eval(&c1) - nu.eval(&c2), int(12));
    let x0 = ints(&[1, 0, 1, 0]);
    assert_eq!(mixed_volume(&nu, &[x0.clone(), x0]).unwrap(), int(1));
    let r = af_check(&nu, &c1, &c2, &[]).unwrap();
    assert!(r.passed());
    assert_eq!(r.data["v12"], "6");
    assert_eq!(r.data["v11"], "4");
    assert_eq!(r.data["v22"], "8");
    // boxes (w1, h1) = (3, 2), (w2, h2) = (1, 5)
    let b1 = ints(&[3, 0, 2, 0]);
    let b2 = ints(&[1, 0, 5, 0]);
    assert_eq!(mixed_volume(&nu, &[b1, b2]).unwrap(), rat(3 * 5 + 2, 2));
    assert!(af_check(&nu, &c1, &c1, &[]).unwrap().data["defect"] == "0");
}

#[test]
fn mixed_volume_diagonal_is_volume() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in fixtures::CORE_POLYTOPES {
        let p = fixtures::polytope(name).unwrap();
        let nu = volume_polynomial(&p).unwrap();
        let c: Vec<Rational> = (0..p.facet_count())
            .map(|_| rat(rng.gen_range(-9..=9), 4))
            .collect();
        assert_eq!(
            mixed_volume(&nu, &vec![c.clone(); p.dim()]).unwrap(),
            nu.eval(&c),
            "{name}"
        );
    }
}

#[test]
fn rejected_inputs() {
    let oct: Vec<Vec<Rational>> = (0..8)
        .map(|i| {
            (0..3)
                .map(|b| int(if i >> b & 1 == 1 { 1 } else { -1 }))
                .collect()
        })
        .collect();
    assert!(matches!(
        SimplePolytope::build("octahedron", oct, ints(&[1; 8])),
        Err(Error::NonSimple(_))
    ));
    assert_eq!(
        SimplePolytope::build("ray", vec![ints(&[-1])], ints(&[0])).unwrap_err(),
        Error::Unbounded
    );
    assert!(matches!(
        mixed_volume(
            &volume_polynomial(&fixtures::polytope("square").unwrap()).unwrap(),
            &[ints(&[1, 1, 1, 1])]
        ),
        Err(Error::DimMismatch(_))
    ));
}

#[test]
fn ample_cone_is_the_combinatorial_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for name in [
        "square",
        "triangle",
        "prism",
        "cube3",
        "square-perturbed",
        "prism-perturbed",
    ] {
        let p = fixtures::polytope(name).unwrap();
        let cone = ample_cone(&p).unwrap();
        let ty = p.combinatorial_type();
        let (mut inside, mut outside) = (0, 0);
        for _ in 0..150 {
            let x: Vec<Rational> = p
                .support()
                .iter()
                .map(|x0| x0 + rat(rng.gen_range(-8..=8), 4))
                .collect();
            let same = p
                .with_support(x.clone())
                .is_ok_and(|q| q.combinatorial_type() == ty);
            assert_eq!(cone.contains(&x).unwrap(), same, "{name} at {x:?}");
            if same {
                inside += 1;
            } else {
                outside += 1;
            }
        }
        assert!(inside > 0 && outside > 0, "{name}: {inside}/{outside}");
    }
}

#[test]
fn polarizing_support_outside_the_ample_cone() {
    let p = fixtures::polytope("prism").unwrap();
    let m = build_pkt_module(&p).unwrap();
    let flipped = ints(&[0, 0, -1, 0, 1]);
    let t = m.operator(&flipped).unwrap();
    assert!(cone_membership(&m, &t).unwrap());
    assert!(!cone_contains(&m, &flipped).unwrap());
    assert!(matches!(
        OperatorTuple::new(&m, vec![flipped]),
        Err(Error::Precondition(_))
    ));
}
