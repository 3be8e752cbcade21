use hlmod_core::exact::matrix::{sesquilinear, span_rank};
use hlmod_core::exact::poly::Exponent;
use hlmod_core::exact::rational::{rat, sign};
use hlmod_core::exact::{GaussianRational, Matrix, MultiPoly, Rational};
use hlmod_core::fixtures;
use hlmod_core::hl::{lefschetz_property, polarization_check, weight_filtration};
use hlmod_core::polytope::{build_pkt_module, mixed_volume, volume_polynomial};
use hlmod_core::sampling::ConeSampler;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(gaussian(), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |r, c| v[r * cols + c].clone()))
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Rank-deficient matrices show up more often as products of thin factors.
fn low_rank_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=5, 1usize..=3)
        .prop_flat_map(|(r, c, k)| (matrix(r, k), matrix(k, c)))
        .prop_map(|(a, b)| a.mul(&b))
}

fn hermitian() -> impl Strategy<Value = Matrix> {
    (1usize..=4)
        .prop_flat_map(|n| (matrix(n, n), 0i64..=3))
        .prop_map(|(a, shift)| {
            let n = a.rows();
            a.add(&a.conj_transpose())
                .add(&Matrix::identity(n).scale(&GaussianRational::from_int(shift)))
        })
}

fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, nvars), rational()), 0..6)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms))
}

fn exponent(nvars: usize) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0u32..=2, nvars)
}

/// Coefficients `c_0..c_n` of `det(xI − A)` by Faddeev–LeVerrier.
fn char_poly(a: &Matrix) -> Vec<GaussianRational> {
    let n = a.rows();
    let mut c = vec![GaussianRational::zero(); n + 1];
    c[n] = GaussianRational::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let am = a.mul(&m);
        let trace = (0..n).fold(GaussianRational::zero(), |acc, i| acc + &am[(i, i)]);
        c[n - k] = -(trace / GaussianRational::from_int(k as i64));
    }
    c
}

/// All eigenvalues of a Hermitian matrix are positive iff the characteristic
/// polynomial alternates strictly in sign (Descartes, real-rooted case).
fn eigen_sign_oracle(h: &Matrix) -> bool {
    let c = char_poly(h);
    let n = h.rows();
    c.iter().enumerate().all(|(j, x)| {
        assert!(x.is_real());
        let want = if (n - j).is_multiple_of(2) { 1 } else { -1 };
        sign(&x.re) == want
    })
}

fn probe_vectors(n: usize) -> Vec<Vec<GaussianRational>> {
    let units = [
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::i(),
        GaussianRational::from_int(0),
    ];
    let mut out: Vec<Vec<GaussianRational>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                units.iter().map(move |u| {
                    let mut w = v.clone();
                    w.push(u.clone());
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| !x.is_zero()));
    out
}

/// Direct sum of nilpotent Jordan blocks.
fn jordan(blocks: &[usize]) -> Matrix {
    let n: usize = blocks.iter().sum();
    let mut m = Matrix::zeros(n, n);
    let mut at = 0;
    for &b in blocks {
        for i in 1..b {
            m[(at + i, at + i - 1)] = GaussianRational::one();
        }
        at += b;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in prop_oneof![any_matrix(), low_rank_matrix()]) {
        let (ker, rank) = m.kernel_basis();
        prop_assert_eq!(rank + ker.len(), m.cols());
        prop_assert_eq!(rank, m.rank());
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_returns_a_solution(m in low_rank_matrix(), x in prop::collection::vec(gaussian(), 5)) {
        let x = &x[..m.cols()];
        let b = m.apply(x);
        let y = m.linear_solve(&b).unwrap();
        prop_assert_eq!(m.apply(&y), b);
    }

    #[test]
    fn gaussian_field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, GaussianRational::one());
        } else {
            prop_assert!(a.is_zero());
        }
        let text = a.to_string();
        prop_assert_eq!(text.parse::<GaussianRational>().unwrap(), a);
    }

    #[test]
    fn hermitian_pd_agrees_with_oracles(h in hermitian()) {
        let pd = h.hermitian_pd().unwrap();
        prop_assert_eq!(pd, eigen_sign_oracle(&h));
        let probes = probe_vectors(h.rows());
        let all_positive = probes
            .iter()
            .all(|v| sesquilinear(&h, v, v).re > Rational::zero());
        if pd {
            prop_assert!(all_positive);
        }
        if !all_positive {
            prop_assert!(!pd);
        }
    }

    #[test]
    fn partials_commute(f in poly(3), a in exponent(3), b in exponent(3)) {
        let sum: Exponent = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        prop_assert_eq!(f.apply_diff_op(&a).apply_diff_op(&b), f.apply_diff_op(&sum));
        prop_assert_eq!(f.apply_diff_op(&b).apply_diff_op(&a), f.apply_diff_op(&sum));
    }

    #[test]
    fn diff_ops_are_linear(f in poly(3), g in poly(3), a in exponent(3), s in rational()) {
        prop_assert_eq!(
            f.add(&g).apply_diff_op(&a),
            f.apply_diff_op(&a).add(&g.apply_diff_op(&a))
        );
        prop_assert_eq!(f.scale(&s).apply_diff_op(&a), f.apply_diff_op(&a).scale(&s));
    }

    #[test]
    fn weight_filtration_is_equivariant(
        blocks in prop::collection::vec(1usize..=3, 1..=3),
        p in matrix(9, 9),
    ) {
        let n: usize = blocks.iter().sum();
        let idx: Vec<usize> = (0..n).collect();
        let p = p.submatrix(&idx, &idx);
        prop_assume!(!p.determinant().unwrap().is_zero());
        let s = blocks.iter().max().unwrap() - 1;
        let nil = jordan(&blocks);
        let conj = p.mul(&nil).mul(&p.inverse().unwrap());
        let w = weight_filtration(&nil, s).unwrap();
        let wc = weight_filtration(&conj, s).unwrap();
        prop_assert!(w.is_increasing() && wc.is_increasing());
        for ell in w.lowest()..=w.highest() {
            let moved: Vec<_> = w.get(ell).iter().map(|v| p.apply(v)).collect();
            let mut both = moved.clone();
            both.extend(wc.get(ell));
            prop_assert_eq!(moved.len(), wc.dim_at(ell));
            prop_assert_eq!(span_rank(n, &both), moved.len());
            // N W_ℓ ⊆ W_{ℓ−2}
            let mut lower = w.get(ell - 2);
            let r = lower.len();
            lower.extend(w.get(ell).iter().map(|v| nil.apply(v)));
            prop_assert_eq!(span_rank(n, &lower), r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mixed_volume_symmetric_and_additive(seed in any::<u64>(), name in prop::sample::select(vec!["square", "cube3", "prism"])) {
        let p = fixtures::polytope(name).unwrap();
        let m = build_pkt_module(&p).unwrap();
        let nu = volume_polynomial(&p).unwrap();
        let k = p.dim();
        let mut sampler = ConeSampler::new(&m, seed);
        let cs: Vec<Vec<Rational>> = (0..=k).map(|_| sampler.sample().unwrap()).collect();
        let args = &cs[..k];
        let v = mixed_volume(&nu, args).unwrap();
        let mut rev = args.to_vec();
        rev.reverse();
        prop_assert_eq!(&mixed_volume(&nu, &rev).unwrap(), &v);
        let mut rotated = args.to_vec();
        rotated.rotate_left(1);
        prop_assert_eq!(&mixed_volume(&nu, &rotated).unwrap(), &v);
        // Minkowski sum in the first slot
        let sum: Vec<Rational> = cs[0].iter().zip(&cs[k]).map(|(a, b)| a + b).collect();
        let mut with_sum = args.to_vec();
        with_sum[0] = sum;
        let mut with_other = args.to_vec();
        with_other[0] = cs[k].clone();
        prop_assert_eq!(
            mixed_volume(&nu, &with_sum).unwrap(),
            v + mixed_volume(&nu, &with_other).unwrap()
        );
        let diagonal = vec![cs[0].clone(); k];
        prop_assert_eq!(mixed_volume(&nu, &diagonal).unwrap(), nu.eval(&cs[0]));
    }

    #[test]
    fn positive_rescaling_preserves_verdicts(
        seed in any::<u64>(),
        s in (1i64..=9, 1i64..=9).prop_map(|(a, b)| rat(a, b)),
        name in prop::sample::select(vec!["square", "triangle", "prism", "cube3"]),
        negate in any::<bool>(),
    ) {
        let m = build_pkt_module(&fixtures::polytope(name).unwrap()).unwrap();
        let mut c = ConeSampler::new(&m, seed).sample().unwrap();
        if negate {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
        let t = m.operator(&c).unwrap();
        let ts = t.scale(&GaussianRational::real(s));
        let lef = lefschetz_property(&m, &t).unwrap();
        prop_assert_eq!(lef, lefschetz_property(&m, &ts).unwrap());
        if lef {
            prop_assert_eq!(
                polarization_check(&m, &t).unwrap().passed(),
                polarization_check(&m, &ts).unwrap().passed()
            );
        }
    }
}
