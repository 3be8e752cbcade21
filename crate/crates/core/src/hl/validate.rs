use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::lefschetz::{lefschetz_check, polarization_check};
use super::module::HLModule;
use crate::exact::{GaussianRational, Matrix};
use crate::report::{CheckReport, Witness};

/// First entry `(r, c)` where `a` and `b` differ.
fn first_difference(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| a[(r, c)] != b[(r, c)])
}

fn record_equal(report: &mut CheckReport, name: String, a: &Matrix, b: &Matrix, note: &str) {
    match first_difference(a, b) {
        None => report.pass(name),
        Some((r, c)) => report.fail(name, Witness::entry(r, c, note)),
    }
}

/// Checks every structural invariant of a polarized Hodge-Lefschetz module:
/// bigrading, conjugation, form (nondegeneracy, grade orthogonality, parity,
/// reality), each generator (degree, bidegree, skewness, reality),
/// commutativity, and the Lefschetz and polarization conditions for `N₀`.
pub fn validate_structure(m: &HLModule) -> CheckReport {
    let mut report = CheckReport::new("validate-structure", "hl-module-definition");
    let k = m.k();
    let n = m.dim();
    let basis = m.basis();

    let bad_label = basis.iter().position(|b| {
        b.ell.abs() > k || b.p < 0 || b.q < 0 || b.p > k || b.q > k || b.p + b.q != b.ell + k
    });
    match bad_label {
        None => report.pass("bigrading p+q = l+k"),
        Some(i) => report.fail(
            "bigrading p+q = l+k",
            Witness::entry(i, i, "basis label out of range or p+q != l+k"),
        ),
    }

    let c = m.conjugation();
    record_equal(
        &mut report,
        "conjugation is an involution".into(),
        &c.mul(&c.conj()),
        &Matrix::identity(n),
        "C·conj(C) differs from identity",
    );

    let swap = (0..n)
        .flat_map(|r| (0..n).map(move |col| (r, col)))
        .find(|&(r, col)| {
            !c[(r, col)].is_zero() && (basis[r].p, basis[r].q) != (basis[col].q, basis[col].p)
        });
    match swap {
        None => report.pass("conjugation maps V^{p,q} to V^{q,p}"),
        Some((r, col)) => report.fail(
            "conjugation maps V^{p,q} to V^{q,p}",
            Witness::entry(r, col, "conjugation entry outside the swapped bidegree"),
        ),
    }

    let mut hodge: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for b in basis {
        *hodge.entry((b.p, b.q)).or_default() += 1;
    }
    let asym = hodge
        .iter()
        .find(|(&(p, q), &d)| hodge.get(&(q, p)).copied().unwrap_or(0) != d);
    match asym {
        None => report.pass("dim V^{p,q} = dim V^{q,p}"),
        Some((&(p, q), _)) => report.fail(
            "dim V^{p,q} = dim V^{q,p}",
            Witness::note(format!("Hodge number asymmetry at ({p},{q})")),
        ),
    }

    let q = m.form();
    match q.determinant() {
        Ok(d) if !d.is_zero() => report.pass("form nondegenerate"),
        _ => report.fail("form nondegenerate", Witness::note("det Q = 0")),
    }

    let off_grade = (0..n)
        .flat_map(|r| (0..n).map(move |col| (r, col)))
        .find(|&(r, col)| !q[(r, col)].is_zero() && basis[r].ell + basis[col].ell != 0);
    match off_grade {
        None => report.pass("Q(V_a, V_b) = 0 unless a+b = 0"),
        Some((r, col)) => report.fail(
            "Q(V_a, V_b) = 0 unless a+b = 0",
            Witness::entry(r, col, "form pairs grades not summing to zero"),
        ),
    }

    let parity = if k % 2 == 0 {
        GaussianRational::one()
    } else {
        -GaussianRational::one()
    };
    record_equal(
        &mut report,
        "form parity (-1)^k".into(),
        &q.transpose(),
        &q.scale(&parity),
        "Q(v,u) != (-1)^k Q(u,v)",
    );
    record_equal(
        &mut report,
        "form is real".into(),
        &c.transpose().mul(q).mul(c),
        &q.conj(),
        "Q(conj u, conj v) != conj Q(u,v)",
    );

    for g in m.generators() {
        let t = &g.matrix;
        let bad_degree = (0..n)
            .flat_map(|r| (0..n).map(move |col| (r, col)))
            .find(|&(r, col)| {
                !t[(r, col)].is_zero()
                    && (basis[r].ell != basis[col].ell - 2
                        || basis[r].p != basis[col].p - 1
                        || basis[r].q != basis[col].q - 1)
            });
        let name = format!("generator {} has bidegree (-1,-1)", g.name);
        match bad_degree {
            None => report.pass(name),
            Some((r, col)) => report.fail(name, Witness::entry(r, col, "entry of wrong degree")),
        }
        record_equal(
            &mut report,
            format!("generator {} is Q-skew", g.name),
            &t.transpose().mul(q),
            &q.mul(t).neg(),
            "Q(Tu,v) + Q(u,Tv) != 0",
        );
        record_equal(
            &mut report,
            format!("generator {} is real", g.name),
            &t.mul(c),
            &c.mul(&t.conj()),
            "T does not commute with conjugation",
        );
    }

    let gens = m.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let comm = gens[i].matrix.commutator(&gens[j].matrix);
            let name = format!("[{}, {}] = 0", gens[i].name, gens[j].name);
            match first_difference(&comm, &Matrix::zeros(n, n)) {
                None => report.pass(name),
                Some((r, col)) => {
                    report.fail(name, Witness::entry(r, col, "generators do not commute"))
                }
            }
        }
    }

    // conditions on N₀ only make sense once the shape invariants hold
    if report.passed() {
        let n0 = m.reference_operator();
        match lefschetz_check(m, &n0) {
            Err(e) => report.fail("reference Lefschetz", Witness::note(e.to_string())),
            Ok(lef) => {
                report.absorb("reference", &lef);
                if lef.passed() {
                    match polarization_check(m, &n0) {
                        Ok(pol) => report.absorb("reference", &pol),
                        Err(e) => {
                            report.fail("reference polarization", Witness::note(e.to_string()))
                        }
                    }
                }
            }
        }
    }
    report.set_data("dim", n);
    report.set_data("weight", m.weight());
    report
}
