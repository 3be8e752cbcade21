//! Batched checks over one module: single-operator theory at a chosen
//! element, seeded mixed tuples, descent and Koszul purity.
//!
//! Every entry point returns reports in a fixed order, so output for a given
//! seed is reproducible byte for byte.

use std::time::Instant;

use crate::descent::{compare_descents, descent, descent_report, quotient_descent};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::hl::{
    cone_contains, grading_filtration, lefschetz_check, lefschetz_decomposition,
    polarization_check, sl2_complete, validate_structure, weight_filtration, HLModule,
};
use crate::koszul::{purity_check, KoszulComplex};
use crate::mixed::{
    kernel_weight_bound, mixed_decomposition_check, mixed_hlt_check, mixed_hrr_check, OperatorTuple,
};
use crate::polytope::{af_check, h_vector, PolytopeAlgebra, SimplePolytope};
use crate::report::{CheckReport, Witness};
use crate::sampling::ConeSampler;

pub const DEFAULT_TUPLES: usize = 25;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random tuples per check and admissible length.
    pub tuples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            tuples: DEFAULT_TUPLES,
        }
    }
}

/// Runs `f`, timing it; errors become an input-error report or, for failed
/// internal identities, a failing report carrying the message.
pub fn guarded(check: &str, theorem: &str, f: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    let start = Instant::now();
    let report = match f() {
        Ok(r) => r,
        Err(e) if e.is_input_error() => CheckReport::input_error(check, theorem, &e),
        Err(e) => {
            let mut r = CheckReport::new(check, theorem);
            r.fail(e.to_string(), Witness::note(e.to_string()));
            r
        }
    };
    report.with_elapsed(start.elapsed())
}

fn seeded(check: &str, theorem: &str, opts: &SuiteOptions) -> CheckReport {
    let mut r = CheckReport::new(check, theorem);
    r.set_data("seed", opts.seed);
    r
}

fn ensure_nonempty(report: &mut CheckReport) {
    if report.subchecks.is_empty() {
        report.pass("nothing to check");
    }
}

/// Lefschetz property, polarization, primitive decomposition, sl₂-completion
/// and weight filtration for `Σ c_j G_j`.
pub fn operator_reports(m: &HLModule, coeffs: &[Rational]) -> Vec<CheckReport> {
    let t = match m.operator(coeffs) {
        Ok(t) => t,
        Err(e) => return vec![CheckReport::input_error("operator", "operator", &e)],
    };
    let mut out = Vec::new();
    out.push(guarded("cone-membership", "polarizing-cone", || {
        let mut r = CheckReport::new("cone-membership", "polarizing-cone");
        let inside = cone_contains(m, coeffs)?;
        r.record(
            "element lies in the polarizing cone",
            inside,
            (!inside).then(|| Witness::note("not certified as a cone element")),
        );
        Ok(r)
    }));
    let lefschetz = guarded("lefschetz-property", "hard-lefschetz", || {
        lefschetz_check(m, &t)
    });
    let proceed = lefschetz.passed();
    out.push(lefschetz);
    // the remaining checks presuppose the Lefschetz property
    if !proceed {
        return out;
    }
    out.push(guarded("polarization", "hodge-riemann", || {
        polarization_check(m, &t)
    }));
    out.push(guarded(
        "lefschetz-decomposition",
        "lefschetz-decomposition",
        || {
            let mut r = CheckReport::new("lefschetz-decomposition", "lefschetz-decomposition");
            let mut dims = Vec::new();
            for ell in 0..=m.k() {
                match lefschetz_decomposition(m, &t, ell) {
                    Ok(d) => {
                        dims.push((ell, d.dims()));
                        r.pass(format!("V_{ell} = P_{ell} + T V_{}", ell + 2));
                    }
                    Err(Error::Verification(msg)) => r.fail(
                        format!("V_{ell} = P_{ell} + T V_{}", ell + 2),
                        Witness::note(msg),
                    ),
                    Err(e) => return Err(e),
                }
            }
            r.set_data("dims", dims);
            Ok(r)
        },
    ));
    out.push(guarded("sl2-completion", "sl2-triple", || {
        let triple = sl2_complete(m, &t)?;
        let mut r = CheckReport::new("sl2-completion", "sl2-triple");
        let names = ["[N+, N] = Y", "[Y, N+] = 2N+", "[Y, N] = -2N"];
        for (name, ok) in names.iter().zip(triple.relations()) {
            r.record(
                *name,
                ok,
                (!ok).then(|| Witness::note("bracket identity fails")),
            );
        }
        Ok(r)
    }));
    out.push(guarded("weight-filtration", "weight-filtration", || {
        let mut r = CheckReport::new("weight-filtration", "weight-filtration");
        let s = m.weight();
        let w = weight_filtration(&t, s)?;
        let same = w.same_as(&grading_filtration(m));
        r.record(
            "W(T) equals the grading filtration",
            same,
            (!same).then(|| Witness::note("filtrations differ")),
        );
        Ok(r)
    }));
    out
}

/// Kernel bound and mixed HLT for lengths `0..=k`, mixed decomposition and
/// mixed HRR for lengths `1..k`, each over `tuples` seeded cone tuples.
pub fn mixed_reports(m: &HLModule, opts: &SuiteOptions) -> Vec<CheckReport> {
    type Check = fn(&HLModule, &OperatorTuple) -> Result<CheckReport>;
    let k = m.weight();
    let checks: [(&str, &str, Check, usize, usize); 4] = [
        (
            "kernel-weight-bound",
            "kernel-weight-bound",
            kernel_weight_bound,
            0,
            k,
        ),
        ("mixed-hlt", "mixed-hard-lefschetz", mixed_hlt_check, 0, k),
        (
            "mixed-decomposition",
            "mixed-lefschetz-decomposition",
            mixed_decomposition_check,
            1,
            k.saturating_sub(1),
        ),
        (
            "mixed-hrr",
            "mixed-hodge-riemann",
            mixed_hrr_check,
            1,
            k.saturating_sub(1),
        ),
    ];
    checks
        .iter()
        .enumerate()
        .map(|(ci, &(name, theorem, check, lo, hi))| {
            guarded(name, theorem, || {
                let mut report = seeded(name, theorem, opts);
                let mut sampler = ConeSampler::new(m, opts.seed.wrapping_add(ci as u64));
                for len in lo..=hi {
                    for i in 0..opts.tuples {
                        let tuple = sampler.tuple(len)?;
                        let r = check(m, &tuple)?;
                        report.absorb(&format!("length {len} tuple {i}"), &r);
                    }
                }
                report.set_data("tuples_per_length", opts.tuples);
                ensure_nonempty(&mut report);
                Ok(report)
            })
        })
        .collect()
}

/// One-step descent along `N₀` and a sampled element, repeated versus
/// iterated descent, and quotient versus image presentations.
pub fn descent_reports(m: &HLModule, opts: &SuiteOptions) -> Vec<CheckReport> {
    if m.weight() == 0 {
        let mut r = CheckReport::new("descent", "descent");
        r.pass("weight 0: nothing to descend");
        return vec![r];
    }
    let mut out = Vec::new();
    let mut sampler = ConeSampler::new(m, opts.seed.wrapping_add(10));
    out.push(guarded("descent", "descent", || {
        let mut report = seeded("descent", "descent", opts);
        let mut elements = vec![("N0".to_string(), m.reference().to_vec())];
        for i in 0..opts.tuples.min(3) {
            elements.push((format!("sample {i}"), sampler.sample()?));
        }
        for (label, c) in &elements {
            let d = descent(m, c)?;
            let r = descent_report(&d);
            report.absorb(label, &r);
            if label == "N0" {
                report.data.extend(r.data);
            }
        }
        Ok(report)
    }));
    out.push(guarded("repeated-descent", "repeated-descent", || {
        let mut report = seeded("repeated-descent", "repeated-descent", opts);
        for len in 1..=m.weight() {
            let tuple = sampler.tuple(len)?;
            report.absorb(&format!("length {len}"), &compare_descents(m, &tuple)?);
        }
        Ok(report)
    }));
    out.push(guarded("quotient-descent", "quotient-descent", || {
        let mut report = seeded("quotient-descent", "quotient-descent", opts);
        let c = sampler.sample()?;
        for t in 1..=m.weight() {
            report.absorb(&format!("power {t}"), &quotient_descent(m, &c, t)?.report);
        }
        Ok(report)
    }));
    out
}

/// Purity of the Koszul cohomology for `tuples` seeded tuples of each
/// length `1..=max_len`.
pub fn purity_reports(m: &HLModule, opts: &SuiteOptions, max_len: usize) -> Vec<CheckReport> {
    vec![guarded("koszul-purity", "koszul-purity", || {
        let mut report = seeded("koszul-purity", "koszul-purity", opts);
        let mut sampler = ConeSampler::new(m, opts.seed.wrapping_add(20));
        for len in 1..=max_len {
            for i in 0..opts.tuples {
                let tuple = sampler.tuple(len)?;
                let kc = KoszulComplex::new(m, &tuple)?;
                report.absorb(&format!("length {len} tuple {i}"), &purity_check(&kc));
            }
        }
        ensure_nonempty(&mut report);
        Ok(report)
    })]
}

/// Structure validation, the single-operator suite at `coeffs` (defaults to
/// `N₀`), and with `all` the mixed, descent and purity suites.
pub fn module_suite(
    m: &HLModule,
    coeffs: Option<&[Rational]>,
    all: bool,
    opts: &SuiteOptions,
) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut out = vec![validate_structure(m).with_elapsed(start.elapsed())];
    out.extend(operator_reports(m, coeffs.unwrap_or(m.reference())));
    if all {
        out.extend(mixed_reports(m, opts));
        out.extend(descent_reports(m, opts));
        out.extend(purity_reports(m, opts, 3));
    }
    out
}

/// h-vector and Alexandrov–Fenchel on `tuples` seeded pairs.
pub fn polytope_reports(alg: &PolytopeAlgebra, opts: &SuiteOptions) -> Vec<CheckReport> {
    let m = alg.module();
    let mut out = vec![guarded("h-vector", "h-vector", || {
        let mut r = CheckReport::new("h-vector", "h-vector");
        let h = h_vector(m)?;
        r.pass("symmetric and unimodal");
        r.set_data("h", h);
        Ok(r)
    })];
    out.push(guarded("alexandrov-fenchel", "alexandrov-fenchel", || {
        let mut report = seeded("alexandrov-fenchel", "alexandrov-fenchel", opts);
        let k = m.weight();
        if k < 2 {
            report.pass("dimension below 2: nothing to check");
            return Ok(report);
        }
        let mut sampler = ConeSampler::new(m, opts.seed.wrapping_add(30));
        for i in 0..opts.tuples {
            let c1 = sampler.sample()?;
            let c2 = sampler.sample()?;
            let rest = (0..k - 2)
                .map(|_| sampler.sample())
                .collect::<Result<Vec<_>>>()?;
            report.absorb(
                &format!("pair {i}"),
                &af_check(alg.volume_polynomial(), &c1, &c2, &rest)?,
            );
        }
        Ok(report)
    }));
    out
}

/// Builds the algebra and runs the polytope and module suites.
pub fn polytope_suite(
    p: &SimplePolytope,
    all: bool,
    opts: &SuiteOptions,
) -> Result<Vec<CheckReport>> {
    let alg = PolytopeAlgebra::new(p)?;
    let mut out = polytope_reports(&alg, opts);
    out.extend(module_suite(alg.module(), None, all, opts));
    Ok(out)
}

/// Exit status for a batch: 2 on any input error, else 1 on any failure.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    use crate::report::Verdict;
    if reports.iter().any(|r| r.verdict == Verdict::InputError) {
        2
    } else if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    }
}
