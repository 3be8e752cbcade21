//! Filtered Koszul complex of a tuple of cone elements and the purity check
//! on its cohomology.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::matrix::{independent_subset, intersect, span_rank};
use crate::exact::{Matrix, Vector};
use crate::hl::{inclusion, product, HLModule};
use crate::mixed::OperatorTuple;
use crate::polytope::geometry::subsets;
use crate::report::{CheckReport, Witness};

/// One summand `T_J·V` of a Koszul term.
#[derive(Clone, Debug)]
struct Summand {
    indices: Vec<usize>,
    /// Columns spanning `T_J·V` inside `V`.
    embedding: Matrix,
    /// `T_J` as a map `V → T_J·V` in the summand's coordinates.
    projection: Matrix,
}

/// `K^p = ⊕_{j_1 < … < j_p} T_{j_1}⋯T_{j_p}·V` with differentials
/// `(−1)^{s−1} T_{j_s}` and filtration `W_ℓ = T_J·W_{ℓ+p}(V)` per summand.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    weight: i32,
    dim: usize,
    terms: Vec<Vec<Summand>>,
    differentials: Vec<Matrix>,
    /// `filtration[p][ℓ]` for `ℓ` in `lo(p)..=hi(p)`.
    filtration: Vec<BTreeMap<i32, Vec<Vector>>>,
}

impl KoszulComplex {
    /// Builds the complex, verifying `d² = 0` and that `d` preserves the
    /// filtration.
    pub fn new(m: &HLModule, tuple: &OperatorTuple) -> Result<Self> {
        if tuple.is_empty() {
            return Err(Error::Precondition(
                "Koszul complex needs a non-empty tuple".into(),
            ));
        }
        let n = m.dim();
        let t = tuple.len();
        let ops = tuple.matrices();
        let mut terms = Vec::with_capacity(t + 1);
        for p in 0..=t {
            let mut summands = Vec::new();
            for indices in subsets(t, p) {
                let sel: Vec<Matrix> = indices.iter().map(|&j| ops[j].clone()).collect();
                let tj = product(n, &sel);
                let cols = independent_subset(n, &tj.columns());
                let embedding = Matrix::from_columns(n, &cols);
                let projection = embedding
                    .solve_matrix(&tj)
                    .map_err(|_| Error::Internal("image basis does not span".into()))?;
                summands.push(Summand {
                    indices,
                    embedding,
                    projection,
                });
            }
            terms.push(summands);
        }

        let mut differentials = Vec::with_capacity(t);
        for p in 0..t {
            let rows: usize = terms[p + 1].iter().map(|s| s.embedding.cols()).sum();
            let cols: usize = terms[p].iter().map(|s| s.embedding.cols()).sum();
            let mut d = Matrix::zeros(rows, cols);
            let mut col0 = 0;
            for src in &terms[p] {
                let mut row0 = 0;
                for dst in &terms[p + 1] {
                    if let Some((j, s)) = extension(&src.indices, &dst.indices) {
                        let image = ops[j].mul(&src.embedding);
                        let mut block = dst.embedding.solve_matrix(&image).map_err(|_| {
                            Error::Internal("Koszul differential leaves its target".into())
                        })?;
                        if s % 2 == 0 {
                            block = block.neg();
                        }
                        for r in 0..block.rows() {
                            for c in 0..block.cols() {
                                d[(row0 + r, col0 + c)] = block[(r, c)].clone();
                            }
                        }
                    }
                    row0 += dst.embedding.cols();
                }
                col0 += src.embedding.cols();
            }
            differentials.push(d);
        }
        for p in 1..t {
            if !differentials[p].mul(&differentials[p - 1]).is_zero() {
                return Err(Error::Internal(format!("d^{p} ∘ d^{} != 0", p - 1)));
            }
        }

        let k = m.k();
        let mut filtration = Vec::with_capacity(t + 1);
        for (p, summands) in terms.iter().enumerate() {
            let p = p as i32;
            let mut steps = BTreeMap::new();
            for ell in (-k - 1 - p)..=(k - p) {
                let w = inclusion(n, &m.filtration_indices(ell + p));
                let mut vecs: Vec<Vector> = Vec::new();
                let total: usize = summands.iter().map(|s| s.embedding.cols()).sum();
                let mut offset = 0;
                for s in summands {
                    for col in s.projection.mul(&w).columns() {
                        let mut v = vec![Default::default(); total];
                        for (i, x) in col.into_iter().enumerate() {
                            v[offset + i] = x;
                        }
                        vecs.push(v);
                    }
                    offset += s.embedding.cols();
                }
                steps.insert(ell, independent_subset(total, &vecs));
            }
            filtration.push(steps);
        }
        let kc = KoszulComplex {
            weight: k,
            dim: n,
            terms,
            differentials,
            filtration,
        };
        kc.check_filtered()?;
        Ok(kc)
    }

    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differentials.is_empty()
    }

    /// `dim K^p`.
    pub fn term_dim(&self, p: usize) -> usize {
        self.terms[p].iter().map(|s| s.embedding.cols()).sum()
    }

    /// Dimensions of the summands of `K^p`, keyed by 1-based index tuple.
    pub fn summand_dims(&self, p: usize) -> Vec<(Vec<usize>, usize)> {
        self.terms[p]
            .iter()
            .map(|s| {
                (
                    s.indices.iter().map(|j| j + 1).collect(),
                    s.embedding.cols(),
                )
            })
            .collect()
    }

    pub fn differential(&self, p: usize) -> &Matrix {
        &self.differentials[p]
    }

    pub fn module_dim(&self) -> usize {
        self.dim
    }

    /// Basis of `W_ℓ K^p`.
    pub fn filtration_step(&self, p: usize, ell: i32) -> Vec<Vector> {
        let steps = &self.filtration[p];
        let (lo, hi) = (
            *steps.keys().next().expect("steps"),
            *steps.keys().last().expect("steps"),
        );
        if ell < lo {
            Vec::new()
        } else if ell > hi {
            Matrix::identity(self.term_dim(p)).columns()
        } else {
            steps[&ell].clone()
        }
    }

    fn check_filtered(&self) -> Result<()> {
        for (p, d) in self.differentials.iter().enumerate() {
            for (&ell, basis) in &self.filtration[p] {
                let target = self.filtration_step(p + 1, ell);
                let mut both = target.clone();
                both.extend(basis.iter().map(|v| d.apply(v)));
                if span_rank(self.term_dim(p + 1), &both) != target.len() {
                    return Err(Error::Internal(format!("d^{p} does not preserve W_{ell}")));
                }
            }
        }
        Ok(())
    }

    /// Highest filtration index considered for `K^p`.
    fn top(&self, p: usize) -> i32 {
        self.weight - p as i32
    }
}

/// If `dst = src ∪ {j}`, returns `j` and its 1-based position in `dst`.
fn extension(src: &[usize], dst: &[usize]) -> Option<(usize, usize)> {
    if dst.len() != src.len() + 1 {
        return None;
    }
    let pos = dst.iter().position(|j| !src.contains(j))?;
    let mut rest = dst.to_vec();
    let j = rest.remove(pos);
    (rest == src).then_some((j, pos + 1))
}

/// `H^p = ker d^p / im d^{p−1}` with `W_ℓ H^p = ((Z ∩ W_ℓ) + B)/B`; passes
/// when `W_0 H^p = H^p` for every `p`.
pub fn purity_check(kc: &KoszulComplex) -> CheckReport {
    let mut report = CheckReport::new("purity", "koszul-purity");
    let mut gr: BTreeMap<String, BTreeMap<i32, usize>> = BTreeMap::new();
    let mut cohomology = Vec::new();
    for p in 0..=kc.len() {
        let dim = kc.term_dim(p);
        let z: Vec<Vector> = if p < kc.len() {
            kc.differential(p).kernel_basis().0
        } else {
            Matrix::identity(dim).columns()
        };
        let b: Vec<Vector> = if p > 0 {
            independent_subset(dim, &kc.differential(p - 1).columns())
        } else {
            Vec::new()
        };
        let h = z.len() - b.len();
        cohomology.push(h);
        let weighted = |ell: i32| -> usize {
            let mut s = intersect(dim, &z, &kc.filtration_step(p, ell));
            s.extend(b.iter().cloned());
            span_rank(dim, &s) - b.len()
        };
        let top = kc.top(p).max(0);
        let mut prev = 0;
        let mut per = BTreeMap::new();
        for ell in (-kc.weight - 1 - p as i32)..=top {
            let w = weighted(ell);
            if w > prev {
                per.insert(ell, w - prev);
            }
            prev = w;
        }
        let name = format!("H^{p} has weights <= 0");
        let w0 = weighted(0);
        if w0 == h {
            report.pass(name);
        } else {
            let ell = (1..=top).find(|&l| weighted(l) > w0).unwrap_or(top);
            let mut base = intersect(dim, &z, &kc.filtration_step(p, 0));
            base.extend(b.iter().cloned());
            let rank = span_rank(dim, &base);
            let witness = z
                .iter()
                .find(|v| {
                    let mut trial = base.clone();
                    trial.push((*v).clone());
                    span_rank(dim, &trial) > rank
                })
                .expect("class outside W_0");
            report.fail(
                name,
                Witness::vector(
                    witness,
                    format!("class of K^{p} in weight {ell} (Koszul coordinates)"),
                ),
            );
        }
        gr.insert(format!("H{p}"), per);
    }
    report.set_data("cohomology_dims", cohomology);
    report.set_data("graded_dims", gr);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::exact::Rational;
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
    fn extension_positions() {
        assert_eq!(extension(&[], &[2]), Some((2, 1)));
        assert_eq!(extension(&[0, 2], &[0, 1, 2]), Some((1, 2)));
        assert_eq!(extension(&[0, 2], &[1, 2, 3]), None);
    }

    #[test]
    fn single_operator() {
        let m = square();
        let kc = KoszulComplex::new(&m, &OperatorTuple::reference(&m, 1).unwrap()).unwrap();
        assert_eq!(kc.term_dim(0), 4);
        assert_eq!(kc.term_dim(1), 2);
        let r = purity_check(&kc);
        assert!(r.passed(), "{r}");
        assert_eq!(r.data["cohomology_dims"], serde_json::json!([2, 0]));
    }

    #[test]
    fn pair_on_square() {
        let m = square();
        let tuple = OperatorTuple::new(&m, vec![ints(&[1, 1, 1, 1]), ints(&[2, 1, 1, 3])]).unwrap();
        let kc = KoszulComplex::new(&m, &tuple).unwrap();
        assert_eq!(kc.term_dim(0), 4);
        assert_eq!(kc.term_dim(2), 1);
        assert!(purity_check(&kc).passed());
    }
}
