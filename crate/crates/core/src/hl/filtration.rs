use super::module::{inclusion, HLModule};
use crate::error::{Error, Result};
use crate::exact::matrix::{independent_subset, span_rank};
use crate::exact::{Matrix, Vector};

/// Increasing filtration `W_lo ⊆ … ⊆ W_hi` of an `n`-dimensional space.
///
/// Indices below `lo` are zero, above `hi` the whole space.
#[derive(Clone, Debug)]
pub struct Filtration {
    dim: usize,
    lo: i32,
    spaces: Vec<Vec<Vector>>,
}

impl Filtration {
    pub fn lowest(&self) -> i32 {
        self.lo
    }

    pub fn highest(&self) -> i32 {
        self.lo + self.spaces.len() as i32 - 1
    }

    /// Basis of `W_ℓ`.
    pub fn get(&self, ell: i32) -> Vec<Vector> {
        if ell < self.lo {
            Vec::new()
        } else if ell > self.highest() {
            Matrix::identity(self.dim).columns()
        } else {
            self.spaces[(ell - self.lo) as usize].clone()
        }
    }

    pub fn dim_at(&self, ell: i32) -> usize {
        self.get(ell).len()
    }

    pub fn is_increasing(&self) -> bool {
        (self.lo..self.highest()).all(|l| {
            let a = self.get(l);
            let mut both = a.clone();
            both.extend(self.get(l + 1));
            span_rank(self.dim, &both) == self.dim_at(l + 1)
        })
    }

    /// Equality of every step as subspaces.
    pub fn same_as(&self, other: &Filtration) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.highest().max(other.highest());
        (lo..=hi).all(|l| {
            let a = self.get(l);
            let b = other.get(l);
            if a.len() != b.len() {
                return false;
            }
            let mut both = a;
            both.extend(b);
            span_rank(self.dim, &both) == self.dim_at(l)
        })
    }
}

/// `W_ℓ = ⊕_{a ≤ ℓ} V_a` for `ℓ ∈ [−k−1, k]`.
pub fn grading_filtration(m: &HLModule) -> Filtration {
    let k = m.k();
    let spaces = (-k - 1..=k)
        .map(|l| inclusion(m.dim(), &m.filtration_indices(l)).columns())
        .collect();
    Filtration {
        dim: m.dim(),
        lo: -k - 1,
        spaces,
    }
}

/// Weight filtration of a nilpotent `N` with `N^{s+1} = 0`, indexed
/// `−s−1 ..= s`.
///
/// Built inductively: `W_{s−1} = ker N^s`, `W_{−s} = im N^s`, then the same
/// step for the induced map on `W_{s−1}/W_{−s}` with `s−1`, and so on.
pub fn weight_filtration(nil: &Matrix, s: usize) -> Result<Filtration> {
    if !nil.is_square() {
        return Err(Error::DimMismatch(
            "weight filtration needs a square matrix".into(),
        ));
    }
    let n = nil.rows();
    if !nil.pow(s + 1).is_zero() {
        return Err(Error::NotNilpotent(s + 1));
    }
    let s = s as i32;
    let width = (2 * s + 2) as usize;
    let mut spaces: Vec<Vec<Vector>> = vec![Vec::new(); width];
    let at = |l: i32| (l + s + 1) as usize;
    let mut upper: Vec<Vector> = Matrix::identity(n).columns();
    let mut lower: Vec<Vector> = Vec::new();
    spaces[at(s)] = upper.clone();
    spaces[at(-s - 1)] = lower.clone();
    for j in (1..=s).rev() {
        let pow = nil.pow(j as usize);
        // {u ∈ upper : N^j u ∈ lower}
        let images: Vec<Vector> = upper.iter().map(|u| pow.apply(u)).collect();
        let mut cols = images.clone();
        cols.extend(
            lower
                .iter()
                .map(|v| v.iter().map(|x| -x).collect::<Vector>()),
        );
        let (ker, _) = Matrix::from_columns(n, &cols).kernel_basis();
        let umat = Matrix::from_columns(n, &upper);
        let next_upper: Vec<Vector> = ker.iter().map(|x| umat.apply(&x[..upper.len()])).collect();
        let next_upper = independent_subset(n, &next_upper);
        let mut next_lower = lower.clone();
        next_lower.extend(images);
        let next_lower = independent_subset(n, &next_lower);
        spaces[at(j - 1)] = next_upper.clone();
        spaces[at(-j)] = next_lower.clone();
        upper = next_upper;
        lower = next_lower;
    }
    Ok(Filtration {
        dim: n,
        lo: -s - 1,
        spaces,
    })
}

/// `F^p = ⊕_{a ≥ p} V^{a,b}`, as a coordinate subspace basis.
pub fn hodge_filtration(m: &HLModule, p: i32) -> Vec<Vector> {
    let idx: Vec<usize> = m
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.p >= p)
        .map(|(i, _)| i)
        .collect();
    inclusion(m.dim(), &idx).columns()
}
