use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::rational::Rational;
use crate::error::{Error, Result};

pub type Vector = Vec<GaussianRational>;

/// Dense row-major matrix over ℚ(i). All elimination is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> GaussianRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers (tests, fixtures).
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let m = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), m, |r, c| GaussianRational::from_int(rows[r][c]))
    }

    /// Matrix whose columns are the given vectors, all of length `height`.
    pub fn from_columns(height: usize, cols: &[Vector]) -> Self {
        Matrix::from_fn(height, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(GaussianRational::is_real)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GaussianRational::conj).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(r, c)] += &prod;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[GaussianRational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussianRational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self^e` for square matrices.
    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut out = Matrix::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, cols)
    }

    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_rows(&mut rows, self.cols);
        let m = Matrix {
            rows: self.rows,
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        echelon_rank(&mut rows, self.cols)
    }

    /// Basis of the right kernel together with the rank.
    pub fn kernel_basis(&self) -> (Vec<Vector>, usize) {
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free] = GaussianRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, free)];
            }
            basis.push(v);
        }
        (basis, rank)
    }

    /// Some `x` with `self·x = b`, or `Inconsistent`.
    pub fn linear_solve(&self, b: &[GaussianRational]) -> Result<Vector> {
        if b.len() != self.rows {
            return Err(Error::DimMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let mut rows: Vec<Vector> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        let pivots = rref_rows(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = rows[i][self.cols].clone();
        }
        Ok(x)
    }

    /// Solves `self·X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        let cols: Vec<Vector> = b
            .columns()
            .iter()
            .map(|c| self.linear_solve(c))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.cols, &cols))
    }

    pub fn determinant(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::DimMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            let p = rows[col][col].clone();
            det = &det * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = &rows[r][col] * &pinv;
                let (top, rest) = rows.split_at_mut(r);
                sub_scaled(&mut rest[0], &top[col], &f, col);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Inconsistent);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    /// Sylvester test for positive definiteness of a Hermitian matrix.
    pub fn hermitian_pd(&self) -> Result<bool> {
        Ok(self.sylvester()?.is_positive())
    }

    /// Leading principal minors, stopping at the first non-positive one.
    ///
    /// On failure the certificate carries a vector `v` with `v* H v <= 0`.
    pub fn sylvester(&self) -> Result<SylvesterCertificate> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut minors = Vec::with_capacity(n);
        let mut minor = Rational::one();
        for j in 0..n {
            // after eliminating the first j columns the pivot is D_{j+1}/D_j
            let pivot = rows[j][j].re.clone();
            minor = &minor * &pivot;
            minors.push(minor.clone());
            if pivot <= Rational::zero() {
                let witness = self.schur_witness(j);
                return Ok(SylvesterCertificate {
                    minors,
                    failure: Some(j),
                    witness: Some(witness),
                });
            }
            let pinv = GaussianRational::real(pivot.recip());
            for r in j + 1..n {
                if rows[r][j].is_zero() {
                    continue;
                }
                let f = &rows[r][j] * &pinv;
                let (top, rest) = rows.split_at_mut(r);
                sub_scaled(&mut rest[0], &top[j], &f, j);
            }
        }
        Ok(SylvesterCertificate {
            minors,
            failure: None,
            witness: None,
        })
    }

    /// `v = (y, 1, 0, …)` with `H_j y = -h_j`; then `v* H v = D_{j+1}/D_j`.
    fn schur_witness(&self, j: usize) -> Vector {
        let mut v = vec![GaussianRational::zero(); self.rows];
        v[j] = GaussianRational::one();
        if j > 0 {
            let idx: Vec<usize> = (0..j).collect();
            let lead = self.submatrix(&idx, &idx);
            let rhs: Vector = (0..j).map(|r| -&self[(r, j)]).collect();
            let y = lead
                .linear_solve(&rhs)
                .expect("leading block is positive definite");
            v[..j].clone_from_slice(&y);
        }
        v
    }
}

/// Outcome of the leading-minor test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterCertificate {
    /// `D_1, D_2, …` up to and including the first non-positive minor.
    pub minors: Vec<Rational>,
    /// Zero-based index of the first non-positive leading minor.
    pub failure: Option<usize>,
    pub witness: Option<Vector>,
}

impl SylvesterCertificate {
    pub fn is_positive(&self) -> bool {
        self.failure.is_none()
    }
}

/// `v* H w`.
pub fn sesquilinear(
    h: &Matrix,
    v: &[GaussianRational],
    w: &[GaussianRational],
) -> GaussianRational {
    let hw = h.apply(w);
    dot(
        &v.iter().map(GaussianRational::conj).collect::<Vector>(),
        &hw,
    )
}

/// Bilinear `Σ a_i b_i` (no conjugation).
pub fn dot(a: &[GaussianRational], b: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn conj_vec(v: &[GaussianRational]) -> Vector {
    v.iter().map(GaussianRational::conj).collect()
}

pub fn is_zero_vec(v: &[GaussianRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rank of the span of a list of vectors of length `height`.
pub fn span_rank(height: usize, vectors: &[Vector]) -> usize {
    Matrix::from_columns(height, vectors).rank()
}

/// A basis (subset of the input, in order) of the span of `vectors`.
pub fn independent_subset(height: usize, vectors: &[Vector]) -> Vec<Vector> {
    let (_, pivots) = Matrix::from_columns(height, vectors).rref();
    pivots.into_iter().map(|p| vectors[p].clone()).collect()
}

/// Basis of the intersection of two subspaces given by spanning vectors.
pub fn intersect(height: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let a = independent_subset(height, a);
    let b = independent_subset(height, b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Σ x_i a_i = Σ y_j b_j
    let neg_b: Vec<Vector> = b.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    let mut cols = a.clone();
    cols.extend(neg_b);
    let (ker, _) = Matrix::from_columns(height, &cols).kernel_basis();
    let amat = Matrix::from_columns(height, &a);
    let out: Vec<Vector> = ker.iter().map(|k| amat.apply(&k[..a.len()])).collect();
    independent_subset(height, &out)
}

fn sub_scaled(
    row: &mut [GaussianRational],
    src: &[GaussianRational],
    f: &GaussianRational,
    from: usize,
) {
    for c in from..row.len() {
        if src[c].is_zero() {
            continue;
        }
        let t = f * &src[c];
        row[c] -= &t;
    }
}

fn rref_rows(rows: &mut [Vector], cols: usize) -> Vec<usize> {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r][c..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for i in 0..n {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let (lo, hi) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&mut a[i], &b[0])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&mut b[0], &a[r])
            };
            sub_scaled(lo, hi, &f, c);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn echelon_rank(rows: &mut [Vector], cols: usize) -> usize {
    let n = rows.len();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for i in r + 1..n {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            let (a, b) = rows.split_at_mut(i);
            sub_scaled(&mut b[0], &a[r], &f, c);
        }
        r += 1;
    }
    r
}

impl Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianRational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(int(a), int(b))
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let (basis, rank) = Matrix::identity(3).kernel_basis();
        assert!(basis.is_empty());
        assert_eq!(rank, 3);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let (basis, rank) = Matrix::zeros(2, 2).kernel_basis();
        assert_eq!(basis.len(), 2);
        assert_eq!(rank, 0);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = Matrix::from_ints(&[&[1, 1], &[2, 2]]);
        let (basis, rank) = m.kernel_basis();
        assert_eq!(rank, 1);
        assert_eq!(basis, vec![vec![g(-1, 0), g(1, 0)]]);
        assert!(is_zero_vec(&m.apply(&basis[0])));
    }

    #[test]
    fn empty_matrix_kernel() {
        let (basis, rank) = Matrix::zeros(0, 3).kernel_basis();
        assert_eq!((basis.len(), rank), (3, 0));
    }

    #[test]
    fn solve_cases() {
        let b = vec![g(1, 0), g(0, 2), g(-3, 1)];
        assert_eq!(Matrix::identity(3).linear_solve(&b).unwrap(), b);
        assert_eq!(
            Matrix::zeros(2, 2).linear_solve(&[g(1, 0), g(0, 0)]),
            Err(Error::Inconsistent)
        );
        let x = Matrix::from_ints(&[&[2]]).linear_solve(&[g(3, 0)]).unwrap();
        assert_eq!(x, vec![GaussianRational::real(rat(3, 2))]);
    }

    #[test]
    fn hermitian_pd_cases() {
        assert!(Matrix::identity(4).hermitian_pd().unwrap());
        assert!(!Matrix::zeros(1, 1).hermitian_pd().unwrap());
        let h = Matrix::from_rows(vec![vec![g(2, 0), g(0, 1)], vec![g(0, -1), g(2, 0)]]).unwrap();
        let cert = h.sylvester().unwrap();
        assert!(cert.is_positive());
        assert_eq!(cert.minors, vec![int(2), int(3)]);
        let not_h =
            Matrix::from_rows(vec![vec![g(1, 0), g(0, 1)], vec![g(0, 1), g(1, 0)]]).unwrap();
        assert_eq!(not_h.hermitian_pd(), Err(Error::NotHermitian));
    }

    #[test]
    fn sylvester_witness_is_non_positive() {
        let h = Matrix::from_ints(&[&[1, 2], &[2, 1]]);
        let cert = h.sylvester().unwrap();
        assert_eq!(cert.failure, Some(1));
        let v = cert.witness.unwrap();
        let val = sesquilinear(&h, &v, &v);
        assert!(val.is_real() && val.re <= Rational::zero());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_rows(vec![vec![g(1, 1), g(2, 0)], vec![g(0, 0), g(0, 3)]]).unwrap();
        assert_eq!(m.determinant().unwrap(), g(-3, 3));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn intersection_of_planes() {
        let e = |i: usize| {
            let mut v = vec![g(0, 0); 3];
            v[i] = g(1, 0);
            v
        };
        let a = vec![e(0), e(1)];
        let b = vec![e(1), e(2)];
        let meet = intersect(3, &a, &b);
        assert_eq!(meet.len(), 1);
        assert!(meet[0][0].is_zero() && meet[0][2].is_zero());
    }
}
