use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{factorial, int, Rational};
use crate::exact::{GaussianRational, Matrix};

/// A simple polytope `{m : ⟨ξ_i, m⟩ ≤ x_i}` with its derived combinatorics.
#[derive(Clone, Debug)]
pub struct SimplePolytope {
    name: String,
    dim: usize,
    normals: Vec<Vec<Rational>>,
    support: Vec<Rational>,
    vertices: Vec<Vec<Rational>>,
    /// Sorted indices of the `dim` facets through each vertex.
    incidence: Vec<Vec<usize>>,
    /// Pulling triangulation: `dim+1` vertex indices and the orientation sign
    /// of each simplex at the reference support.
    simplices: Vec<(Vec<usize>, i32)>,
}

fn to_matrix(rows: &[Vec<Rational>]) -> Matrix {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_fn(rows.len(), cols, |r, c| {
        GaussianRational::real(rows[r][c].clone())
    })
}

fn real_parts(v: &[GaussianRational]) -> Vec<Rational> {
    v.iter().map(|x| x.re.clone()).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

impl SimplePolytope {
    /// Solves for the vertices of the polytope with the given facet normals
    /// and support numbers, checks boundedness, simplicity and
    /// irredundancy, and builds a reference triangulation.
    pub fn build(name: &str, normals: Vec<Vec<Rational>>, support: Vec<Rational>) -> Result<Self> {
        let r = normals.len();
        let dim = normals.first().map_or(0, |n| n.len());
        if dim == 0 {
            return Err(Error::Degenerate(
                "polytope dimension must be positive".into(),
            ));
        }
        if normals.iter().any(|n| n.len() != dim) {
            return Err(Error::DimMismatch(
                "normals have inconsistent lengths".into(),
            ));
        }
        if support.len() != r {
            return Err(Error::DimMismatch(format!(
                "{} support numbers for {r} normals",
                support.len()
            )));
        }
        if normals.iter().any(|n| n.iter().all(Zero::is_zero)) {
            return Err(Error::Degenerate("zero normal vector".into()));
        }
        if r < dim + 1 {
            return Err(Error::Unbounded);
        }
        check_bounded(&normals, dim)?;

        let mut found: BTreeMap<Vec<Rational>, ()> = BTreeMap::new();
        let mut vertices = Vec::new();
        for facets in subsets(r, dim) {
            let rows: Vec<Vec<Rational>> = facets.iter().map(|&i| normals[i].clone()).collect();
            let a = to_matrix(&rows);
            if a.determinant()?.is_zero() {
                continue;
            }
            let rhs: Vec<GaussianRational> = facets
                .iter()
                .map(|&i| GaussianRational::real(support[i].clone()))
                .collect();
            let v = real_parts(&a.linear_solve(&rhs)?);
            let feasible = normals.iter().zip(&support).all(|(n, x)| dot(n, &v) <= *x);
            if feasible && found.insert(v.clone(), ()).is_none() {
                vertices.push(v);
            }
        }
        if vertices.is_empty() {
            return Err(Error::Infeasible);
        }
        let mut incidence = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let tight: Vec<usize> = (0..r)
                .filter(|&i| dot(&normals[i], v) == support[i])
                .collect();
            if tight.len() != dim {
                return Err(Error::NonSimple(format!(
                    "vertex {:?} lies on {} facets, expected {dim}",
                    v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    tight.len()
                )));
            }
            incidence.push(tight);
        }
        let diffs: Vec<Vec<Rational>> = vertices[1..]
            .iter()
            .map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| a - b).collect())
            .collect();
        if diffs.is_empty() || to_matrix(&diffs).rank() < dim {
            return Err(Error::Degenerate("polytope is not full-dimensional".into()));
        }
        for i in 0..r {
            if !incidence.iter().any(|f| f.contains(&i)) {
                return Err(Error::Degenerate(format!(
                    "facet {} supports no vertex",
                    i + 1
                )));
            }
        }
        let mut poly = SimplePolytope {
            name: name.to_string(),
            dim,
            normals,
            support,
            vertices,
            incidence,
            simplices: Vec::new(),
        };
        poly.simplices = poly.pulling_triangulation()?;
        Ok(poly)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn support(&self) -> &[Rational] {
        &self.support
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn simplices(&self) -> &[(Vec<usize>, i32)] {
        &self.simplices
    }

    /// Same normals, new support numbers.
    pub fn with_support(&self, support: Vec<Rational>) -> Result<SimplePolytope> {
        SimplePolytope::build(&self.name, self.normals.clone(), support)
    }

    /// The set of vertex facet-sets, which pins the combinatorial type.
    pub fn combinatorial_type(&self) -> BTreeSet<Vec<usize>> {
        self.incidence.iter().cloned().collect()
    }

    /// `(f_0, …, f_k)`: number of faces of each dimension.
    ///
    /// Every face of a simple polytope is cut out by a unique set of facets
    /// contained in the facet set of one of its vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for inc in &self.incidence {
            for size in 0..=self.dim {
                for sub in subsets(self.dim, size) {
                    faces.insert(sub.iter().map(|&j| inc[j]).collect());
                }
            }
        }
        let mut f = vec![0; self.dim + 1];
        for s in faces {
            f[self.dim - s.len()] += 1;
        }
        f
    }

    fn face_vertices(&self, facets: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| facets.iter().all(|f| self.incidence[v].contains(f)))
            .collect()
    }

    /// Recursively cones each face from its lowest-index vertex over the
    /// facets of that face not containing it.
    fn pulling_triangulation(&self) -> Result<Vec<(Vec<usize>, i32)>> {
        let chains = self.pull(&[], self.dim);
        let mut out = Vec::with_capacity(chains.len());
        for chain in chains {
            let det = self.simplex_det(&chain);
            let s = crate::exact::rational::sign(&det);
            if s == 0 {
                return Err(Error::Internal(format!(
                    "degenerate simplex {chain:?} in triangulation"
                )));
            }
            out.push((chain, s));
        }
        Ok(out)
    }

    fn pull(&self, face: &[usize], face_dim: usize) -> Vec<Vec<usize>> {
        let verts = self.face_vertices(face);
        let apex = verts[0];
        if face_dim == 0 {
            return vec![vec![apex]];
        }
        let mut out = Vec::new();
        for i in 0..self.normals.len() {
            if face.contains(&i) {
                continue;
            }
            let mut sub = face.to_vec();
            sub.push(i);
            sub.sort_unstable();
            let sub_verts = self.face_vertices(&sub);
            if sub_verts.is_empty() || sub_verts.contains(&apex) {
                continue;
            }
            for chain in self.pull(&sub, face_dim - 1) {
                let mut c = vec![apex];
                c.extend(chain);
                out.push(c);
            }
        }
        out
    }

    fn simplex_det(&self, chain: &[usize]) -> Rational {
        let v0 = &self.vertices[chain[0]];
        let rows: Vec<Vec<Rational>> = chain[1..]
            .iter()
            .map(|&v| {
                self.vertices[v]
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        to_matrix(&rows).determinant().expect("square").re
    }

    /// Volume from the triangulation at the reference support.
    pub fn triangulation_volume(&self) -> Rational {
        let total = self.simplices.iter().fold(Rational::zero(), |acc, (c, _)| {
            acc + self.simplex_det(c).abs()
        });
        total / factorial(self.dim)
    }

    /// Coefficients of each vertex coordinate as a linear form in the
    /// support variables: `v(x) = A_S^{-1} x_S` for the vertex's facet set `S`.
    pub fn vertex_forms(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        let r = self.normals.len();
        let mut out = Vec::with_capacity(self.vertices.len());
        for inc in &self.incidence {
            let rows: Vec<Vec<Rational>> = inc.iter().map(|&i| self.normals[i].clone()).collect();
            let inv = to_matrix(&rows).inverse()?;
            let forms = (0..self.dim)
                .map(|c| {
                    let mut coeffs = vec![Rational::zero(); r];
                    for (t, &facet) in inc.iter().enumerate() {
                        coeffs[facet] = inv[(c, t)].re.clone();
                    }
                    coeffs
                })
                .collect();
            out.push(forms);
        }
        Ok(out)
    }
}

/// Bounded iff the recession cone `{d : ⟨ξ_i, d⟩ ≤ 0}` is zero: the normals
/// span, and no candidate extreme ray (kernel of `dim−1` normals) is feasible.
fn check_bounded(normals: &[Vec<Rational>], dim: usize) -> Result<()> {
    if to_matrix(normals).rank() < dim {
        return Err(Error::Unbounded);
    }
    for rows in subsets(normals.len(), dim - 1) {
        let sel: Vec<Vec<Rational>> = rows.iter().map(|&i| normals[i].clone()).collect();
        let m = if sel.is_empty() {
            Matrix::zeros(0, dim)
        } else {
            to_matrix(&sel)
        };
        let (ker, _) = m.kernel_basis();
        if ker.len() != 1 {
            continue;
        }
        let d = real_parts(&ker[0]);
        for dir in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
            if normals.iter().all(|n| dot(n, &dir) <= Rational::zero()) {
                return Err(Error::Unbounded);
            }
        }
    }
    Ok(())
}

/// Exact volume of the polytope at support `x` by Lawrence's vertex formula,
/// independent of any triangulation.
///
/// Rejects supports at which the combinatorial type differs from `p`'s.
pub fn volume_oracle(p: &SimplePolytope, x: &[Rational]) -> Result<Rational> {
    let q = p
        .with_support(x.to_vec())
        .map_err(|e| Error::CombinatoricsChanged(e.to_string()))?;
    if q.combinatorial_type() != p.combinatorial_type() {
        return Err(Error::CombinatoricsChanged(
            "vertex-facet incidences differ from the reference".into(),
        ));
    }
    lawrence_volume(&q)
}

fn lawrence_volume(p: &SimplePolytope) -> Result<Rational> {
    let k = p.dim;
    // points on the moment curve until every vertex cone sees c generically
    for t in 2..64i64 {
        let c: Vec<Rational> = (0..k).map(|j| int(t.pow(j as u32))).collect();
        let cg: Vec<GaussianRational> = c.iter().cloned().map(GaussianRational::real).collect();
        let mut total = Rational::zero();
        let mut generic = true;
        for (v, inc) in p.vertices.iter().zip(&p.incidence) {
            let rows: Vec<Vec<Rational>> = inc.iter().map(|&i| p.normals[i].clone()).collect();
            let a = to_matrix(&rows);
            let gamma = real_parts(&a.transpose().linear_solve(&cg)?);
            if gamma.iter().any(Zero::is_zero) {
                generic = false;
                break;
            }
            let det = a.determinant()?.re.abs();
            let prod = gamma.iter().fold(Rational::one(), |acc, g| acc * g);
            let height = dot(&c, v);
            let mut num = Rational::one();
            for _ in 0..k {
                num *= &height;
            }
            total += num / (det * prod);
        }
        if generic {
            return Ok(total / factorial(k));
        }
    }
    Err(Error::Internal(
        "no generic direction found for Lawrence formula".into(),
    ))
}
