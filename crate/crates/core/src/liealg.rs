//! Lie algebras from structure constants, and the graph construction.
//!
//! The algebra of a graph on `m` vertices with edge set `A` lives on the
//! basis `v_1, ..., v_m, a_e (e in A, lexicographic)`: two adjacent vertices
//! bracket to their edge vector, `[v_i, v_j] = a_{ij}` for `i < j`, and
//! every other basis bracket vanishes.  The result is abelian or 2-step
//! nilpotent, its center is spanned by the edge vectors together with the
//! isolated-vertex vectors, and its derived subalgebra is the edge span.

use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::{rref, ExactMatrix, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("coordinate vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("bracket [e_{i}, e_{i}] must be skew")]
    DiagonalBracket { i: usize },
}

/// Name of one basis vector: a vertex `v_i` or an edge vector `a_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisLabel {
    Vertex { index: u32 },
    Edge { i: u32, j: u32 },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Vertex { index } => write!(f, "v{index}"),
            BasisLabel::Edge { i, j } => write!(f, "a{{{i},{j}}}"),
        }
    }
}

/// A finite-dimensional bracket given by its dense table of structure
/// constants: `[e_i, e_j] = sum_k c[i][j][k] e_k` over exact rationals.
///
/// Antisymmetry is enforced by construction; the Jacobi identity and the
/// 2-step property are checked, never assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    labels: Vec<BasisLabel>,
    c: Vec<Vec<Vec<Rat>>>,
}

impl StructureConstants {
    /// Build a table from a list of brackets `(i, j, k, coeff)` meaning
    /// `[e_i, e_j] += coeff * e_k` (1-based).  The mirrored entry for
    /// `(j, i)` is filled in with the opposite sign automatically.
    pub fn from_brackets<I>(n: usize, brackets: I) -> Result<StructureConstants, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rat)>,
    {
        let mut c = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (i, j, k, v) in brackets {
            for &index in &[i, j, k] {
                if index < 1 || index > n {
                    return Err(LieError::IndexOutOfRange { index, n });
                }
            }
            if i == j {
                return Err(LieError::DiagonalBracket { i });
            }
            c[i - 1][j - 1][k - 1] += &v;
            c[j - 1][i - 1][k - 1] -= &v;
        }
        let labels = (1..=n)
            .map(|index| BasisLabel::Vertex {
                index: index as u32,
            })
            .collect();
        Ok(StructureConstants { labels, c })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// 1-based position of a label in the basis.
    pub fn label_position(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label).map(|p| p + 1)
    }

    /// `c[i][j][k]`, 1-based.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[i - 1][j - 1][k - 1]
    }

    /// Coordinates of `[e_i, e_j]`, 1-based.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i - 1][j - 1]
    }
}

/// The graph Lie algebra: dimension `m + |A|`, brackets as in the module
/// docs.  All structure constants are in `{-1, 0, 1}`.
pub fn graph_algebra(g: &Graph) -> StructureConstants {
    let m = g.num_vertices() as usize;
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let n = m + edges.len();
    let mut labels: Vec<BasisLabel> = (1..=m)
        .map(|index| BasisLabel::Vertex {
            index: index as u32,
        })
        .collect();
    labels.extend(edges.iter().map(|&(i, j)| BasisLabel::Edge { i, j }));
    let mut c = vec![vec![vec![Rat::zero(); n]; n]; n];
    for (e, &(i, j)) in edges.iter().enumerate() {
        let k = m + e;
        let one = Rat::one();
        c[i as usize - 1][j as usize - 1][k] = one.clone();
        c[j as usize - 1][i as usize - 1][k] = -one;
    }
    StructureConstants { labels, c }
}

/// Bilinear extension of the bracket to coordinate vectors.
pub fn bracket(sc: &StructureConstants, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, LieError> {
    let n = sc.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(LieError::LengthMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let mut out = vec![Rat::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (k, out_k) in out.iter_mut().enumerate() {
                let c = &sc.c[i][j][k];
                if !c.is_zero() {
                    *out_k += xi * yj * c;
                }
            }
        }
    }
    Ok(out)
}

/// `[u, e_k]` for a coordinate vector `u` and 1-based basis index `k`.
fn ad_basis(sc: &StructureConstants, u: &[Rat], k: usize) -> Vec<Rat> {
    let n = sc.dim();
    let mut out = vec![Rat::zero(); n];
    for (l, ul) in u.iter().enumerate() {
        if ul.is_zero() {
            continue;
        }
        for (t, out_t) in out.iter_mut().enumerate() {
            let c = &sc.c[l][k - 1][t];
            if !c.is_zero() {
                *out_t += ul * c;
            }
        }
    }
    out
}

/// True iff `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0` for
/// all basis triples.
pub fn jacobi_check(sc: &StructureConstants) -> bool {
    let n = sc.dim();
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                let mut total = ad_basis(sc, sc.bracket_basis(i, j), k);
                for (t, v) in ad_basis(sc, sc.bracket_basis(j, k), i).into_iter().enumerate() {
                    total[t] += v;
                }
                for (t, v) in ad_basis(sc, sc.bracket_basis(k, i), j).into_iter().enumerate() {
                    total[t] += v;
                }
                if total.iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff every double bracket of basis vectors vanishes, i.e. the
/// algebra is abelian or 2-step nilpotent.
pub fn two_step_check(sc: &StructureConstants) -> bool {
    let n = sc.dim();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let u = sc.bracket_basis(i, j);
            if u.iter().all(|v| v.is_zero()) {
                continue;
            }
            for k in 1..=n {
                if ad_basis(sc, u, k).iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Subspace of coordinate space, stored as a reduced row echelon basis so
/// equal subspaces have literally equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Span of the given vectors, reduced to canonical form.
    pub fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Result<Subspace, LieError> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(LieError::LengthMismatch {
                    expected: ambient_dim,
                    got: v.len(),
                });
            }
        }
        let mut mat = vectors;
        rref(&mut mat);
        mat.retain(|row| row.iter().any(|v| !v.is_zero()));
        Ok(Subspace {
            ambient_dim,
            basis: mat,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis rows (reduced echelon form, pivots scaled to 1).
    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rem = v.to_vec();
        for row in &self.basis {
            let pivot = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("echelon basis rows are nonzero");
            if rem[pivot].is_zero() {
                continue;
            }
            let f = rem[pivot].clone();
            for (r, b) in rem.iter_mut().zip(row.iter()) {
                *r -= &f * b;
            }
        }
        rem.iter().all(|v| v.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis.iter().all(|row| other.contains_vector(row))
    }
}

/// Exact kernel of the stacked adjoint maps `x -> [x, e_j]`, j = 1..n.
pub fn center(sc: &StructureConstants) -> Subspace {
    let n = sc.dim();
    let mut triplets = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let v = sc.structure_constant(i, j, k);
                if !v.is_zero() {
                    let row = (j - 1) * n + (k - 1);
                    triplets.push((row, i - 1, v.clone()));
                }
            }
        }
    }
    let adjoint = ExactMatrix::from_triplets(n * n, n, triplets);
    Subspace::from_vectors(n, adjoint.kernel_basis()).expect("kernel vectors have ambient length")
}

/// Span of all brackets `[e_i, e_j]`.
pub fn derived_subalgebra(sc: &StructureConstants) -> Subspace {
    let n = sc.dim();
    let mut vectors = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let u = sc.bracket_basis(i, j);
            if u.iter().any(|v| !v.is_zero()) {
                vectors.push(u.to_vec());
            }
        }
    }
    Subspace::from_vectors(n, vectors).expect("bracket vectors have ambient length")
}

/// Dimension of the maximal abelian direct summand of the graph algebra:
/// the number of isolated vertices.
pub fn abelian_factor_dimension(g: &Graph) -> usize {
    g.isolated_vertices().len()
}

/// JSON form of a structure-constant table: dimension, basis labels, and
/// the nonzero brackets for `i < j` with rationals as `"p/q"` strings.
pub fn structure_json(sc: &StructureConstants) -> serde_json::Value {
    let n = sc.dim();
    let mut brackets = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let coeffs: Vec<serde_json::Value> = sc
                .bracket_basis(i, j)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| json!([k + 1, format!("{}/{}", v.numer(), v.denom())]))
                .collect();
            if !coeffs.is_empty() {
                brackets.push(json!({"i": i, "j": j, "coeffs": coeffs}));
            }
        }
    }
    json!({
        "dim": n,
        "labels": sc.labels(),
        "brackets": brackets,
    })
}
