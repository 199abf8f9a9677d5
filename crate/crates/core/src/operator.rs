//! Dense real symmetric operators over vertex spaces.
//!
//! Everything downstream (eigendecomposition, Krylov decomposition, resolvent
//! evaluation) works on [`SymmetricOperator`]: a square matrix with exact
//! symmetry enforced at construction. Dimensions stay small (tens of
//! vertices), so dense storage and O(n³) algorithms are the right trade.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::GraphSpec;
use crate::Result;

/// Dense real symmetric matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricOperator {
    /// Builds from rows, rejecting non-square or non-symmetric input.
    /// Symmetry must hold exactly: `entries[i][j] == entries[j][i]`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate().skip(i + 1) {
                let mirror = rows[j][i];
                if value != mirror {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        value,
                        mirror,
                    });
                }
            }
        }
        Ok(Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds a symmetric matrix from `f(i, j)` evaluated on `i <= j`;
    /// the lower triangle is mirrored, so the result is symmetric by
    /// construction.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Adds `v` to entries (i, j) and (j, i).
    pub(crate) fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] += v;
        if i != j {
            self.entries[j * self.dim + i] += v;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `⟨e_i | A² | e_i⟩ = ‖A e_i‖²`, computed directly from the rows.
    pub fn second_moment_at(&self, i: usize) -> f64 {
        self.row(i).iter().map(|x| x * x).sum()
    }

    /// Eigendecomposition with default tolerances; see [`crate::eigen`].
    pub fn eigendecompose(&self) -> Result<crate::eigen::EigenSystem> {
        crate::eigen::eigendecompose(self)
    }
}

/// Assembles the decorated operator `H` on the product space from the base
/// operator `H_o` and the per-copy operator `A`:
///
/// ```text
/// H[(x,root),(y,root)] += H_o[x,y]      (field term, between root copies)
/// H[(x,u),(x,v)]       += A[u,v]        (kite term, within each copy)
/// ```
///
/// Vertex `(x, u)` carries index `x * dim(A) + u`, matching
/// [`crate::graph::decorate`].
pub fn build_decorated_operator(
    base_op: &SymmetricOperator,
    copy_op: &SymmetricOperator,
    root: usize,
    n_base: usize,
) -> Result<SymmetricOperator> {
    if base_op.dim() != n_base {
        return Err(Error::DimensionMismatch {
            expected: n_base,
            got: base_op.dim(),
        });
    }
    if root >= copy_op.dim() {
        return Err(Error::RootOutOfRange {
            root,
            n: copy_op.dim(),
        });
    }
    let m = copy_op.dim();
    let mut h = SymmetricOperator::zeros(n_base * m);
    for x in 0..n_base {
        for y in x..n_base {
            let v = base_op.get(x, y);
            if v != 0.0 {
                h.add_sym(x * m + root, y * m + root, v);
            }
        }
        for u in 0..m {
            for v in u..m {
                let a = copy_op.get(u, v);
                if a != 0.0 {
                    h.add_sym(x * m + u, x * m + v, a);
                }
            }
        }
    }
    Ok(h)
}

/// Solves `(A - z) w = rhs` over the complex numbers by Gaussian elimination
/// with partial pivoting. This is the direct route used to cross-check the
/// spectral-sum resolvent of [`crate::eigen::EigenSystem::green_diag`].
pub fn solve_shifted(
    a: &SymmetricOperator,
    z: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = a.dim();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = Complex64::new(a.get(i, j), 0.0);
        }
        m[i * n + i] -= z;
    }
    let mut b = rhs.to_vec();
    let scale = a.frobenius_norm().max(z.norm()).max(1.0);

    for col in 0..n {
        let (pivot_row, pivot_norm) = (col..n)
            .map(|r| (r, m[r * n + col].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_norm <= 1e-300 * scale {
            return Err(Error::SingularShift { z: z.re });
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for r in (col + 1)..n {
            let factor = m[r * n + col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[col * n + j];
                m[r * n + j] -= factor * v;
            }
            let bc = b[col];
            b[r] -= factor * bc;
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in (i + 1)..n {
            acc -= m[i * n + j] * b[j];
        }
        b[i] = acc / m[i * n + i];
    }
    Ok(b)
}

/// Solves `(A - e) w = rhs` for real shift and right-hand side.
pub fn solve_shifted_real(a: &SymmetricOperator, e: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let crhs: Vec<Complex64> = rhs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let w = solve_shifted(a, Complex64::new(e, 0.0), &crhs)?;
    Ok(w.into_iter().map(|c| c.re).collect())
}

/// Diagonal resolvent `⟨v | (A - z)⁻¹ | v⟩` through the eigendecomposition.
///
/// For repeated evaluations at many `z`, decompose once and call
/// [`crate::eigen::EigenSystem::green_diag`] directly.
pub fn green_diag(a: &SymmetricOperator, v: &[f64], z: Complex64) -> Result<Complex64> {
    a.eigendecompose()?.green_diag(v, z)
}

/// Same, with `v` the standard basis vector `e_index`.
pub fn green_diag_at(a: &SymmetricOperator, index: usize, z: Complex64) -> Result<Complex64> {
    let mut v = vec![0.0; a.dim()];
    v[index] = 1.0;
    green_diag(a, &v, z)
}

/// Serialized form of an operator: either a dense symmetric matrix or the
/// Laplacian of a referenced graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Dense { dim: usize, entries: Vec<Vec<f64>> },
    LaplacianOf { laplacian_of: GraphRef },
}

/// Graph reference inside [`OperatorSpec`]: inline graph JSON or a file path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(GraphSpec),
    Path(String),
}

impl OperatorSpec {
    /// Resolves into an operator. `load` is called to fetch graph specs
    /// referenced by path (the library itself does no file I/O).
    pub fn resolve(&self, load: impl FnOnce(&str) -> Result<GraphSpec>) -> Result<SymmetricOperator> {
        match self {
            OperatorSpec::Dense { dim, entries } => {
                if entries.len() != *dim {
                    return Err(Error::NotSquare {
                        rows: entries.len(),
                        cols: *dim,
                    });
                }
                SymmetricOperator::from_rows(entries)
            }
            OperatorSpec::LaplacianOf { laplacian_of } => {
                let spec = match laplacian_of {
                    GraphRef::Inline(spec) => spec.clone(),
                    GraphRef::Path(p) => load(p)?,
                };
                Ok(spec.to_graph()?.laplacian())
            }
        }
    }
}
