//! Splitting of a symmetric operator along the cyclic subspace of a vector.
//!
//! The Krylov span of the root vector reduces the operator to a Jacobi
//! (tridiagonal) matrix; on the orthogonal complement the root vector has no
//! weight, so that part of the spectrum never couples to the base graph and
//! survives decoration unchanged. Full reorthogonalization keeps the basis
//! orthonormal to machine precision, which the downstream spectral-map
//! identities rely on.

use crate::eigen::{self, EigenSystem};
use crate::error::Error;
use crate::operator::SymmetricOperator;
use crate::Result;

/// Relative breakdown threshold for the Lanczos residual: once the new
/// direction has norm below `BREAKDOWN_TOL_REL * ‖A‖_F`, the cyclic subspace
/// is considered exhausted.
pub const BREAKDOWN_TOL_REL: f64 = 1e-10;

/// Orthonormal reduction of a symmetric operator relative to a root vector.
///
/// `basis` spans the cyclic subspace (first vector is the root coordinate
/// vector); `alpha`/`beta` are the diagonal and off-diagonal of the
/// restriction, with every `beta` strictly positive. `remainder_eigenvalues`
/// is the sorted spectrum of the restriction to the orthogonal complement.
#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    /// Orthonormal basis of the cyclic subspace, root vector first.
    pub basis: Vec<Vec<f64>>,
    /// Diagonal of the tridiagonal restriction; `alpha.len()` is the cyclic
    /// dimension.
    pub alpha: Vec<f64>,
    /// Positive off-diagonal of the tridiagonal restriction
    /// (`beta.len() == alpha.len() - 1`).
    pub beta: Vec<f64>,
    /// Sorted eigenvalues on the orthogonal complement (empty iff the root
    /// vector is cyclic).
    pub remainder_eigenvalues: Vec<f64>,
    /// Ambient dimension of the operator.
    pub dim: usize,
    /// Norm of the rejected next Lanczos direction. A value well above
    /// rounding noise but below the breakdown threshold flags a nearly
    /// degenerate split.
    pub final_residual: f64,
}

impl CyclicDecomposition {
    /// Dimension of the cyclic subspace.
    pub fn cyclic_dim(&self) -> usize {
        self.alpha.len()
    }

    /// Whether the root vector generates the whole space.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_dim() == self.dim
    }

    /// Eigenvalues `λ_k` of the cyclic restriction together with the squared
    /// root-vector overlaps `p_k = |⟨root|λ_k⟩|²` (which sum to 1).
    pub fn cyclic_spectral_data(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (values, first) = eigen::tridiagonal_eigen(&self.alpha, &self.beta)?;
        let weights = first.iter().map(|s| s * s).collect();
        Ok((values, weights))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the components of `w` along each vector of the orthonormal set,
/// twice; a single pass loses orthogonality when `w` is nearly dependent.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
    }
}

/// Lanczos reduction of `a` on the cyclic subspace of the `root` coordinate
/// vector, plus the spectrum of the complement restriction.
pub fn krylov_cyclic_decomposition(
    a: &SymmetricOperator,
    root: usize,
) -> Result<CyclicDecomposition> {
    let n = a.dim();
    if root >= n {
        return Err(Error::RootOutOfRange { root, n });
    }
    let breakdown_tol = BREAKDOWN_TOL_REL * a.frobenius_norm();

    let mut q0 = vec![0.0; n];
    q0[root] = 1.0;
    let mut basis = vec![q0];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let final_residual;
    loop {
        let q = basis.last().expect("basis is non-empty");
        let mut w = a.apply(q);
        alpha.push(dot(q, &w));
        // full reorthogonalization subsumes the three-term recurrence
        reorthogonalize(&mut w, &basis);
        let b = norm(&w);
        if b <= breakdown_tol || basis.len() == n {
            final_residual = b;
            break;
        }
        beta.push(b);
        for wi in &mut w {
            *wi /= b;
        }
        basis.push(w);
    }

    let remainder_eigenvalues = complement_spectrum(a, &basis)?;
    Ok(CyclicDecomposition {
        basis,
        alpha,
        beta,
        remainder_eigenvalues,
        dim: n,
        final_residual,
    })
}

/// Sorted spectrum of `a` restricted to the orthogonal complement of the
/// given orthonormal set.
fn complement_spectrum(a: &SymmetricOperator, basis: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = a.dim();
    let r = n - basis.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut complement: Vec<Vec<f64>> = Vec::with_capacity(r);
    for i in 0..n {
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        reorthogonalize(&mut w, basis);
        reorthogonalize(&mut w, &complement);
        let b = norm(&w);
        if b > 1e-8 {
            for wi in &mut w {
                *wi /= b;
            }
            complement.push(w);
            if complement.len() == r {
                break;
            }
        }
    }
    assert_eq!(complement.len(), r, "complement basis incomplete");

    let images: Vec<Vec<f64>> = complement.iter().map(|w| a.apply(w)).collect();
    let restricted = SymmetricOperator::from_fn(r, |i, j| {
        (dot(&complement[i], &images[j]) + dot(&complement[j], &images[i])) / 2.0
    });
    let EigenSystem { values, .. } = eigen::eigendecompose(&restricted)?;
    Ok(values)
}
