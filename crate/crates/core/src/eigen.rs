//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! Jacobi is slower than tridiagonalization-based solvers but foolproof for
//! the small dense matrices this crate handles (dimensions in the tens), and
//! it delivers an orthonormal eigenbasis to machine precision, which the
//! spectral-measure checks downstream rely on.

use num_complex::Complex64;

use crate::error::Error;
use crate::operator::SymmetricOperator;
use crate::Result;

/// Relative off-diagonal threshold: convergence when the off-diagonal
/// Frobenius norm drops below `EIG_TOL_REL * ‖A‖_F`.
pub const EIG_TOL_REL: f64 = 1e-11;

/// Sweep cap; Jacobi converges quadratically, so hitting this signals
/// pathological input rather than slow progress.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Spectral radius estimate `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Squared overlaps `|⟨v, φ_k⟩|²` for each eigenvector.
    pub fn overlaps(&self, v: &[f64]) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|phi| {
                let d: f64 = phi.iter().zip(v).map(|(a, b)| a * b).sum();
                d * d
            })
            .collect()
    }

    /// Diagonal resolvent `⟨v | (A - z)⁻¹ | v⟩ = Σ_k |⟨v,φ_k⟩|² / (λ_k - z)`.
    ///
    /// Real `z` must keep clear of the spectrum; complex `z` is always fine.
    pub fn green_diag(&self, v: &[f64], z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            let tol = 1e-9 * (1.0 + self.spectral_norm());
            for &lambda in &self.values {
                if (lambda - z.re).abs() <= tol {
                    return Err(Error::NearEigenvalue {
                        z: z.re,
                        eigenvalue: lambda,
                        tol,
                    });
                }
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (phi, &lambda) in self.vectors.iter().zip(&self.values) {
            let d: f64 = phi.iter().zip(v).map(|(a, b)| a * b).sum();
            if d != 0.0 {
                acc += Complex64::new(d * d, 0.0) / (Complex64::new(lambda, 0.0) - z);
            }
        }
        Ok(acc)
    }
}

/// Eigendecomposition with the default tolerance and sweep cap.
pub fn eigendecompose(a: &SymmetricOperator) -> Result<EigenSystem> {
    eigendecompose_with(a, EIG_TOL_REL, MAX_SWEEPS)
}

/// Eigendecomposition with explicit relative tolerance and sweep cap.
pub fn eigendecompose_with(
    a: &SymmetricOperator,
    tol_rel: f64,
    max_sweeps: usize,
) -> Result<EigenSystem> {
    let n = a.dim();
    let mut m: Vec<f64> = (0..n * n).map(|k| a.get(k / n, k % n)).collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let tol = tol_rel * a.frobenius_norm();
    let mut converged = n < 2;
    let mut last_off = 0.0;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += 2.0 * m[p * n + q] * m[p * n + q];
                }
            }
            s.sqrt()
        };
        last_off = off;
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                // rotation angle annihilating m[p][q]
                let theta = 0.5 * (m[q * n + q] - m[p * n + p]) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for j in 0..n {
                    let mjp = m[j * n + p];
                    let mjq = m[j * n + q];
                    m[j * n + p] = c * mjp - s * mjq;
                    m[j * n + q] = s * mjp + c * mjq;
                }
                for j in 0..n {
                    let mpj = m[p * n + j];
                    let mqj = m[q * n + j];
                    m[p * n + j] = c * mpj - s * mqj;
                    m[q * n + j] = s * mpj + c * mqj;
                }
                for j in 0..n {
                    let vjp = v[j * n + p];
                    let vjq = v[j * n + q];
                    v[j * n + p] = c * vjp - s * vjq;
                    v[j * n + q] = s * vjp + c * vjq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: max_sweeps,
            off_norm: last_off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal, together with the first component of each eigenvector.
/// Used for the restriction of an operator to a Krylov subspace.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = diag.len();
    assert_eq!(off.len() + 1, m.max(1));
    let t = SymmetricOperator::from_fn(m, |i, j| {
        if i == j {
            diag[i]
        } else if j == i + 1 {
            off[i]
        } else {
            0.0
        }
    });
    let es = eigendecompose(&t)?;
    let firsts = es.vectors.iter().map(|v| v[0]).collect();
    Ok((es.values, firsts))
}
