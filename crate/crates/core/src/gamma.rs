//! The rational spectral map attached to a rooted decoration operator.
//!
//! For a symmetric operator `A` with root vector `|O⟩`, the map is
//! `γ(z) = -1 / ⟨O|(A - z)⁻¹|O⟩`. It has the closed form
//! `γ(E) = E + c + Σ_j w_j / (ε_j - E)` with strictly positive weights, so it
//! maps the upper half plane into itself and increases strictly between
//! consecutive poles. Decorating a base operator with `(A, O)` pulls the base
//! spectrum back through `γ` and adds the complement spectrum of `A` as flat
//! bands; computing `(c, ε, w)` is therefore the core spectral step.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::krylov::{krylov_cyclic_decomposition, CyclicDecomposition};
use crate::operator::SymmetricOperator;
use crate::Result;

/// Relative half-width of the guard band around each pole inside which
/// real-axis evaluation refuses to produce a value.
pub const POLE_TOL_REL: f64 = 1e-9;

/// Relative tolerance (against the spread of the cyclic eigenvalues) for the
/// bisection that brackets each pole.
const POLE_BISECTION_TOL_REL: f64 = 1e-13;

/// Rational Herglotz function `E ↦ E + c + Σ_j w_j / (ε_j - E)`.
///
/// Poles are strictly increasing and weights strictly positive; under those
/// constraints the function is strictly increasing on every component of its
/// real domain and maps `Im z > 0` to `Im γ > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzRational {
    pub c: f64,
    pub poles: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HerglotzRational {
    /// Validates and normalizes: pole/weight pairs are sorted by pole.
    pub fn new(c: f64, poles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut map = Self { c, poles, weights };
        map.normalize()?;
        Ok(map)
    }

    /// Sorts pole/weight pairs and checks the Herglotz constraints. Call
    /// after deserializing untrusted input.
    pub fn normalize(&mut self) -> Result<()> {
        if self.poles.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.poles.len(),
                got: self.weights.len(),
            });
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidMap("constant term is not finite".into()));
        }
        let mut pairs: Vec<(f64, f64)> = self
            .poles
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(p, w) in &pairs {
            if !p.is_finite() {
                return Err(Error::InvalidMap(format!("pole {p} is not finite")));
            }
            // `is_finite` first so NaN weights land here rather than passing the comparison.
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidMap(format!(
                    "weight {w} at pole {p} is not strictly positive"
                )));
            }
        }
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidMap("coincident poles".into()));
        }
        self.poles = pairs.iter().map(|&(p, _)| p).collect();
        self.weights = pairs.iter().map(|&(_, w)| w).collect();
        Ok(())
    }

    /// Nearest pole to `e` together with its guard half-width, if `e` falls
    /// inside the guard band.
    fn guard_violation(&self, e: f64) -> Option<(f64, f64)> {
        self.poles
            .iter()
            .map(|&p| (p, POLE_TOL_REL * (1.0 + p.abs())))
            .find(|&(p, tol)| (e - p).abs() <= tol)
    }

    /// Value at a real energy; refuses energies inside a pole guard band.
    pub fn evaluate(&self, e: f64) -> Result<f64> {
        if let Some((pole, tol)) = self.guard_violation(e) {
            return Err(Error::AtPole { energy: e, pole, tol });
        }
        Ok(self.eval_raw(e))
    }

    /// Derivative `1 + Σ_j w_j / (ε_j - E)²` at a real energy; always ≥ 1 on
    /// the domain. Refuses energies inside a pole guard band.
    pub fn derivative(&self, e: f64) -> Result<f64> {
        if let Some((pole, tol)) = self.guard_violation(e) {
            return Err(Error::AtPole { energy: e, pole, tol });
        }
        Ok(self.deriv_raw(e))
    }

    /// Value at a complex energy. No pole guard: callers evaluating on the
    /// real axis get arbitrarily large finite values near poles.
    pub fn evaluate_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = z + self.c;
        for (&p, &w) in self.poles.iter().zip(&self.weights) {
            acc += w / (p - z);
        }
        acc
    }

    pub(crate) fn eval_raw(&self, e: f64) -> f64 {
        let mut acc = e + self.c;
        for (&p, &w) in self.poles.iter().zip(&self.weights) {
            acc += w / (p - e);
        }
        acc
    }

    pub(crate) fn deriv_raw(&self, e: f64) -> f64 {
        let mut acc = 1.0;
        for (&p, &w) in self.poles.iter().zip(&self.weights) {
            let d = p - e;
            acc += w / (d * d);
        }
        acc
    }
}

/// Spectral map of a decoration operator, together with the complement
/// spectrum that decoration copies verbatim.
#[derive(Debug, Clone)]
pub struct DecorationGamma {
    /// The rational map `γ` pulled back over the base spectrum.
    pub map: HerglotzRational,
    /// Sorted eigenvalues of the restriction orthogonal to the root vector;
    /// each reappears in every decorated copy.
    pub remainder: Vec<f64>,
    /// Whether the root vector is cyclic for the operator (no remainder).
    pub cyclic: bool,
    /// Rejected Lanczos residual; values near the breakdown threshold flag a
    /// borderline cyclic/non-cyclic split.
    pub final_residual: f64,
}

/// Computes the spectral map of `(a, root)`: reduces `a` over the root's
/// cyclic subspace, locates the zeros of `⟨O|(A - E)⁻¹|O⟩` between
/// consecutive cyclic eigenvalues by bisection with a Newton polish, and
/// reads off the weights from the derivative at each zero.
pub fn gamma_from_decoration(a: &SymmetricOperator, root: usize) -> Result<DecorationGamma> {
    let cd = krylov_cyclic_decomposition(a, root)?;
    gamma_from_cyclic(&cd)
}

/// Same as [`gamma_from_decoration`], starting from a precomputed reduction.
pub fn gamma_from_cyclic(cd: &CyclicDecomposition) -> Result<DecorationGamma> {
    let (lambda, p) = cd.cyclic_spectral_data()?;
    let c = -lambda.iter().zip(&p).map(|(l, q)| l * q).sum::<f64>();
    let (poles, weights) = poles_and_weights(&lambda, &p);
    Ok(DecorationGamma {
        map: HerglotzRational::new(c, poles, weights)?,
        remainder: cd.remainder_eigenvalues.clone(),
        cyclic: cd.is_cyclic(),
        final_residual: cd.final_residual,
    })
}

/// Root-vector resolvent diagonal `g(E) = Σ_k p_k / (λ_k - E)` restricted to
/// the cyclic subspace; `γ = -1/g`, so the poles of `γ` are the zeros of `g`.
fn resolvent_diag(lambda: &[f64], p: &[f64], e: f64) -> f64 {
    lambda.iter().zip(p).map(|(&l, &q)| q / (l - e)).sum()
}

/// Derivative `g'(E) = Σ_k p_k / (λ_k - E)²`, strictly positive.
fn resolvent_diag_deriv(lambda: &[f64], p: &[f64], e: f64) -> f64 {
    lambda
        .iter()
        .zip(p)
        .map(|(&l, &q)| {
            let d = l - e;
            q / (d * d)
        })
        .sum()
}

/// Zeros of `g` interlace the cyclic eigenvalues: exactly one per gap
/// `(λ_k, λ_{k+1})`, found by sign-bracketed bisection (g runs from -∞ to +∞
/// across each gap) and polished by Newton. The weight at a zero ε is
/// `1/g'(ε)`. Gaps narrower than the bisection tolerance are skipped; their
/// poles would carry weight below rounding noise.
fn poles_and_weights(lambda: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = lambda.len();
    if m < 2 {
        return (Vec::new(), Vec::new());
    }
    let range = lambda[m - 1] - lambda[0];
    let tol = POLE_BISECTION_TOL_REL * range;
    let mut poles = Vec::with_capacity(m - 1);
    let mut weights = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let (lo, hi) = (lambda[k], lambda[k + 1]);
        let gap = hi - lo;
        if gap <= tol.max(f64::EPSILON * range) {
            continue;
        }
        // shrink the inset until the bracket signs are correct
        let mut delta = gap / 4.0;
        let (mut a, mut b) = (lo + delta, hi - delta);
        for _ in 0..80 {
            if resolvent_diag(lambda, p, a) < 0.0 && resolvent_diag(lambda, p, b) > 0.0 {
                break;
            }
            delta /= 2.0;
            a = lo + delta;
            b = hi - delta;
        }
        let mut count = 0;
        while b - a > tol && count < 200 {
            let mid = 0.5 * (a + b);
            if resolvent_diag(lambda, p, mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
            count += 1;
        }
        let mut eps = 0.5 * (a + b);
        for _ in 0..3 {
            let step = resolvent_diag(lambda, p, eps) / resolvent_diag_deriv(lambda, p, eps);
            let next = eps - step;
            if next <= lo || next >= hi {
                break;
            }
            eps = next;
        }
        poles.push(eps);
        weights.push(1.0 / resolvent_diag_deriv(lambda, p, eps));
    }
    (poles, weights)
}

/// Sorted eigenvalues of the principal minor of `a` with the root row and
/// column deleted. For a cyclic root these coincide with the poles of the
/// spectral map; otherwise the poles form a strict subset.
pub fn poles_via_projection(a: &SymmetricOperator, root: usize) -> Result<Vec<f64>> {
    let n = a.dim();
    if root >= n {
        return Err(Error::RootOutOfRange { root, n });
    }
    if n == 1 {
        return Err(Error::EmptyProjection);
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != root).collect();
    let minor = SymmetricOperator::from_fn(n - 1, |i, j| a.get(keep[i], keep[j]));
    Ok(crate::eigen::eigendecompose(&minor)?.values)
}
