//! Spectral analysis of decorated graphs.
//!
//! A decoration glues a copy of a rooted graph `(G, O)` to every vertex of a
//! base graph `Γ`, and extends operators `H_o` on `ℓ²(Γ)` and `A` on `ℓ²(G)`
//! to an operator `H` on the product. The spectrum of `H` is controlled by a
//! rational Herglotz map `γ` built from `(A, O)` alone:
//!
//! ```text
//! σ(H) = γ⁻¹(σ(H_o)) ∪ σ(A restricted to the non-cyclic part)
//! ```
//!
//! with `γ(E) = E + c + Σ_j w_j / (ε_j − E)`, all `w_j > 0`. Gaps open around
//! the poles `ε_j`; the non-cyclic part contributes flat bands whose
//! multiplicity scales with the base size.
//!
//! The crate provides the graph and operator machinery ([`graph`],
//! [`operator`], [`eigen`], [`krylov`]), the map construction and its inverse
//! ([`gamma`], [`spectrum`]), and a brute-force verification oracle that
//! checks every identity against dense diagonalization on finite instances
//! ([`oracle`]).

pub mod eigen;
pub mod error;
pub mod gamma;
pub mod graph;
pub mod krylov;
pub mod operator;
pub mod oracle;
pub mod spectrum;

pub use error::Error;
pub use gamma::{DecorationGamma, HerglotzRational};
pub use graph::{decorate, DecoratedGraph, Graph, GraphSpec, RootedGraph};
pub use krylov::CyclicDecomposition;
pub use operator::{build_decorated_operator, OperatorSpec, SymmetricOperator};
pub use spectrum::{BaseSize, Multiplicity, SpectralPoint, SpectrumSet};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
