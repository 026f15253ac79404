//! Pointwise curvature-operator calculus for Hermitian holomorphic vector bundles.
//!
//! At a point with orthonormal coordinates and an orthonormal fiber frame, the
//! Chern curvature of `(E, h)` is the coefficient array `c[j][k][λ][μ]` of
//! `iΘ = i Σ c_{jkλμ} dz_j ∧ dz̄_k ⊗ e*_λ ⊗ e_μ`. This crate assembles the
//! curvature operator `A^{p,q} = [iΘ, Λ_ω]` on `Λ^{p,q} ⊗ E` in closed form,
//! implements the Hodge star and the `(p,q) ↔ (n-q,n-p)` duality map, and
//! classifies operators into the Nakano, dual Nakano, Griffiths and spectral
//! `A^{p,q}` cones.
//!
//! The [`oracle`] module rebuilds every operator as a literal commutator over
//! fully antisymmetric tensors so that all closed-form signs can be checked
//! against an independent derivation.
//!
//! Coordinate indices and fiber indices are 1-based throughout the public API.

pub mod cli;
pub mod curvature;
mod error;
pub mod forms;
pub mod multiindex;
pub mod oracle;
pub mod positivity;
pub mod verify;

pub use curvature::{CurvatureTensor, OperatorMatrix, SymmetryMode};
pub use error::{Error, Result};
pub use forms::{BundleForm, Factor, Fiber, FormSpace};
pub use multiindex::MultiIndex;
pub use positivity::{PositivityClass, PositivityReport};

/// Complex scalar used for all coefficients.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix in canonical basis order.
pub type CMatrix = nalgebra::DMatrix<C64>;
