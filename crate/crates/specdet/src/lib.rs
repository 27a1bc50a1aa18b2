//! High-precision spectral zeta functions and zeta-regularized determinants.
//!
//! The library computes the spectral zeta function
//! `zeta_M(s) = sum m_k lambda_k^{-s}` and the regularized determinant
//! `det(Delta, M) = exp(-zeta_M'(0))` for four eigenvalue families:
//! round n-spheres, Dirichlet hemispheres, real projective spaces, and the
//! isotropic quantum harmonic oscillator.
//!
//! The layering is strictly bottom-up:
//!
//! * [`numeric`] wraps an arbitrary-precision floating kernel ([`BigReal`])
//!   and exact rationals, plus the fundamental constants.
//! * [`combinatorics`] produces the exact integer/rational coefficient
//!   families (Stirling numbers of the first kind, central factorial
//!   numbers and their normalized forms, Bernoulli and harmonic numbers).
//! * [`special`] evaluates Hurwitz/Riemann zeta functions and their
//!   s-derivatives for real rational arguments, together with digamma and
//!   log-gamma helpers.
//! * [`expansion`] is a small exact term algebra for shifted spectral zeta
//!   functions: each function is a canonical finite combination of terms
//!   `q * g^s * zeta(alpha*s + beta, a)` plus pure exponentials `q * r^s`,
//!   built either by dimensional recursion or directly from closed forms.
//! * [`determinants`] assembles log-determinants three independent ways
//!   (closed form, shift/series assembly, truncated Dirichlet series) so
//!   that each route checks the others.
//!
//! All public evaluation entry points take a decimal-digit precision and
//! return values accurate to a couple of units in the last place.

pub mod combinatorics;
pub mod determinants;
pub mod error;
pub mod expansion;
pub mod numeric;
pub mod special;

pub use determinants::{
    det_closed_form, det_lowdim_constant, det_table, det_voros, direct_series_zeta, DetMethod,
    DetResult,
};
pub use error::{Error, Result};
pub use expansion::{Manifold, ManifoldKind, ZetaExpansion};
pub use numeric::{BigReal, Rational};
