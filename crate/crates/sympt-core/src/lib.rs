//! Symmetric multiqubit states with positive partial transpositions.
//!
//! An `N`-qubit state supported on the permutation-symmetric subspace is
//! fully described by an `(N+1)x(N+1)` Hermitian matrix in the normalized
//! Dicke basis. This crate provides that compressed representation
//! ([`dicke`]), eigenstructure and rank-profile analysis of the state and
//! of all inequivalent partial transpositions ([`spectra`]), rank-based
//! separability / edge / extremality classification plus product-vector
//! searches ([`classify`]), and the randomized rank-lowering search for
//! extremal PPT states ([`extremal`]).

pub mod binom;
pub mod classify;
pub mod dicke;
pub mod eigen;
mod error;
pub mod extremal;
pub mod fullspace;
pub mod sampling;
pub mod spectra;

pub use error::Error;

/// Default relative tolerance for numerical rank decisions.
///
/// An eigenvalue (or singular value) counts toward the rank iff its
/// magnitude exceeds `tol * max(|lambda_max|, 1)`. Every classifier in the
/// crate takes the tolerance that is actually in force, so campaigns can
/// override this single knob consistently.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
