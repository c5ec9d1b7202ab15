use thiserror::Error;

/// Errors reported by the symmetric-state machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Requested bipartition index outside `1..=floor(n/2)`.
    #[error("bipartition k={k} out of range 1..={max} for {n} qubits")]
    BipartitionOutOfRange { k: usize, max: usize, n: usize },

    /// Full-space expansion refused to avoid memory blowup.
    #[error(
        "refusing to expand {n} qubits to the full 2^{n}-dimensional space (limit n <= {max})"
    )]
    TooManyQubits { n: usize, max: usize },

    /// The eigenvalue line search found no crossing in either direction.
    #[error("degenerate direction: no eigenvalue crossing within |x| <= {0:e}")]
    DegenerateDirection(f64),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}
