use thiserror::Error;

/// Errors raised by the numerical routines and loop constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("columns are linearly dependent")]
    RankDeficient,
    #[error("form-norm of a pivot vanishes ({norm:e})")]
    IsotropicPivot { norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid signature form (n = {n}, p1 = {p1}, p2 = {p2})")]
    InvalidForm { n: usize, p1: usize, p2: usize },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("matrix is not in the group (residual {residual:e})")]
    NotInGroup { residual: f64 },
    #[error("loop does not provide a sampler")]
    SamplerUnavailable,
    #[error("left and right inverses disagree (distance {distance:e})")]
    InversesDisagree { distance: f64 },
    #[error("intersection is numerically ambiguous (residual {residual:e})")]
    IllConditioned { residual: f64 },
    #[error("subspace does not meet the transversal in exactly one point (sample {sample})")]
    TransversalityViolated { sample: usize },
    #[error("subspace is not in the orbit of the carrier")]
    NotInOrbit,
    #[error("no displacing element found in {budget} samples")]
    WitnessNotFound { budget: usize },
    #[error("rank gap criterion failed at {failed} of {points} points")]
    RankAmbiguous { failed: usize, points: usize },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("unknown field name")]
    UnknownField,
}
