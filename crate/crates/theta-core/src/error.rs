use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("ambient mismatch: operands live in different groups ({0})")]
    AmbientMismatch(String),

    #[error("modulus must be odd for the canonical pairing, got N={0}")]
    EvenModulus(u32),

    #[error("matrix is not symmetric: residual {residual:.3e} exceeds {tol:.3e}")]
    NotSymmetric { residual: f64, tol: f64 },

    #[error("imaginary part of the period matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("truncation target {target:.3e} unattainable at radius {max_radius}")]
    TruncationUnattainable { target: f64, max_radius: usize },

    #[error("evaluation too close to a pole: {context} (|denominator| = {magnitude:.3e})")]
    PoleProximity { context: String, magnitude: f64 },

    #[error("value {value} does not snap to a root of unity of order {order} (distance {distance:.3e})")]
    SnapFailed { value: num_complex::Complex64, order: u32, distance: f64 },

    #[error("inconsistent normalization data: {0}")]
    Normalization(String),

    #[error("divisor is not {0}-torsion at tolerance (residual {1:.3e})")]
    NotTorsion(u32, f64),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("linear system has unexpected dimension: expected {expected}, got {got} (sv gap {gap:.3e})")]
    UnexpectedDimension { expected: usize, got: usize, gap: f64 },

    #[error("chart undefined: {0}")]
    ChartUndefined(String),

    #[error("matrix is not skew-symmetric (residual {0:.3e})")]
    NotSkew(f64),

    #[error("frame is not isotropic (residual {0:.3e})")]
    NotIsotropic(f64),

    #[error("ill-conditioned rank decision: singular values {below:.3e} vs {above:.3e}")]
    RankAmbiguous { below: f64, above: f64 },

    #[error("{0}")]
    Invalid(String),
}
