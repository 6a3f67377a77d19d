use thiserror::Error;

/// Errors raised by the operator, frame-function, geometry and harmonic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not square or has malformed rows: {0}")]
    Malformed(String),

    #[error("operator is not an effect (spectrum [{min:.6e}, {max:.6e}] leaves [0, 1])")]
    NotEffect { min: f64, max: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a POVM needs at least one effect")]
    EmptyPovm,

    #[error("effects do not resolve the identity (max entrywise residue {residue:.3e})")]
    Incomplete { residue: f64 },

    #[error("not a density operator: trace {trace:.12}, smallest eigenvalue {min_eigenvalue:.3e}")]
    NotDensity { trace: f64, min_eigenvalue: f64 },

    #[error("operator basis is not orthonormal (max deviation {max_deviation:.3e})")]
    NotOrthonormal { max_deviation: f64 },

    #[error("Bloch parameters r = {r}, s = {s} lie outside the double cone 0 <= s <= min(r, 1 - r)")]
    OutsideCone { r: f64, s: f64 },

    #[error("completeness violated: unit vectors sum to a residue of norm {residue:.3e}")]
    IncompleteVectorSet { residue: f64 },

    #[error("vector has norm {norm}, expected a unit vector")]
    NotUnitVector { norm: f64 },

    #[error("need at least {min} vectors, got {found}")]
    TooFewVectors { min: usize, found: usize },

    #[error("matrix is not a proper rotation: {0}")]
    NotRotation(String),

    #[error("index out of range: l = {l}, m = {m}")]
    IndexOutOfRange { l: i64, m: i64 },

    #[error("Bloch vector has norm {norm} > 1")]
    InvalidBlochVector { norm: f64 },

    #[error("coefficients violate c(l,-m) = (-1)^m conj(c(l,m)) at l = {l}, m = {m} (deviation {deviation:.3e})")]
    RealityViolated { l: usize, m: usize, deviation: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("frame samples do not cover the required effect set: missing {missing} of {required}")]
    MissingSamples { missing: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
