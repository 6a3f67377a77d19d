//! Numerical tolerances shared across the crate.

/// Hermiticity: max |A_jk - conj(A_kj)|.
pub const HERM: f64 = 1e-10;
/// Idempotence of projectors, max entrywise |P^2 - P|.
pub const IDEM: f64 = 1e-10;
/// Convex decomposition reconstruction and weight sum.
pub const CONV: f64 = 1e-10;
/// Spectrum bounds for effects and density operators.
pub const EIG: f64 = 1e-9;
/// Completeness of a POVM, max entrywise residue of sum - identity.
pub const COMPLETE: f64 = 1e-9;
/// Unit trace of density operators.
pub const TRACE: f64 = 1e-10;
/// Frame-function law checks.
pub const FRAME: f64 = 1e-10;
/// Orthonormality of operator bases.
pub const BASIS: f64 = 1e-10;
/// Unit length of Bloch axes and fiducial vectors.
pub const UNIT: f64 = 1e-12;

/// Eigenvalues closer than this are merged in convex decompositions.
pub const DEGENERATE: f64 = 1e-14;

/// Completeness residue allowed for a set of `n` unit vectors.
pub fn vector_sum(n: usize) -> f64 {
    1e-9 * n as f64
}

/// Entrywise tolerance for the isotropy test of the second moment.
pub fn isotropy(n: usize) -> f64 {
    1e-9 * n as f64
}

/// Default zero threshold on `max_abs` of a harmonic sum over `n` vectors.
pub fn harmonic_zero(n: usize) -> f64 {
    1e-8 * (n as f64).sqrt()
}
