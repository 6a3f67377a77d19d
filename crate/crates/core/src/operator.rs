//! Finite-dimensional Hermitian operator algebra: effects, projectors,
//! POVMs and density operators.
//!
//! Every operator is stored as a dense `d x d` matrix of [`Complex64`].
//! Validation happens once, at construction; afterwards the wrapper types
//! ([`Effect`], [`Projector`], [`Povm`], [`DensityOperator`]) guarantee their
//! invariants to the tolerances in [`crate::tol`].

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A `d x d` complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within [`tol::HERM`] and stores the exactly
    /// symmetrized matrix `(A + A^dagger) / 2`.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Malformed(format!(
                "{} x {} matrix is not square",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.nrows() == 0 {
            return Err(Error::Malformed("dimension must be at least 1".into()));
        }
        let asym = max_asymmetry(&mat);
        if asym > tol::HERM {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self::symmetrized(mat))
    }

    fn symmetrized(mat: CMatrix) -> Self {
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj).scale(0.5),
        }
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if im.len() != d {
            return Err(Error::Malformed(format!(
                "re has {d} rows but im has {}",
                im.len()
            )));
        }
        for (k, (r, i)) in re.iter().zip(im).enumerate() {
            if r.len() != d || i.len() != d {
                return Err(Error::Malformed(format!(
                    "row {k} has lengths (re {}, im {}), expected {d}",
                    r.len(),
                    i.len()
                )));
            }
        }
        Self::new(CMatrix::from_fn(d, d, |j, k| {
            Complex64::new(re[j][k], im[j][k])
        }))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self {
            mat: CMatrix::from_fn(d, d, |j, k| {
                if j == k {
                    Complex64::new(diag[j], 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    pub fn ket_bra(v: &[Complex64]) -> Self {
        let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let d = v.len();
        Self::symmetrized(CMatrix::from_fn(d, d, |j, k| {
            v[j] * v[k].conj() / norm2
        }))
    }

    pub fn pauli_x() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            mat: CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    /// `n . sigma` for a real 3-vector `n`.
    pub fn pauli_dot(n: [f64; 3]) -> Self {
        &(&(&Self::pauli_x() * n[0]) + &(&Self::pauli_y() * n[1])) + &(&Self::pauli_z() * n[2])
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|c| c.re).sum()
    }

    /// Frobenius (Hilbert-Schmidt) norm.
    pub fn hs_norm(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Conjugation `U H U^dagger` by an arbitrary square matrix `U`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u * &self.mat * u.adjoint())
    }

    /// Real linear combination `sum_j w_j H_j`. All operands share one dimension.
    pub fn linear_combination<'a, I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a HermitianOperator)>,
    {
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, h) in terms {
            acc += h.mat.scale(w);
        }
        Self { mat: acc }
    }

    /// Eigendecomposition `H = sum_j lambda_j pi_j` with eigenvalues in
    /// ascending order (zeros included).
    pub fn spectrum(&self) -> Spectrum {
        let d = self.dim();
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = CMatrix::from_fn(d, d, |row, col| eig.eigenvectors[(row, order[col])]);
        Spectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    /// Smallest and largest eigenvalue.
    pub fn eigen_range(&self) -> (f64, f64) {
        let ev = self.spectrum().eigenvalues;
        (ev[0], ev[ev.len() - 1])
    }

    /// `true` iff the spectrum lies in `[-tol::EIG, 1 + tol::EIG]`.
    pub fn is_effect(&self) -> bool {
        let (lo, hi) = self.eigen_range();
        lo >= -tol::EIG && hi <= 1.0 + tol::EIG
    }

    /// Max entrywise `|H^2 - H|`.
    pub fn idempotence_defect(&self) -> f64 {
        let sq = &self.mat * &self.mat;
        (sq - &self.mat).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

fn max_asymmetry(mat: &CMatrix) -> f64 {
    let d = mat.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for k in j..d {
            worst = worst.max((mat[(j, k)] - mat[(k, j)].conj()).norm());
        }
    }
    worst
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator sum");
        HermitianOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator difference");
        HermitianOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        HermitianOperator {
            mat: self.mat.scale(rhs),
        }
    }
}

/// Hilbert-Schmidt inner product `tr(A B)` of two Hermitian operators.
///
/// The imaginary part of the trace vanishes analytically and is discarded.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    a.check_dim(b)?;
    let d = a.dim();
    let mut acc = 0.0;
    for j in 0..d {
        for k in 0..d {
            acc += (a.mat[(j, k)] * b.mat[(k, j)]).re;
        }
    }
    Ok(acc)
}

/// Ascending eigenvalues with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// Rank-one eigenprojector onto the `k`-th eigenvector.
    pub fn projector(&self, k: usize) -> Projector {
        let v: Vec<Complex64> = self.eigenvectors.column(k).iter().copied().collect();
        Projector {
            op: HermitianOperator::ket_bra(&v),
            rank: 1,
        }
    }

    pub fn projectors(&self) -> Vec<Projector> {
        (0..self.eigenvalues.len()).map(|k| self.projector(k)).collect()
    }

    /// Projector onto the span of eigenvectors `range`.
    pub fn span_projector(&self, range: std::ops::Range<usize>) -> Projector {
        let d = self.eigenvalues.len();
        let rank = range.len();
        let cols = self.eigenvectors.columns(range.start, rank);
        let mat = if rank == 0 {
            CMatrix::zeros(d, d)
        } else {
            cols * cols.adjoint()
        };
        Projector {
            op: HermitianOperator::symmetrized(mat),
            rank,
        }
    }

    /// `sum_j f(lambda_j) pi_j`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let d = self.eigenvalues.len();
        let scaled = CMatrix::from_fn(d, d, |row, col| {
            self.eigenvectors[(row, col)] * f(self.eigenvalues[col])
        });
        HermitianOperator::symmetrized(scaled * self.eigenvectors.adjoint())
    }
}

/// A Hermitian operator with spectrum in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect(HermitianOperator);

impl Effect {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let (min, max) = op.eigen_range();
        if min < -tol::EIG || max > 1.0 + tol::EIG {
            return Err(Error::NotEffect { min, max });
        }
        Ok(Self(op))
    }

    pub fn identity(dim: usize) -> Self {
        Self(HermitianOperator::identity(dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self(HermitianOperator::zero(dim))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_op(self) -> HermitianOperator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Projectors are the extreme points of the effect set.
    pub fn is_extreme(&self) -> bool {
        self.0.idempotence_defect() <= tol::IDEM
    }

    /// Convex decomposition into nested spectral projectors:
    /// `E = l_1 * 1 + sum_{m>=2} (l_m - l_{m-1}) Pi_m + (1 - l_d) * 0`,
    /// where `Pi_m` projects onto eigenvectors `m..d` (1-based, ascending).
    ///
    /// Eigenvalues within [`tol::EIG`] of 0 or 1 are snapped; consecutive
    /// eigenvalues closer than [`tol::DEGENERATE`] are merged, and terms of
    /// zero weight are dropped.
    pub fn convex_decompose(&self) -> ConvexDecomposition {
        let spec = self.0.spectrum();
        let d = self.dim();
        let lambda: Vec<f64> = spec.eigenvalues.iter().map(|&l| snap_unit(l)).collect();

        let mut terms = Vec::with_capacity(d + 1);
        if lambda[0] > 0.0 {
            terms.push(WeightedProjector {
                weight: lambda[0],
                projector: Projector::identity(d),
            });
        }
        let mut prev = lambda[0];
        for (m, &value) in lambda.iter().enumerate().skip(1) {
            let gap = value - prev;
            if gap <= tol::DEGENERATE {
                continue;
            }
            terms.push(WeightedProjector {
                weight: gap,
                projector: spec.span_projector(m..d),
            });
            prev = value;
        }
        let top = 1.0 - prev;
        if top > 0.0 {
            terms.push(WeightedProjector {
                weight: top,
                projector: Projector::zero(d),
            });
        }
        ConvexDecomposition { dim: d, terms }
    }
}

fn snap_unit(l: f64) -> f64 {
    if l.abs() <= tol::EIG || l < 0.0 {
        0.0
    } else if (l - 1.0).abs() <= tol::EIG || l > 1.0 {
        1.0
    } else {
        l
    }
}

/// An idempotent Hermitian operator of the stated rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    op: HermitianOperator,
    rank: usize,
}

impl Projector {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let defect = op.idempotence_defect();
        let trace = op.trace();
        let rank = trace.round();
        if defect > tol::IDEM || (trace - rank).abs() > tol::IDEM {
            let (min, max) = op.eigen_range();
            return Err(Error::NotEffect { min, max });
        }
        Ok(Self {
            op,
            rank: rank as usize,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim),
            rank: dim,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            op: HermitianOperator::zero(dim),
            rank: 0,
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn to_effect(&self) -> Effect {
        Effect(self.op.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProjector {
    pub weight: f64,
    pub projector: Projector,
}

/// Convex combination of projectors reproducing an effect.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDecomposition {
    dim: usize,
    pub terms: Vec<WeightedProjector>,
}

impl ConvexDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        HermitianOperator::linear_combination(
            self.dim,
            self.terms.iter().map(|t| (t.weight, t.projector.op())),
        )
    }
}

/// A finite set of effects resolving the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        let first = effects.first().ok_or(Error::EmptyPovm)?;
        let d = first.dim();
        if let Some(bad) = effects.iter().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let residue = completeness_residue(&effects);
        if residue > tol::COMPLETE {
            return Err(Error::Incomplete { residue });
        }
        Ok(Self { effects })
    }

    /// Validates each operator as an effect, then completeness.
    pub fn from_operators(ops: Vec<HermitianOperator>) -> Result<Self> {
        let effects = ops.into_iter().map(Effect::new).collect::<Result<Vec<_>>>()?;
        Self::new(effects)
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Max entrywise deviation of `sum_j E_j` from the identity.
    pub fn residue(&self) -> f64 {
        completeness_residue(&self.effects)
    }
}

fn completeness_residue(effects: &[Effect]) -> f64 {
    let d = effects[0].dim();
    let mut sum = CMatrix::zeros(d, d);
    for e in effects {
        sum += e.op().matrix();
    }
    (sum - CMatrix::identity(d, d))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Positive unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        let (min_eigenvalue, _) = op.eigen_range();
        if (trace - 1.0).abs() > tol::TRACE || min_eigenvalue < -tol::EIG {
            return Err(Error::NotDensity {
                trace,
                min_eigenvalue,
            });
        }
        Ok(Self(op))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(&HermitianOperator::identity(dim) * (1.0 / dim as f64))
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Bloch vector `tr(W sigma)` of a qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok([
            hs_inner(&self.0, &HermitianOperator::pauli_x())?,
            hs_inner(&self.0, &HermitianOperator::pauli_y())?,
            hs_inner(&self.0, &HermitianOperator::pauli_z())?,
        ])
    }
}

/// `tr(W E)`, clamped to `[0, 1]`.
pub fn born_probability(w: &DensityOperator, e: &Effect) -> Result<f64> {
    Ok(hs_inner(w.op(), e.op())?.clamp(0.0, 1.0))
}
