//! Seeded generators for random operators, states, POVMs and rotations.
//!
//! Everything draws from [`SeededRng`] (ChaCha8, a counter-based stream
//! cipher generator), so a given seed yields the same sequence on every
//! platform.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::{Rotation3, UnitVectorSet};
use crate::operator::{CMatrix, DensityOperator, Effect, HermitianOperator, Povm};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal(rng: &mut SeededRng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre(dim: usize, rng: &mut SeededRng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| complex_normal(rng))
}

/// Hermitian matrix with standard normal entries above the diagonal.
pub fn hermitian(dim: usize, rng: &mut SeededRng) -> HermitianOperator {
    let g = ginibre(dim, rng);
    HermitianOperator::new((&g + g.adjoint()).scale(0.5)).expect("symmetrized by construction")
}

/// Random effect: a random Hermitian whose spectrum is affinely mapped onto
/// a random subinterval `[a, b]` of `[0, 1]`.
pub fn effect(dim: usize, rng: &mut SeededRng) -> Effect {
    let h = hermitian(dim, rng);
    let (lo, hi) = h.eigen_range();
    let width: f64 = rng.random_range(0.05..=1.0);
    let offset: f64 = rng.random_range(0.0..=(1.0 - width));
    let spread = (hi - lo).max(f64::MIN_POSITIVE);
    let scaled = h.spectrum().map(|l| offset + width * ((l - lo) / spread).clamp(0.0, 1.0));
    Effect::new(scaled).expect("spectrum mapped into [0, 1]")
}

/// Random mixed state `G G^dagger / tr(G G^dagger)` from a Ginibre matrix.
pub fn density(dim: usize, rng: &mut SeededRng) -> DensityOperator {
    let g = ginibre(dim, rng);
    let gg = &g * g.adjoint();
    let tr: f64 = gg.diagonal().iter().map(|c| c.re).sum();
    let op = HermitianOperator::new(gg.unscale(tr)).expect("G G^dagger is Hermitian");
    DensityOperator::new(op).expect("positive with unit trace")
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `diag(R)` absorbed into `Q`.
pub fn unitary(dim: usize, rng: &mut SeededRng) -> CMatrix {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Real orthogonal matrix from the QR decomposition of a Gaussian matrix.
pub fn orthogonal(dim: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| normal(rng));
    let (mut q, r) = g.qr().unpack();
    for k in 0..dim {
        if r[(k, k)] < 0.0 {
            for row in 0..dim {
                q[(row, k)] = -q[(row, k)];
            }
        }
    }
    q
}

/// Random `n`-outcome POVM `E_j = S^{-1/2} P_j S^{-1/2}` with `S = sum_j P_j`
/// for random positive `P_j`.
pub fn povm(dim: usize, outcomes: usize, rng: &mut SeededRng) -> Povm {
    let positives: Vec<CMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(dim, rng);
            &g * g.adjoint()
        })
        .collect();
    let mut total = CMatrix::zeros(dim, dim);
    for p in &positives {
        total += p;
    }
    let total = HermitianOperator::new(total).expect("sum of positives is Hermitian");
    let inv_sqrt = total.spectrum().map(|l| 1.0 / l.sqrt());
    let effects = positives
        .into_iter()
        .map(|p| {
            let op = HermitianOperator::new(p).expect("positive is Hermitian");
            Effect::new(op.conjugate_by(inv_sqrt.matrix())).expect("normalized positive is an effect")
        })
        .collect();
    Povm::new(effects).expect("normalized positives resolve the identity")
}

/// Uniformly distributed point on the unit sphere.
pub fn unit_vector(rng: &mut SeededRng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(normal(rng), normal(rng), normal(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Haar-random proper rotation from a normalized Gaussian quaternion.
pub fn rotation(rng: &mut SeededRng) -> Rotation3 {
    loop {
        let q = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return Rotation3::from_quaternion([q[0] / n, q[1] / n, q[2] / n, q[3] / n]);
        }
    }
}

/// Random valid vector set of `n >= 2` unit vectors.
///
/// `n - 2` directions are drawn uniformly; the last two close the polygon,
/// `u = r/2 +- h w` with `r` the residual, `w` a random direction orthogonal
/// to `r` and `h = sqrt(1 - |r|^2 / 4)`. Draws with `|r| > 2` are rejected.
/// Sets larger than eight are assembled from smaller closed blocks.
pub fn vector_set(n: usize, rng: &mut SeededRng) -> UnitVectorSet {
    assert!(n >= 2, "a vector set needs at least two vectors");
    let mut vectors = Vec::with_capacity(n);
    let mut remaining = n;
    while remaining > 0 {
        let block = if remaining <= 8 { remaining } else { rng.random_range(2..=(remaining - 2).min(8)) };
        vectors.extend(closed_block(block, rng));
        remaining -= block;
    }
    UnitVectorSet::new(vectors).expect("closed blocks sum to zero")
}

fn closed_block(n: usize, rng: &mut SeededRng) -> Vec<Vector3<f64>> {
    loop {
        let mut vs: Vec<Vector3<f64>> = (0..n - 2).map(|_| unit_vector(rng)).collect();
        let r: Vector3<f64> = -vs.iter().sum::<Vector3<f64>>();
        let rn = r.norm();
        if rn > 2.0 - 1e-6 {
            continue;
        }
        let w = loop {
            let t = unit_vector(rng);
            let w = if rn > 1e-12 { t - r * (t.dot(&r) / (rn * rn)) } else { t };
            if w.norm() > 1e-6 {
                break w.normalize();
            }
        };
        let h = (1.0 - rn * rn / 4.0).sqrt();
        vs.push(r / 2.0 + w * h);
        vs.push(r / 2.0 - w * h);
        return vs;
    }
}
