//! Frame functions: probability assignments on effects that sum to one over
//! every POVM.
//!
//! A frame function that is additive is the trace pairing `E -> tr(W E)` with
//! a unique density operator `W`. This module evaluates that correspondence
//! numerically in both directions: [`BornFrame`] turns a state into a frame
//! function, and [`reconstruct_density`] recovers the state from frame values
//! on an orthonormal operator basis after extending the function linearly to
//! Hermitian operators ([`extend_to_hermitian`]). [`check_frame_laws`] probes
//! an arbitrary oracle for additivity, rational homogeneity and monotonicity.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{hs_inner, CMatrix, DensityOperator, Effect, HermitianOperator};
use crate::random::{self, SeededRng};
use crate::tol;

/// A deterministic, side-effect free assignment of a number to each effect.
pub trait FrameOracle: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, effect: &Effect) -> f64;
}

/// The trace pairing `E -> tr(W E)`, clamped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct BornFrame {
    state: DensityOperator,
}

impl BornFrame {
    pub fn new(state: DensityOperator) -> Self {
        Self { state }
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }
}

impl FrameOracle for BornFrame {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn eval(&self, effect: &Effect) -> f64 {
        hs_inner(self.state.op(), effect.op())
            .expect("effect dimension matches oracle")
            .clamp(0.0, 1.0)
    }
}

pub fn born_frame(state: DensityOperator) -> BornFrame {
    BornFrame::new(state)
}

/// Wraps a closure as an oracle. Used for candidate assignments that are
/// not (or not known to be) frame functions.
pub struct FnOracle<F> {
    dim: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&Effect) -> f64 + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> FrameOracle for FnOracle<F>
where
    F: Fn(&Effect) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, effect: &Effect) -> f64 {
        (self.f)(effect)
    }
}

/// `H = alpha_pos E_pos - alpha_neg E_neg` with `E_pos`, `E_neg` effects.
#[derive(Debug, Clone)]
pub struct PositiveSplit {
    pub alpha_pos: f64,
    pub effect_pos: Effect,
    pub alpha_neg: f64,
    pub effect_neg: Effect,
}

/// Splits `H` by the sign of its eigenvalues and scales each part into the
/// effect set with `alpha = max(largest eigenvalue of the part, 1)`.
pub fn positive_split(h: &HermitianOperator) -> PositiveSplit {
    let spec = h.spectrum();
    let top = spec.eigenvalues.last().copied().unwrap_or(0.0);
    let bottom = spec.eigenvalues.first().copied().unwrap_or(0.0);
    let alpha_pos = top.max(1.0);
    let alpha_neg = (-bottom).max(1.0);
    let effect_pos = Effect::new(spec.map(|l| l.max(0.0) / alpha_pos)).expect("scaled into [0, 1]");
    let effect_neg = Effect::new(spec.map(|l| (-l).max(0.0) / alpha_neg)).expect("scaled into [0, 1]");
    PositiveSplit {
        alpha_pos,
        effect_pos,
        alpha_neg,
        effect_neg,
    }
}

/// Linear extension of a frame function to a Hermitian operator:
/// `f(H) = alpha_pos f(E_pos) - alpha_neg f(E_neg)`.
pub fn extend_to_hermitian(f: &dyn FrameOracle, h: &HermitianOperator) -> Result<f64> {
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: h.dim(),
        });
    }
    let split = positive_split(h);
    Ok(split.alpha_pos * f.eval(&split.effect_pos) - split.alpha_neg * f.eval(&split.effect_neg))
}

/// `d^2` Hermitian operators orthonormal under the Hilbert-Schmidt product.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    elements: Vec<HermitianOperator>,
}

impl OperatorBasis {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::Malformed("empty operator basis".into()));
        };
        let d = first.dim();
        if elements.len() != d * d {
            return Err(Error::Malformed(format!(
                "basis for dimension {d} needs {} elements, got {}",
                d * d,
                elements.len()
            )));
        }
        let mut worst: f64 = 0.0;
        for (j, a) in elements.iter().enumerate() {
            for (k, b) in elements.iter().enumerate().skip(j) {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((hs_inner(a, b)? - target).abs());
            }
        }
        if worst > tol::BASIS {
            return Err(Error::NotOrthonormal {
                max_deviation: worst,
            });
        }
        Ok(Self { elements })
    }

    /// `1/sqrt(d)` followed by the generalized Gell-Mann matrices scaled to
    /// unit norm: symmetric, antisymmetric, then diagonal.
    pub fn gell_mann(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(&HermitianOperator::identity(dim) * (1.0 / (dim as f64).sqrt()));
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut m = CMatrix::zeros(dim, dim);
                m[(j, k)] = Complex64::new(r, 0.0);
                m[(k, j)] = Complex64::new(r, 0.0);
                elements.push(HermitianOperator::new(m).expect("real symmetric"));
            }
        }
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut m = CMatrix::zeros(dim, dim);
                m[(j, k)] = Complex64::new(0.0, -r);
                m[(k, j)] = Complex64::new(0.0, r);
                elements.push(HermitianOperator::new(m).expect("Hermitian by construction"));
            }
        }
        for l in 1..dim {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let diag: Vec<f64> = (0..dim)
                .map(|k| match k.cmp(&l) {
                    std::cmp::Ordering::Less => norm,
                    std::cmp::Ordering::Equal => -(l as f64) * norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect();
            elements.push(HermitianOperator::from_real_diagonal(&diag));
        }
        Self { elements }
    }

    /// `tau'_j = sum_k O_jk U tau_k U^dagger` for a random unitary `U` and a
    /// random real orthogonal `O` on operator space.
    pub fn random(dim: usize, rng: &mut SeededRng) -> Self {
        let base = Self::gell_mann(dim);
        let u = random::unitary(dim, rng);
        let o = random::orthogonal(dim * dim, rng);
        let conj: Vec<HermitianOperator> = base.elements.iter().map(|t| t.conjugate_by(&u)).collect();
        let elements = (0..dim * dim)
            .map(|j| HermitianOperator::linear_combination(dim, (0..dim * dim).map(|k| (o[(j, k)], &conj[k]))))
            .collect();
        Self::new(elements).expect("orthogonal mixing of an orthonormal basis")
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }
}

/// `W = sum_j f(tau_j) tau_j`, validated as a density operator.
pub fn reconstruct_density(f: &dyn FrameOracle, basis: &OperatorBasis) -> Result<DensityOperator> {
    let coeffs = basis
        .elements()
        .iter()
        .map(|t| extend_to_hermitian(f, t))
        .collect::<Result<Vec<_>>>()?;
    let w = HermitianOperator::linear_combination(basis.dim(), coeffs.iter().copied().zip(basis.elements()));
    DensityOperator::new(w)
}

/// The `d^2` effects whose frame values determine the state: the identity,
/// then `(1 + tau_j)/2` for each traceless element of the default basis.
pub fn sample_effects(dim: usize) -> Vec<Effect> {
    let basis = OperatorBasis::gell_mann(dim);
    let id = HermitianOperator::identity(dim);
    std::iter::once(Effect::identity(dim))
        .chain(
            basis.elements()[1..]
                .iter()
                .map(|t| Effect::new(&(&id + t) * 0.5).expect("unit-norm traceless element has spectrum in [-1, 1]")),
        )
        .collect()
}

/// Inverts [`sample_effects`]: given `v_0 = f(1)` and `v_j = f((1 + tau_j)/2)`,
/// `W = v_0 / sqrt(d) tau_0 + sum_j (2 v_j - v_0) tau_j`.
pub fn reconstruct_from_samples(dim: usize, values: &[f64]) -> Result<DensityOperator> {
    if values.len() != dim * dim {
        return Err(Error::MissingSamples {
            missing: (dim * dim).saturating_sub(values.len()),
            required: dim * dim,
        });
    }
    let basis = OperatorBasis::gell_mann(dim);
    let v0 = values[0];
    let coeffs: Vec<f64> = std::iter::once(v0 / (dim as f64).sqrt())
        .chain(values[1..].iter().map(|v| 2.0 * v - v0))
        .collect();
    let w = HermitianOperator::linear_combination(dim, coeffs.iter().copied().zip(basis.elements()));
    DensityOperator::new(w)
}

/// Largest violations of the frame laws found by [`check_frame_laws`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameLawReport {
    pub additivity_max_dev: f64,
    pub homogeneity_max_dev: f64,
    pub order_violations: usize,
    pub trials: usize,
    pub seed: u64,
}

struct Trial {
    part_a: Effect,
    part_b: Effect,
    whole: Effect,
    base: Effect,
    scaled: Effect,
    ratio: f64,
    lower: Effect,
    upper: Effect,
}

fn draw_trial(dim: usize, rng: &mut SeededRng) -> Trial {
    use rand::Rng;

    let a = random::effect(dim, rng);
    let b = random::effect(dim, rng);
    let t: f64 = rng.random();
    let part_a = Effect::new(a.op() * t).expect("scaled effect");
    let part_b = Effect::new(b.op() * (1.0 - t)).expect("scaled effect");
    let whole = Effect::new(part_a.op() + part_b.op()).expect("convex combination");

    let base = random::effect(dim, rng);
    let den: u32 = rng.random_range(1..=8);
    let num: u32 = rng.random_range(0..=den);
    let ratio = num as f64 / den as f64;
    let scaled = Effect::new(base.op() * ratio).expect("ratio in [0, 1]");

    let c = random::effect(dim, rng);
    let d = random::effect(dim, rng);
    let s: f64 = rng.random();
    let lower = Effect::new(c.op() * s).expect("scaled effect");
    let upper = Effect::new(lower.op() + &(d.op() * (1.0 - s))).expect("convex combination");

    Trial {
        part_a,
        part_b,
        whole,
        base,
        scaled,
        ratio,
        lower,
        upper,
    }
}

/// Probes additivity `f(E1) + f(E2) = f(E1 + E2)`, rational homogeneity
/// `f((n/m) E) = (n/m) f(E)` for `n <= m <= 8`, and monotonicity
/// `E1 <= E2 => f(E1) <= f(E2)` on `trials` seeded random instances.
///
/// Instances are drawn sequentially from the seed; the oracle is then
/// evaluated in parallel and reduced with `max`/count, so the report does
/// not depend on scheduling.
pub fn check_frame_laws(f: &dyn FrameOracle, trials: usize, seed: u64) -> FrameLawReport {
    let dim = f.dim();
    let mut rng = random::rng(seed);
    let instances: Vec<Trial> = (0..trials).map(|_| draw_trial(dim, &mut rng)).collect();

    let results: Vec<(f64, f64, bool)> = instances
        .par_iter()
        .map(|t| {
            let add = (f.eval(&t.part_a) + f.eval(&t.part_b) - f.eval(&t.whole)).abs();
            let hom = (f.eval(&t.scaled) - t.ratio * f.eval(&t.base)).abs();
            let violated = f.eval(&t.lower) > f.eval(&t.upper) + tol::FRAME;
            (add, hom, violated)
        })
        .collect();

    FrameLawReport {
        additivity_max_dev: results.iter().map(|r| r.0).fold(0.0, f64::max),
        homogeneity_max_dev: results.iter().map(|r| r.1).fold(0.0, f64::max),
        order_violations: results.iter().filter(|r| r.2).count(),
        trials,
        seed,
    }
}
