//! Spherical harmonics and the harmonic sum conditions for qubit POVM
//! families.
//!
//! For a family generated by rotating a fiducial set `{n_j}`, a continuous
//! frame function `F(n) = sum c_lm Y_lm(n)` may contain the `l`-th harmonic
//! only if `sum_j Y_lr(n_j) = 0` for every `r`. [`sum_condition`] evaluates
//! those sums, and [`admissible_harmonics`] classifies each `l`.
//!
//! Conventions: `Y_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta) e^{i m phi}`
//! with the Condon-Shortley phase inside `P_l^m`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Rotation3, UnitVectorSet};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized polynomial parts `q_l^m(x)` for `l = m..=l_max` at fixed `m`,
/// so that `Y_lm(n) = q_l^m(n_z) (n_x + i n_y)^m`.
///
/// Seed `q_m^m = (-1)^m sqrt((2m+1)!! / (4 pi (2m)!!))`, then
/// `q_{m+1}^m = x sqrt(2m+3) q_m^m` and
/// `q_l^m = a_lm (x q_{l-1}^m - q_{l-2}^m / a_{l-1,m})`,
/// `a_lm = sqrt((4l^2 - 1)/(l^2 - m^2))`.
fn normalized_column(m: usize, l_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(l_max + 1 - m);
    let mut q = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let k = k as f64;
        q *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt();
    }
    out.push(q);
    if l_max == m {
        return out;
    }
    let mf = m as f64;
    out.push(x * (2.0 * mf + 3.0).sqrt() * q);
    let a = |l: f64| ((4.0 * l * l - 1.0) / (l * l - mf * mf)).sqrt();
    for l in (m + 2)..=l_max {
        let lf = l as f64;
        let prev = out[l - 1 - m];
        let prev2 = out[l - 2 - m];
        out.push(a(lf) * (x * prev - prev2 / a(lf - 1.0)));
    }
    out
}

/// Associated Legendre function `P_l^m(x)` with the Condon-Shortley phase.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::IndexOutOfRange {
            l: l as i64,
            m: m as i64,
        });
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::BadParameter(format!("x = {x} outside [-1, 1]")));
    }
    let q = normalized_column(m, l, x)[l - m];
    let sin_pow = (1.0 - x * x).max(0.0).powf(m as f64 / 2.0);
    // Undo the normalization sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!).
    let ln_ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| (k as f64).ln()).sum();
    let unscale = (4.0 * PI / (2 * l + 1) as f64).sqrt() * (0.5 * ln_ratio).exp();
    Ok(q * sin_pow * unscale)
}

fn check_unit(n: &Vector3<f64>) -> Result<()> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(())
}

/// Normalized spherical harmonic `Y_lm(n)` at a unit vector.
pub fn ylm(l: usize, m: i64, n: &Vector3<f64>) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::IndexOutOfRange { l: l as i64, m });
    }
    check_unit(n)?;
    let ma = m.unsigned_abs() as usize;
    let q = normalized_column(ma, l, n.z.clamp(-1.0, 1.0))[l - ma];
    let y = Complex64::new(n.x, n.y).powu(ma as u32) * q;
    Ok(if m < 0 { conj_sign(ma) * y.conj() } else { y })
}

fn conj_sign(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Y_lr(n)` for `r = -l..=l`, index `r + l`. `n` must be a unit vector.
fn ylm_row(l: usize, n: &Vector3<f64>) -> Vec<Complex64> {
    let mut row = vec![ZERO; 2 * l + 1];
    let z = n.z.clamp(-1.0, 1.0);
    let w = Complex64::new(n.x, n.y);
    let mut wpow = Complex64::new(1.0, 0.0);
    for m in 0..=l {
        let q = normalized_column(m, l, z)[l - m];
        let y = wpow * q;
        row[l + m] = y;
        if m > 0 {
            row[l - m] = conj_sign(m) * y.conj();
        }
        wpow *= w;
    }
    row
}

/// All `Y_lm(n)` for `l <= l_max`, index `l^2 + l + m`.
fn ylm_table(l_max: usize, n: &Vector3<f64>) -> Vec<Complex64> {
    let mut out = vec![ZERO; (l_max + 1) * (l_max + 1)];
    let z = n.z.clamp(-1.0, 1.0);
    let w = Complex64::new(n.x, n.y);
    let mut wpow = Complex64::new(1.0, 0.0);
    for m in 0..=l_max {
        let col = normalized_column(m, l_max, z);
        for l in m..=l_max {
            let y = wpow * col[l - m];
            out[l * l + l + m] = y;
            if m > 0 {
                out[l * l + l - m] = conj_sign(m) * y.conj();
            }
        }
        wpow *= w;
    }
    out
}

/// Pairwise (cascade) summation; the result depends only on the order of
/// `terms`, never on scheduling.
pub fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    match terms.len() {
        0 => ZERO,
        1 => terms[0],
        2 => terms[0] + terms[1],
        n => {
            let (a, b) = terms.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumConditionReport {
    pub l: usize,
    /// `S_lr = sum_j Y_lr(n_j)` for `r = -l..=l`, index `r + l`.
    pub values: Vec<Complex64>,
    pub max_abs: f64,
}

impl SumConditionReport {
    pub fn value(&self, r: i64) -> Complex64 {
        self.values[(r + self.l as i64) as usize]
    }
}

/// `S_lr = sum_j Y_lr(n_j)` for every `r`.
pub fn sum_condition(set: &UnitVectorSet, l: usize) -> SumConditionReport {
    let rows: Vec<Vec<Complex64>> = set.vectors().iter().map(|n| ylm_row(l, n)).collect();
    let values: Vec<Complex64> = (0..=2 * l)
        .map(|k| {
            let terms: Vec<Complex64> = rows.iter().map(|row| row[k]).collect();
            pairwise_sum(&terms)
        })
        .collect();
    let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    SumConditionReport { l, values, max_abs }
}

/// Harmonics `l <= l_max` permitted in frame functions for a family.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilitySet {
    pub l_max: usize,
    pub tol: f64,
    pub allowed: BTreeSet<usize>,
    /// `max_abs` of the sum condition for each `l`.
    pub evidence: BTreeMap<usize, f64>,
    /// Degrees whose evidence falls within two decades of `tol`.
    pub marginal: BTreeSet<usize>,
}

impl AdmissibilitySet {
    pub fn is_allowed(&self, l: usize) -> bool {
        self.allowed.contains(&l)
    }

    pub fn allowed_list(&self) -> Vec<usize> {
        self.allowed.iter().copied().collect()
    }
}

/// Classifies every `l <= l_max`: `0` and `1` are always allowed (normalization
/// and completeness); higher `l` are allowed iff `max_abs <= tol_zero`.
pub fn admissible_harmonics(set: &UnitVectorSet, l_max: usize, tol_zero: f64) -> AdmissibilitySet {
    let evidence: BTreeMap<usize, f64> = (0..=l_max)
        .into_par_iter()
        .map(|l| (l, sum_condition(set, l).max_abs))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut allowed = BTreeSet::new();
    let mut marginal = BTreeSet::new();
    for (&l, &v) in &evidence {
        if l <= 1 || v <= tol_zero {
            allowed.insert(l);
        }
        if l >= 1 && v > tol_zero / 100.0 && v < tol_zero * 100.0 {
            marginal.insert(l);
        }
    }
    AdmissibilitySet {
        l_max,
        tol: tol_zero,
        allowed,
        evidence,
        marginal,
    }
}

/// [`admissible_harmonics`] with the default threshold `1e-8 sqrt(N)`.
pub fn admissible_harmonics_default(set: &UnitVectorSet, l_max: usize) -> AdmissibilitySet {
    admissible_harmonics(set, l_max, tol::harmonic_zero(set.len()))
}

/// Spherical-harmonic coefficients `c_lm`, `|m| <= l <= l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoefficients {
    l_max: usize,
    c: Vec<Complex64>,
}

const REALITY_TOL: f64 = 1e-12;

impl FrameCoefficients {
    pub fn zeros(l_max: usize) -> Self {
        Self {
            l_max,
            c: vec![ZERO; (l_max + 1) * (l_max + 1)],
        }
    }

    fn index(&self, l: usize, m: i64) -> usize {
        assert!(l <= self.l_max && m.unsigned_abs() as usize <= l, "(l, m) = ({l}, {m}) out of range");
        ((l * l + l) as i64 + m) as usize
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        self.c[self.index(l, m)]
    }

    /// Sets a single coefficient without touching its `-m` partner.
    pub fn set(&mut self, l: usize, m: i64, value: Complex64) {
        let k = self.index(l, m);
        self.c[k] = value;
    }

    /// Sets `c_lm` and its partner `c_{l,-m} = (-1)^m conj(c_lm)`. For
    /// `m = 0` only the real part is kept.
    pub fn set_real_pair(&mut self, l: usize, m: i64, value: Complex64) {
        if m == 0 {
            self.set(l, 0, Complex64::new(value.re, 0.0));
        } else {
            self.set(l, m, value);
            self.set(l, -m, conj_sign(m.unsigned_abs() as usize) * value.conj());
        }
    }

    /// Checks `c_{l,-m} = (-1)^m conj(c_lm)` within `1e-12`.
    pub fn check_reality(&self) -> Result<()> {
        for l in 0..=self.l_max {
            for m in 0..=l {
                let c = self.get(l, m as i64);
                let partner = self.get(l, -(m as i64));
                let deviation = (partner - conj_sign(m) * c.conj()).norm();
                if deviation > REALITY_TOL {
                    return Err(Error::RealityViolated { l, m, deviation });
                }
            }
        }
        Ok(())
    }

    /// Multiplies every coefficient with `l >= 1` by `gamma`.
    pub fn scale_nonconstant(&self, gamma: f64) -> Self {
        let mut out = self.clone();
        for v in out.c.iter_mut().skip(1) {
            *v *= gamma;
        }
        out
    }

    fn eval_raw(&self, n: &Vector3<f64>) -> Complex64 {
        let table = ylm_table(self.l_max, n);
        self.c.iter().zip(&table).map(|(c, y)| c * y).sum()
    }
}

/// Coefficients of the quantum rule `F(n) = (1 + n.P)/N`.
pub fn born_coefficients(outcomes: usize, p: &Vector3<f64>) -> Result<FrameCoefficients> {
    if outcomes < 2 {
        return Err(Error::BadParameter(format!("need N >= 2 outcomes, got {outcomes}")));
    }
    let norm = p.norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidBlochVector { norm });
    }
    let n = outcomes as f64;
    let mut c = FrameCoefficients::zeros(1);
    c.set(0, 0, Complex64::new((4.0 * PI).sqrt() / n, 0.0));
    c.set(1, 0, Complex64::new((4.0 * PI / 3.0).sqrt() * p.z / n, 0.0));
    let k = (2.0 * PI / 3.0).sqrt() / n;
    c.set(1, 1, Complex64::new(-p.x, p.y) * k);
    c.set(1, -1, Complex64::new(p.x, p.y) * k);
    Ok(c)
}

/// `F(n) = sum c_lm Y_lm(n)` for real-valued coefficients. The imaginary
/// part, pure roundoff once the reality condition holds, is discarded.
pub fn evaluate_frame(coeffs: &FrameCoefficients, n: &Vector3<f64>) -> Result<f64> {
    coeffs.check_reality()?;
    check_unit(n)?;
    Ok(coeffs.eval_raw(n).re)
}

/// Max over `rotations` of `|sum_j F(R n_j) - 1|`.
pub fn check_povm_normalization(
    coeffs: &FrameCoefficients,
    set: &UnitVectorSet,
    rotations: &[Rotation3],
) -> Result<f64> {
    coeffs.check_reality()?;
    let mut worst: f64 = 0.0;
    for r in rotations {
        let total: f64 = set
            .vectors()
            .iter()
            .map(|n| coeffs.eval_raw(&r.apply(n)).re)
            .sum();
        worst = worst.max((total - 1.0).abs());
    }
    Ok(worst)
}

/// `n` points of the Fibonacci (golden-angle) spiral on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2 * k + 1) as f64 / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shrunk {
    pub coeffs: FrameCoefficients,
    pub shrink_factor: f64,
}

const BISECTION_STEPS: usize = 40;
/// Roundoff allowance, relative to the constant term, in the nonnegativity test.
const NONNEGATIVE_SLACK: f64 = 1e-12;

/// Largest `gamma` in `(0, 1]` such that `c_00 Y_00 + gamma (F - c_00 Y_00)`
/// is nonnegative on a Fibonacci grid of `grid_resolution` points plus one
/// Newton-refined point near the grid minimum.
pub fn shrink_to_nonnegative(coeffs: &FrameCoefficients, grid_resolution: usize) -> Result<Shrunk> {
    coeffs.check_reality()?;
    let c00 = coeffs.get(0, 0).re;
    if c00 <= 0.0 {
        return Err(Error::BadParameter(format!("c_00 = {c00} must be positive")));
    }
    if grid_resolution == 0 {
        return Err(Error::BadParameter("grid resolution must be positive".into()));
    }
    let constant = c00 / (4.0 * PI).sqrt();
    let varying = |n: &Vector3<f64>| coeffs.eval_raw(n).re - constant;

    let grid = fibonacci_sphere(grid_resolution);
    let mut samples: Vec<f64> = grid.iter().map(varying).collect();
    let (k_min, _) = samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty grid");
    if let Some(p) = newton_refine(&varying, &grid[k_min]) {
        samples.push(varying(&p));
    }

    let slack = NONNEGATIVE_SLACK * constant;
    let feasible = |gamma: f64| samples.iter().all(|g| constant + gamma * g >= -slack);
    let gamma = if feasible(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    Ok(Shrunk {
        coeffs: coeffs.scale_nonconstant(gamma),
        shrink_factor: gamma,
    })
}

/// One Newton step for a local minimum of `g` in tangent-plane coordinates
/// around `p`, using central differences. Returns the new point only if it
/// lowers `g`.
fn newton_refine(g: &impl Fn(&Vector3<f64>) -> f64, p: &Vector3<f64>) -> Option<Vector3<f64>> {
    let helper = if p.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = p.cross(&helper).normalize();
    let v = p.cross(&u);
    let at = |a: f64, b: f64| (p + u * a + v * b).normalize();
    let h = 1e-4;
    let f0 = g(p);
    let fa = (g(&at(h, 0.0)), g(&at(-h, 0.0)));
    let fb = (g(&at(0.0, h)), g(&at(0.0, -h)));
    let grad = [(fa.0 - fa.1) / (2.0 * h), (fb.0 - fb.1) / (2.0 * h)];
    let haa = (fa.0 - 2.0 * f0 + fa.1) / (h * h);
    let hbb = (fb.0 - 2.0 * f0 + fb.1) / (h * h);
    let hab = (g(&at(h, h)) - g(&at(h, -h)) - g(&at(-h, h)) + g(&at(-h, -h))) / (4.0 * h * h);
    let det = haa * hbb - hab * hab;
    if !(det > 0.0 && haa > 0.0) {
        return None;
    }
    let da = -(hbb * grad[0] - hab * grad[1]) / det;
    let db = -(-hab * grad[0] + haa * grad[1]) / det;
    let q = at(da, db);
    (g(&q) < f0).then_some(q)
}
