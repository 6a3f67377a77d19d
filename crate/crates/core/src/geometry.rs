//! Qubit effect geometry: the Bloch double cone, fiducial vector sets and
//! their POVMs, proper rotations, and the second-moment (l = 2) test.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::operator::{Effect, HermitianOperator, Povm};
use crate::tol;

/// Two-dimensional effect `r 1 + s n.sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochEffect {
    pub r: f64,
    pub s: f64,
    pub axis: Vector3<f64>,
    /// Set when `s` is too small for the axis to be determined; `axis` is then `e_z`.
    pub axis_arbitrary: bool,
}

const CONE_TOL: f64 = 1e-12;
const AXIS_FLOOR: f64 = 1e-14;

impl BlochEffect {
    pub fn new(r: f64, s: f64, axis: Vector3<f64>) -> Result<Self> {
        let norm = axis.norm();
        if (norm - 1.0).abs() > tol::UNIT {
            return Err(Error::NotUnitVector { norm });
        }
        let b = Self {
            r,
            s,
            axis,
            axis_arbitrary: false,
        };
        b.check_cone()?;
        Ok(b)
    }

    fn check_cone(&self) -> Result<()> {
        let (r, s) = (self.r, self.s);
        let inside = (-CONE_TOL..=1.0 + CONE_TOL).contains(&r)
            && s >= -CONE_TOL
            && s <= r.min(1.0 - r) + CONE_TOL;
        if inside {
            Ok(())
        } else {
            Err(Error::OutsideCone { r, s })
        }
    }

    /// Eigenvalues `r -+ s`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        (self.r - self.s, self.r + self.s)
    }

    pub fn bloch_vector(&self) -> Vector3<f64> {
        self.axis * self.s
    }
}

/// `r 1 + s n.sigma` as an [`Effect`].
pub fn effect_from_bloch(b: &BlochEffect) -> Result<Effect> {
    b.check_cone()?;
    let op = &(&HermitianOperator::identity(2) * b.r)
        + &(&HermitianOperator::pauli_dot(to_array(&b.axis)) * b.s);
    Effect::new(op)
}

/// Inverse of [`effect_from_bloch`]: `r = tr(E)/2`, `s n = tr(E sigma)/2`.
pub fn bloch_from_effect(e: &Effect) -> Result<BlochEffect> {
    if e.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: e.dim(),
        });
    }
    let m = e.op().matrix();
    let r = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let v = Vector3::new(m[(0, 1)].re, -m[(0, 1)].im, 0.5 * (m[(0, 0)].re - m[(1, 1)].re));
    let s = v.norm();
    let (axis, axis_arbitrary) = if s < AXIS_FLOOR {
        (Vector3::z(), true)
    } else {
        (v / s, false)
    };
    Ok(BlochEffect {
        r,
        s,
        axis,
        axis_arbitrary,
    })
}

fn to_array(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Proper rotation of three-space (active convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    matrix: Matrix3<f64>,
}

impl Rotation3 {
    /// Validates `R R^T = I` and `det R = 1` within `1e-12`.
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        let ortho = (matrix * matrix.transpose() - Matrix3::identity()).amax();
        if ortho > 1e-12 {
            return Err(Error::NotRotation(format!("R R^T deviates from I by {ortho:.3e}")));
        }
        let det = matrix.determinant();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::NotRotation(format!("determinant {det}")));
        }
        Ok(Self { matrix })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix3::identity(),
        }
    }

    /// Right-handed rotation by `angle` radians about `axis` (Rodrigues).
    pub fn about_axis(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let norm = axis.norm();
        if norm < 1e-12 {
            return Err(Error::NotUnitVector { norm });
        }
        let k = axis / norm;
        let cross = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
        let matrix = Matrix3::identity() + cross * angle.sin() + cross * cross * (1.0 - angle.cos());
        Ok(Self { matrix })
    }

    /// Rotation of the unit quaternion `(w, x, y, z)`.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let [w, x, y, z] = q;
        let matrix = Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        );
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * v
    }

    pub fn compose(&self, other: &Rotation3) -> Rotation3 {
        Rotation3 {
            matrix: self.matrix * other.matrix,
        }
    }
}

/// `N >= 2` unit vectors summing to zero: a fiducial qubit POVM.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVectorSet {
    vectors: Vec<Vector3<f64>>,
}

impl UnitVectorSet {
    pub fn new(vectors: Vec<Vector3<f64>>) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::TooFewVectors {
                min: 2,
                found: vectors.len(),
            });
        }
        for v in &vectors {
            let norm = v.norm();
            if (norm - 1.0).abs() > tol::UNIT {
                return Err(Error::NotUnitVector { norm });
            }
        }
        let residue = vectors.iter().sum::<Vector3<f64>>().norm();
        if residue > tol::vector_sum(vectors.len()) {
            return Err(Error::IncompleteVectorSet { residue });
        }
        Ok(Self { vectors })
    }

    /// Normalizes every vector within `1e-6` of unit length, then validates.
    pub fn normalized(vectors: Vec<Vector3<f64>>) -> Result<Self> {
        let vectors = vectors
            .into_iter()
            .map(|v| {
                let norm = v.norm();
                if (norm - 1.0).abs() > 1e-6 {
                    Err(Error::NotUnitVector { norm })
                } else {
                    Ok(v / norm)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors)
    }

    pub fn vectors(&self) -> &[Vector3<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Set union; the result is valid because both parts sum to zero.
    pub fn union(&self, other: &UnitVectorSet) -> UnitVectorSet {
        let mut vectors = self.vectors.clone();
        vectors.extend_from_slice(&other.vectors);
        UnitVectorSet { vectors }
    }

    pub fn negated(&self) -> UnitVectorSet {
        UnitVectorSet {
            vectors: self.vectors.iter().map(|v| -v).collect(),
        }
    }

    /// `true` if `-n` is in the set (within `eps`) for every `n`.
    pub fn is_antipodal(&self, eps: f64) -> bool {
        self.vectors
            .iter()
            .all(|v| self.vectors.iter().any(|w| (v + w).norm() <= eps))
    }

    /// Same vectors up to order, within `eps` per vector.
    pub fn same_as(&self, other: &UnitVectorSet, eps: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.vectors.iter().all(|v| {
            let hit = other
                .vectors
                .iter()
                .enumerate()
                .position(|(k, w)| !used[k] && (v - w).amax() <= eps);
            match hit {
                Some(k) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }
}

/// The POVM `{(1/N)(1 + n_j.sigma)}`.
pub fn effects_from_vector_set(set: &UnitVectorSet) -> Result<Povm> {
    let inv_n = 1.0 / set.len() as f64;
    let id = HermitianOperator::identity(2);
    let ops = set
        .vectors()
        .iter()
        .map(|n| &(&id + &HermitianOperator::pauli_dot(to_array(n))) * inv_n)
        .collect();
    Povm::from_operators(ops)
}

pub fn rotate_set(set: &UnitVectorSet, rotation: &Rotation3) -> UnitVectorSet {
    UnitVectorSet {
        vectors: set.vectors.iter().map(|v| rotation.apply(v)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoment {
    pub matrix: Matrix3<f64>,
    pub isotropic: bool,
}

/// `M_kl = sum_j (n_j)_k (n_j)_l`, isotropic iff `M = (N/3) I` entrywise
/// within [`tol::isotropy`].
pub fn second_moment(set: &UnitVectorSet) -> SecondMoment {
    let matrix: Matrix3<f64> = set.vectors().iter().map(|n| n * n.transpose()).sum();
    let n = set.len();
    let target = Matrix3::identity() * (n as f64 / 3.0);
    let isotropic = (matrix - target).amax() <= tol::isotropy(n);
    SecondMoment { matrix, isotropic }
}
