//! Built-in fiducial vector sets: trine, tetrahedra, the other platonic
//! solids, regular polygons and the antipodal pair, together with the
//! closed-form admissibility answers that the numerical analysis is checked
//! against.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::UnitVectorSet;
use crate::harmonics::{admissible_harmonics_default, AdmissibilitySet};
use crate::tol;

pub const NAMES: [&str; 9] = [
    "trine",
    "tet1",
    "tet2",
    "octahedron",
    "cube",
    "dodecahedron",
    "icosahedron",
    "polygon",
    "antipodal",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub parameter: Option<usize>,
    pub vectors: UnitVectorSet,
    pub notes: String,
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn set(vectors: Vec<Vector3<f64>>) -> UnitVectorSet {
    UnitVectorSet::new(vectors).expect("catalog sets are valid by construction")
}

/// `e_x` and `-e_x/2 +- (sqrt(3)/2) e_z`.
pub fn trine() -> UnitVectorSet {
    let s = 3f64.sqrt() / 2.0;
    set(vec![
        Vector3::x(),
        Vector3::new(-0.5, 0.0, s),
        Vector3::new(-0.5, 0.0, -s),
    ])
}

/// Tetrahedron with a vertex on `e_x`.
pub fn tet1() -> UnitVectorSet {
    let third = 1.0 / 3.0;
    let r2 = 2f64.sqrt();
    let y = (2.0f64 / 3.0).sqrt();
    set(vec![
        Vector3::x(),
        Vector3::new(-third, 0.0, -2.0 * r2 / 3.0),
        Vector3::new(-third, y, r2 / 3.0),
        Vector3::new(-third, -y, r2 / 3.0),
    ])
}

/// [`tet1`] rotated by -90 degrees about `e_y`: a vertex on `e_z`.
pub fn tet2() -> UnitVectorSet {
    let third = 1.0 / 3.0;
    let r2 = 2f64.sqrt();
    let y = (2.0f64 / 3.0).sqrt();
    set(vec![
        Vector3::z(),
        Vector3::new(2.0 * r2 / 3.0, 0.0, -third),
        Vector3::new(-r2 / 3.0, y, -third),
        Vector3::new(-r2 / 3.0, -y, -third),
    ])
}

/// `{+-e_x, +-e_y, +-e_z}`.
pub fn octahedron() -> UnitVectorSet {
    set(vec![
        Vector3::x(),
        -Vector3::x(),
        Vector3::y(),
        -Vector3::y(),
        Vector3::z(),
        -Vector3::z(),
    ])
}

/// Octahedron with vertices on `+-e_x` and in the four quadrants of the y-z plane.
pub fn octahedron_quadrants() -> UnitVectorSet {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    set(vec![
        Vector3::x(),
        -Vector3::x(),
        Vector3::new(0.0, h, h),
        Vector3::new(0.0, -h, h),
        Vector3::new(0.0, h, -h),
        Vector3::new(0.0, -h, -h),
    ])
}

/// [`tet1`] together with its antipodes.
pub fn cube() -> UnitVectorSet {
    let t = tet1();
    t.union(&t.negated())
}

fn cyclic(v: Vector3<f64>) -> [Vector3<f64>; 3] {
    [v, Vector3::new(v.z, v.x, v.y), Vector3::new(v.y, v.z, v.x)]
}

fn signed_cyclic(a: f64, b: f64) -> Vec<Vector3<f64>> {
    let mut out = Vec::with_capacity(12);
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            out.extend(cyclic(Vector3::new(0.0, sa * a, sb * b)));
        }
    }
    out
}

/// Cyclic permutations of `(0, +-1, +-phi) / sqrt(1 + phi^2)`.
pub fn icosahedron() -> UnitVectorSet {
    let phi = golden();
    let n = (1.0 + phi * phi).sqrt();
    set(signed_cyclic(1.0 / n, phi / n))
}

/// `(+-1, +-1, +-1)/sqrt(3)` and cyclic permutations of `(0, +-1/phi, +-phi)/sqrt(3)`.
pub fn dodecahedron() -> UnitVectorSet {
    let phi = golden();
    let s = 3f64.sqrt();
    let mut v = Vec::with_capacity(20);
    for x in [1.0, -1.0] {
        for y in [1.0, -1.0] {
            for z in [1.0, -1.0] {
                v.push(Vector3::new(x, y, z) / s);
            }
        }
    }
    v.extend(signed_cyclic(1.0 / (phi * s), phi / s));
    set(v)
}

/// Regular `N`-gon in the x-y plane, vertices at angles `2 pi j / N`.
pub fn polygon(n: usize) -> Result<UnitVectorSet> {
    if n < 2 {
        return Err(Error::BadParameter(format!("polygon needs N >= 2, got {n}")));
    }
    Ok(set(
        (0..n)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n as f64;
                Vector3::new(a.cos(), a.sin(), 0.0)
            })
            .collect(),
    ))
}

/// `{e_z, -e_z}`.
pub fn antipodal() -> UnitVectorSet {
    set(vec![Vector3::z(), -Vector3::z()])
}

/// Looks up a catalog entry by name. `param` is required for, and only
/// accepted by, `polygon`.
pub fn builtin_set(name: &str, param: Option<usize>) -> Result<CatalogEntry> {
    let needs_param = name == "polygon";
    match (needs_param, param) {
        (true, None) => return Err(Error::BadParameter("polygon requires N".into())),
        (false, Some(_)) if NAMES.contains(&name) => {
            return Err(Error::BadParameter(format!("{name} takes no parameter")))
        }
        _ => {}
    }
    let (vectors, notes) = match name {
        "trine" => (trine(), "three coplanar vectors at 120 degrees in the x-z plane"),
        "tet1" => (tet1(), "regular tetrahedron, vertex on +x"),
        "tet2" => (tet2(), "tet1 rotated by -90 degrees about y, vertex on +z"),
        "octahedron" => (octahedron(), "coordinate axes, both signs"),
        "cube" => (cube(), "tet1 and its antipodes"),
        "dodecahedron" => (dodecahedron(), "20 vertices, golden-ratio construction"),
        "icosahedron" => (icosahedron(), "12 vertices, golden-ratio construction"),
        "polygon" => (
            polygon(param.expect("checked above"))?,
            "regular polygon in the x-y plane",
        ),
        "antipodal" => (antipodal(), "projective pair along z"),
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        parameter: param,
        vectors,
        notes: notes.to_string(),
    })
}

/// Closed-form admissible harmonics of the regular `N`-gon: `{0}` plus odd
/// `l`, all of them for even `N` and only `l <= N - 2` for odd `N`.
pub fn polygon_rule(n: usize, l_max: usize) -> Result<BTreeSet<usize>> {
    if n < 2 {
        return Err(Error::BadParameter(format!("polygon needs N >= 2, got {n}")));
    }
    let odd_cap = if n.is_multiple_of(2) { l_max } else { (n - 2).min(l_max) };
    Ok(std::iter::once(0)
        .chain((1..=odd_cap).step_by(2))
        .collect())
}

/// Every harmonic is admissible when the outcomes cover every direction:
/// the only constraint is the normalization of `c_00`.
pub fn uniform_povm_admissibility(l_max: usize) -> AdmissibilitySet {
    AdmissibilitySet {
        l_max,
        tol: 0.0,
        allowed: (0..=l_max).collect(),
        evidence: (0..=l_max).map(|l| (l, 0.0)).collect(),
        marginal: BTreeSet::new(),
    }
}

pub const PLATONIC: [&str; 5] = ["tetrahedron", "octahedron", "cube", "dodecahedron", "icosahedron"];

/// Highest degree covered by the reference table of platonic-solid harmonics.
pub const REFERENCE_L_MAX: usize = 15;

/// Reference even harmonics (besides the odd ones where applicable) for
/// each platonic solid, and whether all odd harmonics are admissible.
pub fn reference_harmonics(solid: &str) -> Option<(&'static [usize], bool)> {
    match solid {
        "tetrahedron" => Some((&[0, 1, 2, 5], false)),
        "octahedron" | "cube" => Some((&[0, 2], true)),
        "dodecahedron" | "icosahedron" => Some((&[0, 2, 4, 8, 14], true)),
        _ => None,
    }
}

/// Reference admissible set of a platonic solid truncated at `l_max`.
pub fn reference_set(solid: &str, l_max: usize) -> Option<BTreeSet<usize>> {
    let (listed, odds) = reference_harmonics(solid)?;
    let mut out: BTreeSet<usize> = listed.iter().copied().filter(|&l| l <= l_max).collect();
    if odds {
        out.extend((1..=l_max).step_by(2));
    }
    Some(out)
}

pub fn platonic_set(solid: &str) -> Option<UnitVectorSet> {
    Some(match solid {
        "tetrahedron" => tet1(),
        "octahedron" => octahedron(),
        "cube" => cube(),
        "dodecahedron" => dodecahedron(),
        "icosahedron" => icosahedron(),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatonicRow {
    pub solid: String,
    pub vertices: usize,
    pub allowed: Vec<usize>,
    /// Agreement with the reference table on `l <= min(l_max, 15)`.
    pub matches_reference: bool,
    /// Admissible degrees above the reference range.
    pub beyond_reference: Vec<usize>,
    pub marginal: Vec<usize>,
    pub evidence: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlatonicTable {
    pub l_max: usize,
    pub rows: Vec<PlatonicRow>,
}

/// Admissible harmonics of all five platonic solids up to `l_max`.
pub fn platonic_table(l_max: usize) -> Result<PlatonicTable> {
    if l_max < 5 {
        return Err(Error::BadParameter(format!("table needs l_max >= 5, got {l_max}")));
    }
    let rows = PLATONIC
        .iter()
        .map(|&solid| {
            let vectors = platonic_set(solid).expect("known solid");
            let adm = admissible_harmonics_default(&vectors, l_max);
            let cutoff = l_max.min(REFERENCE_L_MAX);
            let reference = reference_set(solid, cutoff).expect("known solid");
            let found: BTreeSet<usize> = adm.allowed.iter().copied().filter(|&l| l <= cutoff).collect();
            PlatonicRow {
                solid: solid.to_string(),
                vertices: vectors.len(),
                allowed: adm.allowed_list(),
                matches_reference: found == reference,
                beyond_reference: adm.allowed.iter().copied().filter(|&l| l > REFERENCE_L_MAX).collect(),
                marginal: adm.marginal.iter().copied().collect(),
                evidence: adm.evidence,
            }
        })
        .collect();
    Ok(PlatonicTable { l_max, rows })
}

/// Default zero threshold for a catalog entry.
pub fn default_tol(set: &UnitVectorSet) -> f64 {
    tol::harmonic_zero(set.len())
}
