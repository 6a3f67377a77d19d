//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use qframe::catalog::{self, platonic_table, polygon, polygon_rule, REFERENCE_L_MAX};
use qframe::frame::{born_frame, check_frame_laws, reconstruct_density, FnOracle, OperatorBasis};
use qframe::geometry::{rotate_set, second_moment, Rotation3};
use qframe::harmonics::{
    admissible_harmonics_default, assoc_legendre, born_coefficients, check_povm_normalization, sum_condition,
    FrameCoefficients,
};
use qframe::operator::{hs_inner, Effect, HermitianOperator};
use qframe::random;
use qframe::tol;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn set_of(items: &[usize]) -> BTreeSet<usize> {
    items.iter().copied().collect()
}

fn trine_rule() -> Outcome {
    let start = Instant::now();
    let adm = admissible_harmonics_default(&catalog::trine(), 20);
    let elapsed = start.elapsed();
    check(
        adm.allowed == set_of(&[0, 1]) && elapsed < Duration::from_secs(1),
        format!("allowed {:?}, {elapsed:.2?}", adm.allowed_list()),
    )
}

fn tetrahedron_spectrum() -> Outcome {
    let set = catalog::tet1();
    let adm = admissible_harmonics_default(&set, 17);
    let tol_zero = tol::harmonic_zero(set.len());
    let margin = (0..=17)
        .filter(|l| ![1, 2, 5].contains(l))
        .map(|l| sum_condition(&set, l).max_abs / tol_zero)
        .fold(f64::INFINITY, f64::min);
    check(
        adm.allowed == set_of(&[0, 1, 2, 5]) && margin >= 1e3,
        format!("allowed {:?}, smallest nonzero evidence {margin:.3e} x tol", adm.allowed_list()),
    )
}

fn legendre_anchors() -> Outcome {
    let p50 = assoc_legendre(5, 0, -1.0 / 3.0).map_err(|e| e.to_string())?;
    let p53 = assoc_legendre(5, 3, -1.0 / 3.0).map_err(|e| e.to_string())?;
    check(
        (p50 + 1.0 / 3.0).abs() <= 1e-12 && p53.abs() <= 1e-12,
        format!("P5(-1/3) = {p50:.15}, P5^3(-1/3) = {p53:.3e}"),
    )
}

fn platonic() -> Outcome {
    let start = Instant::now();
    let table = platonic_table(17).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for row in &table.rows {
        let found: BTreeSet<usize> = row.allowed.iter().copied().filter(|&l| l <= REFERENCE_L_MAX).collect();
        let expected = catalog::reference_set(&row.solid, REFERENCE_L_MAX).unwrap();
        if found != expected || !row.matches_reference {
            bad.push(row.solid.clone());
        }
    }
    // The reference itself, independent of the catalog encoding.
    let odds: Vec<usize> = (1..=REFERENCE_L_MAX).step_by(2).collect();
    let with_odds = |evens: &[usize]| -> BTreeSet<usize> { evens.iter().chain(&odds).copied().collect() };
    let literal = [
        ("tetrahedron", set_of(&[0, 1, 2, 5])),
        ("octahedron", with_odds(&[0, 2])),
        ("cube", with_odds(&[0, 2])),
        ("dodecahedron", with_odds(&[0, 2, 4, 8, 14])),
        ("icosahedron", with_odds(&[0, 2, 4, 8, 14])),
    ];
    for (solid, expected) in &literal {
        let row = table.rows.iter().find(|r| r.solid == *solid).unwrap();
        let found: BTreeSet<usize> = row.allowed.iter().copied().filter(|&l| l <= REFERENCE_L_MAX).collect();
        if &found != expected {
            bad.push(format!("{solid} (literal)"));
        }
    }
    check(
        bad.is_empty() && elapsed < Duration::from_secs(30),
        format!("mismatches {bad:?}, {elapsed:.2?}"),
    )
}

fn polygons() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=9 {
        let adm = admissible_harmonics_default(&polygon(n).unwrap(), 20);
        if adm.allowed != polygon_rule(n, 20).unwrap() {
            bad.push(n);
        }
    }
    let pentagon = admissible_harmonics_default(&polygon(5).unwrap(), 20).allowed;
    check(
        bad.is_empty() && pentagon == set_of(&[0, 1, 3]),
        format!("N = 2..9, mismatches {bad:?}, pentagon {pentagon:?}"),
    )
}

fn second_moments() -> Outcome {
    let tet = second_moment(&catalog::tet1()).matrix;
    let tet_err = (tet - Matrix3::identity() * (4.0 / 3.0)).amax();
    let trine = second_moment(&catalog::trine()).matrix;
    let trine_err = (trine - Matrix3::from_diagonal(&Vector3::new(1.5, 0.0, 1.5))).amax();
    check(
        tet_err <= 1e-12 && trine_err <= 1e-12,
        format!("tet1 error {tet_err:.3e}, trine error {trine_err:.3e}"),
    )
}

fn reconstruction() -> Outcome {
    let mut rng = random::rng(7);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let dim = 2 + k % 3;
        let w = random::density(dim, &mut rng);
        let back = reconstruct_density(&born_frame(w.clone()), &OperatorBasis::gell_mann(dim)).map_err(|e| e.to_string())?;
        worst = worst.max((back.op() - w.op()).hs_norm());
    }
    let w = random::density(2, &mut rng);
    let reference = reconstruct_density(&born_frame(w.clone()), &OperatorBasis::gell_mann(2)).map_err(|e| e.to_string())?;
    let mut spread: f64 = 0.0;
    for _ in 0..10 {
        let basis = OperatorBasis::random(2, &mut rng);
        let other = reconstruct_density(&born_frame(w.clone()), &basis).map_err(|e| e.to_string())?;
        spread = spread.max((other.op() - reference.op()).hs_norm());
    }
    check(
        worst <= 1e-10 && spread <= 1e-9,
        format!("roundtrip {worst:.3e}, basis spread {spread:.3e}"),
    )
}

fn frame_laws() -> Outcome {
    let mut rng = random::rng(8);
    let mut details = Vec::new();
    let mut ok = true;
    for dim in [2, 3] {
        let w = random::density(dim, &mut rng);
        let r = check_frame_laws(&born_frame(w), 1000, 100 + dim as u64);
        ok &= r.additivity_max_dev <= 1e-12 && r.homogeneity_max_dev <= 1e-12 && r.order_violations == 0;
        details.push(format!(
            "d={dim} born add {:.1e} hom {:.1e} order {}",
            r.additivity_max_dev, r.homogeneity_max_dev, r.order_violations
        ));

        let constant = FnOracle::new(dim, |_: &Effect| 0.5);
        let r = check_frame_laws(&constant, 1000, 200 + dim as u64);
        let dev = r.additivity_max_dev.max(r.homogeneity_max_dev);
        ok &= dev > 1e-2;
        details.push(format!("const {dev:.2}"));

        let mut diag = vec![0.0; dim];
        diag[0] = 1.0;
        let pure = HermitianOperator::from_real_diagonal(&diag);
        let quadratic = FnOracle::new(dim, move |e: &Effect| hs_inner(&pure, e.op()).unwrap().powi(2));
        let r = check_frame_laws(&quadratic, 1000, 300 + dim as u64);
        let dev = r.additivity_max_dev.max(r.homogeneity_max_dev);
        ok &= dev > 1e-2;
        details.push(format!("quad {dev:.2}"));
    }
    check(ok, details.join(", "))
}

fn decomposition() -> Outcome {
    let mut rng = random::rng(9);
    let (mut rec, mut sum, mut idem): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut weights_in_range = true;
    for k in 0..200 {
        let e = random::effect(1 + k % 6, &mut rng);
        let dec = e.convex_decompose();
        rec = rec.max((&dec.reconstruct() - e.op()).max_abs());
        sum = sum.max((dec.weight_sum() - 1.0).abs());
        for t in &dec.terms {
            weights_in_range &= (0.0..=1.0).contains(&t.weight);
            idem = idem.max(t.projector.op().idempotence_defect());
        }
    }
    check(
        rec <= 1e-12 && sum <= 1e-12 && idem <= 1e-10 && weights_in_range,
        format!("reconstruction {rec:.3e}, weight sum {sum:.3e}, idempotence {idem:.3e}"),
    )
}

fn catalog_sets() -> Vec<(String, qframe::geometry::UnitVectorSet)> {
    let mut sets = Vec::new();
    for name in catalog::NAMES {
        if name == "polygon" {
            for n in [5, 6] {
                sets.push((format!("polygon {n}"), polygon(n).unwrap()));
            }
        } else {
            sets.push((name.to_string(), catalog::builtin_set(name, None).unwrap().vectors));
        }
    }
    sets
}

fn rotation_invariance() -> Outcome {
    let mut rng = random::rng(10);
    let mut bad = Vec::new();
    for (name, set) in catalog_sets() {
        let base = admissible_harmonics_default(&set, 20).allowed;
        for _ in 0..20 {
            let rotated = rotate_set(&set, &random::rotation(&mut rng));
            if admissible_harmonics_default(&rotated, 20).allowed != base {
                bad.push(name.clone());
                break;
            }
        }
    }
    let turn = Rotation3::about_axis(&Vector3::y(), -FRAC_PI_2).unwrap();
    let same = rotate_set(&catalog::tet1(), &turn).same_as(&catalog::tet2(), 1e-12);
    check(bad.is_empty() && same, format!("changed {bad:?}, tet1 -> tet2 {same}"))
}

fn normalization() -> Outcome {
    let mut rng = random::rng(11);
    let rotations: Vec<Rotation3> = (0..50).map(|_| random::rotation(&mut rng)).collect();
    let p = random::unit_vector(&mut rng) * 0.8;
    let mut worst: f64 = 0.0;
    for set in [catalog::trine(), catalog::tet1(), catalog::octahedron()] {
        let coeffs = born_coefficients(set.len(), &p).map_err(|e| e.to_string())?;
        worst = worst.max(check_povm_normalization(&coeffs, &set, &rotations).map_err(|e| e.to_string())?);
    }
    let trine = catalog::trine();
    let born = born_coefficients(trine.len(), &p).map_err(|e| e.to_string())?;
    let mut tampered = FrameCoefficients::zeros(2);
    for l in 0..=born.l_max() {
        for m in -(l as i64)..=(l as i64) {
            tampered.set(l, m, born.get(l, m));
        }
    }
    tampered.set(2, 0, Complex64::new(0.1, 0.0));
    let injected = check_povm_normalization(&tampered, &trine, &rotations).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-10 && injected > 1e-3,
        format!("born {worst:.3e}, with c20 = 0.1 {injected:.3e}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("trine quantum rule", trine_rule),
        ("tetrahedron spectrum", tetrahedron_spectrum),
        ("legendre anchors", legendre_anchors),
        ("platonic table", platonic),
        ("polygon closed form", polygons),
        ("second moment", second_moments),
        ("reconstruction roundtrip", reconstruction),
        ("frame laws", frame_laws),
        ("convex decomposition", decomposition),
        ("rotation invariance", rotation_invariance),
        ("normalization", normalization),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
