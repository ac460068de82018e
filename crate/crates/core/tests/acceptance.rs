//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use idemgeo::classify::{
    affine_relations, analyze, conjecture_scan, square_identity_residual, AlgebraReport, ConfigType, ScanStrategy,
};
use idemgeo::families::{make_family, random_generic_2d, random_generic_2d_of_type, random_generic_3d, FamilyParams, Real};
use idemgeo::ode::{integrate, phase_analysis, ray_invariance_check, FieldKind, StructuralLabel, Termination, VectorField};
use idemgeo::scalar::{int, rational};
use idemgeo::solver::{GenericityStatus, SolverConfig};
use idemgeo::{AnyAlgebra, Num, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn exact(n: &Num) -> Result<Rational, String> {
    n.exact.clone().ok_or_else(|| format!("expected an exact value, got {:?}", n.approx))
}

fn family(p: FamilyParams) -> AnyAlgebra {
    make_family(&p).expect("family").algebra
}

fn sigma_contains(r: &AlgebraReport, want: &[f64]) -> Result<(), String> {
    let sigma: Vec<f64> = r.sigma.iter().map(Num::re).collect();
    for w in want {
        ensure(sigma.iter().any(|s| (s - w).abs() < 1e-6), || format!("{w} missing from {sigma:?}"))?;
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for (tau, want) in [(int(2), ConfigType::TypeI), (int(3), ConfigType::TypeI), (rational(1, 2), ConfigType::TypeII), (rational(1, 3), ConfigType::TypeII)] {
        let start = Instant::now();
        let r = analyze(&family(FamilyParams::HTau(Real::Exact(tau.clone()))), &cfg());
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(took < Duration::from_secs(1), || format!("tau = {tau} took {took:?}"))?;
        // Closed forms: c_pm = (1/(1 - t^2), +-t/|1 - t^2|) with lambda = (1 + t^2)/(2(1 - t^2)), and (1, 0) with lambda = (1 - t^2)/2.
        let one = Rational::one();
        let t2 = &tau * &tau;
        let x1 = &one / (&one - &t2);
        let x2 = &tau / (&one - &t2).abs();
        let lpm = (&one + &t2) / (int(2) * (&one - &t2));
        let l3 = (&one - &t2) / int(2);
        let mut expected = vec![
            (x1.clone(), -x2.clone(), lpm.clone()),
            (x1, x2, lpm),
            (one.clone(), Rational::zero(), l3),
            (Rational::zero(), Rational::zero(), Rational::zero()),
        ];
        let mut got = Vec::new();
        for rec in &r.idempotents {
            let c = rec.exact.clone().ok_or("non-rational idempotent")?;
            let l = if rec.is_zero() { Rational::zero() } else { exact(&rec.lambda())? };
            got.push((c[0].clone(), c[1].clone(), l));
        }
        expected.sort();
        got.sort();
        ensure(got == expected, || format!("tau = {tau}: {got:?} != {expected:?}"))?;
        ensure(r.config_type == want, || format!("tau = {tau}: type {} instead of {want}", r.config_type))?;
    }
    Ok(format!("H(tau) closed forms and types for tau in {{2, 3, 1/2, 1/3}}, slowest {slowest:?}"))
}

fn criterion_2() -> Outcome {
    let alg = family(FamilyParams::DirectProduct(2));
    let r = analyze(&alg, &cfg());
    let charges: Vec<Rational> = r.charges.as_ref().ok_or("no charges")?.iter().map(exact).collect::<Result<_, _>>()?;
    ensure(charges == vec![int(-1), int(1), int(1), int(-1)], || format!("charges {charges:?}"))?;
    ensure(r.config_type == ConfigType::TypeIII, || format!("type {}", r.config_type))?;
    let phase = phase_analysis(&alg, &r).map_err(|e| e.to_string())?;
    let b = &phase.berlinskii;
    ensure(b.structural_label == StructuralLabel::QuadrilateralAlternating, || format!("{:?}", b.structural_label))?;
    let opposite = b.opposite.as_ref().ok_or("no opposite map")?;
    ensure(b.saddles.len() == 2 && opposite[b.saddles[0]] == b.saddles[1], || format!("saddles {:?} not opposite", b.saddles))?;
    Ok("R x R charges (-1, 1, 1, -1), TypeIII, saddles at opposite vertices".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let g = random_generic_2d(seed, true);
            let alg: AnyAlgebra = g.algebra.clone().into();
            let r = analyze(&alg, &cfg());
            let res = r.residuals.as_ref()?;
            if !res.all_exact_zero() {
                return Some(format!("seed {seed}: exact residuals {res:?}"));
            }
            let mut lambdas: Vec<Rational> = r.lambdas()?.iter().filter_map(|n| n.exact.clone()).collect();
            let mut spec = g.spectrum.to_vec();
            lambdas.sort();
            spec.sort();
            if lambdas != spec {
                return Some(format!("seed {seed}: spectrum {lambdas:?} != {spec:?}"));
            }
            let float = analyze(&alg.into_float(), &SolverConfig { force_numeric: true, ..cfg() });
            match float.residuals {
                Some(res) if res.max_abs() <= 1e-9 => None,
                other => Some(format!("seed {seed}: float residuals {other:?}")),
            }
        })
        .collect();
    let took = start.elapsed();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("1000 random spectra: exact residuals zero, float residuals <= 1e-9, {took:?}"))
}

fn criterion_4() -> Outcome {
    let circle = analyze(&family(FamilyParams::Circle3D), &cfg());
    ensure(circle.verdict.status == GenericityStatus::NonGenericHalfSpectrum, || format!("circle3d {}", circle.verdict.status))?;
    sigma_contains(&circle, &[1.0, 0.5, -0.5])?;
    let spin = analyze(&family(FamilyParams::SpinFactor(vec![vec![int(1), int(0)], vec![int(0), int(1)]])), &cfg());
    ensure(spin.verdict.status == GenericityStatus::NonGenericHalfSpectrum, || format!("spin {}", spin.verdict.status))?;
    sigma_contains(&spin, &[1.0, 0.0, 0.5])?;
    let complex = analyze(&family(FamilyParams::ComplexNumbers), &cfg());
    ensure(complex.verdict.status == GenericityStatus::Generic, || format!("complex {}", complex.verdict.status))?;
    ensure(complex.real_generic.real_generic == Some(false), || "complex numbers reported real generic".into())?;
    Ok("circle3d and spin contain 1/2 in their spectra; C is generic but not real generic".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let strategy = ScanStrategy { random_planes: 10_000, ..ScanStrategy::default() };
    let r3 = analyze(&family(FamilyParams::DirectProduct(3)), &cfg());
    let scan = conjecture_scan(&r3.real_points(), &strategy).map_err(|e| e.to_string())?;
    ensure(scan.max_count == 4 && scan.violations.is_empty(), || format!("R^3 max {} violations {}", scan.max_count, scan.violations.len()))?;
    let results: Vec<Result<usize, String>> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let g = random_generic_3d(seed, &cfg()).map_err(|e| format!("seed {seed}: {e}"))?;
            let r = analyze(&g.algebra.into(), &cfg());
            let s = ScanStrategy { seed, ..strategy.clone() };
            let scan = conjecture_scan(&r.real_points(), &s).map_err(|e| e.to_string())?;
            if scan.violations.is_empty() { Ok(scan.max_count) } else { Err(format!("seed {seed}: {} violations", scan.violations.len())) }
        })
        .collect();
    let took = start.elapsed();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    ensure(errors.is_empty(), || format!("{} failures, first: {}", errors.len(), errors[0]))?;
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    let worst = results.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
    Ok(format!("R^3 has at most 4 idempotents per plane; 100 random 3D algebras x 10000 planes, 0 violations (max {worst}), {took:?}"))
}

/// 200 random algebras of each type, analyzed once for criteria 6 and 7.
fn typed_sample() -> Vec<(ConfigType, AnyAlgebra, AlgebraReport)> {
    [ConfigType::TypeI, ConfigType::TypeII, ConfigType::TypeIII]
        .into_par_iter()
        .flat_map(|ty| {
            (0..200u64).into_par_iter().map(move |k| {
                let g = random_generic_2d_of_type(1000 * k + 7, ty, true);
                let alg: AnyAlgebra = g.algebra.into();
                let r = analyze(&alg, &cfg());
                (ty, alg, r)
            })
        })
        .collect()
}

fn criterion_6(sample: &[(ConfigType, AnyAlgebra, AlgebraReport)]) -> Outcome {
    let mut at_infinity: BTreeMap<String, BTreeSet<i32>> = BTreeMap::new();
    for (ty, alg, r) in sample {
        ensure(r.config_type == *ty, || format!("sampled {ty}, analyzed {}", r.config_type))?;
        let phase = phase_analysis(alg, r).map_err(|e| e.to_string())?;
        let indices = r.indices.as_ref().ok_or("no indices")?;
        for (c, ind) in phase.classes.iter().zip(indices) {
            ensure(c.fd_det_sign == *ind, || format!("{:?}: finite-difference sign {} vs index {ind}", c.point, c.fd_det_sign))?;
        }
        at_infinity.entry(ty.to_string()).or_default().insert(r.index_at_infinity.ok_or("no index at infinity")?);
    }
    ensure(at_infinity.values().all(|s| s.len() == 1), || format!("{at_infinity:?}"))?;
    Ok(format!("finite-difference Jacobian signs match indices on 600 algebras; index at infinity per type {at_infinity:?}"))
}

fn criterion_7(sample: &[(ConfigType, AnyAlgebra, AlgebraReport)]) -> Outcome {
    let mut labels: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (ty, alg, r) in sample {
        let phase = phase_analysis(alg, r).map_err(|e| e.to_string())?;
        labels.entry(ty.to_string()).or_default().insert(format!("{:?}", phase.berlinskii.structural_label));
    }
    ensure(labels.values().all(|s| s.len() == 1), || format!("labels per type {labels:?}"))?;
    let alg = family(FamilyParams::HTauSquared(int(3)));
    let r = analyze(&alg, &cfg());
    let f = alg.to_f64();
    let samples = [-1.5, -0.5, 0.5, 1.5];
    let mut worst: f64 = 0.0;
    for c in r.real_points().into_iter().filter(|p| p.iter().any(|x| *x != 0.0)) {
        worst = worst.max(ray_invariance_check(&f, &c, &samples, 1e-3, 300).map_err(|e| e.to_string())?);
    }
    let control = ray_invariance_check(&f, &[1.0, 0.3], &samples, 1e-3, 300).map_err(|e| e.to_string())?;
    ensure(worst <= 1e-6 && control > 1e-2, || format!("ray deviation {worst:e}, control {control:e}"))?;
    let field = VectorField::new(FieldKind::Squaring, &alg);
    let f0 = 0.5;
    let traj = integrate(&field, &[f0, 0.0], 1e-3, 1000).map_err(|e| e.to_string())?;
    ensure(traj.termination == Termination::Completed, || format!("{:?}", traj.termination))?;
    let rk_err = traj.times.iter().zip(&traj.points).map(|(t, p)| (p[0] - f0 / (1.0 - f0 * t)).abs().max(p[1].abs())).fold(0.0, f64::max);
    ensure(rk_err <= 1e-6, || format!("RK4 error {rk_err:e}"))?;
    Ok(format!("structure label is a function of type {labels:?}; ray deviation {worst:.1e}, control {control:.1e}; RK4 error {rk_err:.1e}"))
}

fn square_identity_zero(alg: &AnyAlgebra, points: &[Vec<Rational>], alphas: &[Rational]) -> Result<(), String> {
    let AnyAlgebra::Exact(a) = alg else { return Err("expected an exact algebra".into()) };
    let res = square_identity_residual(a, points, alphas, 0.0).map_err(|e| e.to_string())?;
    ensure(res.iter().all(Zero::is_zero), || format!("residual {res:?}"))
}

fn criterion_8() -> Outcome {
    let h2 = family(FamilyParams::HTau(Real::Exact(int(2))));
    let r = analyze(&h2, &cfg());
    let pts: Vec<Vec<Rational>> = r.idempotents.iter().map(|x| x.exact.clone().ok_or("irrational point")).collect::<Result<_, _>>()?;
    let relations = affine_relations(&pts);
    let zero = r.idempotents.iter().position(|x| x.is_zero()).ok_or("no zero")?;
    ensure(relations.iter().any(|rel| rel.target == zero && rel.members.len() == 3), || "no barycentric relation for the origin".into())?;
    for rel in &relations {
        let mut p: Vec<Vec<Rational>> = rel.members.iter().map(|&i| pts[i].clone()).collect();
        p.push(pts[rel.target].clone());
        square_identity_zero(&h2, &p, &rel.coefficients)?;
    }
    let rr = family(FamilyParams::DirectProduct(2));
    let (c0, c1, c2, c3) = (vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]);
    square_identity_zero(&rr, &[c1, c2, c0, c3], &[int(1), int(1), int(-1)])?;
    let mut checked = relations.len() + 1;
    for seed in 0..50u64 {
        let g = random_generic_2d(seed, true);
        let alg: AnyAlgebra = g.algebra.into();
        let r = analyze(&alg, &cfg());
        let pts: Vec<Vec<Rational>> = r.idempotents.iter().filter_map(|x| x.exact.clone()).collect();
        for rel in affine_relations(&pts) {
            let mut p: Vec<Vec<Rational>> = rel.members.iter().map(|&i| pts[i].clone()).collect();
            p.push(pts[rel.target].clone());
            square_identity_zero(&alg, &p, &rel.coefficients)?;
            checked += 1;
        }
    }
    Ok(format!("square identity exactly zero on {checked} affine relations, including H(2) and c3 = c1 + c2 - c0 in R x R"))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        match outcome {
            Ok(msg) => println!("PASS criterion {n}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n}: {msg} [{took:.2?}]");
            }
        }
    };
    report(1, &criterion_1);
    report(2, &criterion_2);
    report(3, &criterion_3);
    report(4, &criterion_4);
    report(5, &criterion_5);
    let sample = typed_sample();
    report(6, &|| criterion_6(&sample));
    report(7, &|| criterion_7(&sample));
    report(8, &criterion_8);
    if failed > 0 {
        std::process::exit(1);
    }
}
