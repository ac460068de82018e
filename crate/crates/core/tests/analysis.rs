//! Whole-pipeline checks against hand-derived closed forms.

use idemgeo::classify::{analyze, ConfigType};
use idemgeo::families::{make_family, FamilyParams, Real};
use idemgeo::scalar::{int, rational};
use idemgeo::solver::{GenericityStatus, SolveMethod, SolverConfig};
use idemgeo::{AnyAlgebra, Num, Rational};
use num_traits::{One, Signed, Zero};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn exact_of(n: &Num) -> Rational {
    n.exact.clone().expect("exact value")
}

/// Idempotents of H(tau) for rational tau: solving x1^2 - x2^2 = x1 and
/// (1 - tau^2) x1 x2 = x2 by hand gives the zero, (1, 0) and, for tau != 1,
/// x1 = 1/(1 - tau^2), x2^2 = x1 (x1 - 1).
fn h_tau_oracle(tau: &Rational) -> Vec<(Rational, Rational, Rational)> {
    let t2 = tau * tau;
    let one = Rational::one();
    let x1 = &one / (&one - &t2);
    let x2 = tau / (&one - &t2).abs();
    let lam_pm = (&one + &t2) / (int(2) * (&one - &t2));
    let lam3 = (&one - &t2) / int(2);
    vec![
        (x1.clone(), -x2.clone(), lam_pm.clone()),
        (x1, x2, lam_pm),
        (one, Rational::zero(), lam3),
    ]
}

#[test]
fn h_tau_matches_closed_forms() {
    for tau in [int(2), int(3), rational(1, 2), rational(1, 3), rational(5, 4)] {
        let fam = make_family(&FamilyParams::HTau(Real::Exact(tau.clone()))).unwrap();
        let r = analyze(&fam.algebra, &cfg());
        assert_eq!(r.method, SolveMethod::Exact);
        assert_eq!(r.verdict.status, GenericityStatus::Generic);
        assert_eq!(r.idempotents.len(), 4);
        assert!(r.idempotents[0].is_zero());
        let mut want = h_tau_oracle(&tau);
        let mut got: Vec<(Rational, Rational, Rational)> = r.idempotents[1..]
            .iter()
            .map(|rec| {
                let c = rec.exact.clone().expect("rational idempotent");
                (c[0].clone(), c[1].clone(), exact_of(&rec.lambda()))
            })
            .collect();
        want.sort();
        got.sort();
        assert_eq!(got, want, "tau = {tau}");
        let expected = if tau > int(1) { ConfigType::TypeI } else { ConfigType::TypeII };
        assert_eq!(r.config_type, expected, "tau = {tau}");
        assert_eq!(r.config_type_geometric, Some(expected));
        assert!(r.residuals.as_ref().unwrap().all_exact_zero());
    }
}

#[test]
fn h_two_charges() {
    let fam = make_family(&FamilyParams::HTau(Real::Exact(int(2)))).unwrap();
    let r = analyze(&fam.algebra, &cfg());
    // a = 1/(1 - 2 lambda): lambda_pm = -5/6 gives 3/8, lambda_3 = -3/2 gives 1/4.
    let mut charges: Vec<Rational> = r.charges.unwrap().iter().map(exact_of).collect();
    charges.sort();
    assert_eq!(charges, vec![int(-1), rational(1, 4), rational(3, 8), rational(3, 8)]);
    assert_eq!(r.index_at_infinity, Some(3));
    assert_eq!(r.index_sum, Some(-2));
}

#[test]
fn irrational_tau_through_its_square() {
    let fam = make_family(&FamilyParams::HTauSquared(int(3))).unwrap();
    let r = analyze(&fam.algebra, &cfg());
    assert_eq!(r.config_type, ConfigType::TypeI);
    // x1 = 1/(1 - 3) for the pair c_pm, whose second coordinate is irrational.
    let xs: Vec<f64> = r.real_points().iter().map(|p| p[0]).collect();
    assert!(xs.iter().filter(|x| (**x + 0.5).abs() < 1e-12).count() == 2, "{xs:?}");
    let float = make_family(&FamilyParams::HTau(Real::Float(3f64.sqrt()))).unwrap();
    let rf = analyze(&float.algebra, &cfg());
    assert_eq!(rf.method, SolveMethod::Numeric);
    assert_eq!(rf.config_type, ConfigType::TypeI);
    assert!(rf.residuals.unwrap().max_abs() < 1e-9);
}

#[test]
fn product_plane() {
    let fam = make_family(&FamilyParams::DirectProduct(2)).unwrap();
    let r = analyze(&fam.algebra, &cfg());
    assert_eq!(r.config_type, ConfigType::TypeIII);
    let charges: Vec<Rational> = r.charges.unwrap().iter().map(exact_of).collect();
    // (1,0) and (0,1) have lambda = 0; (1,1) has lambda = 1.
    assert_eq!(charges, vec![int(-1), int(1), int(1), int(-1)]);
    assert_eq!(r.index_at_infinity, Some(1));
    assert_eq!(r.index_sum, Some(0));
}

#[test]
fn product_space_counts() {
    for n in 1..=3 {
        let fam = make_family(&FamilyParams::DirectProduct(n)).unwrap();
        let r = analyze(&fam.algebra, &cfg());
        assert_eq!(r.idempotents.len(), 1 << n, "R^{n}");
        assert_eq!(r.verdict.status, GenericityStatus::Generic);
        assert_eq!(r.real_generic.real_generic, Some(true));
        for p in r.real_points() {
            assert!(p.iter().all(|x| x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9), "{p:?}");
        }
    }
}

#[test]
fn half_spectra() {
    let circle = analyze(&make_family(&FamilyParams::Circle3D).unwrap().algebra, &cfg());
    assert_eq!(circle.verdict.status, GenericityStatus::NonGenericHalfSpectrum);
    let sigma: Vec<f64> = circle.sigma.iter().map(Num::re).collect();
    for want in [1.0, 0.5, -0.5] {
        assert!(sigma.iter().any(|s| (s - want).abs() < 1e-6), "{want} not in {sigma:?}");
    }
    let spin = make_family(&FamilyParams::SpinFactor(vec![vec![int(1), int(0)], vec![int(0), int(1)]])).unwrap();
    let rs = analyze(&spin.algebra, &cfg());
    assert_eq!(rs.verdict.status, GenericityStatus::NonGenericHalfSpectrum);
    let sigma: Vec<f64> = rs.sigma.iter().map(Num::re).collect();
    for want in [1.0, 0.0, 0.5] {
        assert!(sigma.iter().any(|s| (s - want).abs() < 1e-6), "{want} not in {sigma:?}");
    }
}

#[test]
fn complex_numbers_are_generic_but_not_real_generic() {
    let r = analyze(&make_family(&FamilyParams::ComplexNumbers).unwrap().algebra, &cfg());
    assert_eq!(r.verdict.status, GenericityStatus::Generic);
    assert_eq!(r.real_generic.real_generic, Some(false));
    assert_eq!(r.config_type, ConfigType::NotApplicable);
    assert!(r.type_note.is_some());
}

#[test]
fn idempotent_line_is_a_continuum() {
    let fam = make_family(&FamilyParams::DegenerateLine).unwrap();
    let r = analyze(&fam.algebra, &cfg());
    assert_eq!(r.verdict.status, GenericityStatus::NonGenericContinuum);
    let line = r.witness_line.expect("witness");
    let AnyAlgebra::Exact(a) = &fam.algebra else { panic!("exact family") };
    for t in [int(0), int(1), rational(-7, 3)] {
        let p: Vec<Rational> = line.base.iter().zip(&line.direction).map(|(b, d)| b + &t * d).collect();
        assert!(a.psi(&p).unwrap().iter().all(Zero::is_zero), "{p:?}");
    }
}

#[test]
fn seeds_make_runs_reproducible() {
    let alg = make_family(&FamilyParams::DirectProduct(3)).unwrap().algebra;
    let a = analyze(&alg, &cfg().with_seed(7));
    let b = analyze(&alg, &cfg().with_seed(7));
    assert_eq!(a, b);
    // Half of the eight 0/1 vectors have first coordinate 1.
    let x: f64 = a.real_points().iter().map(|p| p[0]).sum();
    assert!((x - 4.0).abs() < 1e-9);
}
