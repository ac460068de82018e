use idemgeo::classify::{
    affine_relations, analyze, classify_type, square_identity_residual, third_eigenvalue, verify_charge_syzygy,
    verify_spectral_syzygy, ConfigType,
};
use idemgeo::families::{construct_from_spectrum, positive_charges};
use idemgeo::linalg::Matrix;
use idemgeo::ode::{phase_analysis, StructuralLabel};
use idemgeo::scalar::{int, rational};
use idemgeo::solver::SolverConfig;
use idemgeo::{Algebra, AnyAlgebra, Num, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6).prop_flat_map(|q| (-3 * q..=3 * q).prop_map(move |p| rational(p, q)))
}

/// Admissible spectra: two free eigenvalues completed by the syzygy, none equal to 1/2.
fn spectrum() -> impl Strategy<Value = [Rational; 3]> {
    (small_rational(), small_rational()).prop_filter_map("no admissible third eigenvalue", |(a, b)| {
        let c = third_eigenvalue(&a, &b).ok()?;
        let half = rational(1, 2);
        (a != half && b != half && c != half).then(|| [a, b, c])
    })
}

fn basis_change() -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(-3i64..=3, 4)
        .prop_map(|v| Matrix::from_fn(2, 2, |i, j| int(v[2 * i + j])))
        .prop_filter("singular", |t| !t.det().is_zero())
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

fn lambdas_exact(report: &idemgeo::classify::AlgebraReport) -> Vec<Rational> {
    sorted(report.lambdas().unwrap().iter().map(|n| n.exact.clone().unwrap()).collect())
}

fn built(s: &[Rational; 3]) -> Algebra<Rational> {
    construct_from_spectrum(s, 0.0).expect("admissible spectrum").algebra
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn syzygies_hold_exactly(s in spectrum()) {
        // 4 l1 l2 l3 - (l1 + l2 + l3) + 1 and sum 1/(1 - 2 l) - 1, written out independently.
        let four = int(4);
        let one = Rational::one();
        let spectral = &four * &s[0] * &s[1] * &s[2] - (&s[0] + &s[1] + &s[2]) + &one;
        prop_assert!(spectral.is_zero());
        let charge: Rational = s.iter().map(|l| &one / (&one - int(2) * l)).sum::<Rational>() - &one;
        prop_assert!(charge.is_zero());
        prop_assert!(verify_spectral_syzygy(&s[0], &s[1], &s[2]).is_zero());
        prop_assert!(verify_charge_syzygy(&s).unwrap().is_zero());
    }

    #[test]
    fn construction_realizes_the_spectrum(s in spectrum()) {
        let alg: AnyAlgebra = built(&s).into();
        let r = analyze(&alg, &SolverConfig::default());
        prop_assert_eq!(lambdas_exact(&r), sorted(s.to_vec()));
        prop_assert!(r.residuals.as_ref().unwrap().all_exact_zero());
    }

    #[test]
    fn type_agrees_with_geometry_and_infinity(s in spectrum()) {
        let r = analyze(&built(&s).into(), &SolverConfig::default());
        prop_assert_eq!(Some(r.config_type), r.config_type_geometric);
        prop_assert_eq!(r.index_at_infinity, r.config_type.index_at_infinity());
        let want = match positive_charges(&s) {
            3 => ConfigType::TypeI,
            1 => ConfigType::TypeII,
            2 => ConfigType::TypeIII,
            k => return Err(TestCaseError::fail(format!("{k} positive charges"))),
        };
        prop_assert_eq!(r.config_type, want);
        let charges: Vec<Num> = s.iter().map(|l| Num::exact(Rational::one() / (Rational::one() - int(2) * l))).collect();
        prop_assert_eq!(classify_type(&charges).unwrap(), want);
    }

    #[test]
    fn invariants_survive_basis_change(s in spectrum(), t in basis_change()) {
        let a = built(&s);
        let b = a.conjugate(&t).unwrap();
        let cfg = SolverConfig::default();
        let ra = analyze(&a.into(), &cfg);
        let rb = analyze(&b.into(), &cfg);
        prop_assert_eq!(ra.config_type, rb.config_type);
        prop_assert_eq!(lambdas_exact(&ra), lambdas_exact(&rb));
        prop_assert_eq!(ra.index_at_infinity, rb.index_at_infinity);
        prop_assert!(rb.residuals.unwrap().all_exact_zero());
    }

    #[test]
    fn finite_difference_index_matches(s in spectrum(), t in basis_change()) {
        let alg: AnyAlgebra = built(&s).conjugate(&t).unwrap().into();
        let r = analyze(&alg, &SolverConfig::default());
        let phase = phase_analysis(&alg, &r).unwrap();
        let indices = r.indices.clone().unwrap();
        for (c, ind) in phase.classes.iter().zip(indices) {
            prop_assert_eq!(c.fd_det_sign, ind);
        }
    }

    #[test]
    fn structure_is_a_function_of_type(s in spectrum(), t in basis_change()) {
        let alg: AnyAlgebra = built(&s).conjugate(&t).unwrap().into();
        let r = analyze(&alg, &SolverConfig::default());
        let label = phase_analysis(&alg, &r).unwrap().berlinskii.structural_label;
        let want = match r.config_type {
            ConfigType::TypeI => StructuralLabel::InnerAntisaddleOuterSaddles,
            ConfigType::TypeII => StructuralLabel::InnerSaddleOuterAntisaddles,
            ConfigType::TypeIII => StructuralLabel::QuadrilateralAlternating,
            ConfigType::NotApplicable => unreachable!(),
        };
        prop_assert_eq!(label, want);
    }

    #[test]
    fn square_identity_vanishes(s in spectrum(), t in basis_change()) {
        let alg = built(&s).conjugate(&t).unwrap();
        let r = analyze(&alg.clone().into(), &SolverConfig::default());
        let points: Vec<Vec<Rational>> = r.idempotents.iter().map(|x| x.exact.clone().unwrap()).collect();
        let relations = affine_relations(&points);
        prop_assert!(!relations.is_empty());
        for rel in relations {
            let mut pts: Vec<Vec<Rational>> = rel.members.iter().map(|&i| points[i].clone()).collect();
            pts.push(points[rel.target].clone());
            let res = square_identity_residual(&alg, &pts, &rel.coefficients, 0.0).unwrap();
            prop_assert!(res.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn float_mode_residuals_are_small(s in spectrum()) {
        let alg = AnyAlgebra::from(built(&s)).into_float();
        let cfg = SolverConfig { force_numeric: true, ..SolverConfig::default() };
        let r = analyze(&alg, &cfg);
        prop_assert_eq!(r.idempotents.len(), 4);
        prop_assert!(r.residuals.unwrap().max_abs() <= 1e-9);
    }
}
