//! Exact idempotents of two-dimensional rational algebras.
//!
//! `x^2 = x` is two conics in `(x1, x2)`. Eliminating `x2` with the Sylvester
//! resultant leaves a univariate polynomial of degree at most 4, whose roots
//! are lifted back one at a time. A shear `x1 -> x1 - s x2` is applied when
//! the chosen projection is degenerate.

use num_traits::{One, Zero};

use super::nilpotent::nilpotents_2d_exact;
use super::numeric::{newton_polish, solve_numeric};
use super::{complex_record, exact_record, sort_records, IdempotentLine, IdempotentRecord, SolveMethod, SolveResult, SolverConfig};
use crate::algebra::Algebra;
use crate::linalg::Matrix;
use crate::poly::{complex_roots_of, quadratic_roots, UPoly};
use crate::scalar::{int, rational, Complex64, Rational};

/// `c[a][b]` is the coefficient of `x1^a x2^b`.
type Bivariate = [[Rational; 3]; 3];

enum Lifted {
    Points(Vec<Point>, bool),
    NotInjective,
}

#[derive(Clone, Debug)]
enum Point {
    Exact(Vec<Rational>),
    Approx(Vec<Complex64>),
}

/// Solves `x^2 = x` exactly for an algebra of dimension at most 2.
pub fn idempotents_2d_exact(alg: &Algebra<Rational>, cfg: &SolverConfig) -> SolveResult {
    if alg.dim() == 1 {
        return one_dimensional(alg);
    }
    assert_eq!(alg.dim(), 2, "exact elimination handles dimensions 1 and 2");
    let (nilpotents, nil_continuum) = nilpotents_2d_exact(alg);
    for s in 0..4 {
        let t = Matrix::from_rows(vec![vec![int(1), int(s)], vec![int(0), int(1)]]).expect("2x2");
        let sheared = alg.conjugate(&t).expect("shear is invertible");
        let f = [equation(&sheared, 0), equation(&sheared, 1)];
        if f[0][0][2].is_zero() && f[1][0][2].is_zero() {
            continue;
        }
        let res = resultant(&f[0], &f[1]);
        if res.is_zero() {
            let witness = find_line(&sheared, &f).map(|l| IdempotentLine {
                base: t.mul_vec(&l.base),
                direction: t.mul_vec(&l.direction),
            });
            let mut notes = vec![format!("resultant vanishes identically (shear {s}); idempotents form a curve")];
            if witness.is_none() {
                notes.push("no rational witness line found".into());
            }
            return SolveResult {
                idempotents: vec![exact_record(alg, vec![Rational::zero(), Rational::zero()])],
                nilpotents,
                continuum: true,
                witness_line: witness,
                multiplicity_at_infinity: None,
                multiple_root: false,
                singular_jacobian: false,
                method: SolveMethod::Exact,
                notes,
            };
        }
        let degree = res.degree().unwrap_or(0);
        let Lifted::Points(points, multiple_root) = lift_roots(&res, &f) else { continue };
        let complex_alg = alg.to_complex();
        let mut records: Vec<IdempotentRecord> = points
            .into_iter()
            .map(|p| match p {
                Point::Exact(c) => exact_record(alg, t.mul_vec(&c)),
                Point::Approx(z) => {
                    let tc = t.map(|q| Complex64::new(crate::scalar::rational_to_f64(q), 0.0));
                    let back = newton_polish(&complex_alg, tc.mul_vec(&z), 8);
                    complex_record(&complex_alg, back, &cfg.tol)
                }
            })
            .collect();
        sort_records(&mut records);
        let mut notes = Vec::new();
        if s > 0 {
            notes.push(format!("eliminated after the shear x1 -> x1 - {s}*x2"));
        }
        return SolveResult {
            idempotents: records,
            nilpotents,
            continuum: nil_continuum,
            witness_line: None,
            multiplicity_at_infinity: Some(4 - degree),
            multiple_root,
            singular_jacobian: false,
            method: SolveMethod::Exact,
            notes,
        };
    }
    let mut fallback = solve_numeric(&alg.to_f64(), Some(alg), cfg);
    fallback.notes.push("no admissible projection among shears 0..3; solved numerically".into());
    fallback
}

fn one_dimensional(alg: &Algebra<Rational>) -> SolveResult {
    let g = alg.gamma(0, 0, 0).clone();
    let mut idempotents = vec![exact_record(alg, vec![Rational::zero()])];
    let mut nilpotents = Vec::new();
    if g.is_zero() {
        nilpotents.push(super::NilpotentDirection {
            direction: vec![Complex64::new(1.0, 0.0)],
            exact: Some(vec![Rational::one()]),
            is_real: true,
        });
    } else {
        idempotents.push(exact_record(alg, vec![g.recip()]));
    }
    SolveResult {
        multiplicity_at_infinity: Some(if g.is_zero() { 1 } else { 0 }),
        idempotents,
        nilpotents,
        continuum: false,
        witness_line: None,
        multiple_root: false,
        singular_jacobian: false,
        method: SolveMethod::Exact,
        notes: Vec::new(),
    }
}

/// Coefficients of `(x^2 - x)_k`.
fn equation(alg: &Algebra<Rational>, k: usize) -> Bivariate {
    let mut c: Bivariate = Default::default();
    c[2][0] = alg.gamma(0, 0, k).clone();
    c[1][1] = alg.gamma(0, 1, k).clone() * int(2);
    c[0][2] = alg.gamma(1, 1, k).clone();
    c[1][0] = if k == 0 { int(-1) } else { int(0) };
    c[0][1] = if k == 1 { int(-1) } else { int(0) };
    c
}

/// Coefficients of `f` in `x2`, each a polynomial in `x1`.
fn in_x2(f: &Bivariate) -> [UPoly<Rational>; 3] {
    [0, 1, 2].map(|b| UPoly::new((0..3).map(|a| f[a][b].clone()).collect()))
}

fn in_x1(f: &Bivariate) -> [UPoly<Rational>; 3] {
    [0, 1, 2].map(|a| UPoly::new((0..3).map(|b| f[a][b].clone()).collect()))
}

/// Sylvester resultant in `x2` of two polynomials of formal degree 2.
fn resultant(f: &Bivariate, g: &Bivariate) -> UPoly<Rational> {
    let [a0, a1, a2] = in_x2(f);
    let [b0, b1, b2] = in_x2(g);
    let p = a2.mul(&b0).sub(&a0.mul(&b2));
    let q = a2.mul(&b1).sub(&a1.mul(&b2));
    let r = a1.mul(&b0).sub(&a0.mul(&b1));
    p.mul(&p).sub(&q.mul(&r))
}

/// `f(x1 = u, x2)` as a polynomial in `x2`.
fn restrict_x1(f: &Bivariate, u: &Rational) -> UPoly<Rational> {
    UPoly::new(in_x2(f).iter().map(|c| c.eval(u)).collect())
}

fn restrict_x2(f: &Bivariate, v: &Rational) -> UPoly<Rational> {
    UPoly::new(in_x1(f).iter().map(|c| c.eval(v)).collect())
}

fn lift_roots(res: &UPoly<Rational>, f: &[Bivariate; 2]) -> Lifted {
    let mut points = Vec::new();
    let mut multiple = false;
    for (factor, mult) in res.squarefree_decomposition() {
        let rational = factor.rational_roots();
        let mut rest = factor.clone();
        for r in &rational {
            rest = rest.exact_div(&UPoly::new(vec![-r.clone(), Rational::one()]));
            let g = restrict_x1(&f[0], r).gcd(&restrict_x1(&f[1], r));
            match g.degree() {
                Some(1) => {
                    let x2 = -g.coeff(0) / g.coeff(1);
                    points.push(Point::Exact(vec![r.clone(), x2]));
                }
                _ => return Lifted::NotInjective,
            }
        }
        if rest.degree().is_some_and(|d| d > 0) {
            for z in complex_roots_of(&rest) {
                match lift_approx(z, f) {
                    Some(x2) => points.push(Point::Approx(vec![z, x2])),
                    None => return Lifted::NotInjective,
                }
            }
        }
        multiple |= mult > 1;
    }
    Lifted::Points(points, multiple)
}

fn eval_c(p: &UPoly<Rational>, z: Complex64) -> Complex64 {
    p.eval_complex(z)
}

/// The unique `x2` above an irrational root `z`, or `None` if there are two.
fn lift_approx(z: Complex64, f: &[Bivariate; 2]) -> Option<Complex64> {
    let polys: Vec<[Complex64; 3]> = f.iter().map(|fk| in_x2(fk).map(|c| eval_c(&c, z))).collect();
    let (p, q) = if polys[0][2].norm() >= polys[1][2].norm() { (&polys[0], &polys[1]) } else { (&polys[1], &polys[0]) };
    let roots = quadratic_roots(p[2], p[1], p[0]);
    let qscale = q.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    let resid = |t: Complex64| (q[0] + q[1] * t + q[2] * t * t).norm() / (qscale * t.norm().max(1.0).powi(2));
    let (r0, r1) = (resid(roots[0]), resid(roots[1]));
    let distinct = (roots[0] - roots[1]).norm() > 1e-8 * roots[0].norm().max(1.0);
    if distinct && r0 < 1e-8 && r1 < 1e-8 {
        return None;
    }
    Some(if r0 <= r1 { roots[0] } else { roots[1] })
}

/// Searches for a line of idempotents through rational points of the common curve.
fn find_line(alg: &Algebra<Rational>, f: &[Bivariate; 2]) -> Option<IdempotentLine> {
    let samples = [int(0), int(1), int(2), int(-1), int(3), rational(1, 2), int(-2), int(5)];
    for vertical in [false, true] {
        let mut found: Vec<(usize, Vec<Rational>)> = Vec::new();
        for (si, u) in samples.iter().enumerate() {
            let (g1, g2) = if vertical {
                (restrict_x2(&f[0], u), restrict_x2(&f[1], u))
            } else {
                (restrict_x1(&f[0], u), restrict_x1(&f[1], u))
            };
            let point = |w: Rational| if vertical { vec![w, u.clone()] } else { vec![u.clone(), w] };
            if g1.is_zero() && g2.is_zero() {
                let line = IdempotentLine {
                    base: point(Rational::zero()),
                    direction: if vertical { vec![int(1), int(0)] } else { vec![int(0), int(1)] },
                };
                if line_is_idempotent(alg, &line) {
                    return Some(line);
                }
                continue;
            }
            for w in g1.gcd(&g2).rational_roots() {
                found.push((si, point(w)));
            }
        }
        for (i, (si, p)) in found.iter().enumerate() {
            for (sj, q) in &found[i + 1..] {
                if si == sj {
                    continue;
                }
                let line = IdempotentLine { base: p.clone(), direction: q.iter().zip(p).map(|(a, b)| a - b).collect() };
                if line_is_idempotent(alg, &line) {
                    return Some(line);
                }
            }
        }
    }
    None
}

/// `x^2 - x` restricted to a line is quadratic in the parameter, so three zeros suffice.
pub(crate) fn line_is_idempotent(alg: &Algebra<Rational>, line: &IdempotentLine) -> bool {
    if line.direction.iter().all(Zero::is_zero) {
        return false;
    }
    (0..3).all(|t| {
        let x: Vec<Rational> = line.base.iter().zip(&line.direction).map(|(b, d)| b + d * int(t)).collect();
        alg.psi(&x).expect("dimension matches").iter().all(Zero::is_zero)
    })
}
