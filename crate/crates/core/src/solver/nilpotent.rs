//! Projective solutions of `x^2 = 0`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::numeric::generate_starts;
use super::{distance, NilpotentDirection, SolverConfig};
use crate::algebra::{Algebra, AnyAlgebra};
use crate::linalg::{norm, Matrix};
use crate::poly::{complex_roots, rationalize, UPoly};
use crate::scalar::{int, rational_to_f64, Complex64, Rational};

/// Nilpotent directions together with a flag for non-isolated solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentSet {
    pub directions: Vec<NilpotentDirection>,
    pub continuum: bool,
}

/// Nilpotent directions of an algebra in either scalar mode.
pub fn nilpotent_directions(alg: &AnyAlgebra, cfg: &SolverConfig) -> NilpotentSet {
    let (directions, continuum) = match alg {
        AnyAlgebra::Exact(a) => nilpotents_for(&a.to_f64(), Some(a), cfg),
        AnyAlgebra::Float(a) => nilpotents_for(a, None, cfg),
    };
    NilpotentSet { directions, continuum }
}

pub(crate) fn nilpotents_for(
    alg: &Algebra<f64>,
    exact: Option<&Algebra<Rational>>,
    cfg: &SolverConfig,
) -> (Vec<NilpotentDirection>, bool) {
    match (alg.dim(), exact) {
        (1, _) => {
            let zero = alg.gamma(0, 0, 0).abs() <= 1e-12;
            (if zero { vec![exact_direction(vec![Rational::one()])] } else { Vec::new() }, false)
        }
        (2, Some(a)) => nilpotents_2d_exact(a),
        (2, None) => nilpotents_2d_float(alg),
        _ => nilpotents_numeric(alg, exact, cfg),
    }
}

fn exact_direction(v: Vec<Rational>) -> NilpotentDirection {
    NilpotentDirection {
        direction: v.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect(),
        exact: Some(v),
        is_real: true,
    }
}

fn approx_direction(v: Vec<Complex64>) -> NilpotentDirection {
    let is_real = v.iter().all(|z| z.im.abs() <= 1e-9 * z.norm().max(1.0));
    let v = if is_real { v.into_iter().map(|z| Complex64::new(z.re, 0.0)).collect() } else { v };
    NilpotentDirection { direction: v, exact: None, is_real }
}

/// Common roots of the two binary quadratic forms of a 2D algebra.
pub(crate) fn nilpotents_2d_exact(alg: &Algebra<Rational>) -> (Vec<NilpotentDirection>, bool) {
    let forms: Vec<UPoly<Rational>> = (0..2)
        .map(|k| UPoly::new(vec![alg.gamma(0, 0, k).clone(), alg.gamma(0, 1, k).clone() * int(2), alg.gamma(1, 1, k).clone()]))
        .collect();
    if forms.iter().all(UPoly::is_zero) {
        return (Vec::new(), true);
    }
    let mut out = Vec::new();
    let g = forms[0].gcd(&forms[1]);
    if g.degree().is_some_and(|d| d > 0) {
        let rational = g.rational_roots();
        let mut rest = g.clone();
        for r in &rational {
            rest = rest.exact_div(&UPoly::new(vec![-r.clone(), Rational::one()]));
            out.push(exact_direction(vec![Rational::one(), r.clone()]));
        }
        if rest.degree().is_some_and(|d| d > 0) {
            let coeffs: Vec<Complex64> = rest.coeffs().iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect();
            for z in complex_roots(&coeffs) {
                out.push(approx_direction(vec![Complex64::one(), z]));
            }
        }
    }
    if (0..2).all(|k| alg.gamma(1, 1, k).is_zero()) {
        out.push(exact_direction(vec![Rational::zero(), Rational::one()]));
    }
    sort_directions(&mut out);
    (out, false)
}

fn nilpotents_2d_float(alg: &Algebra<f64>) -> (Vec<NilpotentDirection>, bool) {
    let forms: Vec<[f64; 3]> =
        (0..2).map(|k| [*alg.gamma(0, 0, k), 2.0 * alg.gamma(0, 1, k), *alg.gamma(1, 1, k)]).collect();
    let scale = forms.iter().flatten().map(|c| c.abs()).fold(0.0, f64::max);
    if scale <= 1e-300 {
        return (Vec::new(), true);
    }
    let small = |c: f64| c.abs() <= 1e-12 * scale;
    let eval = |f: &[f64; 3], t: Complex64| (f[0] + f[1] * t + f[2] * t * t).norm();
    let mut out: Vec<NilpotentDirection> = Vec::new();
    for (k, f) in forms.iter().enumerate() {
        if f.iter().all(|c| small(*c)) {
            continue;
        }
        let coeffs: Vec<Complex64> = f.iter().map(|c| Complex64::new(if small(*c) { 0.0 } else { *c }, 0.0)).collect();
        for t in complex_roots(&coeffs) {
            let other = &forms[1 - k];
            if eval(other, t) <= 1e-8 * scale * t.norm().max(1.0).powi(2) {
                let d = vec![Complex64::one(), t];
                if !out.iter().any(|o| distance(&o.direction, &d) <= 1e-6) {
                    out.push(approx_direction(d));
                }
            }
        }
    }
    if forms.iter().all(|f| small(f[2])) {
        out.push(approx_direction(vec![Complex64::zero(), Complex64::one()]));
    }
    sort_directions(&mut out);
    (out, false)
}

/// Gauss-Newton on `[x^2; a.x - 1] = 0` from seeded starts, for dimensions 3 and 4.
fn nilpotents_numeric(
    alg: &Algebra<f64>,
    exact: Option<&Algebra<Rational>>,
    cfg: &SolverConfig,
) -> (Vec<NilpotentDirection>, bool) {
    let n = alg.dim();
    let calg = alg.to_complex();
    let seed = cfg.seed ^ 0x6e69_6c70;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let starts = generate_starts(n, 50 << n, seed);
    let found: Vec<Option<Vec<Complex64>>> =
        starts.par_iter().map(|x0| gauss_newton(&calg, &a, x0.clone(), 60)).collect();
    let mut reps: Vec<Vec<Complex64>> = Vec::new();
    for x in found.into_iter().flatten() {
        let Some(d) = normalize(&x) else { continue };
        if !reps.iter().any(|r| distance(r, &d) <= 1e-6) {
            reps.push(d);
        }
    }
    let rank_deficient = reps.iter().any(|d| {
        let l: Matrix<Complex64> = calg.mult_operator(d).expect("dimension matches").0;
        l.rank(1e-8) + 1 < n
    });
    let continuum = rank_deficient || reps.len() > (1 << n);
    let mut out: Vec<NilpotentDirection> = reps
        .into_iter()
        .map(|d| match exact.and_then(|e| rational_direction(e, &d)) {
            Some(q) => exact_direction(q),
            None => approx_direction(d),
        })
        .collect();
    sort_directions(&mut out);
    (out, continuum)
}

fn gauss_newton(alg: &Algebra<Complex64>, a: &[Complex64], mut x: Vec<Complex64>, iters: usize) -> Option<Vec<Complex64>> {
    let n = x.len();
    let resid = |x: &[Complex64]| -> Vec<Complex64> {
        let mut r = alg.square(x).expect("dimension matches");
        r.push(a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<Complex64>() - Complex64::one());
        r
    };
    for _ in 0..iters {
        let r = resid(&x);
        let scale = norm(&x).powi(2).max(1.0);
        if norm(&r[..n]) <= 1e-12 * scale && r[n].norm() <= 1e-12 {
            return Some(x);
        }
        let l = alg.mult_operator(&x).expect("dimension matches").0;
        let j = Matrix::from_fn(n + 1, n, |i, k| if i < n { l[(i, k)] * 2.0 } else { a[k] });
        let jh = Matrix::from_fn(n, n + 1, |i, k| j[(k, i)].conj());
        let mu = 1e-12 * j.max_abs().powi(2).max(1e-300);
        let lhs = jh.mul(&j).add(&Matrix::identity(n).scale(&Complex64::new(mu, 0.0)));
        let d = lhs.solve(&jh.mul_vec(&r)).ok()?;
        x = x.iter().zip(&d).map(|(xi, di)| xi - di).collect();
        if !x.iter().all(|z| z.is_finite()) || norm(&x) > 1e12 {
            return None;
        }
    }
    let r = resid(&x);
    (norm(&r[..n]) <= 1e-10 * norm(&x).powi(2).max(1.0) && r[n].norm() <= 1e-10).then_some(x)
}

/// Scales so that the first coordinate that is not negligible equals 1.
fn normalize(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let size = norm(x);
    let pivot = x.iter().find(|z| z.norm() > 1e-6 * size)?;
    Some(x.iter().map(|z| {
        let v = z / pivot;
        Complex64::new(if v.re.abs() < 1e-14 { 0.0 } else { v.re }, if v.im.abs() < 1e-14 { 0.0 } else { v.im })
    }).collect())
}

fn rational_direction(alg: &Algebra<Rational>, d: &[Complex64]) -> Option<Vec<Rational>> {
    if d.iter().any(|z| z.im.abs() > 1e-9) {
        return None;
    }
    let q: Vec<Rational> = d.iter().map(|z| rationalize(z.re, 1_000_000, 1e-9)).collect::<Option<_>>()?;
    alg.square(&q).ok()?.iter().all(Zero::is_zero).then_some(q)
}

fn sort_directions(v: &mut [NilpotentDirection]) {
    v.sort_by(|a, b| {
        let ka: Vec<(i64, i64)> = a.direction.iter().map(|z| crate::algebra::complex_key(*z)).collect();
        let kb: Vec<(i64, i64)> = b.direction.iter().map(|z| crate::algebra::complex_key(*z)).collect();
        ka.cmp(&kb)
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn h_tau_has_no_nilpotents() {
        let a = Algebra::from_fn(2, |i, j, k| match (i, j, k) {
            (0, 0, 0) => int(1),
            (1, 1, 0) => int(-1),
            (0, 1, 1) | (1, 0, 1) => rational(-3, 2),
            _ => int(0),
        })
        .unwrap();
        assert_eq!(nilpotents_2d_exact(&a), (Vec::new(), false));
        assert_eq!(nilpotents_2d_float(&a.to_f64()), (Vec::new(), false));
    }

    #[test]
    fn degenerate_line_algebra_has_vertical_nilpotent() {
        let a = Algebra::from_fn(2, |i, j, k| match (i, j, k) {
            (0, 0, 0) => int(1),
            (0, 1, 1) | (1, 0, 1) => rational(1, 2),
            _ => int(0),
        })
        .unwrap();
        let (dirs, cont) = nilpotents_2d_exact(&a);
        assert!(!cont);
        assert_eq!(dirs.len(), 1);
        assert_eq!(dirs[0].exact, Some(vec![int(0), int(1)]));
        let (fdirs, _) = nilpotents_2d_float(&a.to_f64());
        assert_eq!(fdirs.len(), 1);
    }
}
