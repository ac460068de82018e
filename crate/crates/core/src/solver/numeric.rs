//! Multistart Newton for `x^2 = x` over the complexification.
//!
//! Starts are drawn from a seeded ChaCha stream, half real and half complex,
//! with log-uniform radii. Each start runs damped Newton (Levenberg-Marquardt
//! when the Jacobian is singular). Starts are independent and evaluated in
//! parallel; results are gathered in start order and merged by a
//! deterministic deduplication, so output does not depend on scheduling.
//! When fewer than `2^n` points turn up, a sequential deflated Newton pass
//! reruns the starts with every known root repelling the iteration.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::nilpotent::nilpotents_for;
use super::{complex_record, distance, exact_record, jacobian_conditioning, sort_records, SolveMethod, SolveResult, SolverConfig};
use crate::algebra::{Algebra, AnyAlgebra};
use crate::linalg::{norm, Matrix};
use crate::poly::rationalize;
use crate::scalar::{f64_to_rational, rational_to_f64, Complex64, Rational};

/// Numeric idempotent search on any algebra, regardless of its scalar mode.
pub fn idempotents_numeric(alg: &AnyAlgebra, cfg: &SolverConfig) -> SolveResult {
    match alg {
        AnyAlgebra::Exact(a) => solve_numeric(&a.to_f64(), Some(a), cfg),
        AnyAlgebra::Float(a) => solve_numeric(a, None, cfg),
    }
}

pub(crate) fn solve_numeric(alg: &Algebra<f64>, exact: Option<&Algebra<Rational>>, cfg: &SolverConfig) -> SolveResult {
    let n = alg.dim();
    let calg = alg.to_complex();
    let starts = generate_starts(n, cfg.start_count(n), cfg.seed);
    let converged: Vec<Option<Vec<Complex64>>> =
        starts.par_iter().map(|x0| newton(&calg, x0.clone(), cfg.max_iter, cfg.residual_tol)).collect();
    let mut reps: Vec<Vec<Complex64>> = vec![vec![Complex64::zero(); n]];
    for x in converged.into_iter().flatten() {
        if !reps.iter().any(|r| distance(r, &x) <= cfg.dedup) {
            reps.push(x);
        }
    }
    let expected = 1usize << n;
    let before = reps.len();
    if reps.len() < expected {
        deflated_search(&calg, &mut reps, &starts, cfg, expected);
    }
    let deflated = reps.len() - before;
    let qalg = alg.map(|g| f64_to_rational(*g).expect("finite structure constants"));
    let reps: Vec<Vec<Complex64>> = reps.into_iter().map(|x| refine_real(alg, &qalg, newton_polish(&calg, x, 6))).collect();
    let singular = reps.iter().any(|x| jacobian_conditioning(&calg, x) < 1e-8);
    let mut records: Vec<_> = reps
        .into_iter()
        .map(|x| match exact.and_then(|a| rational_point(a, &x)) {
            Some(q) => exact_record(exact.expect("checked"), q),
            None => complex_record(&calg, x, &cfg.tol),
        })
        .collect();
    sort_records(&mut records);
    let too_many = records.len() > expected;
    let (nilpotents, nil_continuum) = nilpotents_for(alg, exact, cfg);
    let mut notes = vec![format!("{} starts, {} distinct idempotents", starts.len(), records.len())];
    if deflated > 0 {
        notes.push(format!("{deflated} found by deflation"));
    }
    if too_many {
        notes.push(format!("more than {expected} distinct idempotents: continuum suspected"));
    }
    if singular {
        notes.push("singular Jacobian of x^2 - x at a converged point".into());
    }
    SolveResult {
        idempotents: records,
        nilpotents,
        continuum: too_many || singular || nil_continuum,
        witness_line: None,
        multiplicity_at_infinity: None,
        multiple_root: false,
        singular_jacobian: singular,
        method: SolveMethod::Numeric,
        notes,
    }
}

/// Deterministic starts: even indices real, odd indices complex.
pub(crate) fn generate_starts(n: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = |rng: &mut ChaCha8Rng| -> f64 {
        // Box-Muller keeps the stream dependency-free.
        let u1: f64 = rng.random_range(f64::EPSILON..1.0);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    (0..count)
        .map(|i| {
            let radius = 10f64.powf(rng.random_range(-1.0..1.5));
            let re: Vec<f64> = (0..n).map(|_| gauss(&mut rng)).collect();
            let im: Vec<f64> = if i % 2 == 1 { (0..n).map(|_| gauss(&mut rng)).collect() } else { vec![0.0; n] };
            let len = (re.iter().chain(&im).map(|v| v * v).sum::<f64>()).sqrt().max(1e-12);
            re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b) * (radius / len)).collect()
        })
        .collect()
}

fn residual(alg: &Algebra<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    alg.psi(x).expect("dimension matches")
}

fn scaled_residual(alg: &Algebra<Complex64>, x: &[Complex64]) -> f64 {
    norm(&residual(alg, x)) / norm(x).powi(2).max(1.0)
}

/// Damped Newton from `x`; returns the limit if it converges.
pub(crate) fn newton(alg: &Algebra<Complex64>, mut x: Vec<Complex64>, max_iter: usize, tol: f64) -> Option<Vec<Complex64>> {
    let mut r = residual(alg, &x);
    for _ in 0..max_iter {
        if norm(&r) / norm(&x).powi(2).max(1.0) <= tol {
            return Some(x);
        }
        let j = alg.psi_jacobian(&x).expect("dimension matches");
        let step = newton_step(&j, &r)?;
        let base = norm(&r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand: Vec<Complex64> = x.iter().zip(&step).map(|(a, d)| a - d * t).collect();
            let rc = residual(alg, &cand);
            if norm(&rc) < base || t < 1e-3 {
                x = cand;
                r = rc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || norm(&x) > 1e12 || !x.iter().all(|z| z.is_finite()) {
            return None;
        }
    }
    (norm(&r) / norm(&x).powi(2).max(1.0) <= tol).then_some(x)
}

/// Reruns `starts` on `m(x) (x^2 - x)` with `m = prod_i (1/q_i + 1)` and
/// `q_i = sum_k (x_k - r_k)^2` over the known roots `r`, until `expected` roots are known.
fn deflated_search(alg: &Algebra<Complex64>, roots: &mut Vec<Vec<Complex64>>, starts: &[Vec<Complex64>], cfg: &SolverConfig, expected: usize) {
    for x0 in starts {
        if roots.len() >= expected {
            break;
        }
        if let Some(x) = deflated_newton(alg, roots, x0.clone(), 2 * cfg.max_iter, cfg.residual_tol) {
            let x = newton_polish(alg, x, 6);
            if scaled_residual(alg, &x) <= cfg.residual_tol && !roots.iter().any(|r| distance(r, &x) <= cfg.dedup) {
                roots.push(x);
            }
        }
    }
}

fn deflation_factor(roots: &[Vec<Complex64>], x: &[Complex64]) -> (Complex64, Vec<Complex64>) {
    let one = Complex64::new(1.0, 0.0);
    let mut m = one;
    let mut grad_log = vec![Complex64::zero(); x.len()];
    for r in roots {
        let diff: Vec<Complex64> = x.iter().zip(r).map(|(a, b)| a - b).collect();
        let q: Complex64 = diff.iter().map(|d| d * d).sum();
        m *= one / q + one;
        let w = -one / (q * (one + q));
        for (g, d) in grad_log.iter_mut().zip(&diff) {
            *g += w * 2.0 * d;
        }
    }
    (m, grad_log)
}

fn deflated_newton(alg: &Algebra<Complex64>, roots: &[Vec<Complex64>], mut x: Vec<Complex64>, max_iter: usize, tol: f64) -> Option<Vec<Complex64>> {
    let merit = |x: &[Complex64]| deflation_factor(roots, x).0.norm() * norm(&residual(alg, x));
    for _ in 0..max_iter {
        let r = residual(alg, &x);
        if norm(&r) / norm(&x).powi(2).max(1.0) <= tol {
            return Some(x);
        }
        let j = alg.psi_jacobian(&x).expect("dimension matches");
        let d = newton_step(&j, &r)?;
        let (_, grad_log) = deflation_factor(roots, &x);
        let denom = Complex64::new(1.0, 0.0) + grad_log.iter().zip(&d).map(|(g, v)| g * v).sum::<Complex64>();
        if denom.norm() < 1e-12 {
            return None;
        }
        let step: Vec<Complex64> = d.iter().map(|v| v / denom).collect();
        let base = merit(&x);
        let mut t = 1.0;
        loop {
            let cand: Vec<Complex64> = x.iter().zip(&step).map(|(a, s)| a - s * t).collect();
            if merit(&cand) < base || t < 1e-3 {
                x = cand;
                break;
            }
            t *= 0.5;
        }
        if norm(&x) > 1e12 || !x.iter().all(|z| z.is_finite()) {
            return None;
        }
    }
    None
}

/// Solves `J d = r`, falling back to a Levenberg-Marquardt step.
fn newton_step(j: &Matrix<Complex64>, r: &[Complex64]) -> Option<Vec<Complex64>> {
    if let Ok(d) = j.solve(r) {
        if d.iter().all(|z| z.is_finite()) {
            return Some(d);
        }
    }
    let n = j.cols();
    let jh = Matrix::from_fn(n, j.rows(), |a, b| j[(b, a)].conj());
    let mu = 1e-6 * j.max_abs().powi(2).max(1e-12);
    let lhs = jh.mul(j).add(&Matrix::identity(n).scale(&Complex64::new(mu, 0.0)));
    lhs.solve(&jh.mul_vec(r)).ok()
}

/// A few undamped Newton steps, keeping the best iterate.
pub(crate) fn newton_polish(alg: &Algebra<Complex64>, mut x: Vec<Complex64>, steps: usize) -> Vec<Complex64> {
    let mut best = scaled_residual(alg, &x);
    for _ in 0..steps {
        if best == 0.0 {
            break;
        }
        let j = alg.psi_jacobian(&x).expect("dimension matches");
        let Ok(d) = j.solve(&residual(alg, &x)) else { break };
        let cand: Vec<Complex64> = x.iter().zip(&d).map(|(a, b)| a - b).collect();
        let rc = scaled_residual(alg, &cand);
        if !(rc < best) {
            break;
        }
        x = cand;
        best = rc;
    }
    x
}

/// Iterative refinement of a real root: residuals are evaluated exactly over
/// the rationals represented by the `f64` inputs, corrections in `f64`.
fn refine_real(alg: &Algebra<f64>, qalg: &Algebra<Rational>, x: Vec<Complex64>) -> Vec<Complex64> {
    if x.iter().any(|z| z.im != 0.0) {
        return x;
    }
    let mut xr: Vec<f64> = x.iter().map(|z| z.re).collect();
    for _ in 0..3 {
        let Some(xq) = xr.iter().map(|v| f64_to_rational(*v)).collect::<Option<Vec<Rational>>>() else { break };
        let r: Vec<f64> = qalg.psi(&xq).expect("dimension matches").iter().map(rational_to_f64).collect();
        if r.iter().all(|v| *v == 0.0) {
            break;
        }
        let Ok(d) = alg.psi_jacobian(&xr).expect("dimension matches").solve(&r) else { break };
        let next: Vec<f64> = xr.iter().zip(&d).map(|(a, b)| a - b).collect();
        if !next.iter().all(|v| v.is_finite()) || next == xr {
            break;
        }
        xr = next;
    }
    xr.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
}

/// Recovers an exact rational idempotent from a real approximation, if one is nearby.
fn rational_point(alg: &Algebra<Rational>, x: &[Complex64]) -> Option<Vec<Rational>> {
    if x.iter().any(|z| z.im.abs() > 1e-9 * z.norm().max(1.0)) {
        return None;
    }
    let q: Vec<Rational> = x.iter().map(|z| rationalize(z.re, 1_000_000, 1e-9)).collect::<Option<_>>()?;
    alg.psi(&q).ok()?.iter().all(Zero::is_zero).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_are_reproducible() {
        assert_eq!(generate_starts(3, 10, 7), generate_starts(3, 10, 7));
        assert_ne!(generate_starts(3, 10, 7), generate_starts(3, 10, 8));
        assert!(generate_starts(2, 4, 1)[0].iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn deflation_reaches_a_thin_basin() {
        // e1 e2 = (9/5) e1 + (1/3) e2 in the basis of two idempotents, then a basis change.
        let t = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let base = Algebra::from_fn(2, |i, j, k| match (i, j, k) {
            (0, 0, 0) | (1, 1, 1) => 1.0,
            (0, 1, 0) | (1, 0, 0) => 9.0 / 5.0,
            (0, 1, 1) | (1, 0, 1) => 1.0 / 3.0,
            _ => 0.0,
        })
        .unwrap();
        let a = base.conjugate(&t).unwrap();
        let out = solve_numeric(&a, None, &SolverConfig { starts: Some(50), ..SolverConfig::default() });
        assert_eq!(out.idempotents.len(), 4, "{:?}", out.notes);
        assert!(out.notes.iter().any(|n| n.contains("deflation")));
    }

    #[test]
    fn product_of_three_lines() {
        let a = Algebra::from_fn(3, |i, j, k| if i == j && j == k { 1.0 } else { 0.0 }).unwrap();
        let out = solve_numeric(&a, None, &SolverConfig::default());
        assert_eq!(out.idempotents.len(), 8);
        assert!(!out.continuum);
        for r in &out.idempotents {
            assert!(r.is_real);
            assert!(r.point.iter().all(|z| z.re.abs() < 1e-12 || (z.re - 1.0).abs() < 1e-12));
        }
    }
}
