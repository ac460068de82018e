//! Affine relations among idempotents: the square identity, idempotent lines
//! and bounds on idempotents per affine plane.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{AlgebraReport, ClassifyError};
use crate::algebra::{spectrum_of, sub, Algebra};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::solver::{GenericityStatus, BOUNDARY_TOL};

/// `sum_{i<j} a_i a_j (c_i - c_j)^2` for idempotents `c_1..c_k` and a last idempotent
/// `c_{k+1} = sum a_i c_i` with `sum a_i = 1`.
pub fn square_identity_residual<F: Scalar>(
    alg: &Algebra<F>,
    points: &[Vec<F>],
    alphas: &[F],
    tol: f64,
) -> Result<Vec<F>, ClassifyError> {
    let k = alphas.len();
    if points.len() != k + 1 {
        return Err(ClassifyError::Precondition(format!("{} coefficients need {} points, got {}", k, k + 1, points.len())));
    }
    let total = alphas.iter().fold(F::zero(), |a, b| a + b.clone());
    if !(total - F::one()).is_negligible(tol) {
        return Err(ClassifyError::Precondition("coefficients do not sum to 1".into()));
    }
    let n = alg.dim();
    let mut comb = vec![F::zero(); n];
    for (c, a) in points[..k].iter().zip(alphas) {
        for (s, x) in comb.iter_mut().zip(c) {
            *s = s.clone() + a.clone() * x.clone();
        }
    }
    if sub(&comb, &points[k]).iter().any(|d| !d.is_negligible(tol)) {
        return Err(ClassifyError::Precondition("last point is not the affine combination of the others".into()));
    }
    for (i, c) in points.iter().enumerate() {
        let psi = alg.psi(c).map_err(|e| ClassifyError::Precondition(e.to_string()))?;
        if psi.iter().any(|d| !d.is_negligible(tol)) {
            return Err(ClassifyError::Precondition(format!("point {} is not idempotent", i + 1)));
        }
    }
    let mut acc = vec![F::zero(); n];
    for i in 0..k {
        for j in i + 1..k {
            let d = sub(&points[i], &points[j]);
            let sq = alg.square(&d).expect("dimension checked");
            let w = alphas[i].clone() * alphas[j].clone();
            for (s, x) in acc.iter_mut().zip(sq) {
                *s = s.clone() + w.clone() * x;
            }
        }
    }
    Ok(acc)
}

/// `target = sum coefficients[i] * points[members[i]]`, with unit coefficient sum.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineRelation {
    pub members: Vec<usize>,
    pub target: usize,
    pub coefficients: Vec<Rational>,
}

/// Every minimal affine relation expressing one point through an affinely
/// independent subset of the others, with all coefficients nonzero.
pub fn affine_relations(points: &[Vec<Rational>]) -> Vec<AffineRelation> {
    let m = points.len();
    let n = points.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for target in 0..m {
        let others: Vec<usize> = (0..m).filter(|&i| i != target).collect();
        for size in 2..=(n + 1).min(others.len()) {
            for subset in combinations(&others, size) {
                if let Some(coefficients) = solve_affine(points, &subset, target) {
                    out.push(AffineRelation { members: subset, target, coefficients });
                }
            }
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn solve_affine(points: &[Vec<Rational>], members: &[usize], target: usize) -> Option<Vec<Rational>> {
    let n = points[target].len();
    let k = members.len();
    // Rows: coordinates plus the unit-sum row; columns: members.
    let a = Matrix::from_fn(n + 1, k, |i, j| if i < n { points[members[j]][i].clone() } else { Rational::from_integer(1.into()) });
    let mut b = points[target].clone();
    b.push(Rational::from_integer(1.into()));
    let at = a.transpose();
    let normal = at.mul(&a);
    if normal.det().is_zero() {
        return None;
    }
    let x = normal.solve(&at.mul_vec(&b)).ok()?;
    if a.mul_vec(&x) != b || x.iter().any(Zero::is_zero) {
        return None;
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineCase {
    /// The whole line consists of idempotents.
    CaseA,
    /// Only the two given points are idempotents.
    CaseB,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineAnalysis<F> {
    pub case: LineCase,
    pub alpha: F,
    pub sample: Vec<F>,
    pub difference_square: Vec<F>,
    pub difference_square_zero: bool,
    /// Whether `1/2` is in the spectrum of the sampled point; checked in case A only.
    pub half_in_sample_spectrum: Option<bool>,
}

/// Decides whether the line through two idempotents consists of idempotents.
pub fn line_analysis<F: Scalar>(alg: &Algebra<F>, c1: &[F], c2: &[F], tol: f64) -> Result<LineAnalysis<F>, ClassifyError> {
    for (name, c) in [("c1", c1), ("c2", c2)] {
        let psi = alg.psi(c).map_err(|e| ClassifyError::Precondition(e.to_string()))?;
        if psi.iter().any(|d| !d.is_negligible(tol)) {
            return Err(ClassifyError::Precondition(format!("{name} is not idempotent")));
        }
        if c.iter().all(|x| x.is_negligible(tol)) {
            return Err(ClassifyError::Precondition(format!("{name} is zero")));
        }
    }
    let diff = sub(c1, c2);
    if diff.iter().all(|x| x.is_negligible(tol)) {
        return Err(ClassifyError::Precondition("c1 and c2 coincide".into()));
    }
    let point_at = |alpha: &F| -> Vec<F> {
        c1.iter().zip(c2).map(|(a, b)| alpha.clone() * a.clone() + (F::one() - alpha.clone()) * b.clone()).collect()
    };
    let mut alpha = F::from_i64(2);
    let mut sample = point_at(&alpha);
    let coincides = |p: &[F]| sub(p, c1).iter().all(|x| x.is_negligible(tol)) || sub(p, c2).iter().all(|x| x.is_negligible(tol));
    if coincides(&sample) {
        alpha = F::from_i64(-1);
        sample = point_at(&alpha);
    }
    let psi = alg.psi(&sample).expect("dimension checked");
    let case = if psi.iter().all(|d| d.is_negligible(tol)) { LineCase::CaseA } else { LineCase::CaseB };
    let difference_square = alg.square(&diff).expect("dimension checked");
    let difference_square_zero = difference_square.iter().all(|d| d.is_negligible(tol));
    let half_in_sample_spectrum = (case == LineCase::CaseA).then(|| {
        let l = alg.mult_operator(&sample).expect("dimension checked").0;
        spectrum_of(&l).contains_half(BOUNDARY_TOL)
    });
    Ok(LineAnalysis { case, alpha, sample, difference_square, difference_square_zero, half_in_sample_spectrum })
}

/// `base + span(spanning)`, with independent spanning vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffinePlane {
    pub base: Vec<f64>,
    pub spanning: Vec<Vec<f64>>,
}

impl AffinePlane {
    pub fn new(base: Vec<f64>, spanning: Vec<Vec<f64>>) -> Result<Self, ClassifyError> {
        if spanning.iter().any(|v| v.len() != base.len()) {
            return Err(ClassifyError::Precondition("spanning vectors must match the base dimension".into()));
        }
        if orthonormal(&spanning).len() != spanning.len() {
            return Err(ClassifyError::Precondition("spanning vectors are dependent".into()));
        }
        Ok(AffinePlane { base, spanning })
    }

    /// The affine hull of `points`, if they are affinely independent.
    pub fn through(points: &[&[f64]]) -> Result<Self, ClassifyError> {
        let (first, rest) = points.split_first().ok_or_else(|| ClassifyError::Precondition("no points".into()))?;
        let spanning = rest.iter().map(|p| p.iter().zip(*first).map(|(a, b)| a - b).collect()).collect();
        AffinePlane::new(first.to_vec(), spanning)
    }

    pub fn dim(&self) -> usize {
        self.spanning.len()
    }

    /// Euclidean distance from `p` to the subspace.
    pub fn distance(&self, p: &[f64]) -> f64 {
        let mut r: Vec<f64> = p.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        for q in orthonormal(&self.spanning) {
            let dot: f64 = r.iter().zip(&q).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(&q).for_each(|(a, b)| *a -= dot * b);
        }
        r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Gram-Schmidt; vectors that are dependent (relative to their length) are dropped.
fn orthonormal(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let len0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let dot: f64 = w.iter().zip(q).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let len = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-10 * len0.max(1e-300) && len > 1e-300 {
            out.push(w.iter().map(|x| x / len).collect());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneCount {
    pub count: usize,
    pub members: Vec<usize>,
    /// `2^k`, the conjectured bound for a `k`-dimensional subspace.
    pub bound: usize,
    /// Exceeds `4` on a plane of a generic algebra, which the proven bound forbids.
    pub theorem_violation: bool,
    pub conjecture_violation: bool,
}

/// Counts points within `tol * max(1, |p|)` of the subspace.
pub fn count_in_subspace(points: &[Vec<f64>], plane: &AffinePlane, tol: f64, generic: bool) -> PlaneCount {
    let members: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| plane.distance(p) <= tol * p.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0))
        .map(|(i, _)| i)
        .collect();
    let k = plane.dim();
    let count = members.len();
    PlaneCount {
        count,
        members,
        bound: 1 << k,
        theorem_violation: generic && k == 2 && count > 4,
        conjecture_violation: generic && count > (1 << k),
    }
}

/// Counts the real idempotents of a report lying on `plane`.
pub fn count_idempotents_in_affine_subspace(report: &AlgebraReport, plane: &AffinePlane, tol: f64) -> PlaneCount {
    let generic = report.verdict.status == GenericityStatus::Generic;
    count_in_subspace(&report.real_points(), plane, tol, generic)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanStrategy {
    pub random_planes: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for ScanStrategy {
    fn default() -> Self {
        ScanStrategy { random_planes: 10_000, seed: crate::solver::DEFAULT_SEED, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneViolation {
    pub plane: AffinePlane,
    pub count: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub points: usize,
    pub triple_planes: usize,
    pub degenerate_triples: usize,
    pub random_planes: usize,
    pub max_count: usize,
    pub witness: Option<PlaneViolation>,
    pub violations: Vec<PlaneViolation>,
    pub notes: Vec<String>,
}

/// Counts idempotents on every plane through three of `points` and on seeded
/// random planes through zero, one or two of them.
pub fn conjecture_scan(points: &[Vec<f64>], strategy: &ScanStrategy) -> Result<ScanReport, ClassifyError> {
    if points.iter().any(|p| p.len() != 3) {
        return Err(ClassifyError::Precondition("the plane scan needs a three-dimensional algebra".into()));
    }
    let mut report = ScanReport {
        points: points.len(),
        triple_planes: 0,
        degenerate_triples: 0,
        random_planes: 0,
        max_count: 0,
        witness: None,
        violations: Vec::new(),
        notes: Vec::new(),
    };
    let record = |plane: AffinePlane, report: &mut ScanReport| {
        let c = count_in_subspace(points, &plane, strategy.tol, true);
        let entry = PlaneViolation { plane, count: c.count, members: c.members };
        if c.count > report.max_count {
            report.max_count = c.count;
            report.witness = Some(entry.clone());
        }
        if c.conjecture_violation {
            report.violations.push(entry);
        }
    };
    let idx: Vec<usize> = (0..points.len()).collect();
    for t in combinations(&idx, 3) {
        match AffinePlane::through(&[&points[t[0]], &points[t[1]], &points[t[2]]]) {
            Ok(plane) => {
                report.triple_planes += 1;
                record(plane, &mut report);
            }
            Err(_) => report.degenerate_triples += 1,
        }
    }
    if report.degenerate_triples > 0 {
        report.notes.push(format!("{} collinear triples skipped", report.degenerate_triples));
    }
    let scale = points.iter().flatten().map(|x| x.abs()).fold(1.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    let random_vec = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..3).map(|_| rng.random_range(-scale..scale)).collect() };
    let mut attempts = 0usize;
    while report.random_planes < strategy.random_planes && attempts < 4 * strategy.random_planes + 16 {
        attempts += 1;
        let kind = attempts % 3;
        let plane = if points.len() >= 2 && kind == 0 {
            let i = rng.random_range(0..points.len());
            let j = (i + rng.random_range(1..points.len())) % points.len();
            let d: Vec<f64> = points[j].iter().zip(&points[i]).map(|(a, b)| a - b).collect();
            AffinePlane::new(points[i].clone(), vec![d, random_vec(&mut rng)])
        } else if !points.is_empty() && kind == 1 {
            let i = rng.random_range(0..points.len());
            AffinePlane::new(points[i].clone(), vec![random_vec(&mut rng), random_vec(&mut rng)])
        } else {
            AffinePlane::new(random_vec(&mut rng), vec![random_vec(&mut rng), random_vec(&mut rng)])
        };
        if let Ok(plane) = plane {
            report.random_planes += 1;
            record(plane, &mut report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn rr() -> Algebra<Rational> {
        Algebra::from_fn(2, |i, j, k| if i == j && j == k { int(1) } else { int(0) }).unwrap()
    }

    #[test]
    fn square_identity_on_product() {
        let a = rr();
        let pts = vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(0), int(0)], vec![int(1), int(1)]];
        let res = square_identity_residual(&a, &pts, &[int(1), int(1), int(-1)], 0.0).unwrap();
        assert_eq!(res, vec![int(0), int(0)]);
        let bad = square_identity_residual(&a, &pts, &[int(1), int(1), int(1)], 0.0);
        assert!(matches!(bad, Err(ClassifyError::Precondition(_))));
    }

    #[test]
    fn relations_of_product_square() {
        let pts = vec![vec![int(0), int(0)], vec![int(0), int(1)], vec![int(1), int(0)], vec![int(1), int(1)]];
        let rels = affine_relations(&pts);
        assert_eq!(rels.len(), 4);
        let r = rels.iter().find(|r| r.target == 3).unwrap();
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.coefficients, vec![int(-1), int(1), int(1)]);
    }

    #[test]
    fn plane_distance_and_counts() {
        let cube: Vec<Vec<f64>> =
            (0..8).map(|m| (0..3).map(|b| f64::from((m >> (2 - b)) & 1)).collect()).collect();
        let floor = AffinePlane::new(vec![0.0; 3], vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(count_in_subspace(&cube, &floor, 1e-9, true).count, 4);
        let diag = AffinePlane::through(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(count_in_subspace(&cube, &diag, 1e-9, true).count, 3);
        assert!(AffinePlane::new(vec![0.0; 3], vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]]).is_err());
        let scan = conjecture_scan(&cube, &ScanStrategy { random_planes: 500, ..Default::default() }).unwrap();
        assert_eq!(scan.max_count, 4);
        assert!(scan.violations.is_empty());
        assert_eq!(scan.triple_planes + scan.degenerate_triples, 56);
    }

    #[test]
    fn line_of_idempotents() {
        let a = Algebra::from_fn(2, |i, j, k| match (i, j, k) {
            (0, 0, 0) => int(1),
            (0, 1, 1) | (1, 0, 1) => rational(1, 2),
            _ => int(0),
        })
        .unwrap();
        let out = line_analysis(&a, &[int(1), int(0)], &[int(1), int(1)], 0.0).unwrap();
        assert_eq!(out.case, LineCase::CaseA);
        assert!(out.difference_square_zero);
        assert_eq!(out.half_in_sample_spectrum, Some(true));
        let b = rr();
        let out = line_analysis(&b, &[int(1), int(0)], &[int(0), int(1)], 0.0).unwrap();
        assert_eq!(out.case, LineCase::CaseB);
        assert!(line_analysis(&b, &[int(2), int(0)], &[int(0), int(1)], 0.0).is_err());
    }
}
