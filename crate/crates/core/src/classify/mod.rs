//! Syzygies, charges, indices and configuration types of two-dimensional
//! real generic algebras, plus affine checks on idempotent sets.
//!
//! Type convention: with charges `a_i = 1/(1 - 2 lambda_i)` of the three
//! nonzero idempotents, all positive is type I, exactly one positive is
//! type II and exactly two positive is type III.

mod affine;
mod report;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AnyAlgebra, Spectrum};
use crate::linalg::Matrix;
use crate::scalar::{Complex64, Num, Rational, Scalar};
use crate::solver::{
    is_real_generic, solve, verdict_for, GenericityStatus, GenericityVerdict, IdempotentLine, IdempotentRecord,
    NilpotentDirection, RealGenericity, SolveMethod, SolverConfig, BOUNDARY_TOL,
};

pub use affine::{
    affine_relations, conjecture_scan, count_idempotents_in_affine_subspace, count_in_subspace, line_analysis,
    square_identity_residual, AffinePlane, AffineRelation, LineAnalysis, LineCase, PlaneCount, PlaneViolation,
    ScanReport, ScanStrategy,
};
pub use report::{num_json, num_text, report_json, report_text, CONVENTION, RENDER_LIMIT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("{0}")]
    NotApplicable(String),
    #[error("{what} is within {tol:e} of the genericity boundary")]
    Boundary { what: String, tol: f64 },
    #[error("all charges negative, which contradicts their unit sum")]
    AllNegative,
    #[error("4 lambda_i lambda_j = 1 and lambda_i + lambda_j != 1: no third eigenvalue exists")]
    NoSolution,
    #[error("4 lambda_i lambda_j = 1 and lambda_i + lambda_j = 1: every third eigenvalue satisfies the syzygy")]
    Indeterminate,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConfigType {
    TypeI,
    TypeII,
    TypeIII,
    NotApplicable,
}

impl std::fmt::Display for ConfigType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

impl ConfigType {
    /// `ind_inf` forced by the type, or `None` for `NotApplicable`.
    pub fn index_at_infinity(self) -> Option<i32> {
        match self {
            ConfigType::TypeI => Some(3),
            ConfigType::TypeII => Some(-1),
            ConfigType::TypeIII => Some(1),
            ConfigType::NotApplicable => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyzygyResiduals {
    pub spectral: Num,
    pub charge_sum: Num,
    pub barycentric: Vec<Num>,
}

impl SyzygyResiduals {
    /// Largest residual magnitude (zero exactly when every residual is an exact zero).
    pub fn max_abs(&self) -> f64 {
        std::iter::once(&self.spectral)
            .chain(std::iter::once(&self.charge_sum))
            .chain(&self.barycentric)
            .map(|n| n.approx.norm())
            .fold(0.0, f64::max)
    }

    pub fn all_exact_zero(&self) -> bool {
        std::iter::once(&self.spectral)
            .chain(std::iter::once(&self.charge_sum))
            .chain(&self.barycentric)
            .all(|n| n.exact.as_ref().is_some_and(Zero::is_zero))
    }
}

/// Full analysis of one algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraReport {
    pub dim: usize,
    pub label: Option<String>,
    pub mode: crate::scalar::ScalarMode,
    pub method: SolveMethod,
    /// Zero idempotent first.
    pub idempotents: Vec<IdempotentRecord>,
    pub nilpotents: Vec<NilpotentDirection>,
    pub continuum: bool,
    pub witness_line: Option<IdempotentLine>,
    pub multiplicity_at_infinity: Option<usize>,
    pub verdict: GenericityVerdict,
    pub real_generic: RealGenericity,
    /// Distinct eigenvalues over all computed idempotents.
    pub sigma: Vec<Num>,
    pub config_type: ConfigType,
    pub config_type_geometric: Option<ConfigType>,
    /// Why no type was assigned, when applicable.
    pub type_note: Option<String>,
    /// `(a_0, a_1, a_2, a_3)` with `a_0 = -1`.
    pub charges: Option<Vec<Num>>,
    pub indices: Option<Vec<i8>>,
    pub index_at_infinity: Option<i32>,
    /// Sum of the indices of all four idempotents.
    pub index_sum: Option<i32>,
    pub residuals: Option<SyzygyResiduals>,
    pub notes: Vec<String>,
}

impl AlgebraReport {
    /// Real coordinates of the real idempotents, zero included.
    pub fn real_points(&self) -> Vec<Vec<f64>> {
        self.idempotents.iter().filter(|r| r.is_real).map(IdempotentRecord::real_point).collect()
    }

    /// Whether the two-dimensional classification pipeline applies.
    pub fn is_classifiable(&self) -> bool {
        self.config_type != ConfigType::NotApplicable
    }

    /// Nontrivial Peirce eigenvalues of the three nonzero idempotents (2D only).
    pub fn lambdas(&self) -> Option<Vec<Num>> {
        (self.dim == 2 && self.idempotents.len() == 4).then(|| self.idempotents[1..].iter().map(|r| r.lambda()).collect())
    }
}

/// Solves, judges genericity and, for 2D real generic input, classifies.
pub fn analyze(alg: &AnyAlgebra, cfg: &SolverConfig) -> AlgebraReport {
    let res = solve(alg, cfg);
    let dim = alg.dim();
    let verdict = verdict_for(&res, dim);
    let real_generic = is_real_generic(&res, &verdict);
    let sigma = union_spectrum(res.idempotents.iter().map(|r| &r.spectrum), cfg.tol.abs.max(1e-9));
    let mut report = AlgebraReport {
        dim,
        label: alg.label().map(str::to_string),
        mode: alg.mode(),
        method: res.method,
        idempotents: res.idempotents,
        nilpotents: res.nilpotents,
        continuum: res.continuum,
        witness_line: res.witness_line,
        multiplicity_at_infinity: res.multiplicity_at_infinity,
        verdict,
        real_generic,
        sigma,
        config_type: ConfigType::NotApplicable,
        config_type_geometric: None,
        type_note: None,
        charges: None,
        indices: None,
        index_at_infinity: None,
        index_sum: None,
        residuals: None,
        notes: res.notes,
    };
    if let Err(e) = classify_report(&mut report) {
        report.type_note = Some(e.to_string());
    }
    report
}

fn classify_report(report: &mut AlgebraReport) -> Result<(), ClassifyError> {
    check_classifiable(report)?;
    let ch = charges(report)?;
    let ty = classify_type(&ch)?;
    let geo = classify_type_geometric(report)?;
    let idx: Vec<i8> = report.idempotents.iter().map(index).collect::<Result<_, _>>()?;
    let inf = -idx[1..].iter().map(|&s| i32::from(s)).sum::<i32>();
    report.residuals = Some(residuals(report)?);
    report.charges = Some(std::iter::once(Num::exact(-Rational::one())).chain(ch).collect());
    report.index_sum = Some(idx.iter().map(|&s| i32::from(s)).sum());
    report.indices = Some(idx);
    report.index_at_infinity = Some(inf);
    report.config_type = ty;
    report.config_type_geometric = Some(geo);
    if geo != ty {
        report.notes.push(format!("charge-based type {ty} disagrees with geometric type {geo}"));
    }
    Ok(())
}

fn check_classifiable(report: &AlgebraReport) -> Result<(), ClassifyError> {
    if report.dim != 2 {
        return Err(ClassifyError::NotApplicable(format!("types are defined in dimension 2, not {}", report.dim)));
    }
    if report.verdict.status != GenericityStatus::Generic {
        return Err(ClassifyError::NotApplicable(format!("algebra is {}", report.verdict.status)));
    }
    if report.real_generic.real_generic != Some(true) || report.idempotents.len() != 4 {
        return Err(ClassifyError::NotApplicable("algebra is generic but not real generic".into()));
    }
    Ok(())
}

/// Charges `(a_1, a_2, a_3)` of the nonzero idempotents; `a_0 = -1` is implicit.
pub fn charges(report: &AlgebraReport) -> Result<Vec<Num>, ClassifyError> {
    check_classifiable(report)?;
    report.idempotents[1..]
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let l = r.lambda();
            let gap = Num { approx: Complex64::new(1.0, 0.0) - l.approx * 2.0, exact: l.exact.as_ref().map(|q| Rational::one() - q * Rational::from_integer(2.into())) };
            if gap.is_zero_within(BOUNDARY_TOL) {
                return Err(ClassifyError::Boundary { what: format!("1 - 2 lambda_{}", i + 1), tol: BOUNDARY_TOL });
            }
            Ok(match gap.exact {
                Some(q) => Num::exact(q.recip()),
                None => Num::approx(gap.approx.inv()),
            })
        })
        .collect()
}

/// `4 l1 l2 l3 - l1 - l2 - l3 + 1`.
pub fn verify_spectral_syzygy<F: Scalar>(l1: &F, l2: &F, l3: &F) -> F {
    F::from_i64(4) * l1.clone() * l2.clone() * l3.clone() - l1.clone() - l2.clone() - l3.clone() + F::one()
}

/// `sum 1/(1 - 2 l_i) - 1`.
pub fn verify_charge_syzygy<F: Scalar>(l: &[F; 3]) -> Result<F, ClassifyError> {
    let mut sum = -F::one();
    for (i, li) in l.iter().enumerate() {
        let gap = F::one() - F::from_i64(2) * li.clone();
        if gap.is_negligible(BOUNDARY_TOL) {
            return Err(ClassifyError::Boundary { what: format!("1 - 2 lambda_{}", i + 1), tol: BOUNDARY_TOL });
        }
        sum = sum + F::one() / gap;
    }
    Ok(sum)
}

/// `sum c_i / chi_i` over the nonzero idempotents.
pub fn barycentric_residual<F: Scalar>(points: &[Vec<F>], chis: &[F]) -> Result<Vec<F>, ClassifyError> {
    let n = points.first().map_or(0, Vec::len);
    let mut acc = vec![F::zero(); n];
    for (i, (c, chi)) in points.iter().zip(chis).enumerate() {
        if chi.is_negligible(BOUNDARY_TOL) {
            return Err(ClassifyError::Boundary { what: format!("chi_{}(1/2)", i + 1), tol: BOUNDARY_TOL });
        }
        for (a, x) in acc.iter_mut().zip(c) {
            *a = a.clone() + x.clone() / chi.clone();
        }
    }
    Ok(acc)
}

/// The barycentric identity evaluated on a classified report.
pub fn verify_barycentric(report: &AlgebraReport) -> Result<Vec<Num>, ClassifyError> {
    check_classifiable(report)?;
    let nz = &report.idempotents[1..];
    if let Some((pts, chis)) = exact_parts(nz) {
        return Ok(barycentric_residual(&pts, &chis)?.into_iter().map(Num::exact).collect());
    }
    let pts: Vec<Vec<Complex64>> = nz.iter().map(|r| r.point.clone()).collect();
    let chis: Vec<Complex64> = nz.iter().map(|r| r.chi_half.approx).collect();
    Ok(barycentric_residual(&pts, &chis)?.into_iter().map(Num::approx).collect())
}

fn exact_parts(recs: &[IdempotentRecord]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let pts = recs.iter().map(|r| r.exact.clone()).collect::<Option<Vec<_>>>()?;
    let chis = recs.iter().map(|r| r.chi_half.exact.clone()).collect::<Option<Vec<_>>>()?;
    Some((pts, chis))
}

fn residuals(report: &AlgebraReport) -> Result<SyzygyResiduals, ClassifyError> {
    let lambdas = report.lambdas().ok_or_else(|| ClassifyError::NotApplicable("need four idempotents".into()))?;
    let barycentric = verify_barycentric(report)?;
    let exact: Option<Vec<Rational>> = lambdas.iter().map(|n| n.exact.clone()).collect();
    let (spectral, charge_sum) = match exact {
        Some(l) => {
            let arr = [l[0].clone(), l[1].clone(), l[2].clone()];
            (Num::exact(verify_spectral_syzygy(&l[0], &l[1], &l[2])), Num::exact(verify_charge_syzygy(&arr)?))
        }
        None => {
            let l: Vec<Complex64> = lambdas.iter().map(|n| n.approx).collect();
            (Num::approx(verify_spectral_syzygy(&l[0], &l[1], &l[2])), Num::approx(verify_charge_syzygy(&[l[0], l[1], l[2]])?))
        }
    };
    Ok(SyzygyResiduals { spectral, charge_sum, barycentric })
}

/// Type from the signs of the three nonzero charges.
pub fn classify_type(charges: &[Num]) -> Result<ConfigType, ClassifyError> {
    if charges.len() != 3 {
        return Err(ClassifyError::Precondition(format!("expected 3 charges, got {}", charges.len())));
    }
    let mut positive = 0;
    for (i, a) in charges.iter().enumerate() {
        match a.sign(BOUNDARY_TOL) {
            0 => return Err(ClassifyError::Boundary { what: format!("charge a_{}", i + 1), tol: BOUNDARY_TOL }),
            1 => positive += 1,
            _ => {}
        }
    }
    Ok(match positive {
        3 => ConfigType::TypeI,
        2 => ConfigType::TypeIII,
        1 => ConfigType::TypeII,
        _ => return Err(ClassifyError::AllNegative),
    })
}

/// Type from the barycentric coordinates of `c_0` in the triangle `(c_1, c_2, c_3)`.
pub fn classify_type_geometric(report: &AlgebraReport) -> Result<ConfigType, ClassifyError> {
    check_classifiable(report)?;
    let nz = &report.idempotents[1..];
    let signs: Vec<i8> = match nz.iter().map(|r| r.exact.clone()).collect::<Option<Vec<_>>>() {
        Some(pts) => {
            let b = barycentric_of(&vec![Rational::zero(); 2], &pts)
                .ok_or_else(|| ClassifyError::Degenerate("nonzero idempotents are collinear".into()))?;
            b.iter().map(|q| Num::exact(q.clone()).sign(0.0)).collect()
        }
        None => {
            let pts: Vec<Vec<f64>> = nz.iter().map(IdempotentRecord::real_point).collect();
            let b = barycentric_of(&[0.0, 0.0], &pts)
                .ok_or_else(|| ClassifyError::Degenerate("nonzero idempotents are collinear".into()))?;
            b.iter().map(|&x| crate::scalar::sign_of(x, BOUNDARY_TOL)).collect()
        }
    };
    if signs.contains(&0) {
        return Err(ClassifyError::Boundary { what: "a barycentric coordinate of c_0".into(), tol: BOUNDARY_TOL });
    }
    Ok(match signs.iter().filter(|&&s| s < 0).count() {
        0 => ConfigType::TypeI,
        1 => ConfigType::TypeIII,
        2 => ConfigType::TypeII,
        _ => return Err(ClassifyError::AllNegative),
    })
}

/// Barycentric coordinates of `p` with respect to the affinely independent `verts`.
pub fn barycentric_of<F: Scalar>(p: &[F], verts: &[Vec<F>]) -> Option<Vec<F>> {
    let n = p.len();
    if verts.len() != n + 1 {
        return None;
    }
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| if i < n { verts[j][i].clone() } else { F::one() });
    let scale = verts.iter().flatten().map(Scalar::magnitude).fold(1.0, f64::max);
    if m.det().is_negligible(1e-12 * scale.powi(n as i32)) {
        return None;
    }
    let mut rhs = p.to_vec();
    rhs.push(F::one());
    m.solve(&rhs).ok()
}

/// `sign chi_c(1/2)`.
pub fn index(record: &IdempotentRecord) -> Result<i8, ClassifyError> {
    if !record.chi_half.is_real(1e-9) {
        return Err(ClassifyError::Precondition("idempotent is not real".into()));
    }
    match record.chi_half.sign(BOUNDARY_TOL) {
        0 => Err(ClassifyError::Boundary { what: "chi_c(1/2)".into(), tol: BOUNDARY_TOL }),
        s => Ok(s),
    }
}

/// `-(ind c_1 + ind c_2 + ind c_3)`.
pub fn index_at_infinity(report: &AlgebraReport) -> Result<i32, ClassifyError> {
    check_classifiable(report)?;
    report.idempotents[1..].iter().map(|r| index(r).map(i32::from)).sum::<Result<i32, _>>().map(|s| -s)
}

/// The `lambda_k` completing `(lambda_i, lambda_j)` to a solution of the spectral syzygy.
pub fn third_eigenvalue<F: Scalar>(li: &F, lj: &F) -> Result<F, ClassifyError> {
    let den = F::from_i64(4) * li.clone() * lj.clone() - F::one();
    let num = li.clone() + lj.clone() - F::one();
    if den.is_negligible(1e-12) {
        return Err(if num.is_negligible(1e-12) { ClassifyError::Indeterminate } else { ClassifyError::NoSolution });
    }
    Ok(num / den)
}

/// Distinct eigenvalues across spectra, exact when every copy is exact.
pub(crate) fn union_spectrum<'a>(spectra: impl Iterator<Item = &'a Spectrum>, tol: f64) -> Vec<Num> {
    let mut out: Vec<Num> = Vec::new();
    for s in spectra {
        let vals: Vec<Num> = match &s.exact {
            Some(e) => e.iter().cloned().map(Num::exact).collect(),
            None => s.eigenvalues.iter().copied().map(Num::approx).collect(),
        };
        for v in vals {
            let dup = out.iter().any(|o| match (&o.exact, &v.exact) {
                (Some(a), Some(b)) => a == b,
                _ => (o.approx - v.approx).norm() <= tol,
            });
            if !dup {
                out.push(v);
            }
        }
    }
    out.sort_by(|a, b| match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => crate::algebra::complex_key(a.approx).cmp(&crate::algebra::complex_key(b.approx)),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    #[test]
    fn spectral_syzygy_examples() {
        assert_eq!(verify_spectral_syzygy(&int(0), &int(0), &int(1)), int(0));
        assert_eq!(verify_spectral_syzygy(&int(-1), &int(-1), &int(-1)), int(0));
        assert_eq!(verify_spectral_syzygy(&int(1), &int(1), &int(1)), int(2));
    }

    #[test]
    fn charge_syzygy_examples() {
        let h2 = [rational(-5, 6), rational(-5, 6), rational(-3, 2)];
        assert_eq!(verify_charge_syzygy(&h2), Ok(int(0)));
        assert_eq!(verify_charge_syzygy(&[int(0), int(0), int(1)]), Ok(int(0)));
        assert_eq!(verify_charge_syzygy(&[int(0), int(0), int(0)]), Ok(int(2)));
        assert!(matches!(verify_charge_syzygy(&[rational(1, 2), int(0), int(0)]), Err(ClassifyError::Boundary { .. })));
    }

    #[test]
    fn third_eigenvalue_examples() {
        assert_eq!(third_eigenvalue(&int(0), &int(0)), Ok(int(1)));
        assert_eq!(third_eigenvalue(&int(-1), &int(-1)), Ok(int(-1)));
        assert_eq!(third_eigenvalue(&int(1), &int(1)), Ok(rational(1, 3)));
        assert_eq!(third_eigenvalue(&rational(1, 2), &rational(1, 2)), Err(ClassifyError::Indeterminate));
        assert_eq!(third_eigenvalue(&int(1), &rational(1, 4)), Err(ClassifyError::NoSolution));
    }

    #[test]
    fn type_from_charges() {
        let n = |p, q| Num::exact(rational(p, q));
        assert_eq!(classify_type(&[n(3, 8), n(3, 8), n(1, 4)]), Ok(ConfigType::TypeI));
        assert_eq!(classify_type(&[n(-1, 1), n(-1, 1), n(3, 1)]), Ok(ConfigType::TypeII));
        assert_eq!(classify_type(&[n(1, 1), n(1, 1), n(-1, 1)]), Ok(ConfigType::TypeIII));
        assert_eq!(classify_type(&[n(-1, 1), n(-1, 1), n(-1, 1)]), Err(ClassifyError::AllNegative));
        assert!(classify_type(&[Num::real(1e-9), n(1, 1), n(1, 1)]).is_err());
    }

    #[test]
    fn barycentric_coordinates() {
        let verts = vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]];
        assert_eq!(barycentric_of(&[int(0), int(0)], &verts), Some(vec![int(1), int(1), int(-1)]));
        let line = vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]];
        assert_eq!(barycentric_of(&[int(0), int(1)], &line), None);
    }
}
