use serde::Serialize;

use super::{solve, SolveMethod, SolveResult, SolverConfig};
use crate::algebra::AnyAlgebra;

/// Eigenvalues and charges within this distance of a boundary value are treated as on it.
pub const BOUNDARY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenericityStatus {
    Generic,
    NonGenericContinuum,
    NonGenericHalfSpectrum,
    NonGenericMultiple,
    Undetermined,
}

impl std::fmt::Display for GenericityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityVerdict {
    pub status: GenericityStatus,
    pub evidence: String,
    pub idempotent_count: usize,
    pub expected_count: usize,
    pub nilpotent_count: usize,
    pub half_in_spectrum: bool,
    pub continuum: bool,
}

/// Solves and judges genericity in one call.
pub fn is_generic(alg: &AnyAlgebra, cfg: &SolverConfig) -> GenericityVerdict {
    verdict_for(&solve(alg, cfg), alg.dim())
}

/// Judges a finished solve.
///
/// Priority: one half in a spectrum, then a continuum, then a count deficit,
/// then an exact count of `2^n`.
pub fn verdict_for(res: &SolveResult, dim: usize) -> GenericityVerdict {
    let expected = 1usize << dim;
    let count = res.idempotents.len();
    let half = res.idempotents.iter().any(|r| r.spectrum.contains_half(BOUNDARY_TOL));
    let nil = res.nilpotents.len();
    let exact = res.method == SolveMethod::Exact;
    let (status, why) = if half {
        (GenericityStatus::NonGenericHalfSpectrum, "1/2 is a Peirce eigenvalue of a computed idempotent".to_string())
    } else if res.continuum {
        (GenericityStatus::NonGenericContinuum, "idempotents or nilpotents are not isolated".to_string())
    } else if exact && (res.multiple_root || count < expected) {
        let why = if res.multiple_root {
            "an idempotent has multiplicity above one".to_string()
        } else {
            format!("{count} of {expected} idempotents are finite; the rest lie at infinity")
        };
        (GenericityStatus::NonGenericMultiple, why)
    } else if !exact && count < expected && nil > 0 {
        (GenericityStatus::NonGenericMultiple, format!("{count} of {expected} idempotents found and {nil} nilpotent directions"))
    } else if count == expected && nil == 0 {
        (GenericityStatus::Generic, format!("{expected} distinct idempotents, no 1/2 in any spectrum"))
    } else {
        (GenericityStatus::Undetermined, format!("{count} of {expected} idempotents found numerically"))
    };
    let evidence = format!(
        "{why}; {count} distinct idempotents (expected {expected}), {nil} nilpotent directions, {} solve",
        if exact { "exact" } else { "numeric" }
    );
    GenericityVerdict {
        status,
        evidence,
        idempotent_count: count,
        expected_count: expected,
        nilpotent_count: nil,
        half_in_spectrum: half,
        continuum: res.continuum,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealGenericity {
    /// `None` when genericity itself is undetermined.
    pub real_generic: Option<bool>,
    pub real_count: usize,
    pub total_count: usize,
    pub evidence: String,
}

/// Generic, with every complex idempotent real.
pub fn is_real_generic(res: &SolveResult, verdict: &GenericityVerdict) -> RealGenericity {
    let real_count = res.idempotents.iter().filter(|r| r.is_real).count();
    let total_count = res.idempotents.len();
    let (real_generic, evidence) = match verdict.status {
        GenericityStatus::Undetermined => (None, "genericity undetermined".to_string()),
        GenericityStatus::Generic if real_count == total_count => (Some(true), format!("all {total_count} idempotents are real")),
        GenericityStatus::Generic => (Some(false), format!("only {real_count} of {total_count} idempotents are real")),
        other => (Some(false), format!("not generic ({other})")),
    };
    RealGenericity { real_generic, real_count, total_count, evidence }
}
