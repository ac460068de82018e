//! Idempotents and 2-nilpotents of an algebra, and genericity verdicts.
//!
//! Two-dimensional rational algebras go through an exact elimination path;
//! everything else uses seeded multistart Newton over the complexification.

mod exact2d;
mod genericity;
mod nilpotent;
mod numeric;

use num_traits::Zero;

use crate::algebra::{complex_key, spectrum_of, Algebra, AnyAlgebra, Spectrum};
use crate::linalg::Matrix;
use crate::scalar::{rational_to_f64, Complex64, Num, Rational, Tolerance};

pub use exact2d::idempotents_2d_exact;
pub use genericity::{is_generic, is_real_generic, verdict_for, GenericityStatus, GenericityVerdict, RealGenericity, BOUNDARY_TOL};
pub use nilpotent::{nilpotent_directions, NilpotentSet};
pub use numeric::idempotents_numeric;

pub const DEFAULT_SEED: u64 = 0x1de9_0a1e;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Newton starts; `None` means `200 * 2^n`.
    pub starts: Option<usize>,
    pub seed: u64,
    /// Points closer than this (relative to their size) are merged.
    pub dedup: f64,
    /// Convergence threshold on `|x^2 - x| / max(1, |x|^2)`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Comparison tolerance for realness, spectra and signs.
    pub tol: Tolerance,
    /// Force the numeric path even for exact two-dimensional input.
    pub force_numeric: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: None,
            seed: DEFAULT_SEED,
            dedup: 1e-6,
            residual_tol: 1e-12,
            max_iter: 50,
            tol: Tolerance::default(),
            force_numeric: false,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn start_count(&self, dim: usize) -> usize {
        self.starts.unwrap_or(200 << dim)
    }
}

/// A solution of `x^2 = x` with its local data.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentRecord {
    pub point: Vec<Complex64>,
    /// Exact coordinates when the idempotent is rational.
    pub exact: Option<Vec<Rational>>,
    pub spectrum: Spectrum,
    /// `det(L_c - 1/2)`.
    pub chi_half: Num,
    /// `-1/(4 chi)`; set for every idempotent of a 2D algebra with `chi != 0`.
    pub charge: Option<Num>,
    /// Sign of `chi_half`, when real and nonzero.
    pub index: Option<i8>,
    pub is_real: bool,
}

impl IdempotentRecord {
    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(c) => c.iter().all(Zero::is_zero),
            None => self.point.iter().all(|z| z.norm() == 0.0),
        }
    }

    pub fn real_point(&self) -> Vec<f64> {
        self.point.iter().map(|z| z.re).collect()
    }

    /// The nontrivial Peirce eigenvalue of a nonzero idempotent of a 2D algebra.
    pub fn lambda(&self) -> Num {
        if let Some(v) = self.spectrum.nontrivial_exact() {
            if v.len() == 1 {
                return Num::exact(v[0].clone());
            }
        }
        Num::approx(self.spectrum.nontrivial().first().copied().unwrap_or_default())
    }
}

/// A projective solution of `x^2 = 0`, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentDirection {
    pub direction: Vec<Complex64>,
    pub exact: Option<Vec<Rational>>,
    pub is_real: bool,
}

/// A line `base + t * direction` made of idempotents.
#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentLine {
    pub base: Vec<Rational>,
    pub direction: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Zero idempotent first, then lexicographic by (re, im) of each coordinate.
    pub idempotents: Vec<IdempotentRecord>,
    pub nilpotents: Vec<NilpotentDirection>,
    /// Infinitely many idempotents (or nilpotents) detected.
    pub continuum: bool,
    pub witness_line: Option<IdempotentLine>,
    /// Bezout deficit attributed to infinity (exact 2D path only).
    pub multiplicity_at_infinity: Option<usize>,
    /// An affine solution of multiplicity above one was found.
    pub multiple_root: bool,
    /// Some converged point had a singular Jacobian of `x^2 - x`.
    pub singular_jacobian: bool,
    pub method: SolveMethod,
    pub notes: Vec<String>,
}

/// Finds idempotents and nilpotent directions with the best available method.
pub fn solve(alg: &AnyAlgebra, cfg: &SolverConfig) -> SolveResult {
    match alg {
        AnyAlgebra::Exact(a) if a.dim() <= 2 && !cfg.force_numeric => idempotents_2d_exact(a, cfg),
        AnyAlgebra::Exact(a) => numeric::solve_numeric(&a.to_f64(), Some(a), cfg),
        AnyAlgebra::Float(a) => numeric::solve_numeric(a, None, cfg),
    }
}

/// Builds the record of an exact rational idempotent.
pub(crate) fn exact_record(alg: &Algebra<Rational>, c: Vec<Rational>) -> IdempotentRecord {
    let n = alg.dim();
    let l = alg.mult_operator(&c).expect("dimension checked").0;
    let spectrum = if n == 2 && !c.iter().all(Zero::is_zero) {
        let lambda = l.trace() - Rational::from_integer(1.into());
        two_d_spectrum_exact(lambda)
    } else {
        spectrum_of(&l)
    };
    let chi = alg.chi_at_half(&c).expect("dimension checked");
    let chi_num = Num::exact(chi.clone());
    let charge = (n == 2 && !chi.is_zero()).then(|| Num::exact(-(Rational::from_integer(4.into()) * chi).recip()));
    let index = match chi_num.sign(0.0) {
        0 => None,
        s => Some(s),
    };
    IdempotentRecord {
        point: c.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect(),
        exact: Some(c),
        spectrum,
        chi_half: chi_num,
        charge,
        index,
        is_real: true,
    }
}

fn two_d_spectrum_exact(lambda: Rational) -> Spectrum {
    let one = Rational::from_integer(1.into());
    let mut exact = vec![one, lambda];
    exact.sort();
    let eigenvalues = exact.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect();
    Spectrum { eigenvalues, exact: Some(exact) }
}

/// Builds the record of an approximate (possibly complex) idempotent.
pub(crate) fn complex_record(alg: &Algebra<Complex64>, point: Vec<Complex64>, tol: &Tolerance) -> IdempotentRecord {
    let n = alg.dim();
    let scale = point.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let is_real = point.iter().all(|z| z.im.abs() <= tol.abs * scale);
    let point: Vec<Complex64> =
        if is_real { point.iter().map(|z| Complex64::new(z.re, 0.0)).collect() } else { point };
    let is_zero = point.iter().all(|z| z.norm() <= tol.abs);
    let l = alg.mult_operator(&point).expect("dimension checked").0;
    let spectrum = if n == 2 && !is_zero {
        let lambda = l.trace() - Complex64::new(1.0, 0.0);
        let mut eigenvalues = vec![Complex64::new(1.0, 0.0), clean(lambda, tol)];
        crate::algebra::sort_complex(&mut eigenvalues);
        Spectrum { eigenvalues, exact: None }
    } else {
        let mut s = spectrum_of(&l);
        s.eigenvalues = s.eigenvalues.into_iter().map(|z| clean(z, tol)).collect();
        s
    };
    let chi = clean(alg.chi_at_half(&point).expect("dimension checked"), tol);
    let boundary = 1e-7;
    let real_chi = chi.im.abs() <= tol.abs.max(1e-9 * chi.norm());
    let index = (is_real && real_chi && chi.re.abs() > boundary).then(|| if chi.re > 0.0 { 1 } else { -1 });
    let charge = (n == 2 && chi.norm() > boundary).then(|| Num::approx(clean(-(chi * 4.0).inv(), tol)));
    IdempotentRecord { point, exact: None, spectrum, chi_half: Num::approx(chi), charge, index, is_real }
}

/// Drops an imaginary part that is rounding noise.
fn clean(z: Complex64, tol: &Tolerance) -> Complex64 {
    if z.im.abs() <= tol.abs * z.re.abs().max(1.0) * 1e-3 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Zero first, then lexicographic order of `(re, im)` per coordinate.
pub(crate) fn sort_records(records: &mut [IdempotentRecord]) {
    records.sort_by(|a, b| {
        b.is_zero().cmp(&a.is_zero()).then_with(|| {
            let ka: Vec<(i64, i64)> = a.point.iter().map(|z| complex_key(*z)).collect();
            let kb: Vec<(i64, i64)> = b.point.iter().map(|z| complex_key(*z)).collect();
            ka.cmp(&kb).then_with(|| match (&a.exact, &b.exact) {
                (Some(x), Some(y)) => x.cmp(y),
                _ => std::cmp::Ordering::Equal,
            })
        })
    });
}

/// Relative distance used for deduplication.
pub(crate) fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let s = a.iter().chain(b).map(|z| z.norm()).fold(1.0, f64::max);
    d / s
}

/// `|det J| / |J|^n` for `J = 2 L_x - I`; small values mean a singular Jacobian.
pub(crate) fn jacobian_conditioning(alg: &Algebra<Complex64>, x: &[Complex64]) -> f64 {
    let j: Matrix<Complex64> = alg.psi_jacobian(x).expect("dimension checked");
    let norm = j.max_abs().max(1e-300);
    j.det().norm() / norm.powi(alg.dim() as i32)
}
