//! Commutative algebras given by structure constants.
//!
//! `e_i * e_j = sum_k gamma[i][j][k] e_k`, with `gamma` symmetric in `i, j`.

use num_traits::{One, Zero};

use crate::linalg::{LinalgError, Matrix};
use crate::poly::{complex_roots, quadratic_roots, UPoly};
use crate::scalar::{rational_to_f64, Complex64, Rational, Scalar, ScalarMode};

pub const MAX_DIM: usize = 4;

/// Coordinates of an algebra element in the standard basis.
pub type Element<F> = Vec<F>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension {0} is outside the supported range 1..=4")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants are not commutative at e{i}*e{j} (component {k})")]
    NotCommutative { i: usize, j: usize, k: usize },
    #[error("basis change matrix is singular")]
    SingularBasisChange,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<F> {
    dim: usize,
    gamma: Vec<F>,
    label: Option<String>,
}

/// Matrix of `x -> c * x`; column `j` is `c * e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultOperator<F>(pub Matrix<F>);

/// Eigenvalue multiset of a multiplication operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Present when every eigenvalue is rational and known exactly.
    pub exact: Option<Vec<Rational>>,
}

impl<F: Scalar> Algebra<F> {
    /// Builds an algebra from `gamma[i][j][k]`, checking shape and commutativity.
    pub fn new(gamma: Vec<Vec<Vec<F>>>) -> Result<Self, AlgebraError> {
        let n = gamma.len();
        for row in &gamma {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, got: row.len() });
            }
            for cell in row {
                if cell.len() != n {
                    return Err(AlgebraError::DimensionMismatch { expected: n, got: cell.len() });
                }
            }
        }
        Self::from_fn(n, |i, j, k| gamma[i][j][k].clone())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> F) -> Result<Self, AlgebraError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(AlgebraError::UnsupportedDim(dim));
        }
        let mut gamma = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    gamma.push(f(i, j, k));
                }
            }
        }
        let alg = Algebra { dim, gamma, label: None };
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let diff = alg.gamma(i, j, k).clone() - alg.gamma(j, i, k).clone();
                    let scale = alg.gamma(i, j, k).magnitude().max(1.0);
                    if !diff.is_negligible(1e-12 * scale) {
                        return Err(AlgebraError::NotCommutative { i, j, k });
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &F {
        &self.gamma[(i * self.dim + j) * self.dim + k]
    }

    /// Structure constants as a nested `[i][j][k]` array.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<F>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| (0..self.dim).map(|k| self.gamma(i, j, k).clone()).collect()).collect())
            .collect()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Algebra<G> {
        Algebra { dim: self.dim, gamma: self.gamma.iter().map(f).collect(), label: self.label.clone() }
    }

    pub fn to_complex(&self) -> Algebra<Complex64> {
        self.map(Scalar::to_complex)
    }

    fn check_len(&self, x: &[F]) -> Result<(), AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Result<Element<F>, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &[F], y: &[F]) -> Element<F> {
        let n = self.dim;
        let mut out = vec![F::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let w = x[i].clone() * y[j].clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        *slot = slot.clone() + w.clone() * g.clone();
                    }
                }
            }
        }
        out
    }

    pub fn square(&self, x: &[F]) -> Result<Element<F>, AlgebraError> {
        self.mul(x, x)
    }

    /// `x^2 - x`, whose zeros are exactly the idempotents.
    pub fn psi(&self, x: &[F]) -> Result<Element<F>, AlgebraError> {
        Ok(sub(&self.square(x)?, x))
    }

    pub fn mult_operator(&self, c: &[F]) -> Result<MultOperator<F>, AlgebraError> {
        self.check_len(c)?;
        let n = self.dim;
        let mut m: Matrix<F> = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                if c[i].is_zero() {
                    continue;
                }
                for k in 0..n {
                    m[(k, j)] = m[(k, j)].clone() + c[i].clone() * self.gamma(i, j, k).clone();
                }
            }
        }
        Ok(MultOperator(m))
    }

    /// Jacobian of `x -> x^2 - x` at `x`, equal to `2 L_x - I`.
    pub fn psi_jacobian(&self, x: &[F]) -> Result<Matrix<F>, AlgebraError> {
        let l = self.mult_operator(x)?.0;
        let two = F::from_i64(2);
        Ok(l.scale(&two).sub(&Matrix::identity(self.dim)))
    }

    /// `det(L_c - 1/2 I)`: the characteristic polynomial of `L_c` at one half, up to sign.
    pub fn chi_at_half(&self, c: &[F]) -> Result<F, AlgebraError> {
        let l = self.mult_operator(c)?.0;
        let shifted = l.sub(&Matrix::identity(self.dim).scale(&F::half()));
        Ok(shifted.det())
    }

    /// The algebra with product `x *' y = T^{-1}(Tx * Ty)`.
    ///
    /// Idempotents of the result are `T^{-1}` applied to idempotents of `self`.
    pub fn conjugate(&self, t: &Matrix<F>) -> Result<Algebra<F>, AlgebraError> {
        let n = self.dim;
        if t.rows() != n || t.cols() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: t.rows() });
        }
        let t_inv = t.inverse().map_err(|_| AlgebraError::SingularBasisChange)?;
        let cols: Vec<Vec<F>> = (0..n).map(|j| t.column(j)).collect();
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul_unchecked(&cols[i], &cols[j]);
                gamma.extend(t_inv.mul_vec(&prod));
            }
        }
        Ok(Algebra { dim: n, gamma, label: self.label.clone() })
    }

    pub fn peirce_spectrum(&self, c: &[F]) -> Result<Spectrum, AlgebraError> {
        let l = self.mult_operator(c)?.0;
        Ok(spectrum_of(&l))
    }
}

impl Algebra<Rational> {
    pub fn to_f64(&self) -> Algebra<f64> {
        self.map(rational_to_f64)
    }
}

/// Eigenvalues of a small square matrix.
///
/// Dimension 2 uses the closed form; larger sizes find the roots of the
/// characteristic polynomial. Exact matrices report rational eigenvalues
/// exactly when the characteristic polynomial splits over the rationals.
pub fn spectrum_of<F: Scalar>(m: &Matrix<F>) -> Spectrum {
    let n = m.rows();
    let charpoly = m.charpoly();
    let exact = if F::EXACT {
        let q: Vec<Rational> = charpoly.iter().map(|c| c.as_rational().expect("exact scalar")).collect();
        exact_eigenvalues(&UPoly::new(q))
    } else {
        None
    };
    let mut eigenvalues = match &exact {
        Some(vals) => vals.iter().map(|v| Complex64::new(rational_to_f64(v), 0.0)).collect(),
        None => {
            let c: Vec<Complex64> = charpoly.iter().map(Scalar::to_complex).collect();
            match n {
                1 => vec![-c[0]],
                2 => quadratic_roots(Complex64::one(), c[1], c[0]).to_vec(),
                _ => complex_roots(&c),
            }
        }
    };
    sort_complex(&mut eigenvalues);
    Spectrum { eigenvalues, exact }
}

fn exact_eigenvalues(charpoly: &UPoly<Rational>) -> Option<Vec<Rational>> {
    let n = charpoly.degree()?;
    let mut vals = Vec::with_capacity(n);
    for (factor, mult) in charpoly.squarefree_decomposition() {
        let roots = factor.rational_roots();
        if roots.len() != factor.degree().unwrap_or(0) {
            return None;
        }
        for r in roots {
            vals.extend(std::iter::repeat_n(r, mult));
        }
    }
    if vals.len() != n {
        return None;
    }
    vals.sort();
    Some(vals)
}

/// Deterministic order for complex values: real part then imaginary part,
/// compared on a 1e-9 grid so rounding noise does not reorder ties.
pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| complex_key(*a).cmp(&complex_key(*b)).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
}

pub(crate) fn complex_key(z: Complex64) -> (i64, i64) {
    (quantize(z.re), quantize(z.im))
}

pub(crate) fn quantize(x: f64) -> i64 {
    (x * 1e9).round().clamp(-9e18, 9e18) as i64
}

impl Spectrum {
    /// Whether `1/2` is an eigenvalue (exactly, or within `tol`).
    pub fn contains_half(&self, tol: f64) -> bool {
        match &self.exact {
            Some(vals) => vals.iter().any(|v| *v == crate::scalar::rational(1, 2)),
            None => self.eigenvalues.iter().any(|z| (z - Complex64::new(0.5, 0.0)).norm() <= tol),
        }
    }

    /// Whether `1` is an eigenvalue (exactly, or within `tol`).
    pub fn contains_one(&self, tol: f64) -> bool {
        match &self.exact {
            Some(vals) => vals.iter().any(One::is_one),
            None => self.eigenvalues.iter().any(|z| (z - Complex64::one()).norm() <= tol),
        }
    }

    /// Eigenvalues with one copy of `1` removed (the eigenvalue nearest to one).
    pub fn nontrivial(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        if let Some(pos) = v
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - Complex64::one()).norm().total_cmp(&(b.1 - Complex64::one()).norm()))
            .map(|(i, _)| i)
        {
            v.remove(pos);
        }
        v
    }

    /// Exact counterpart of [`Spectrum::nontrivial`].
    pub fn nontrivial_exact(&self) -> Option<Vec<Rational>> {
        let mut v = self.exact.clone()?;
        let pos = v.iter().position(One::is_one)?;
        v.remove(pos);
        Some(v)
    }
}

/// An algebra in either scalar mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAlgebra {
    Exact(Algebra<Rational>),
    Float(Algebra<f64>),
}

impl AnyAlgebra {
    pub fn dim(&self) -> usize {
        match self {
            AnyAlgebra::Exact(a) => a.dim(),
            AnyAlgebra::Float(a) => a.dim(),
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            AnyAlgebra::Exact(a) => a.label(),
            AnyAlgebra::Float(a) => a.label(),
        }
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyAlgebra::Exact(_) => ScalarMode::Exact,
            AnyAlgebra::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_f64(&self) -> Algebra<f64> {
        match self {
            AnyAlgebra::Exact(a) => a.to_f64(),
            AnyAlgebra::Float(a) => a.clone(),
        }
    }

    pub fn to_complex(&self) -> Algebra<Complex64> {
        match self {
            AnyAlgebra::Exact(a) => a.to_complex(),
            AnyAlgebra::Float(a) => a.to_complex(),
        }
    }

    /// Converts to float mode; float algebras are returned unchanged.
    pub fn into_float(self) -> AnyAlgebra {
        match self {
            AnyAlgebra::Exact(a) => AnyAlgebra::Float(a.to_f64()),
            f => f,
        }
    }

    pub fn with_label(self, label: impl Into<String>) -> Self {
        match self {
            AnyAlgebra::Exact(a) => AnyAlgebra::Exact(a.with_label(label)),
            AnyAlgebra::Float(a) => AnyAlgebra::Float(a.with_label(label)),
        }
    }
}

impl From<Algebra<Rational>> for AnyAlgebra {
    fn from(a: Algebra<Rational>) -> Self {
        AnyAlgebra::Exact(a)
    }
}

impl From<Algebra<f64>> for AnyAlgebra {
    fn from(a: Algebra<f64>) -> Self {
        AnyAlgebra::Float(a)
    }
}

impl From<LinalgError> for AlgebraError {
    fn from(_: LinalgError) -> Self {
        AlgebraError::SingularBasisChange
    }
}

pub fn add<F: Scalar>(x: &[F], y: &[F]) -> Element<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect()
}

pub fn sub<F: Scalar>(x: &[F], y: &[F]) -> Element<F> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

pub fn scale<F: Scalar>(s: &F, x: &[F]) -> Element<F> {
    x.iter().map(|a| s.clone() * a.clone()).collect()
}

pub fn is_zero_vec<F: Scalar>(x: &[F], tol: f64) -> bool {
    if F::EXACT {
        x.iter().all(Zero::is_zero)
    } else {
        crate::linalg::norm(x) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn h2() -> Algebra<Rational> {
        // (x1 y1 - x2 y2, -3/2 (x1 y2 + x2 y1))
        Algebra::from_fn(2, |i, j, k| match (i, j, k) {
            (0, 0, 0) => int(1),
            (1, 1, 0) => int(-1),
            (0, 1, 1) | (1, 0, 1) => rational(-3, 2),
            _ => int(0),
        })
        .unwrap()
    }

    #[test]
    fn rejects_noncommutative_and_bad_dims() {
        let err = Algebra::from_fn(2, |i, j, k| if (i, j, k) == (0, 1, 0) { int(1) } else { int(0) });
        assert_eq!(err, Err(AlgebraError::NotCommutative { i: 0, j: 1, k: 0 }));
        assert_eq!(Algebra::<f64>::from_fn(5, |_, _, _| 0.0), Err(AlgebraError::UnsupportedDim(5)));
        assert_eq!(Algebra::<f64>::from_fn(0, |_, _, _| 0.0), Err(AlgebraError::UnsupportedDim(0)));
    }

    #[test]
    fn h2_products() {
        let a = h2();
        assert_eq!(a.mul(&[int(1), int(0)], &[int(0), int(1)]).unwrap(), vec![int(0), rational(-3, 2)]);
        let c = vec![rational(-1, 3), rational(2, 3)];
        assert_eq!(a.square(&c).unwrap(), c);
        assert_eq!(a.square(&[int(0), int(0)]).unwrap(), vec![int(0), int(0)]);
        assert_eq!(
            a.mul(&[int(1)], &[int(0), int(1)]),
            Err(AlgebraError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn mult_operator_and_chi() {
        let a = h2();
        let l = a.mult_operator(&[int(1), int(0)]).unwrap().0;
        assert_eq!(l, Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), rational(-3, 2)]]).unwrap());
        assert_eq!(a.mult_operator(&[int(0), int(0)]).unwrap().0, Matrix::zeros(2, 2));
        assert_eq!(a.chi_at_half(&[int(0), int(0)]).unwrap(), rational(1, 4));
        assert_eq!(a.chi_at_half(&[int(1), int(0)]).unwrap(), int(-1));
        let s = a.peirce_spectrum(&[int(1), int(0)]).unwrap();
        assert_eq!(s.exact, Some(vec![rational(-3, 2), int(1)]));
        assert_eq!(s.nontrivial_exact(), Some(vec![rational(-3, 2)]));
    }

    #[test]
    fn conjugation_by_identity_and_swap() {
        let a = h2();
        assert_eq!(a.conjugate(&Matrix::identity(2)).unwrap(), a);
        let swap = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let b = a.conjugate(&swap).unwrap();
        // idempotent (1,0) of A maps to (0,1) in B
        assert_eq!(b.square(&[int(0), int(1)]).unwrap(), vec![int(0), int(1)]);
        let singular = Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(1), int(1)]]).unwrap();
        assert_eq!(a.conjugate(&singular), Err(AlgebraError::SingularBasisChange));
    }

    #[test]
    fn irrational_spectrum_falls_back_to_floats() {
        let m = Matrix::from_rows(vec![vec![int(0), int(2)], vec![int(1), int(0)]]).unwrap();
        let s = spectrum_of(&m);
        assert!(s.exact.is_none());
        assert!((s.eigenvalues[1].re - 2f64.sqrt()).abs() < 1e-15);
    }
}
