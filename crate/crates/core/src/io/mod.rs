//! Reading and writing algebras.
//!
//! Two textual forms are supported: a JSON document carrying either the full
//! structure-constant tensor or a square map, and a bare polynomial list such
//! as `x1^2 - x2*x3, x2^2 - x1*x3, x3^2 - x1*x2`.

pub mod document;
pub mod dsl;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, AlgebraError, AnyAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{f64_to_rational, format_rational, rational_to_f64, Rational, ScalarMode};

pub use document::{float_json, parse_algebra, parse_document, rational_json, serialize_algebra, serialize_square_map, DocumentTarget, IoError, Parsed};
pub use dsl::{parse_polynomial_list, DslError, Pos};

/// A homogeneous quadratic map `F_k(x) = x^T Q_k x`, one symmetric `Q_k` per component.
///
/// Coefficients are stored exactly; `mode` records how the algebra built from
/// the map should compute.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticMap {
    dim: usize,
    components: Vec<Matrix<Rational>>,
    mode: ScalarMode,
}

impl QuadraticMap {
    /// Builds a map from symmetric coefficient matrices.
    pub fn new(components: Vec<Matrix<Rational>>, mode: ScalarMode) -> Result<Self, AlgebraError> {
        let n = components.len();
        if n == 0 || n > crate::algebra::MAX_DIM {
            return Err(AlgebraError::UnsupportedDim(n));
        }
        for (k, q) in components.iter().enumerate() {
            if q.rows() != n || q.cols() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, got: q.rows() });
            }
            if *q != q.transpose() {
                let (i, j) = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| q[(i, j)] != q[(j, i)])
                    .unwrap_or((0, 0));
                return Err(AlgebraError::NotCommutative { i, j, k });
            }
        }
        Ok(QuadraticMap { dim: n, components, mode })
    }

    pub(crate) fn from_parsed(parsed: &dsl::ParsedMap) -> Result<Self, AlgebraError> {
        let n = parsed.dim;
        let half = Rational::new(1.into(), 2.into());
        let components = parsed
            .components
            .iter()
            .map(|monos| {
                let mut q = Matrix::zeros(n, n);
                for (e, c) in monos {
                    let vars: Vec<usize> =
                        (0..4).flat_map(|v| std::iter::repeat_n(v, e[v] as usize)).collect();
                    let (i, j) = (vars[0], vars[1]);
                    if i == j {
                        q[(i, i)] = c.clone();
                    } else {
                        q[(i, j)] = c * &half;
                        q[(j, i)] = c * &half;
                    }
                }
                q
            })
            .collect();
        let mode = if parsed.has_decimal { ScalarMode::Float } else { ScalarMode::Exact };
        QuadraticMap::new(components, mode)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: ScalarMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn component(&self, k: usize) -> &Matrix<Rational> {
        &self.components[k]
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.components
            .iter()
            .map(|q| {
                let qx = q.mul_vec(x);
                x.iter().zip(&qx).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Renders the map in the polynomial-list syntax accepted by the parser.
    pub fn to_dsl(&self) -> String {
        let float = self.mode == ScalarMode::Float;
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|q| {
                let mut out = String::new();
                let squares = (0..self.dim).map(|i| (i, i));
                let cross = (0..self.dim).flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)));
                for (i, j) in squares.chain(cross) {
                    let c = if i == j { q[(i, i)].clone() } else { &q[(i, j)] * Rational::from_integer(2.into()) };
                    if c.is_zero() {
                        continue;
                    }
                    let mono = if i == j { format!("x{}^2", i + 1) } else { format!("x{}*x{}", i + 1, j + 1) };
                    push_term(&mut out, &c, &mono, float);
                }
                if out.is_empty() {
                    out.push('0');
                }
                out
            })
            .collect();
        comps.join(", ")
    }
}

fn push_term(out: &mut String, c: &Rational, mono: &str, float: bool) {
    let negative = *c < Rational::zero();
    let abs = if negative { -c.clone() } else { c.clone() };
    match (out.is_empty(), negative) {
        (true, true) => out.push('-'),
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
        (true, false) => {}
    }
    if float {
        out.push_str(&format!("{:?}*", rational_to_f64(&abs)));
    } else if !abs.is_one() {
        out.push_str(&format_rational(&abs));
        out.push('*');
    }
    out.push_str(mono);
}

/// The algebra with `gamma[i][j][k] = Q_k[i][j]`, whose square is `F`.
pub fn from_quadratic_map(map: &QuadraticMap) -> AnyAlgebra {
    let exact = from_quadratic_map_exact(map);
    match map.mode {
        ScalarMode::Exact => AnyAlgebra::Exact(exact),
        ScalarMode::Float => AnyAlgebra::Float(exact.to_f64()),
    }
}

pub fn from_quadratic_map_exact(map: &QuadraticMap) -> Algebra<Rational> {
    Algebra::from_fn(map.dim, |i, j, k| map.components[k][(i, j)].clone())
        .expect("symmetric components give a commutative algebra")
}

/// The square map `x -> x*x` of an algebra.
pub fn to_quadratic_map(alg: &AnyAlgebra) -> QuadraticMap {
    let (n, get): (usize, Box<dyn Fn(usize, usize, usize) -> Rational>) = match alg {
        AnyAlgebra::Exact(a) => (a.dim(), Box::new(move |i, j, k| a.gamma(i, j, k).clone())),
        AnyAlgebra::Float(a) => (
            a.dim(),
            Box::new(move |i, j, k| f64_to_rational(*a.gamma(i, j, k)).unwrap_or_else(Rational::zero)),
        ),
    };
    let components = (0..n).map(|k| Matrix::from_fn(n, n, |i, j| get(i, j, k))).collect();
    QuadraticMap { dim: n, components, mode: alg.mode() }
}
