//! Univariate polynomials.
//!
//! Exact work (resultants, gcds, squarefree parts, rational roots) runs over
//! [`Rational`]; the remaining roots are found numerically with Aberth-Ehrlich
//! iteration followed by a Newton polish.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{f64_to_rational, rational_to_f64, Complex64, Rational, Scalar};

/// Coefficients are stored lowest degree first, with no trailing exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            // Force the eliminated coefficient to an exact zero in float mode.
            rem[k + dd] = F::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead();
        Self::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
    }
}

impl UPoly<Rational> {
    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Yun's squarefree decomposition: `self = c * prod f_i^i` with each `f_i`
    /// squarefree, monic and pairwise coprime. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly<Rational>, usize)> {
        let mut out = Vec::new();
        if self.degree().is_none_or(|d| d == 0) {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().is_some_and(|deg| deg > 0) {
            let a = b.gcd(&d);
            let b_next = b.exact_div(&a);
            let c_next = d.exact_div(&a);
            d = c_next.sub(&b_next.derivative());
            if a.degree().is_some_and(|deg| deg > 0) {
                out.push((a, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    /// All distinct rational roots.
    ///
    /// Numeric approximations are sharpened by fixed-point Newton steps and
    /// turned into candidates with continued fractions; a candidate is kept only
    /// if it passes the rational-root divisibility test and evaluates to exactly
    /// zero.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.degree().is_none_or(|d| d == 0) {
            return roots;
        }
        let mut p = self.clone();
        if p.coeff(0).is_zero() {
            roots.push(Rational::zero());
            while p.coeff(0).is_zero() {
                p = UPoly::new(p.coeffs[1..].to_vec());
            }
        }
        // Work with the squarefree part so Newton converges quadratically.
        let sf = p.squarefree_decomposition().into_iter().fold(UPoly::constant(Rational::one()), |acc, (f, _)| acc.mul(&f));
        if sf.degree().is_none_or(|d| d == 0) {
            return roots;
        }
        let ints = sf.primitive_integer();
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        let target_bits = 2 * lead.bits() + 64;
        let dsf = sf.derivative();
        let approx = complex_roots(&sf.coeffs.iter().map(|c| c.to_complex()).collect::<Vec<_>>());
        for z in approx {
            if z.im.abs() > 1e-6 * z.norm().max(1.0) {
                continue;
            }
            let Some(mut x) = f64_to_rational(z.re) else { continue };
            for _ in 0..10 {
                let dv = dsf.eval(&x);
                if dv.is_zero() {
                    break;
                }
                let step = sf.eval(&x) / dv;
                x = round_dyadic(&(x - &step), target_bits);
                if step.abs() < Rational::new(BigInt::one(), BigInt::one() << target_bits) {
                    break;
                }
            }
            for cand in convergents(&x, &lead).into_iter().rev() {
                let (num, den) = (cand.numer().abs(), cand.denom().clone());
                if !(lead.is_multiple_of(&den) && constant.is_multiple_of(&num)) {
                    continue;
                }
                if sf.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                    break;
                }
            }
        }
        roots.sort();
        roots
    }
}

fn round_dyadic(x: &Rational, bits: u64) -> Rational {
    let scale = Rational::from_integer(BigInt::one() << bits);
    (x * &scale).round() / scale
}

/// Continued-fraction convergents of `x` with denominator at most `max_den`.
pub(crate) fn convergents(x: &Rational, max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..4096 {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > max_den {
            break;
        }
        out.push(Rational::new(h_next.clone(), k_next.clone()));
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// The simplest rational within `rel_tol` (relative) of `x` whose denominator is at most `max_den`.
pub fn rationalize(x: f64, max_den: u64, rel_tol: f64) -> Option<Rational> {
    let q = f64_to_rational(x)?;
    let tol = rel_tol * x.abs().max(1.0);
    convergents(&q, &BigInt::from(max_den)).into_iter().find(|c| (rational_to_f64(c) - x).abs() <= tol)
}

/// Roots of `a t^2 + b t + c` with `a != 0`, computed without cancellation.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    // Pick the sign that avoids subtracting nearly equal numbers.
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// All complex roots of the polynomial with the given coefficients (lowest first).
///
/// Trailing zero coefficients are ignored; zero roots are split off exactly.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.norm() == 0.0) {
        c.pop();
    }
    let mut roots = Vec::new();
    while c.len() > 1 && c[0].norm() == 0.0 {
        roots.push(Complex64::new(0.0, 0.0));
        c.remove(0);
    }
    let n = c.len().saturating_sub(1);
    match n {
        0 => return roots,
        1 => {
            roots.push(-c[0] / c[1]);
            return roots;
        }
        2 => {
            roots.extend(quadratic_roots(c[2], c[1], c[0]));
            return roots;
        }
        _ => {}
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for coef in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + coef;
        }
        (p, dp)
    };
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zi - p / dp;
            if eval(cand).0.norm() < p.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    roots.extend(z);
    roots
}

/// Complex roots of an exact polynomial, via its coefficients' float values.
pub fn complex_roots_of(p: &UPoly<Rational>) -> Vec<Complex64> {
    complex_roots(&p.coeffs().iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn qp(c: &[Rational]) -> UPoly<Rational> {
        UPoly::new(c.to_vec())
    }

    fn from_roots(roots: &[Rational]) -> UPoly<Rational> {
        roots.iter().fold(UPoly::constant(int(1)), |acc, r| acc.mul(&qp(&[-r.clone(), int(1)])))
    }

    #[test]
    fn division_and_gcd() {
        let a = from_roots(&[int(1), int(2), rational(1, 3)]);
        let b = from_roots(&[int(2), int(5)]);
        assert_eq!(a.gcd(&b), from_roots(&[int(2)]));
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn squarefree_decomposition_multiplicities() {
        let p = from_roots(&[int(1), int(1), int(1), int(-2), int(-2), int(4)]);
        let dec = p.squarefree_decomposition();
        let mults: Vec<(Option<usize>, usize)> = dec.iter().map(|(f, m)| (f.degree(), *m)).collect();
        assert_eq!(mults, vec![(Some(1), 1), (Some(1), 2), (Some(1), 3)]);
        assert_eq!(dec[2].0, from_roots(&[int(1)]));
    }

    #[test]
    fn rational_roots_with_large_heights() {
        let big = Rational::new(BigInt::from(123_456_789_012_345i64), BigInt::from(987_654_321_987i64));
        let p = from_roots(&[big.clone(), rational(-7, 3), int(0)]).mul(&qp(&[int(-2), int(0), int(1)]));
        let roots = p.rational_roots();
        assert_eq!(roots, vec![rational(-7, 3), int(0), big]);
    }

    #[test]
    fn nearby_rational_roots_do_not_shadow_each_other() {
        // x (x - 1)(x + 2)(3x + 5)
        let p = from_roots(&[int(0), int(1), int(-2), rational(-5, 3)]);
        assert_eq!(p.rational_roots(), vec![int(-2), rational(-5, 3), int(0), int(1)]);
    }

    #[test]
    fn rational_roots_skip_irrational_and_complex() {
        // (t^2 - 3)(t^2 + 1)
        let p = qp(&[int(-3), int(0), int(-2), int(0), int(1)]);
        assert!(p.rational_roots().is_empty());
    }

    #[test]
    fn complex_roots_of_quartic() {
        // (t-1)(t+2)(t^2+4)
        let p = from_roots(&[int(1), int(-2)]).mul(&qp(&[int(4), int(0), int(1)]));
        let roots = complex_roots_of(&p);
        assert_eq!(roots.len(), 4);
        let expected = [Complex64::new(-2.0, 0.0), Complex64::new(0.0, -2.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)];
        for e in expected {
            assert!(roots.iter().any(|r| (r - e).norm() < 1e-12), "missing {e}: {roots:?}");
        }
    }
}
