//! Parser for square maps written as polynomial lists.
//!
//! ```text
//! map     := expr (',' expr)*
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary | <juxtaposed atom>)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number | variable | '(' expr ')'
//! ```
//!
//! Variables are `x1..x4`; `x`, `y`, `z`, `w` are accepted as aliases.
//! Numbers are integers, decimals (`1.5`, `2e-3`) or, through division, `p/q`.
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::{parse_rational_literal, Rational};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DslError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: term of degree {degree}; every component must be homogeneous of degree 2")]
    Degree { pos: Pos, degree: u32 },
    #[error("{pos}: variable x{index} exceeds the dimension {dim}")]
    VariableOutOfRange { pos: Pos, index: usize, dim: usize },
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
}

impl DslError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            DslError::Syntax { pos, .. } | DslError::Degree { pos, .. } | DslError::VariableOutOfRange { pos, .. } => {
                Some(*pos)
            }
            DslError::ComponentCount { .. } => None,
        }
    }
}

/// Exponent vector (one entry per variable, up to four) to coefficient.
pub type Monomials = BTreeMap<[u32; 4], Rational>;

/// A parsed polynomial list: one homogeneous quadratic per component.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedMap {
    pub dim: usize,
    pub components: Vec<Monomials>,
    /// Whether any literal was written as a decimal.
    pub has_decimal: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational, bool),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        let pos = Pos { line, column: col };
        let start = i;
        let tok = match ch {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                col += 1;
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let literal: String = chars[i..j].iter().collect();
                let (value, decimal) = parse_rational_literal(&literal)
                    .ok_or_else(|| DslError::Syntax { pos, message: format!("malformed number '{literal}'") })?;
                i = j - 1;
                Tok::Num(value, decimal)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                let ident: String = chars[i..j].iter().collect();
                i = j - 1;
                Tok::Var(variable_index(&ident).ok_or_else(|| DslError::Syntax {
                    pos,
                    message: format!("unknown identifier '{ident}' (expected x1..x4)"),
                })?)
            }
            other => return Err(DslError::Syntax { pos, message: format!("unexpected character '{other}'") }),
        };
        i += 1;
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

fn variable_index(ident: &str) -> Option<usize> {
    match ident {
        "x" => Some(1),
        "y" => Some(2),
        "z" => Some(3),
        "w" => Some(4),
        _ => {
            let digits = ident.strip_prefix('x')?;
            if digits.is_empty() || digits.starts_with('0') {
                return None;
            }
            digits.parse().ok()
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    dim: Option<usize>,
    max_var: usize,
    has_decimal: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { pos: self.pos(), message: message.into() })
    }

    /// Parses one component, returning its signed top-level terms with their positions.
    fn component(&mut self) -> Result<Vec<(Pos, Monomials)>, DslError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let pos = self.pos();
            let t = self.term()?;
            terms.push((pos, if sign < 0 { neg(&t) } else { t }));
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
        }
        Ok(terms)
    }

    fn expr(&mut self) -> Result<Monomials, DslError> {
        Ok(self.component()?.into_iter().fold(Monomials::new(), |acc, (_, t)| add(&acc, &t)))
    }

    fn term(&mut self) -> Result<Monomials, DslError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = mul(&acc, &self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.unary()?;
                    let c = constant_value(&d)
                        .ok_or(DslError::Syntax { pos, message: "division is only allowed by a constant".into() })?;
                    if c.is_zero() {
                        return Err(DslError::Syntax { pos, message: "division by zero".into() });
                    }
                    acc = scale(&acc, &c.recip());
                }
                Tok::Var(_) | Tok::LParen => acc = mul(&acc, &self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Monomials, DslError> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            return Ok(neg(&self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Monomials, DslError> {
        let base = self.atom()?;
        if !matches!(self.peek(), Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(n, false), pos) => {
                if !n.is_integer() || n < Rational::zero() || n > Rational::from_integer(8.into()) {
                    return Err(DslError::Syntax { pos, message: "exponent must be an integer between 0 and 8".into() });
                }
                let k: u32 = n.to_integer().try_into().unwrap_or(0);
                Ok((0..k).fold(constant(Rational::one()), |acc, _| mul(&acc, &base)))
            }
            (_, pos) => Err(DslError::Syntax { pos, message: "expected an integer exponent after '^'".into() }),
        }
    }

    fn atom(&mut self) -> Result<Monomials, DslError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(v, decimal) => {
                self.has_decimal |= decimal;
                Ok(constant(v))
            }
            Tok::Var(index) => {
                let limit = self.dim.unwrap_or(4);
                if index == 0 || index > limit {
                    return Err(DslError::VariableOutOfRange { pos, index, dim: limit });
                }
                self.max_var = self.max_var.max(index);
                let mut exps = [0u32; 4];
                exps[index - 1] = 1;
                Ok(Monomials::from([(exps, Rational::one())]))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (_, pos) => Err(DslError::Syntax { pos, message: "expected ')'".into() }),
                }
            }
            Tok::End => Err(DslError::Syntax { pos, message: "unexpected end of input".into() }),
            other => Err(DslError::Syntax { pos, message: format!("unexpected {}", describe(&other)) }),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(..) => "number",
        Tok::Var(_) => "variable",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::Comma => "','",
        Tok::End => "end of input",
    }
}

fn constant(c: Rational) -> Monomials {
    if c.is_zero() {
        Monomials::new()
    } else {
        Monomials::from([([0; 4], c)])
    }
}

fn constant_value(p: &Monomials) -> Option<Rational> {
    match p.len() {
        0 => Some(Rational::zero()),
        1 => p.get(&[0; 4]).cloned(),
        _ => None,
    }
}

fn add(a: &Monomials, b: &Monomials) -> Monomials {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.remove(e).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            out.insert(*e, v);
        }
    }
    out
}

fn neg(a: &Monomials) -> Monomials {
    a.iter().map(|(e, c)| (*e, -c)).collect()
}

fn scale(a: &Monomials, s: &Rational) -> Monomials {
    a.iter().map(|(e, c)| (*e, c * s)).collect()
}

fn mul(a: &Monomials, b: &Monomials) -> Monomials {
    let mut out = Monomials::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            out = add(&out, &Monomials::from([(e, ca * cb)]));
        }
    }
    out
}

/// Parses a comma-separated list of homogeneous quadratics.
///
/// With `dim = None` the dimension is the number of components, and every
/// variable index must fit inside it.
pub fn parse_polynomial_list(text: &str, dim: Option<usize>) -> Result<ParsedMap, DslError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, dim, max_var: 0, has_decimal: false };
    let mut components = Vec::new();
    let mut positions = Vec::new();
    loop {
        let start = p.pos();
        if matches!(p.peek(), Tok::End | Tok::Comma) {
            return p.syntax("expected a polynomial");
        }
        let terms = p.component()?;
        components.push(homogeneous_quadratic(terms)?);
        positions.push(start);
        match p.peek() {
            Tok::Comma => {
                p.bump();
            }
            Tok::End => break,
            other => {
                let what = describe(other);
                return p.syntax(format!("unexpected {what}; expected ',' or an operator"));
            }
        }
    }
    let n = dim.unwrap_or(components.len());
    if components.len() != n {
        return Err(DslError::ComponentCount { expected: n, found: components.len() });
    }
    if p.max_var > n {
        let pos = first_use(text, p.max_var).unwrap_or(positions[0]);
        return Err(DslError::VariableOutOfRange { pos, index: p.max_var, dim: n });
    }
    Ok(ParsedMap { dim: n, components, has_decimal: p.has_decimal })
}

/// Parses a single component whose variables range over `x1..x{dim}`.
pub fn parse_single(text: &str, dim: usize) -> Result<ParsedMap, DslError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, dim: Some(dim), max_var: 0, has_decimal: false };
    if matches!(p.peek(), Tok::End) {
        return p.syntax("expected a polynomial");
    }
    let component = homogeneous_quadratic(p.component()?)?;
    if !matches!(p.peek(), Tok::End) {
        let what = describe(p.peek());
        return p.syntax(format!("unexpected {what}"));
    }
    Ok(ParsedMap { dim, components: vec![component], has_decimal: p.has_decimal })
}

/// Sums the terms and rejects any surviving monomial of degree other than two,
/// located at the first term that produced it.
fn homogeneous_quadratic(terms: Vec<(Pos, Monomials)>) -> Result<Monomials, DslError> {
    let mut origin: BTreeMap<[u32; 4], Pos> = BTreeMap::new();
    let mut sum = Monomials::new();
    for (pos, t) in &terms {
        for e in t.keys() {
            origin.entry(*e).or_insert(*pos);
        }
        sum = add(&sum, t);
    }
    let bad = sum
        .keys()
        .filter(|e| e.iter().sum::<u32>() != 2)
        .map(|e| (origin[e], e.iter().sum::<u32>()))
        .min_by_key(|(pos, _)| (pos.line, pos.column));
    match bad {
        Some((pos, degree)) => Err(DslError::Degree { pos, degree }),
        None => Ok(sum),
    }
}

fn first_use(text: &str, index: usize) -> Option<Pos> {
    let toks = lex(text).ok()?;
    toks.into_iter().find(|(t, _)| *t == Tok::Var(index)).map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn mono(exps: [u32; 4], c: Rational) -> ([u32; 4], Rational) {
        (exps, c)
    }

    #[test]
    fn circle_square_map() {
        let m = parse_polynomial_list("x1^2 - x2*x3, x2^2 - x1*x3, x3^2 - x1*x2", None).unwrap();
        assert_eq!(m.dim, 3);
        assert!(!m.has_decimal);
        assert_eq!(
            m.components[0],
            Monomials::from([mono([2, 0, 0, 0], int(1)), mono([0, 1, 1, 0], int(-1))])
        );
    }

    #[test]
    fn rationals_aliases_and_parentheses() {
        let m = parse_polynomial_list("x^2 - y^2,\n -2 x y", None).unwrap();
        assert_eq!(m.components[1], Monomials::from([mono([1, 1, 0, 0], int(-2))]));
        let m = parse_polynomial_list("2/3*(x1 + x2)^2 - 4/3 x1 x2, x2*x2/2", None).unwrap();
        assert_eq!(
            m.components[0],
            Monomials::from([mono([2, 0, 0, 0], rational(2, 3)), mono([0, 2, 0, 0], rational(2, 3))])
        );
        assert_eq!(m.components[1], Monomials::from([mono([0, 2, 0, 0], rational(1, 2))]));
    }

    #[test]
    fn decimals_switch_mode() {
        let m = parse_polynomial_list("0.5*x1^2, x2^2", None).unwrap();
        assert!(m.has_decimal);
        assert_eq!(m.components[0][&[2, 0, 0, 0]], rational(1, 2));
    }

    #[test]
    fn cancellation_leaves_homogeneous_map() {
        let m = parse_polynomial_list("x1^2 + x1 - x1, x2^2", None).unwrap();
        assert_eq!(m.components[0].len(), 1);
        assert_eq!(parse_polynomial_list("0, 0", None).unwrap().components, vec![Monomials::new(); 2]);
    }

    #[test]
    fn located_degree_errors() {
        let err = parse_polynomial_list("x1^2 + x1", Some(1)).unwrap_err();
        assert_eq!(err, DslError::Degree { pos: Pos { line: 1, column: 8 }, degree: 1 });
        let err = parse_polynomial_list("x1^2,\n  x1*x2*x2 + x2^2", None).unwrap_err();
        assert_eq!(err, DslError::Degree { pos: Pos { line: 2, column: 3 }, degree: 3 });
        let err = parse_polynomial_list("x1^2 + 3, x2^2", None).unwrap_err();
        assert_eq!(err, DslError::Degree { pos: Pos { line: 1, column: 8 }, degree: 0 });
    }

    #[test]
    fn syntax_and_dimension_errors() {
        assert!(matches!(
            parse_polynomial_list("x1^2 +", None),
            Err(DslError::Syntax { pos: Pos { line: 1, column: 7 }, .. })
        ));
        assert!(matches!(parse_polynomial_list("x1 ^ x2", None), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_polynomial_list("x1^2 $", None), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_polynomial_list("x1^2 / x1", None), Err(DslError::Syntax { .. })));
        assert_eq!(
            parse_polynomial_list("x1^2, x3^2", None),
            Err(DslError::VariableOutOfRange { pos: Pos { line: 1, column: 7 }, index: 3, dim: 2 })
        );
        assert_eq!(
            parse_polynomial_list("x1^2, x2^2", Some(3)),
            Err(DslError::ComponentCount { expected: 3, found: 2 })
        );
    }
}
