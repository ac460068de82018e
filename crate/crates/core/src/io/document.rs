//! JSON algebra documents.
//!
//! ```json
//! {"dim": 2, "structure_constants": [[[1, 0], [0, "-3/2"]], [[0, "-3/2"], [-1, 0]]]}
//! {"dim": 3, "square_map": ["x1^2 - x2*x3", "x2^2 - x1*x3", "x3^2 - x1*x2"]}
//! ```
//!
//! Entries may be JSON numbers or strings holding `p/q` or a decimal. Number
//! text is read verbatim, so exact documents never pass through binary64.
//! Optional keys: `label`, and `scalar_mode` (`"exact"` or `"float"`) which
//! overrides the mode implied by the literals.

use serde_json::{Number, Value};

use super::dsl::{parse_polynomial_list, parse_single, DslError, ParsedMap};
use super::{from_quadratic_map, to_quadratic_map, QuadraticMap};
use crate::algebra::{AlgebraError, AnyAlgebra, MAX_DIM};
use crate::scalar::{format_rational, parse_rational_literal, rational_to_f64, Rational, ScalarMode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{context}{source}")]
    Dsl { context: String, source: DslError },
    #[error("invalid document: {0}")]
    Schema(String),
    #[error("dimension mismatch: declared {declared}, found {found} in {what}")]
    DimensionMismatch { declared: usize, found: usize, what: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// What [`parse_document`] should return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DocumentTarget {
    #[default]
    Algebra,
    QuadraticMap,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Algebra(AnyAlgebra),
    Map(QuadraticMap),
}

/// Parses a JSON document (text starting with `{`) or a bare polynomial list.
pub fn parse_document(text: &str, target: DocumentTarget) -> Result<Parsed, IoError> {
    let (body, label) =
        if text.trim_start().starts_with('{') { parse_json(text)? } else { (parse_dsl(text)?, None) };
    let labelled = |a: AnyAlgebra| match &label {
        Some(l) => a.with_label(l.clone()),
        None => a,
    };
    Ok(match (target, body) {
        (DocumentTarget::Algebra, Body::Algebra(a)) => Parsed::Algebra(labelled(a)),
        (DocumentTarget::Algebra, Body::Map(m)) => Parsed::Algebra(labelled(from_quadratic_map(&m))),
        (DocumentTarget::QuadraticMap, Body::Algebra(a)) => Parsed::Map(to_quadratic_map(&a)),
        (DocumentTarget::QuadraticMap, Body::Map(m)) => Parsed::Map(m),
    })
}

pub fn parse_algebra(text: &str) -> Result<AnyAlgebra, IoError> {
    match parse_document(text, DocumentTarget::Algebra)? {
        Parsed::Algebra(a) => Ok(a),
        Parsed::Map(m) => Ok(from_quadratic_map(&m)),
    }
}

enum Body {
    Algebra(AnyAlgebra),
    Map(QuadraticMap),
}

fn parse_dsl(text: &str) -> Result<Body, IoError> {
    let parsed = parse_polynomial_list(text, None).map_err(|source| IoError::Dsl { context: String::new(), source })?;
    Ok(Body::Map(QuadraticMap::from_parsed(&parsed)?))
}

fn parse_json(text: &str) -> Result<(Body, Option<String>), IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| IoError::Schema("top level must be an object".into()))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| IoError::Schema("\"dim\" must be a positive integer".into()))? as usize;
    if dim == 0 || dim > MAX_DIM {
        return Err(AlgebraError::UnsupportedDim(dim).into());
    }
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(IoError::Schema("\"label\" must be a string".into())),
    };
    let mode_hint = match obj.get("scalar_mode") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<ScalarMode>(v.clone())
                .map_err(|_| IoError::Schema("\"scalar_mode\" must be \"exact\" or \"float\"".into()))?,
        ),
    };
    let body = match (obj.get("structure_constants"), obj.get("square_map")) {
        (Some(_), Some(_)) => {
            return Err(IoError::Schema("give exactly one of \"structure_constants\" and \"square_map\"".into()))
        }
        (None, None) => return Err(IoError::Schema("missing \"structure_constants\" or \"square_map\"".into())),
        (Some(sc), None) => structure_constants(sc, dim, mode_hint)?,
        (None, Some(sm)) => square_map(sm, dim, mode_hint)?,
    };
    Ok((body, label))
}

fn structure_constants(value: &Value, dim: usize, hint: Option<ScalarMode>) -> Result<Body, IoError> {
    let mut decimal = false;
    let mut gamma = vec![vec![vec![Rational::default(); dim]; dim]; dim];
    let outer = as_array_of_len(value, dim, "structure_constants")?;
    for (i, vi) in outer.iter().enumerate() {
        let row = as_array_of_len(vi, dim, &format!("structure_constants[{i}]"))?;
        for (j, vj) in row.iter().enumerate() {
            let cell = as_array_of_len(vj, dim, &format!("structure_constants[{i}][{j}]"))?;
            for (k, vk) in cell.iter().enumerate() {
                let (q, is_dec) = scalar_entry(vk, &format!("structure_constants[{i}][{j}][{k}]"))?;
                decimal |= is_dec;
                gamma[i][j][k] = q;
            }
        }
    }
    let exact = crate::algebra::Algebra::new(gamma)?;
    let mode = hint.unwrap_or(if decimal { ScalarMode::Float } else { ScalarMode::Exact });
    Ok(Body::Algebra(match mode {
        ScalarMode::Exact => AnyAlgebra::Exact(exact),
        ScalarMode::Float => AnyAlgebra::Float(exact.to_f64()),
    }))
}

fn square_map(value: &Value, dim: usize, hint: Option<ScalarMode>) -> Result<Body, IoError> {
    let items = value.as_array().ok_or_else(|| IoError::Schema("\"square_map\" must be a list of strings".into()))?;
    if items.len() != dim {
        return Err(IoError::DimensionMismatch { declared: dim, found: items.len(), what: "square_map".into() });
    }
    let mut texts = Vec::with_capacity(dim);
    for (k, item) in items.iter().enumerate() {
        let s = item.as_str().ok_or_else(|| IoError::Schema(format!("square_map[{k}] must be a string")))?;
        texts.push(s);
    }
    // Each component is parsed on its own so error positions refer to that string.
    let mut components = Vec::with_capacity(dim);
    let mut decimal = false;
    for (k, s) in texts.iter().enumerate() {
        let parsed = parse_single(s, dim).map_err(|source| IoError::Dsl { context: format!("square_map[{k}]: "), source })?;
        decimal |= parsed.has_decimal;
        components.extend(parsed.components);
    }
    let map = QuadraticMap::from_parsed(&ParsedMap { dim, components, has_decimal: decimal })?;
    Ok(Body::Map(match hint {
        Some(m) => map.with_mode(m),
        None => map,
    }))
}

fn as_array_of_len<'a>(v: &'a Value, dim: usize, path: &str) -> Result<&'a Vec<Value>, IoError> {
    let arr = v.as_array().ok_or_else(|| IoError::Schema(format!("{path} must be an array")))?;
    if arr.len() != dim {
        return Err(IoError::DimensionMismatch { declared: dim, found: arr.len(), what: path.to_string() });
    }
    Ok(arr)
}

fn scalar_entry(v: &Value, path: &str) -> Result<(Rational, bool), IoError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(IoError::Schema(format!("{path} must be a number or a \"p/q\" string"))),
    };
    parse_rational_literal(&text).ok_or_else(|| IoError::Schema(format!("{path}: malformed number '{text}'")))
}

fn exact_value(q: &Rational) -> Value {
    if q.is_integer() {
        Value::Number(q.numer().to_string().parse::<Number>().expect("integer literal"))
    } else {
        Value::String(format_rational(q))
    }
}

fn float_value(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn header(dim: usize, label: Option<&str>, mode: ScalarMode) -> Vec<String> {
    let mut lines = vec![format!("  \"dim\": {dim},")];
    if let Some(l) = label {
        lines.push(format!("  \"label\": {},", Value::String(l.to_string())));
    }
    lines.push(format!("  \"scalar_mode\": \"{mode}\","));
    lines
}

/// Serializes an algebra as a structure-constant document, one `[i][j]` cell per line.
pub fn serialize_algebra(alg: &AnyAlgebra) -> String {
    let n = alg.dim();
    let cell = |i: usize, j: usize| -> Value {
        Value::Array(
            (0..n)
                .map(|k| match alg {
                    AnyAlgebra::Exact(a) => exact_value(a.gamma(i, j, k)),
                    AnyAlgebra::Float(a) => float_value(*a.gamma(i, j, k)),
                })
                .collect(),
        )
    };
    let mut lines = vec!["{".to_string()];
    lines.extend(header(n, alg.label(), alg.mode()));
    lines.push("  \"structure_constants\": [".into());
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| cell(i, j).to_string()).collect();
        let sep = if i + 1 < n { "," } else { "" };
        lines.push(format!("    [{}]{sep}", row.join(", ")));
    }
    lines.push("  ]".into());
    lines.push("}".into());
    lines.join("\n") + "\n"
}

/// Serializes a square map as a JSON document.
pub fn serialize_square_map(map: &QuadraticMap, label: Option<&str>) -> String {
    let comps: Vec<Value> = map.to_dsl().split(", ").map(|s| Value::String(s.to_string())).collect();
    let mut lines = vec!["{".to_string()];
    lines.extend(header(map.dim(), label, map.mode()));
    lines.push(format!("  \"square_map\": {}", Value::Array(comps)));
    lines.push("}".into());
    lines.join("\n") + "\n"
}

/// JSON value for a scalar in a report: exact rationals as `"p/q"` or integers, floats as numbers.
pub fn rational_json(q: &Rational) -> Value {
    exact_value(q)
}

pub fn float_json(x: f64) -> Value {
    float_value(x)
}

/// Float rendering that round-trips through exact parsing.
pub fn float_from_exact(q: &Rational) -> Value {
    float_value(rational_to_f64(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    const H2: &str = r#"{"dim": 2, "label": "H(2)", "structure_constants": [[[1, 0], [0, "-3/2"]], [[0, "-3/2"], [-1, 0]]]}"#;

    #[test]
    fn exact_structure_constants() {
        let AnyAlgebra::Exact(a) = parse_algebra(H2).unwrap() else { panic!("expected exact") };
        assert_eq!(a.label(), Some("H(2)"));
        assert_eq!(*a.gamma(0, 1, 1), rational(-3, 2));
        assert_eq!(*a.gamma(1, 1, 0), int(-1));
    }

    #[test]
    fn round_trips_are_exact() {
        let a = parse_algebra(H2).unwrap();
        assert_eq!(parse_algebra(&serialize_algebra(&a)).unwrap(), a);
        let f = parse_algebra(r#"{"dim": 1, "structure_constants": [[[0.1]]]}"#).unwrap();
        assert_eq!(f.mode(), ScalarMode::Float);
        let text = serialize_algebra(&f);
        assert!(text.contains("[[0.1]]"), "{text}");
        assert_eq!(parse_algebra(&text).unwrap(), f);
        let map = to_quadratic_map(&a);
        let doc = serialize_square_map(&map, Some("H(2)"));
        assert_eq!(parse_algebra(&doc).unwrap(), a);
    }

    #[test]
    fn big_literals_survive() {
        let text = r#"{"dim": 1, "structure_constants": [[["123456789012345678901234567890/7"]]]}"#;
        let a = parse_algebra(text).unwrap();
        assert_eq!(parse_algebra(&serialize_algebra(&a)).unwrap(), a);
        let text = r#"{"dim": 1, "structure_constants": [[[123456789012345678901234567890]]]}"#;
        let AnyAlgebra::Exact(a) = parse_algebra(text).unwrap() else { panic!() };
        assert_eq!(a.gamma(0, 0, 0).numer().to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn square_map_documents() {
        let text = r#"{"dim": 3, "square_map": ["x1^2 - x2*x3", "x2^2 - x1*x3", "x3^2 - x1*x2"]}"#;
        let Parsed::Map(m) = parse_document(text, DocumentTarget::QuadraticMap).unwrap() else { panic!() };
        assert_eq!(m.to_dsl(), "x1^2 - x2*x3, x2^2 - x1*x3, x3^2 - x1*x2");
        let err = parse_algebra(r#"{"dim": 2, "square_map": ["x1^2", "x2^2 + x1"]}"#).unwrap_err();
        assert_eq!(err.to_string(), "square_map[1]: line 1, column 8: term of degree 1; every component must be homogeneous of degree 2");
        let err = parse_algebra(r#"{"dim": 2, "square_map": ["x1^2", "x3^2"]}"#).unwrap_err();
        assert!(matches!(err, IoError::Dsl { source: DslError::VariableOutOfRange { index: 3, dim: 2, .. }, .. }));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_algebra("{\"dim\": 2,\n \"structure_constants\": [}"), Err(IoError::Json { line: 2, .. })));
        assert!(matches!(parse_algebra(r#"{"dim": 2}"#), Err(IoError::Schema(_))));
        assert!(matches!(
            parse_algebra(r#"{"dim": 2, "structure_constants": [[[1,0],[0,1]]]}"#),
            Err(IoError::DimensionMismatch { declared: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse_algebra(r#"{"dim": 2, "structure_constants": [[[1,0],[1,1]],[[0,1],[0,0]]]}"#),
            Err(IoError::Algebra(AlgebraError::NotCommutative { .. }))
        ));
        assert!(matches!(parse_algebra(r#"{"dim": 5, "square_map": []}"#), Err(IoError::Algebra(AlgebraError::UnsupportedDim(5)))));
    }
}
