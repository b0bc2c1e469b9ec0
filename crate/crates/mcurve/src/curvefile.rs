//! The line-oriented curve-file format:
//!
//! ```text
//! # comment
//! name: hesse
//! field: Q(e) minpoly: t^2+t+1
//! vars: x y z
//! f = x*y*z*(x+y+z)            # or a `lines:` block, one form per line
//! point: (0:1:i)               # repeated; coordinates are field expressions
//! expect: tau=93 mdr=4 free=true mcurve=true t2=12 t4=9 types=A1:12,X9:9
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arrangement::LineArrangement;
use crate::field::NumberField;
use crate::parse;
use crate::poly::{HomPoly, ProjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveFileError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `field:` declaration")]
    MissingField,
    #[error("missing `f =` or `lines:` section")]
    MissingCurve,
    #[error("line {line}: {source}")]
    Field {
        line: usize,
        source: crate::field::FieldError,
    },
    #[error("line {line}: {source}")]
    Poly {
        line: usize,
        source: crate::poly::PolyError,
    },
    #[error("line {line}: {source}")]
    Arrangement {
        line: usize,
        source: crate::arrangement::ArrangementError,
    },
}

#[derive(Debug, Clone)]
pub enum CurveInput {
    Polynomial(HomPoly),
    Lines(LineArrangement),
}

/// Expected values for regression, from the optional `expect:` line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expectations {
    pub tau: Option<u64>,
    pub mdr: Option<u32>,
    pub free: Option<bool>,
    pub exponents: Option<(u32, u32)>,
    /// "true", "false" or "na"
    pub maximizing: Option<String>,
    pub mcurve: Option<String>,
    /// "cannot_be_maximizing", "criterion_silent" or "na"
    pub nonexistence: Option<String>,
    /// type name -> count of singular points of that type
    pub types: Option<BTreeMap<String, usize>>,
    /// expected incidence counts t_k for arrangements
    pub tk: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct CurveFile {
    pub name: Option<String>,
    pub field: Arc<NumberField>,
    pub input: CurveInput,
    pub points: Vec<ProjPoint>,
    pub expect: Option<Expectations>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
    .trim()
}

pub fn parse_curve_file(text: &str) -> Result<CurveFile, CurveFileError> {
    let mut name = None;
    let mut field: Option<Arc<NumberField>> = None;
    let mut poly_text: Option<(usize, String)> = None;
    let mut line_forms: Vec<(usize, String)> = Vec::new();
    let mut in_lines = false;
    let mut point_texts: Vec<(usize, String)> = Vec::new();
    let mut expect: Option<Expectations> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let malformed = |message: String| CurveFileError::Malformed {
            line: lineno,
            message,
        };
        if let Some(rest) = line.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            in_lines = false;
        } else if let Some(rest) = line.strip_prefix("field:") {
            field = Some(parse_field_decl(rest.trim(), lineno)?);
            in_lines = false;
        } else if let Some(rest) = line.strip_prefix("vars:") {
            let vars: Vec<&str> = rest.split_whitespace().collect();
            if vars != ["x", "y", "z"] {
                return Err(malformed(format!(
                    "only `vars: x y z` is supported, got `{}`",
                    rest.trim()
                )));
            }
            in_lines = false;
        } else if let Some(rest) = line.strip_prefix("f =") {
            poly_text = Some((lineno, rest.trim().to_string()));
            in_lines = false;
        } else if line == "lines:" {
            in_lines = true;
        } else if let Some(rest) = line.strip_prefix("point:") {
            point_texts.push((lineno, rest.trim().to_string()));
            in_lines = false;
        } else if let Some(rest) = line.strip_prefix("expect:") {
            expect = Some(parse_expectations(rest.trim(), lineno)?);
            in_lines = false;
        } else if in_lines {
            line_forms.push((lineno, line.to_string()));
        } else {
            return Err(malformed(format!("unrecognized line `{line}`")));
        }
    }

    let field = field.ok_or(CurveFileError::MissingField)?;
    let input = match (poly_text, line_forms.is_empty()) {
        (Some((lineno, text)), true) => {
            let f = parse::parse_hompoly(&text, &field)
                .map_err(|e| CurveFileError::Poly { line: lineno, source: e })?;
            CurveInput::Polynomial(f)
        }
        (None, false) => {
            let mut forms = Vec::new();
            for (lineno, text) in &line_forms {
                let form = parse::parse_linear_form(text, &field)
                    .map_err(|e| CurveFileError::Poly { line: *lineno, source: e })?;
                forms.push(form);
            }
            let first_line = line_forms[0].0;
            let arr = LineArrangement::new(forms, &field).map_err(|e| {
                CurveFileError::Arrangement {
                    line: first_line,
                    source: e,
                }
            })?;
            CurveInput::Lines(arr)
        }
        (Some((lineno, _)), false) => {
            return Err(CurveFileError::Malformed {
                line: lineno,
                message: "a file may contain `f =` or `lines:`, not both".to_string(),
            })
        }
        (None, true) => return Err(CurveFileError::MissingCurve),
    };

    let mut points = Vec::new();
    for (lineno, text) in &point_texts {
        points.push(parse_point(text, &field, *lineno)?);
    }

    Ok(CurveFile {
        name,
        field,
        input,
        points,
        expect,
    })
}

/// Parses a standalone point list: one point per line, either bare
/// `(a:b:c)` or prefixed with `point:`.
pub fn parse_point_list(
    text: &str,
    field: &Arc<NumberField>,
) -> Result<Vec<ProjPoint>, CurveFileError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let body = line.strip_prefix("point:").unwrap_or(line).trim();
        out.push(parse_point(body, field, idx + 1)?);
    }
    Ok(out)
}

fn parse_field_decl(text: &str, lineno: usize) -> Result<Arc<NumberField>, CurveFileError> {
    let malformed = |message: String| CurveFileError::Malformed {
        line: lineno,
        message,
    };
    if text == "Q" {
        return Ok(NumberField::rationals());
    }
    // Q(<sym>) minpoly: <polynomial in t>
    let rest = text
        .strip_prefix("Q(")
        .ok_or_else(|| malformed(format!("expected `Q` or `Q(<sym>) minpoly: ...`, got `{text}`")))?;
    let close = rest
        .find(')')
        .ok_or_else(|| malformed("missing `)` in field declaration".to_string()))?;
    let sym = rest[..close].trim().to_string();
    if sym.is_empty() || !sym.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(malformed(format!("bad generator symbol `{sym}`")));
    }
    if ["x", "y", "z", "t"].contains(&sym.as_str()) {
        return Err(malformed(format!(
            "generator symbol `{sym}` collides with a reserved variable"
        )));
    }
    let tail = rest[close + 1..].trim();
    let mp_text = tail
        .strip_prefix("minpoly:")
        .ok_or_else(|| malformed("expected `minpoly:` after the generator".to_string()))?
        .trim();
    let coeffs = parse::parse_minpoly(mp_text)
        .map_err(|e| CurveFileError::Poly { line: lineno, source: e })?;
    NumberField::new(coeffs, &sym).map_err(|e| CurveFileError::Field {
        line: lineno,
        source: e,
    })
}

fn parse_point(
    text: &str,
    field: &Arc<NumberField>,
    lineno: usize,
) -> Result<ProjPoint, CurveFileError> {
    let malformed = |message: String| CurveFileError::Malformed {
        line: lineno,
        message,
    };
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| malformed(format!("point must look like (a:b:c), got `{text}`")))?;
    let parts: Vec<&str> = inner.split(':').collect();
    if parts.len() != 3 {
        return Err(malformed(format!("point needs 3 coordinates, got {}", parts.len())));
    }
    let mut coords = Vec::with_capacity(3);
    for p in &parts {
        coords.push(
            parse::parse_constant(p.trim(), field)
                .map_err(|e| CurveFileError::Poly { line: lineno, source: e })?,
        );
    }
    ProjPoint::new([coords[0].clone(), coords[1].clone(), coords[2].clone()])
        .map_err(|e| CurveFileError::Poly { line: lineno, source: e })
}

fn parse_expectations(text: &str, lineno: usize) -> Result<Expectations, CurveFileError> {
    let malformed = |message: String| CurveFileError::Malformed {
        line: lineno,
        message,
    };
    let mut e = Expectations::default();
    for item in text.split_whitespace() {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| malformed(format!("expected key=value, got `{item}`")))?;
        match key {
            "tau" => e.tau = Some(value.parse().map_err(|_| malformed(format!("bad tau `{value}`")))?),
            "mdr" => e.mdr = Some(value.parse().map_err(|_| malformed(format!("bad mdr `{value}`")))?),
            "free" => e.free = Some(parse_bool(value).ok_or_else(|| malformed(format!("bad free `{value}`")))?),
            "exponents" => {
                let inner = value
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| malformed(format!("bad exponents `{value}`")))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| malformed(format!("bad exponents `{value}`")))?;
                e.exponents = Some((
                    a.trim().parse().map_err(|_| malformed(format!("bad exponents `{value}`")))?,
                    b.trim().parse().map_err(|_| malformed(format!("bad exponents `{value}`")))?,
                ));
            }
            "maximizing" => e.maximizing = Some(value.to_string()),
            "mcurve" => e.mcurve = Some(value.to_string()),
            "nonexistence" => e.nonexistence = Some(value.to_string()),
            "types" => {
                let mut map = BTreeMap::new();
                for part in value.split(',') {
                    let (t, n) = part
                        .split_once(':')
                        .ok_or_else(|| malformed(format!("bad types entry `{part}`")))?;
                    map.insert(
                        t.to_string(),
                        n.parse().map_err(|_| malformed(format!("bad types entry `{part}`")))?,
                    );
                }
                e.types = Some(map);
            }
            k if k.starts_with('t') && k[1..].chars().all(|c| c.is_ascii_digit()) && k.len() > 1 => {
                let incidence: usize = k[1..].parse().unwrap();
                let count: usize = value
                    .parse()
                    .map_err(|_| malformed(format!("bad count `{value}` for {k}")))?;
                e.tk.insert(incidence, count);
            }
            _ => return Err(malformed(format!("unknown expectation key `{key}`"))),
        }
    }
    Ok(e)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomial_file() {
        let text = "\
# the triangle
name: triangle
field: Q
vars: x y z
f = x*y*z
point: (1:0:0)
point: (0:1:0)
point: (0:0:1)
expect: tau=3 mdr=1 free=true types=A1:3
";
        let cf = parse_curve_file(text).unwrap();
        assert_eq!(cf.name.as_deref(), Some("triangle"));
        assert!(cf.field.is_rational());
        assert_eq!(cf.points.len(), 3);
        let e = cf.expect.unwrap();
        assert_eq!(e.tau, Some(3));
        assert_eq!(e.types.unwrap()["A1"], 3);
        match cf.input {
            CurveInput::Polynomial(f) => assert_eq!(f.degree(), 3),
            _ => panic!("expected polynomial"),
        }
    }

    #[test]
    fn parses_lines_file_over_extension() {
        let text = "\
field: Q(e) minpoly: t^2+t+1
vars: x y z
lines:
x
y
x + e*y + z
expect: t2=3
";
        let cf = parse_curve_file(text).unwrap();
        assert_eq!(cf.field.degree(), 2);
        match cf.input {
            CurveInput::Lines(arr) => assert_eq!(arr.line_count(), 3),
            _ => panic!("expected lines"),
        }
        assert_eq!(cf.expect.unwrap().tk[&2], 3);
    }

    #[test]
    fn point_coordinates_are_field_expressions() {
        let text = "\
field: Q(i) minpoly: t^2+1
f = x*y*z
point: (0:1:-i)
point: (1:1+i:2)
";
        let cf = parse_curve_file(text).unwrap();
        assert_eq!(cf.points.len(), 2);
    }

    #[test]
    fn missing_field_reported() {
        assert_eq!(
            parse_curve_file("f = x*y*z\n").unwrap_err(),
            CurveFileError::MissingField
        );
    }

    #[test]
    fn rejects_unknown_lines() {
        let err = parse_curve_file("field: Q\nbogus\n").unwrap_err();
        assert!(matches!(err, CurveFileError::Malformed { line: 2, .. }));
    }
}
