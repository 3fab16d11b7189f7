//! Germ text format.
//!
//! ```text
//! folmmp-germ v1                     (optional)
//! dx: y, dy: x^2
//! boundary: x - y^2 coeff 1/2 non-invariant
//! ```
//!
//! Blank lines and `#` comments are ignored.

use serde::Serialize;

use super::VectorFieldGerm;
use crate::error::{Error, Result};
use crate::exact::rational::parse_rational;
use crate::exact::{BivariatePolynomial, Rational};

pub const GERM_HEADER: &str = "folmmp-germ v1";

/// A boundary branch through the origin with its coefficient in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryBranch {
    #[serde(serialize_with = "display")]
    pub equation: BivariatePolynomial,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub coefficient: Rational,
    pub invariant: bool,
}

fn display<S: serde::Serializer>(p: &BivariatePolynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermFile {
    pub germ: VectorFieldGerm,
    pub boundary: Vec<BoundaryBranch>,
}

pub fn parse_germ_file(text: &str, degree_cap: u32) -> Result<GermFile> {
    let mut germ = None;
    let mut boundary = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let body = line.trim();
        if let Some(version) = body.strip_prefix("folmmp-germ") {
            if body != GERM_HEADER {
                return Err(Error::UnsupportedVersion(version.trim().to_string()));
            }
            continue;
        }
        if body.starts_with("dx:") {
            if germ.is_some() {
                return Err(Error::parse(line_no, indent + 1, "second vector field line"));
            }
            germ = Some(parse_germ_at(line, line_no, degree_cap)?);
        } else if let Some(rest) = body.strip_prefix("boundary:") {
            boundary.push(parse_boundary(rest, line_no, indent + 10)?);
        } else {
            return Err(Error::parse(line_no, indent + 1, "expected `dx:` or `boundary:`"));
        }
    }
    let germ = germ.ok_or_else(|| Error::parse(1, 1, "missing `dx: ..., dy: ...` line"))?;
    let germ = germ.saturate();
    for br in &boundary {
        if !br.equation.vanishes_at_origin() {
            return Err(Error::InvalidInput(format!(
                "boundary branch {} does not pass through the origin",
                br.equation
            )));
        }
        if germ.leaves_invariant(&br.equation) != br.invariant {
            return Err(Error::InvalidInput(format!(
                "boundary branch {} is declared {} but is {}",
                br.equation,
                invariance_word(br.invariant),
                invariance_word(!br.invariant)
            )));
        }
    }
    Ok(GermFile { germ, boundary })
}

fn invariance_word(invariant: bool) -> &'static str {
    if invariant {
        "invariant"
    } else {
        "non-invariant"
    }
}

pub(super) fn parse_germ_line(text: &str, line_no: usize, degree_cap: u32) -> Result<VectorFieldGerm> {
    parse_germ_at(text, line_no, degree_cap)
}

fn parse_germ_at(line: &str, line_no: usize, degree_cap: u32) -> Result<VectorFieldGerm> {
    let dx_at = line
        .find("dx:")
        .ok_or_else(|| Error::parse(line_no, 1, "expected `dx:`"))?;
    let dy_at = line
        .find("dy:")
        .ok_or_else(|| Error::parse(line_no, line.len() + 1, "expected `dy:`"))?;
    if dy_at < dx_at {
        return Err(Error::parse(line_no, dy_at + 1, "`dx:` must come first"));
    }
    let a_text = line[dx_at + 3..dy_at].trim_end();
    let a_text = a_text.strip_suffix(',').unwrap_or(a_text);
    let a = BivariatePolynomial::parse_at(a_text, line_no, dx_at + 4)?;
    let b = BivariatePolynomial::parse_at(&line[dy_at + 3..], line_no, dy_at + 4)?;
    for p in [&a, &b] {
        if p.degree().unwrap_or(0) > degree_cap {
            return Err(Error::InvalidInput(format!(
                "coefficient degree exceeds the cap {degree_cap}"
            )));
        }
    }
    VectorFieldGerm::new(a, b)
}

fn parse_boundary(rest: &str, line_no: usize, column: usize) -> Result<BoundaryBranch> {
    let coeff_at = rest
        .find("coeff")
        .ok_or_else(|| Error::parse(line_no, column, "expected `coeff`"))?;
    let equation = BivariatePolynomial::parse_at(&rest[..coeff_at], line_no, column)?;
    let mut words = rest[coeff_at + 5..].split_whitespace();
    let coeff_col = column + coeff_at + 6;
    let coefficient = words
        .next()
        .ok_or_else(|| Error::parse(line_no, coeff_col, "missing coefficient"))
        .and_then(|w| parse_rational(w).map_err(|e| Error::parse(line_no, coeff_col, e.to_string())))?;
    if coefficient < Rational::from_integer(0.into()) || coefficient > Rational::from_integer(1.into()) {
        return Err(Error::parse(line_no, coeff_col, "coefficient must lie in [0, 1]"));
    }
    let invariant = match words.next() {
        Some("invariant") => true,
        Some("non-invariant") => false,
        _ => {
            return Err(Error::parse(
                line_no,
                coeff_col,
                "expected `invariant` or `non-invariant`",
            ))
        }
    };
    if equation.is_zero() {
        return Err(Error::parse(line_no, column, "boundary equation is zero"));
    }
    Ok(BoundaryBranch {
        equation,
        coefficient,
        invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn parses_plain_line() {
        let g = VectorFieldGerm::parse("dx: y, dy: x^2").unwrap();
        assert_eq!(g.to_string(), "dx: y, dy: x^2");
    }

    #[test]
    fn parses_file_with_boundary() {
        let text = "folmmp-germ v1\n# cusp\ndx: x, dy: -y\nboundary: y coeff 1/2 invariant\n";
        let f = parse_germ_file(text, 16).unwrap();
        assert_eq!(f.boundary.len(), 1);
        assert_eq!(f.boundary[0].coefficient, rat(1, 2));
    }

    #[test]
    fn rejects_wrong_invariance_and_version() {
        let text = "dx: x, dy: -y\nboundary: x + y coeff 1 invariant\n";
        assert!(parse_germ_file(text, 16).is_err());
        assert!(matches!(
            parse_germ_file("folmmp-germ v2\ndx: x, dy: y\n", 16),
            Err(Error::UnsupportedVersion(_))
        ));
    }

    #[test]
    fn error_column_points_into_dy() {
        match parse_germ_file("dx: x, dy: y + z\n", 16) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 16);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(parse_germ_file("dx: x^17, dy: y\n", 16).is_err());
    }
}
