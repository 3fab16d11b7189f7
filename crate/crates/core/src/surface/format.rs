//! The `folmmp-surface v1` text format.
//!
//! ```text
//! folmmp-surface v1
//! base F1
//! kf -2C0 - F
//! curve C0 C0 non-invariant
//! curve F1 F invariant
//! point p germ dx: 1, dy: 0 ; on F1 y ; on C0 x
//! blowup p
//! boundary C0 1/2
//! fibration F
//! flag kf-big
//! ```
//!
//! `exceptional <label>` extends the lattice without a center; it must come
//! before any class. `kx` defaults to the canonical class of the base plus
//! the declared exceptionals. `contract <curve>` records a contraction.
//! [`emit_surface`] writes the state form (exceptionals, classes, points)
//! that [`parse_surface`] reads back to an equal model.

use std::fmt::Write;

use super::lattice::DivisorClass;
use super::model::{blow_up_model, BaseSurface, BlowUpCenter, Branch, FoliatedSurfaceModel};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, BivariatePolynomial};
use crate::germ::VectorFieldGerm;

pub const SURFACE_HEADER: &str = "folmmp-surface";
pub const SURFACE_VERSION: &str = "v1";

struct Header {
    base: Option<BaseSurface>,
    exceptionals: Vec<String>,
    kx: Option<(String, usize)>,
    kf: Option<(String, usize)>,
}

pub fn parse_surface(text: &str) -> Result<FoliatedSurfaceModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut saw_header = false;
    let mut header = Header {
        base: None,
        exceptionals: Vec::new(),
        kx: None,
        kf: None,
    };
    let mut model: Option<FoliatedSurfaceModel> = None;
    let mut last_line = 0;

    for (no, raw) in &mut lines {
        last_line = no;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let line = line.trim();
        if !saw_header {
            let mut it = line.split_whitespace();
            if it.next() != Some(SURFACE_HEADER) {
                return Err(Error::parse(
                    no,
                    indent + 1,
                    format!("expected `{SURFACE_HEADER} {SURFACE_VERSION}`"),
                ));
            }
            match it.next() {
                Some(SURFACE_VERSION) => {}
                Some(v) => return Err(Error::UnsupportedVersion(format!("{SURFACE_HEADER} {v}"))),
                None => return Err(Error::parse(no, line.len() + 1, "missing version")),
            }
            saw_header = true;
            continue;
        }
        let (keyword, rest, rest_col) = split_keyword(line, indent);
        let at = |m: String| Error::parse(no, indent + 1, m);
        match keyword {
            "base" | "exceptional" | "kx" | "kf" => {
                if model.is_some() {
                    return Err(at(format!(
                        "`{keyword}` must precede curves, points and blow-ups"
                    )));
                }
                match keyword {
                    "base" => {
                        if header.base.is_some() {
                            return Err(at("duplicate `base`".into()));
                        }
                        header.base = Some(parse_base(rest).map_err(|m| Error::parse(no, rest_col, m))?);
                    }
                    "exceptional" => header.exceptionals.push(rest.to_string()),
                    "kx" => header.kx = Some((rest.to_string(), rest_col)),
                    _ => header.kf = Some((rest.to_string(), rest_col)),
                }
            }
            _ => {
                if model.is_none() {
                    model = Some(finish_header(&header, no)?);
                }
                let m = model.as_mut().expect("header finished");
                statement(m, keyword, rest, no, rest_col)?;
            }
        }
    }
    if !saw_header {
        return Err(Error::parse(
            1,
            1,
            format!("expected `{SURFACE_HEADER} {SURFACE_VERSION}`"),
        ));
    }
    match model {
        Some(m) => Ok(m),
        None => finish_header(&header, last_line + 1),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map(|(a, _)| a).unwrap_or(line)
}

fn split_keyword(line: &str, indent: usize) -> (&str, &str, usize) {
    match line.split_once(char::is_whitespace) {
        Some((k, r)) => {
            let trimmed = r.trim_start();
            let col = indent + k.len() + (r.len() - trimmed.len()) + 2;
            (k, trimmed.trim_end(), col)
        }
        None => (line, "", indent + line.len() + 1),
    }
}

fn parse_base(s: &str) -> std::result::Result<BaseSurface, String> {
    if s == "P2" {
        return Ok(BaseSurface::ProjectivePlane);
    }
    s.strip_prefix('F')
        .and_then(|n| n.parse::<u32>().ok())
        .map(BaseSurface::Hirzebruch)
        .ok_or_else(|| format!("unknown base surface {s:?} (expected P2 or F<n>)"))
}

fn finish_header(h: &Header, no: usize) -> Result<FoliatedSurfaceModel> {
    let base = h.base.ok_or_else(|| Error::parse(no, 1, "missing `base`"))?;
    let mut lattice = base.lattice();
    let mut kx = base.canonical();
    for label in &h.exceptionals {
        let i = lattice
            .blow_up(label)
            .map_err(|e| Error::parse(no, 1, e.to_string()))?;
        kx.extend();
        kx = &kx + &lattice.basis(i);
    }
    let class = |(text, col): &(String, usize), line: usize| -> Result<DivisorClass> {
        lattice
            .parse_class(text)
            .map_err(|e| Error::parse(line, *col, e.to_string()))
    };
    let (kf_text, kf_col) = h.kf.as_ref().ok_or_else(|| Error::parse(no, 1, "missing `kf`"))?;
    let k_f = class(&(kf_text.clone(), *kf_col), no)?;
    if let Some(k) = &h.kx {
        kx = class(k, no)?;
    }
    let mut m = FoliatedSurfaceModel::new(base, base.canonical())?;
    m.lattice = lattice;
    m.k_x = kx;
    m.k_f = k_f;
    Ok(m)
}

fn statement(m: &mut FoliatedSurfaceModel, keyword: &str, rest: &str, no: usize, col: usize) -> Result<()> {
    let err = |c: usize, e: Error| match e {
        Error::Parse { .. } => e,
        other => Error::parse(no, c, other.to_string()),
    };
    match keyword {
        "curve" => {
            // curve <name> <class...> invariant|non-invariant [genus <g>]
            let words: Vec<&str> = rest.split_whitespace().collect();
            let flag_at = words
                .iter()
                .position(|w| *w == "invariant" || *w == "non-invariant")
                .ok_or_else(|| Error::parse(no, col, "expected `invariant` or `non-invariant`"))?;
            if flag_at < 2 {
                return Err(Error::parse(
                    no,
                    col,
                    "expected `curve <name> <class> invariant|non-invariant`",
                ));
            }
            let class = m
                .lattice
                .parse_class(&words[1..flag_at].join(" "))
                .map_err(|e| err(col, e))?;
            let genus = match &words[flag_at + 1..] {
                [] => 0,
                ["genus", g] => g
                    .parse()
                    .map_err(|_| Error::parse(no, col, format!("bad genus {g:?}")))?,
                _ => return Err(Error::parse(no, col, "trailing input after the invariance flag")),
            };
            m.add_curve(words[0], class, words[flag_at] == "invariant", genus)
                .map_err(|e| err(col, e))?;
        }
        "point" => {
            let mut clauses = rest.split(';');
            let head = clauses.next().unwrap_or("");
            let (name, germ_text) = head
                .trim()
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(no, col, "expected `point <name> germ <dx: ..., dy: ...>`"))?;
            let germ_text = germ_text
                .trim_start()
                .strip_prefix("germ")
                .ok_or_else(|| Error::parse(no, col, "expected `germ` after the point name"))?;
            let germ_col = col + head.find("germ").unwrap_or(0) + 4;
            let germ = VectorFieldGerm::parse(germ_text).map_err(|e| shift(e, no, germ_col))?;
            let mut offset = col + head.len() + 1;
            let mut branches = Vec::new();
            for clause in clauses {
                let c_col = offset + (clause.len() - clause.trim_start().len());
                offset += clause.len() + 1;
                let words = clause.trim();
                let body = words
                    .strip_prefix("on")
                    .filter(|b| b.starts_with(char::is_whitespace))
                    .ok_or_else(|| Error::parse(no, c_col, "expected `on <curve> <equation>`"))?;
                let (curve, eq) = body
                    .trim()
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(no, c_col, "expected `on <curve> <equation>`"))?;
                let curve_idx = m
                    .curve_index(curve)
                    .ok_or_else(|| Error::parse(no, c_col, format!("unknown curve {curve}")))?;
                let equation = BivariatePolynomial::parse(eq.trim()).map_err(|e| shift(e, no, c_col))?;
                branches.push(Branch {
                    curve: curve_idx,
                    equation,
                });
            }
            m.add_point(name, germ, branches).map_err(|e| err(col, e))?;
        }
        "blowup" => {
            let center = if rest == "free" {
                BlowUpCenter::Free
            } else {
                BlowUpCenter::Point(
                    m.point_index(rest)
                        .ok_or_else(|| Error::parse(no, col, format!("unknown point {rest}")))?,
                )
            };
            *m = blow_up_model(m, &center).map_err(|e| err(col, e))?;
        }
        "boundary" => {
            let (curve, coeff) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(no, col, "expected `boundary <curve> <coefficient>`"))?;
            let idx = m
                .curve_index(curve)
                .ok_or_else(|| Error::parse(no, col, format!("unknown curve {curve}")))?;
            let c = parse_rational(coeff).map_err(|e| err(col, e))?;
            m.set_boundary(idx, c).map_err(|e| err(col, e))?;
        }
        "fibration" => {
            m.fibration = Some(m.lattice.parse_class(rest).map_err(|e| err(col, e))?);
        }
        "flag" => {
            if rest.is_empty() || rest.contains(char::is_whitespace) {
                return Err(Error::parse(no, col, "expected a single flag word"));
            }
            m.flags.insert(rest.to_string());
        }
        "contract" => {
            let idx = m
                .curve_index(rest)
                .ok_or_else(|| Error::parse(no, col, format!("unknown curve {rest}")))?;
            m.contract(idx).map_err(|e| err(col, e))?;
        }
        other => {
            return Err(Error::parse(
                no,
                col.saturating_sub(other.len() + 1).max(1),
                format!("unknown statement `{other}`"),
            ))
        }
    }
    Ok(())
}

/// Moves a parse error from a sub-parser's line-relative position.
fn shift(e: Error, line: usize, col: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::parse(line, col + column - 1, message),
        other => Error::parse(line, col, other.to_string()),
    }
}

pub fn emit_surface(m: &FoliatedSurfaceModel) -> String {
    let mut out = format!("{SURFACE_HEADER} {SURFACE_VERSION}\n");
    let _ = writeln!(out, "base {}", m.base.name());
    let base_rank = m.base.lattice().rank();
    for label in &m.lattice.labels()[base_rank..] {
        let _ = writeln!(out, "exceptional {label}");
    }
    let _ = writeln!(out, "kx {}", m.lattice.format_class(&m.k_x));
    let _ = writeln!(out, "kf {}", m.lattice.format_class(&m.k_f));
    for c in &m.curves {
        let _ = write!(
            out,
            "curve {} {} {}",
            c.name,
            m.lattice.format_class(&c.class),
            if c.invariant { "invariant" } else { "non-invariant" }
        );
        if c.genus != 0 {
            let _ = write!(out, " genus {}", c.genus);
        }
        out.push('\n');
    }
    for p in &m.points {
        let _ = write!(out, "point {} germ {}", p.name, p.germ);
        for b in &p.branches {
            let _ = write!(out, " ; on {} {}", m.curves[b.curve].name, b.equation);
        }
        out.push('\n');
    }
    for b in &m.boundary {
        let _ = writeln!(out, "boundary {} {}", m.curves[b.curve].name, b.coefficient);
    }
    if let Some(f) = &m.fibration {
        let _ = writeln!(out, "fibration {}", m.lattice.format_class(f));
    }
    for f in &m.flags {
        let _ = writeln!(out, "flag {f}");
    }
    for &c in &m.contracted {
        let _ = writeln!(out, "contract {}", m.curves[c].name);
    }
    out
}
