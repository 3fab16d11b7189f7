//! Intersection lattices of iterated blow-ups of ℙ² and F_n.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, DenseMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardLattice {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

impl PicardLattice {
    /// Checks symmetry, label uniqueness and signature `(1, rank - 1)`.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(
                "intersection matrix must be square of size rank".into(),
            ));
        }
        for i in 0..n {
            if !valid_label(&labels[i]) {
                return Err(Error::InvalidInput(format!("bad basis label {:?}", labels[i])));
            }
            if labels[..i].contains(&labels[i]) {
                return Err(Error::InvalidInput(format!(
                    "duplicate basis label {}",
                    labels[i]
                )));
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInput("intersection matrix is not symmetric".into()));
                }
            }
        }
        let lattice = Self { labels, matrix };
        let (pos, neg, zero) = lattice.gram().inertia();
        if (pos, neg, zero) != (1, n - 1, 0) {
            return Err(Error::InvalidInput(format!(
                "signature ({pos}, {neg}) with {zero} null directions, expected (1, {})",
                n - 1
            )));
        }
        Ok(lattice)
    }

    pub fn projective_plane() -> Self {
        Self {
            labels: vec!["H".into()],
            matrix: vec![vec![1]],
        }
    }

    /// `F_n` with basis a fiber `F` and the negative section `C0`.
    pub fn hirzebruch(n: u32) -> Self {
        Self {
            labels: vec!["F".into(), "C0".into()],
            matrix: vec![vec![0, 1], vec![1, -(n as i64)]],
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn gram(&self) -> DenseMatrix {
        let n = self.rank();
        DenseMatrix::from_fn(n, n, |i, j| Rational::from_integer(self.matrix[i][j].into()))
    }

    /// Adds an orthogonal class of square `-1` (the total transform of a new
    /// exceptional curve); returns its index.
    pub fn blow_up(&mut self, label: &str) -> Result<usize> {
        if !valid_label(label) || self.labels.iter().any(|l| l == label) {
            return Err(Error::InvalidInput(format!("cannot add basis label {label:?}")));
        }
        for row in &mut self.matrix {
            row.push(0);
        }
        let n = self.rank();
        let mut row = vec![0; n + 1];
        row[n] = -1;
        self.matrix.push(row);
        self.labels.push(label.to_string());
        Ok(n)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis(&self, i: usize) -> DivisorClass {
        let mut c = DivisorClass::zero(self.rank());
        c.coeffs[i] = Rational::one();
        c
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.rank())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational> {
        for c in [a, b] {
            if c.coeffs.len() != self.rank() {
                return Err(Error::LatticeMismatch {
                    expected: self.rank(),
                    found: c.coeffs.len(),
                });
            }
        }
        let mut total = Rational::zero();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let e = self.matrix[i][j];
                if e != 0 && !bj.is_zero() {
                    total += ai * bj * Rational::from_integer(e.into());
                }
            }
        }
        Ok(total)
    }

    /// Parses `2H - E1 + 1/2E2`; `0` is the zero class.
    pub fn parse_class(&self, text: &str) -> Result<DivisorClass> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: &str| Error::InvalidInput(format!("bad divisor class {text:?}: {m}"));
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut class = self.zero();
        if s == "0" {
            return Ok(class);
        }
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (Rational::one(), &rest[1..]),
                b'-' => (-Rational::one(), &rest[1..]),
                _ if first => (Rational::one(), rest),
                _ => return Err(bad("expected + or -")),
            };
            first = false;
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map(|i| i + 1)
                .unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let split = term
                .find(|c: char| c.is_ascii_alphabetic())
                .ok_or_else(|| bad("term without a basis label"))?;
            let (num, label) = term.split_at(split);
            let num = num.strip_suffix('*').unwrap_or(num);
            let coeff = if num.is_empty() {
                Rational::one()
            } else {
                parse_rational(num).map_err(|_| bad("bad coefficient"))?
            };
            let idx = self
                .index_of(label)
                .ok_or_else(|| bad(&format!("unknown basis label {label}")))?;
            class.coeffs[idx] += sign * coeff;
        }
        Ok(class)
    }

    /// Renders a class in the syntax accepted by [`parse_class`](Self::parse_class).
    pub fn format_class(&self, c: &DivisorClass) -> String {
        let mut out = String::new();
        for (label, a) in self.labels.iter().zip(&c.coeffs) {
            if a.is_zero() {
                continue;
            }
            let abs = a.abs();
            if out.is_empty() {
                if a.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if a.is_negative() { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn valid_label(l: &str) -> bool {
    l.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Rational coefficients over a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    #[serde(with = "crate::exact::rational::serde_rational::vec")]
    pub coeffs: Vec<Rational>,
}

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); rank],
        }
    }

    pub fn from_integers(c: &[i64]) -> Self {
        Self {
            coeffs: c.iter().map(|&v| Rational::from_integer(v.into())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Appends a zero coefficient for a new basis element.
    pub(crate) fn extend(&mut self) {
        self.coeffs.push(Rational::zero());
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coeffs.len(), o.coeffs.len(), "classes on different lattices");
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        self + &(-o)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
