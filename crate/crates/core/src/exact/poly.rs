//! Sparse bivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// A polynomial in `x` and `y`, stored as a map from exponent pairs `(i, j)`
/// (for `x^i y^j`) to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Minimal total degree of a nonzero term.
    pub fn order(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|(i, j)| i + j)
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Maximal total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j <= d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((i, j), c)| c * pow_r(x, *i) * pow_r(y, *j))
            .sum()
    }

    pub fn d_dx(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * Rational::from_integer(BigInt::from(*i)))),
        )
    }

    pub fn d_dy(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * Rational::from_integer(BigInt::from(*j)))),
        )
    }

    /// Substitution `(x, y) -> (x, x*y)`: the first standard blow-up chart.
    pub fn chart_x(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|((i, j), c)| ((i + j, *j), c.clone())))
    }

    /// Substitution `(x, y) -> (x*y, y)`: the second standard blow-up chart.
    pub fn chart_y(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|((i, j), c)| ((*i, i + j), c.clone())))
    }

    /// `f(y, x)`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((*j, *i), c.clone()))
                .collect(),
        }
    }

    /// Largest `k` with `x^k` dividing the polynomial (`u32::MAX` for zero).
    pub fn x_valuation(&self) -> u32 {
        self.terms.keys().map(|(i, _)| *i).min().unwrap_or(u32::MAX)
    }

    pub fn y_valuation(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).min().unwrap_or(u32::MAX)
    }

    /// Exact division by `x^k`; panics if `x^k` does not divide.
    pub fn div_x_pow(&self, k: u32) -> Self {
        assert!(self.is_zero() || self.x_valuation() >= k, "x^{k} does not divide");
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i - k, *j), c.clone()))
                .collect(),
        }
    }

    pub fn div_y_pow(&self, k: u32) -> Self {
        assert!(self.is_zero() || self.y_valuation() >= k, "y^{k} does not divide");
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((*i, j - k), c.clone()))
                .collect(),
        }
    }

    pub fn mul_x_pow(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((i, j), c)| ((i + k, *j), c.clone()))
                .collect(),
        }
    }

    /// `f(x + dx, y + dy)`.
    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Self {
        let shifted_x = &Self::x() + &Self::constant(dx.clone());
        let shifted_y = &Self::y() + &Self::constant(dy.clone());
        self.compose(&shifted_x, &shifted_y)
    }

    /// `f(p, q)` for polynomials `p`, `q`.
    pub fn compose(&self, p: &Self, q: &Self) -> Self {
        let max_i = self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0);
        let p_pows: Vec<Self> = std::iter::successors(Some(Self::one()), |acc| Some(acc * p))
            .take(max_i as usize + 1)
            .collect();
        let q_pows: Vec<Self> = std::iter::successors(Some(Self::one()), |acc| Some(acc * q))
            .take(max_j as usize + 1)
            .collect();
        let mut out = Self::zero();
        for ((i, j), c) in &self.terms {
            out = &out + &(&p_pows[*i as usize] * &q_pows[*j as usize]).scale(c);
        }
        out
    }

    /// `f(0, t)` as a univariate polynomial in `t`.
    pub fn restrict_x_zero(&self) -> UniPoly {
        let n = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); n + 1];
        for ((i, j), c) in &self.terms {
            if *i == 0 {
                coeffs[*j as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// `f(t, 0)` as a univariate polynomial in `t`.
    pub fn restrict_y_zero(&self) -> UniPoly {
        let n = self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); n + 1];
        for ((i, j), c) in &self.terms {
            if *j == 0 {
                coeffs[*i as usize] = c.clone();
            }
        }
        UniPoly::new(coeffs)
    }

    /// Dehomogenization `f(1, t)` of a polynomial (typically homogeneous).
    pub fn dehomogenize_x(&self) -> UniPoly {
        self.chart_x().restrict_x_one()
    }

    fn restrict_x_one(&self) -> UniPoly {
        let n = self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); n + 1];
        for ((_, j), c) in &self.terms {
            coeffs[*j as usize] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Greatest common divisor, normalized so its leading term (greatest
    /// exponent pair in lexicographic order) has coefficient one.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let a = YPoly::from_bivariate(self);
        let b = YPoly::from_bivariate(other);
        let content = a.content().gcd(&b.content());
        let g = YPoly::primitive_gcd(&a.primitive_part(), &b.primitive_part());
        g.scale_by(&content).to_bivariate().normalized()
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = YPoly::from_bivariate(self).div_rem_exact(&YPoly::from_bivariate(divisor))?;
        if r.is_zero() {
            Some(q.to_bivariate())
        } else {
            None
        }
    }

    /// Scales so the lexicographically largest term has coefficient one.
    pub fn normalized(&self) -> Self {
        match self.terms.iter().next_back() {
            None => Self::zero(),
            Some((_, lc)) => self.scale(&(Rational::one() / lc)),
        }
    }

    /// Parses a human-readable polynomial such as `3/2*x^2*y - y^3`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_at(text, 1, 1)
    }

    /// As [`parse`](Self::parse), reporting errors relative to the given
    /// line and starting column.
    pub fn parse_at(text: &str, line: usize, column: usize) -> Result<Self> {
        let mut p = PolyParser {
            chars: text.chars().collect(),
            pos: 0,
            line,
            column,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error(format!("unexpected character {:?}", p.chars[p.pos])));
        }
        Ok(out)
    }
}

fn pow_r(base: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * base)
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Add for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> Self {
        -&self
    }
}

impl fmt::Display for BivariatePolynomial {
    /// Terms by decreasing total degree, then decreasing power of `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (n, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || *key == (0, 0) {
                factors.push(mag.to_string());
            }
            for (var, e) in [("x", key.0), ("y", key.1)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// `Q[x][y]` view used by the gcd: coefficient of `y^j` at index `j`.
#[derive(Clone, Debug, PartialEq)]
struct YPoly(Vec<UniPoly>);

impl YPoly {
    fn from_bivariate(p: &BivariatePolynomial) -> Self {
        let n = p
            .terms
            .keys()
            .map(|(_, j)| *j)
            .max()
            .map_or(0, |m| m as usize + 1);
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); n];
        for ((i, j), c) in &p.terms {
            let row = &mut rows[*j as usize];
            if row.len() <= *i as usize {
                row.resize(*i as usize + 1, Rational::zero());
            }
            row[*i as usize] = c.clone();
        }
        Self::trimmed(rows.into_iter().map(UniPoly::new).collect())
    }

    fn trimmed(mut v: Vec<UniPoly>) -> Self {
        while v.last().is_some_and(UniPoly::is_zero) {
            v.pop();
        }
        YPoly(v)
    }

    fn to_bivariate(&self) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (j, coeff) in self.0.iter().enumerate() {
            for (i, c) in coeff.coeffs().iter().enumerate() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn leading(&self) -> &UniPoly {
        self.0.last().expect("zero YPoly has no leading coefficient")
    }

    fn content(&self) -> UniPoly {
        self.0.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
    }

    fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        Self::trimmed(self.0.iter().map(|p| p.div_rem(&c).0).collect())
    }

    fn scale_by(&self, p: &UniPoly) -> Self {
        Self::trimmed(self.0.iter().map(|c| c.mul(p)).collect())
    }

    fn shift(&self, k: usize) -> Self {
        let mut v = vec![UniPoly::zero(); k];
        v.extend(self.0.iter().cloned());
        Self::trimmed(v)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = UniPoly::zero();
        Self::trimmed(
            (0..n)
                .map(|i| {
                    self.0
                        .get(i)
                        .unwrap_or(&zero)
                        .sub(other.0.get(i).unwrap_or(&zero))
                })
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `other` in `Q[x][y]`.
    fn pseudo_rem(&self, other: &Self) -> Self {
        let d = other.degree();
        let lc = other.leading().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.degree() >= d {
            let shift = r.degree() - d;
            let lr = r.leading().clone();
            r = r.scale_by(&lc).sub(&other.scale_by(&lr).shift(shift));
        }
        r
    }

    fn primitive_gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = if a.degree() >= b.degree() {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Division where quotient coefficients must be exact in `Q[x]`.
    fn div_rem_exact(&self, divisor: &Self) -> Option<(Self, Self)> {
        let d = divisor.degree();
        let lc = divisor.leading().clone();
        let mut r = self.clone();
        let mut q = vec![UniPoly::zero(); self.0.len().saturating_sub(d).max(1)];
        while !r.is_zero() && r.degree() >= d {
            let shift = r.degree() - d;
            let (factor, rem) = r.leading().div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&divisor.scale_by(&factor).shift(shift));
            q[shift] = factor;
        }
        Some((Self::trimmed(q), r))
    }
}

struct PolyParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl PolyParser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column + self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BivariatePolynomial> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BivariatePolynomial> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.degree().unwrap_or(0) != 0 || d.is_zero() {
                        self.pos = at;
                        return Err(self.error("division only by nonzero constants"));
                    }
                    acc = acc.scale(&(Rational::one() / d.constant_term()));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<BivariatePolynomial> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivariatePolynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected an exponent"));
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = digits
                .parse()
                .ok()
                .filter(|e| *e <= 256)
                .ok_or_else(|| self.error("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BivariatePolynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                self.pos += 1;
                Ok(BivariatePolynomial::x())
            }
            Some('y') => {
                self.pos += 1;
                Ok(BivariatePolynomial::y())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(BivariatePolynomial::constant(Rational::from_integer(n)))
            }
            Some(c) => Err(self.error(format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn p(s: &str) -> BivariatePolynomial {
        BivariatePolynomial::parse(s).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(p("x^2*y + y^4").order().unwrap(), 3);
        assert_eq!(p("1 + x").order().unwrap(), 0);
        assert_eq!(p("x*y - y*x").order(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let f = p("3/2*x^2*y - y^3");
        assert_eq!(f.coeff(2, 1), rat(3, 2));
        assert_eq!(f.coeff(0, 3), int(-1));
        assert_eq!(f.to_string(), "3/2*x^2*y - y^3");
        assert_eq!(p(&f.to_string()), f);
        assert_eq!(p("(x + y)^2").to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(p("-1 + x").to_string(), "x - 1");
    }

    #[test]
    fn parse_errors_carry_columns() {
        match BivariatePolynomial::parse("x + z") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BivariatePolynomial::parse("x / y").is_err());
        assert!(BivariatePolynomial::parse("(x").is_err());
    }

    #[test]
    fn chart_substitutions() {
        let f = p("x^2 + y^3");
        assert_eq!(f.chart_x(), p("x^2 + x^3*y^3"));
        assert_eq!(f.chart_y(), p("x^2*y^2 + y^3"));
    }

    #[test]
    fn translation_and_restriction() {
        let f = p("x*y + y^2");
        assert_eq!(f.translate(&int(0), &int(1)), p("x*y + x + y^2 + 2*y + 1"));
        assert_eq!(f.restrict_x_zero().coeffs(), &[int(0), int(0), int(1)]);
    }

    #[test]
    fn bivariate_gcd() {
        let g = p("x - y^2 + 1");
        let a = &g * &p("x + y");
        let b = &g * &p("x^2 - 3*y");
        assert_eq!(a.gcd(&b), g.normalized());
        assert_eq!(p("x^2").gcd(&p("x*y")), p("x"));
        assert_eq!(p("x + 1").gcd(&p("y")), p("1"));
        assert_eq!(a.exact_div(&g).unwrap(), p("x + y"));
        assert!(p("x + y").exact_div(&p("x")).is_none());
    }
}
