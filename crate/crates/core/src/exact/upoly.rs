//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{common_denominator, Rational};
use crate::error::{Error, Result};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

/// Largest absolute integer coefficient we are willing to factor when
/// enumerating rational-root candidates.
const ROOT_SEARCH_LIMIT: u64 = 1 << 40;

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`
    pub fn linear_root(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => Self::new(self.coeffs.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let shift = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lc;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

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

    /// Integer coefficients of a positive rational multiple, content removed.
    fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        let den = common_denominator(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if content.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// Distinct rational roots with multiplicities, in increasing order, and
    /// the remaining cofactor (which has no rational roots).
    pub fn rational_roots(&self) -> Result<(Vec<(Rational, usize)>, UniPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rest = self.monic();
        let mut roots: Vec<(Rational, usize)> = Vec::new();

        let mut zero_mult = 0;
        while rest.coeffs.first().is_some_and(Zero::is_zero) {
            rest = Self::new(rest.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Rational::zero(), zero_mult));
        }
        if rest.degree().unwrap_or(0) == 0 {
            return Ok((roots, rest));
        }

        let ints = rest.primitive_integer_coeffs();
        let constant = ints[0].abs();
        let lead = ints.last().unwrap().abs();
        let numerators = divisors(&constant)?;
        let denominators = divisors(&lead)?;

        let mut candidates: Vec<Rational> = Vec::new();
        for p in &numerators {
            for q in &denominators {
                if p.gcd(q).is_one() {
                    let r = Rational::new(BigInt::from(*p), BigInt::from(*q));
                    candidates.push(r.clone());
                    candidates.push(-r);
                }
            }
        }
        candidates.sort();
        candidates.dedup();

        for cand in candidates {
            let mut mult = 0;
            loop {
                if rest.degree().unwrap_or(0) == 0 || !rest.eval(&cand).is_zero() {
                    break;
                }
                rest = rest.div_rem(&Self::linear_root(&cand)).0;
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((roots, rest))
    }

    /// Square-free decomposition (Yun): monic factors `f_i` with
    /// `self = lc * prod f_i^i`. Factors equal to 1 are omitted.
    pub fn square_free(&self) -> Vec<(UniPoly, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

fn divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.to_u64().filter(|v| *v <= ROOT_SEARCH_LIMIT).ok_or_else(|| {
        Error::InvalidInput(format!("coefficient {n} too large for the rational root search"))
    })?;
    if n == 0 {
        return Ok(vec![1]);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|c| int(*c)).collect())
    }

    #[test]
    fn finds_rational_roots_with_multiplicity() {
        // (t - 1/2)^2 (t + 3) (t^2 + 1)
        let f = UniPoly::linear_root(&rat(1, 2))
            .mul(&UniPoly::linear_root(&rat(1, 2)))
            .mul(&UniPoly::linear_root(&int(-3)))
            .mul(&poly(&[1, 0, 1]));
        let (roots, rest) = f.rational_roots().unwrap();
        assert_eq!(roots, vec![(int(-3), 1), (rat(1, 2), 2)]);
        assert_eq!(rest, poly(&[1, 0, 1]));
    }

    #[test]
    fn zero_roots_are_found() {
        let (roots, rest) = poly(&[0, 0, 2]).rational_roots().unwrap();
        assert_eq!(roots, vec![(int(0), 2)]);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn gcd_and_square_free() {
        let f = poly(&[-1, 0, 1]); // t^2 - 1
        let g = poly(&[1, 2, 1]); // (t + 1)^2
        assert_eq!(f.gcd(&g), poly(&[1, 1]));
        let sf = g.mul(&poly(&[2, 0, 1])).square_free();
        assert_eq!(sf, vec![(poly(&[2, 0, 1]), 1), (poly(&[1, 1]), 2)]);
    }

    #[test]
    fn division_reconstructs() {
        let f = poly(&[3, -2, 0, 5, 1]);
        let g = poly(&[1, 0, 2]);
        let (q, r) = f.div_rem(&g);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&g).sub(&f.sub(&r)), UniPoly::zero());
    }
}
