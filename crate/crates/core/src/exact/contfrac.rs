//! Regular and Hirzebruch–Jung continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::rational::Rational;
use crate::error::{Error, Result};

/// Regular continued fraction `u_1 + 1/(u_2 + 1/(...))` in canonical form:
/// every digit is positive and the last digit is at least 2 unless there is
/// only one digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ContinuedFraction {
    digits: Vec<u64>,
}

impl ContinuedFraction {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    pub fn value(&self) -> Rational {
        let mut acc = Rational::from_integer(BigInt::from(*self.digits.last().unwrap()));
        for d in self.digits.iter().rev().skip(1) {
            acc = Rational::from_integer(BigInt::from(*d)) + Rational::one() / acc;
        }
        acc
    }
}

/// Continued fraction of `p/q` for coprime `p >= q >= 1`.
pub fn continued_fraction(p: u64, q: u64) -> Result<ContinuedFraction> {
    if q == 0 || p < q {
        return Err(Error::InvalidInput(format!(
            "continued fraction needs p >= q >= 1, got ({p}, {q})"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidInput(format!("({p}, {q}) are not coprime")));
    }
    let mut digits = Vec::new();
    let (mut a, mut b) = (p, q);
    while b != 0 {
        digits.push(a / b);
        let r = a % b;
        a = b;
        b = r;
    }
    // Euclid already ends on a digit >= 2 whenever there is more than one.
    debug_assert!(digits.len() == 1 || *digits.last().unwrap() >= 2);
    Ok(ContinuedFraction { digits })
}

/// Hirzebruch–Jung (negative) continued fraction of `m/b` for coprime
/// `1 <= b < m`: digits `c_i >= 2` with `m/b = c_1 - 1/(c_2 - 1/(...))`.
pub fn hirzebruch_jung(m: u64, b: u64) -> Result<Vec<u64>> {
    if b == 0 || b >= m {
        return Err(Error::InvalidInput(format!(
            "Hirzebruch-Jung expansion needs 1 <= b < m, got m={m}, b={b}"
        )));
    }
    if m.gcd(&b) != 1 {
        return Err(Error::InvalidInput(format!("m={m} and b={b} are not coprime")));
    }
    let mut digits = Vec::new();
    let (mut num, mut den) = (m, b);
    while den != 0 {
        let c = num.div_ceil(den);
        digits.push(c);
        let next = c * den - num;
        num = den;
        den = next;
    }
    Ok(digits)
}

/// Evaluates `c_1 - 1/(c_2 - 1/(...))`.
pub fn hirzebruch_jung_value(digits: &[u64]) -> Rational {
    let mut acc = Rational::from_integer(BigInt::from(*digits.last().unwrap()));
    for c in digits.iter().rev().skip(1) {
        acc = Rational::from_integer(BigInt::from(*c)) - Rational::one() / acc;
    }
    acc
}

/// Number of subtraction steps `(p, q) -> (p - q, q)` needed to reach
/// `(1, 1)` for coprime positive `p`, `q`.
pub fn subtractive_euclid_steps(p: u64, q: u64) -> u64 {
    let (mut a, mut b) = (p.max(q), p.min(q));
    let mut steps = 0;
    while a != b {
        // batch the repeated subtractions of one division step
        let k = if a % b == 0 { a / b - 1 } else { a / b };
        steps += k;
        a -= k * b;
        if a < b {
            std::mem::swap(&mut a, &mut b);
        }
    }
    steps
}
