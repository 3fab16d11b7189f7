//! The eigenvalue sets Λ(ε′): pairs whose continued fraction has digit sum
//! at most `1/ε′`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Coprime `p >= q >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EigenvaluePair {
    pub p: u64,
    pub q: u64,
}

impl EigenvaluePair {
    /// Normalizes the unordered pair.
    pub fn new(a: u64, b: u64) -> Result<Self> {
        let (p, q) = (a.max(b), a.min(b));
        if q == 0 || p.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!(
                "({a}, {b}) is not a coprime positive pair"
            )));
        }
        Ok(Self { p, q })
    }
}

/// All pairs with continued-fraction digit sum at most `floor(1/ε′)`,
/// generated from their (canonical) digit sequences.
pub fn eigenvalue_set(epsilon_prime: &Rational) -> Result<BTreeSet<EigenvaluePair>> {
    if !epsilon_prime.is_positive() {
        return Err(Error::InvalidInput("epsilon' must be positive".into()));
    }
    let bound = (epsilon_prime.recip().floor().to_integer())
        .to_u64()
        .filter(|n| *n <= 40)
        .ok_or_else(|| Error::InvalidInput("1/epsilon' too large to enumerate".into()))?;
    let mut out = BTreeSet::new();
    let mut digits = Vec::new();
    extend(&mut digits, bound, &mut out);
    Ok(out)
}

fn extend(digits: &mut Vec<u64>, budget: u64, out: &mut BTreeSet<EigenvaluePair>) {
    for d in 1..=budget {
        digits.push(d);
        if digits.len() == 1 || d >= 2 {
            let (p, q) = evaluate(digits);
            out.insert(EigenvaluePair { p, q });
        }
        extend(digits, budget - d, out);
        digits.pop();
    }
}

/// `[u_1, ..., u_k]` as a reduced fraction `p/q`.
fn evaluate(digits: &[u64]) -> (u64, u64) {
    let (mut p, mut q) = (BigInt::from(*digits.last().unwrap()), BigInt::from(1));
    for d in digits.iter().rev().skip(1) {
        let np = BigInt::from(*d) * &p + &q;
        q = p;
        p = np;
    }
    (p.to_u64().unwrap(), q.to_u64().unwrap())
}
