//! Arithmetic of the degree and automorphism bounds, and the table of
//! non-effective constants they consume.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Every number in the chain of inequalities behind the degree bound for a
/// leaf of genus `g`, with `A = K_F + τK_X` and `m` such that `|mA|` is
/// birational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBoundReport {
    pub g: u64,
    pub m: u64,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub tau: Rational,
    /// `binom(m + 2, 2)`, a lower bound for `h⁰(X, mA)`.
    #[serde(serialize_with = "crate::exact::rational::serialize_display")]
    pub sections: BigInt,
    /// `m(1 + τ)(2g - 2) - g + 1 = h⁰(L, mA|_L)`
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub restriction: Rational,
    /// `m₀ = m g`
    pub m0: u64,
    #[serde(serialize_with = "crate::exact::rational::serialize_display")]
    pub sections_m0: BigInt,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub restriction_m0: Rational,
    /// `binom(m₀ + 2, 2) - h⁰(L, m₀A|_L)`, positive when `m₀A - L` is effective.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub difference: Rational,
    pub effective: bool,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub leaf_degree: Rational,
    /// `m₀ A²`
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub bound: Rational,
    /// `A·L <= m₀ A²`
    pub holds: bool,
}

fn binom2(n: u64) -> BigInt {
    // binom(n + 2, 2)
    BigInt::from(n + 2) * BigInt::from(n + 1) / 2
}

pub fn degree_bound_check(
    g: u64,
    tau: &Rational,
    m: u64,
    leaf_degree: &Rational,
    adjoint_square: &Rational,
) -> Result<DegreeBoundReport> {
    if g == 0 || m == 0 {
        return Err(Error::Precondition("g and m must be at least 1".into()));
    }
    if tau.is_negative() {
        return Err(Error::Precondition("tau must be nonnegative".into()));
    }
    if !adjoint_square.is_positive() {
        return Err(Error::Precondition("the adjoint square must be positive".into()));
    }
    let restriction_at = |k: u64| -> Rational {
        let k = Rational::from_integer(k.into());
        let g = Rational::from_integer(g.into());
        let two = Rational::from_integer(2.into());
        k * (Rational::one() + tau) * (&two * &g - &two) - g + Rational::one()
    };
    let m0 = m * g;
    let sections_m0 = binom2(m0);
    let restriction_m0 = restriction_at(m0);
    let difference = Rational::from_integer(sections_m0.clone()) - &restriction_m0;
    let bound = Rational::from_integer(m0.into()) * adjoint_square;
    Ok(DegreeBoundReport {
        g,
        m,
        tau: tau.clone(),
        sections: binom2(m),
        restriction: restriction_at(m),
        m0,
        effective: difference > Rational::one(),
        sections_m0,
        restriction_m0,
        difference,
        holds: leaf_degree <= &bound,
        leaf_degree: leaf_degree.clone(),
        bound,
    })
}

/// `#G <= vol(K_{(X,F),t}) / vol(K_{(Y,G,Δ),t})`
pub fn automorphism_bound(vol_up: &Rational, vol_down: &Rational) -> Result<Rational> {
    if !vol_down.is_positive() {
        return Err(Error::Precondition("the quotient volume must be positive".into()));
    }
    if vol_up.is_negative() {
        return Err(Error::Precondition("volumes are nonnegative".into()));
    }
    Ok(vol_up / vol_down)
}

/// `C(ε) vol` with `C(ε) = 1/v(ε)` for a configured volume floor `v(ε)`.
pub fn automorphism_bound_from_floor(vol: &Rational, floor: &Rational) -> Result<Rational> {
    automorphism_bound(vol, floor)
}

/// A value for one of the non-effective constants (`tau`, `v`, `M`),
/// optionally at a given `ε`, with where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    #[serde(default, with = "crate::exact::rational::serde_rational::option")]
    pub epsilon: Option<Rational>,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub value: Rational,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsTable {
    #[serde(default)]
    pub entries: Vec<ConstantEntry>,
}

pub const CONSTANT_NAMES: [&str; 3] = ["tau", "v", "M"];

impl ConstantsTable {
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if !CONSTANT_NAMES.contains(&e.name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "unknown constant {:?} (expected one of tau, v, M)",
                    e.name
                )));
            }
            if e.provenance.trim().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "constant {} has no provenance",
                    e.name
                )));
            }
            if !e.value.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "constant {} must be positive",
                    e.name
                )));
            }
        }
        Ok(())
    }

    /// The entry for `name` at `epsilon`, falling back to an entry without
    /// an `ε`.
    pub fn lookup(&self, name: &str, epsilon: Option<&Rational>) -> Option<&ConstantEntry> {
        let exact = self
            .entries
            .iter()
            .find(|e| e.name == name && e.epsilon.as_ref() == epsilon && epsilon.is_some());
        exact.or_else(|| {
            self.entries
                .iter()
                .find(|e| e.name == name && e.epsilon.is_none())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn degree_chain_examples() {
        let r = degree_bound_check(2, &rat(1, 10), 3, &int(5), &int(1)).unwrap();
        assert_eq!(r.m0, 6);
        assert_eq!(r.sections, BigInt::from(10));
        let r = degree_bound_check(2, &rat(1, 10), 4, &int(5), &int(1)).unwrap();
        assert_eq!(r.restriction, rat(39, 5));
        assert_eq!(r.bound, int(8));
        assert!(r.holds);
        assert!(degree_bound_check(0, &rat(1, 10), 4, &int(5), &int(1)).is_err());
        assert!(degree_bound_check(1, &rat(1, 10), 4, &int(5), &int(0)).is_err());
    }

    #[test]
    fn automorphism_ratio() {
        assert_eq!(automorphism_bound(&int(10), &int(2)).unwrap(), int(5));
        assert_eq!(automorphism_bound(&rat(7, 3), &rat(7, 3)).unwrap(), int(1));
        assert!(automorphism_bound(&int(1), &int(0)).is_err());
    }

    #[test]
    fn constants_need_provenance() {
        let mut t = ConstantsTable {
            entries: vec![ConstantEntry {
                name: "v".into(),
                epsilon: Some(rat(1, 10)),
                value: rat(1, 100),
                provenance: "".into(),
            }],
        };
        assert!(t.validate().is_err());
        t.entries[0].provenance = "user supplied".into();
        t.validate().unwrap();
        assert!(t.lookup("v", Some(&rat(1, 10))).is_some());
        assert!(t.lookup("v", Some(&rat(1, 20))).is_none());
    }
}
