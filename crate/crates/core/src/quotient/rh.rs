//! Adjoint Riemann–Hurwitz: for a finite cover `σ: Y -> X`,
//! `K_{Y,ε} = σ* K_{X,ε} + Σ (r_D - 1)(ι(D) + ε) D`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rational;

/// A prime divisor downstairs with its coefficient in the adjoint class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverDivisor {
    pub name: String,
    pub iota: u8,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub coefficient: Rational,
}

/// An upstairs prime divisor over `downstairs` (an index) with ramification
/// index `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ramification {
    pub upstairs: String,
    pub downstairs: usize,
    pub r: u64,
    pub iota: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpstairsCoefficient {
    pub name: String,
    /// `r_D` times the downstairs coefficient.
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub pullback: Rational,
    /// `(r_D - 1)(ι(D) + ε)`
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub correction: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub total: Rational,
}

pub fn rh_pullback(
    downstairs: &[CoverDivisor],
    ramification: &[Ramification],
    epsilon: &Rational,
) -> Result<Vec<UpstairsCoefficient>> {
    if epsilon.is_negative() {
        return Err(Error::InvalidInput("epsilon must be nonnegative".into()));
    }
    ramification
        .iter()
        .map(|ram| {
            let down = downstairs.get(ram.downstairs).ok_or_else(|| {
                Error::InvalidInput(format!("{} lies over an unknown divisor", ram.upstairs))
            })?;
            if ram.r == 0 {
                return Err(Error::InvalidInput(format!(
                    "{}: ramification index must be at least 1",
                    ram.upstairs
                )));
            }
            if ram.iota > 1 || down.iota > 1 {
                return Err(Error::InvalidInput("iota must be 0 or 1".into()));
            }
            if ram.iota != down.iota {
                return Err(Error::InvalidInput(format!(
                    "{} has iota {} but lies over {} with iota {}",
                    ram.upstairs, ram.iota, down.name, down.iota
                )));
            }
            let r = Rational::from_integer(BigInt::from(ram.r));
            let pullback = &r * &down.coefficient;
            let correction = (&r - Rational::one()) * (Rational::from_integer(ram.iota.into()) + epsilon);
            Ok(UpstairsCoefficient {
                name: ram.upstairs.clone(),
                total: &pullback + &correction,
                pullback,
                correction,
            })
        })
        .collect()
}
