//! Coefficient ring and field abstractions shared by the polynomial layer.

use std::fmt;

use crate::rat::Rat;
use crate::unipoly::UniPoly;

/// Arithmetic failures that can arise in exact computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    /// Inversion in a quotient ring found a proper factor of the modulus.
    #[error("modulus is reducible: found factor {factor}")]
    ZeroDivisor { factor: UniPoly<Rat> },
}

/// Commutative ring with unit.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow_u(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}

/// Field: a ring where nonzero elements can be inverted.
pub trait Field: Ring {
    fn inverse(&self) -> Result<Self, ArithError>;
    fn from_rat(r: &Rat) -> Self;

    fn divide(&self, o: &Self) -> Result<Self, ArithError> {
        Ok(self.times(&o.inverse()?))
    }

    /// The value as a rational when it lies in the prime field.
    fn as_rat(&self) -> Option<Rat>;
}

impl Ring for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rat::is_one(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl Field for Rat {
    fn inverse(&self) -> Result<Self, ArithError> {
        self.recip().ok_or(ArithError::DivisionByZero)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}
