//! Simple algebraic extensions `Q[r]/(m(r))` and their elements.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{ArithError, Field, Ring};
use crate::rat::Rat;
use crate::unipoly::UniPoly;

/// A simple extension of the rationals given by a monic modulus.
#[derive(Debug, PartialEq)]
pub struct NumberField {
    modulus: UniPoly<Rat>,
}

impl NumberField {
    /// Builds the extension; the modulus is made monic and must have degree at least one.
    pub fn new(modulus: UniPoly<Rat>) -> Arc<Self> {
        let m = modulus.monic().expect("nonzero modulus");
        assert!(m.degree().unwrap_or(0) >= 1, "modulus must be non-constant");
        Arc::new(NumberField { modulus: m })
    }

    pub fn modulus(&self) -> &UniPoly<Rat> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }
}

/// Element of a number field; the field is absent for plain rationals.
#[derive(Clone)]
pub struct AlgNum {
    field: Option<Arc<NumberField>>,
    poly: UniPoly<Rat>,
}

impl AlgNum {
    pub fn rational(r: Rat) -> Self {
        AlgNum {
            field: None,
            poly: UniPoly::constant(r),
        }
    }

    /// The generator `r` of the given field.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        AlgNum::from_poly(field, UniPoly::x())
    }

    pub fn from_poly(field: &Arc<NumberField>, p: UniPoly<Rat>) -> Self {
        let (_, r) = p.divrem(field.modulus()).expect("monic modulus");
        AlgNum {
            field: Some(field.clone()),
            poly: r,
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Coordinates in the power basis `1, r, r^2, ...`.
    pub fn coords(&self) -> &UniPoly<Rat> {
        &self.poly
    }

    /// Galois conjugate in a quadratic field (identity elsewhere).
    pub fn conjugate(&self) -> Self {
        match &self.field {
            Some(f) if f.degree() == 2 => {
                // r' = -c1 - r for r^2 + c1 r + c0
                let c1 = f.modulus().coeff(1);
                let rc = UniPoly::new(vec![-c1, -Rat::one()]);
                AlgNum::from_poly(f, self.poly.compose(&rc))
            }
            _ => self.clone(),
        }
    }

    /// Approximate real value for display, taking the larger real root of a quadratic modulus.
    pub fn approx(&self) -> Option<f64> {
        match &self.field {
            None => Some(self.poly.coeff(0).to_f64()),
            Some(f) => {
                let roots = f.modulus().approx_real_roots();
                let r = *roots.last()?;
                let mut acc = 0.0;
                for c in self.poly.coeffs().iter().rev() {
                    acc = acc * r + c.to_f64();
                }
                Some(acc)
            }
        }
    }

    fn merge(&self, o: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &o.field) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                assert!(
                    Arc::ptr_eq(a, b) || a == b,
                    "arithmetic across different number fields"
                );
                Some(a.clone())
            }
        }
    }

    fn with(field: Option<Arc<NumberField>>, p: UniPoly<Rat>) -> Self {
        match field {
            None => AlgNum {
                field: None,
                poly: p,
            },
            Some(f) => AlgNum::from_poly(&f, p),
        }
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &Self) -> bool {
        if self.poly != o.poly {
            return false;
        }
        match (&self.field, &o.field) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => self.poly.degree().unwrap_or(0) == 0,
        }
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.degree().unwrap_or(0) == 0 {
            return write!(f, "{}", self.poly.coeff(0));
        }
        write!(f, "{}", self.poly.render("r"))
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(fl) => write!(f, "{} [r: {} = 0]", self, fl.modulus().render("r")),
            None => write!(f, "{}", self),
        }
    }
}

impl Ring for AlgNum {
    fn zero() -> Self {
        AlgNum::rational(Rat::zero())
    }
    fn one() -> Self {
        AlgNum::rational(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn is_one(&self) -> bool {
        self.poly.degree() == Some(0) && self.poly.coeff(0).is_one()
    }
    fn plus(&self, o: &Self) -> Self {
        AlgNum {
            field: self.merge(o),
            poly: self.poly.plus(&o.poly),
        }
    }
    fn minus(&self, o: &Self) -> Self {
        AlgNum {
            field: self.merge(o),
            poly: self.poly.minus(&o.poly),
        }
    }
    fn times(&self, o: &Self) -> Self {
        AlgNum::with(self.merge(o), self.poly.times(&o.poly))
    }
    fn negate(&self) -> Self {
        AlgNum {
            field: self.field.clone(),
            poly: self.poly.negate(),
        }
    }
    fn from_i64(n: i64) -> Self {
        AlgNum::rational(Rat::from_int(n))
    }
}

impl Field for AlgNum {
    fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        match &self.field {
            None => Ok(AlgNum::rational(self.poly.coeff(0).inverse()?)),
            Some(f) => {
                let (g, s) = self.poly.ext_gcd_mod(f.modulus())?;
                if g.degree() != Some(0) {
                    return Err(ArithError::ZeroDivisor { factor: g });
                }
                Ok(AlgNum::from_poly(f, s))
            }
        }
    }
    fn from_rat(r: &Rat) -> Self {
        AlgNum::rational(r.clone())
    }
    fn as_rat(&self) -> Option<Rat> {
        (self.poly.degree().unwrap_or(0) == 0).then(|| self.poly.coeff(0))
    }
}

/// Serialized form: the modulus (absent for rationals) and power basis coordinates.
#[derive(Serialize, Deserialize)]
struct AlgNumRepr {
    modulus: Option<UniPoly<Rat>>,
    coords: UniPoly<Rat>,
}

impl Serialize for AlgNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgNumRepr {
            modulus: self.field.as_ref().map(|f| f.modulus().clone()),
            coords: self.poly.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = AlgNumRepr::deserialize(d)?;
        match r.modulus {
            None if r.coords.degree().unwrap_or(0) == 0 => Ok(AlgNum::rational(r.coords.coeff(0))),
            None => Err(serde::de::Error::custom("irrational value without a modulus")),
            Some(m) if m.degree().unwrap_or(0) >= 1 => Ok(AlgNum::from_poly(&NumberField::new(m), r.coords)),
            Some(_) => Err(serde::de::Error::custom("constant modulus")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> UniPoly<Rat> {
        UniPoly::new(v.iter().map(|&x| Rat::from_int(x)).collect())
    }

    #[test]
    fn sqrt_two_arithmetic() {
        let k = NumberField::new(q(&[-2, 0, 1]));
        let r = AlgNum::generator(&k);
        assert_eq!(r.times(&r), AlgNum::from_i64(2));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<AlgNum>(&json).unwrap(), r);
        let inv = r.inverse().unwrap();
        assert_eq!(inv.times(&r), AlgNum::one());
        assert_eq!(r.conjugate(), r.negate());
    }

    #[test]
    fn reducible_modulus_reports_factor() {
        // r^2 - 1 = (r - 1)(r + 1)
        let k = NumberField::new(q(&[-1, 0, 1]));
        let a = AlgNum::from_poly(&k, q(&[-1, 1]));
        match a.inverse() {
            Err(ArithError::ZeroDivisor { factor }) => assert_eq!(factor, q(&[-1, 1])),
            other => panic!("expected zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn zero_and_one_have_no_context() {
        let k = NumberField::new(q(&[1, 1, 1]));
        let r = AlgNum::generator(&k);
        assert_eq!(r.plus(&AlgNum::zero()), r);
        assert_eq!(r.times(&AlgNum::one()), r);
        // r^3 = 1 for a primitive cube root of unity
        assert_eq!(r.pow_u(3), AlgNum::one());
    }
}
