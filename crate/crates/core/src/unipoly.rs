//! Dense univariate polynomials over a ring, with field and rational specific helpers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::field::{ArithError, Field, Ring};
use crate::rat::{divisors, Rat};

/// Coefficients are stored from the constant term upwards with no trailing zeros.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        UniPoly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn x() -> Self {
        UniPoly::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn plus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }

    pub fn minus(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }

    pub fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        UniPoly::new(v)
    }

    pub fn scale(&self, c: &R) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn negate(&self) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.negate()).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&R::from_i64(i as i64)))
                .collect(),
        )
    }

    /// Composition `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(q).plus(&UniPoly::constant(c.clone()));
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) if !b.contains(['+', '-']) => (true, b.to_string()),
                _ => (false, s.clone()),
            };
            let compound = body.contains(['+', '-']) || body.contains('*');
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mono);
            } else if compound {
                out.push_str(&format!("({body})*{mono}"));
            } else {
                out.push_str(&format!("{body}*{mono}"));
            }
        }
        out
    }
}

impl<F: Field> UniPoly<F> {
    pub fn monic(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = self.lead().inverse()?;
        Ok(self.scale(&inv))
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), ArithError> {
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        let inv = d.lead().inverse()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].times(&inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].minus(&c.times(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((UniPoly::new(q), UniPoly::new(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Result<Self, ArithError> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s * self = g (mod m)`.
    pub fn ext_gcd_mod(&self, m: &Self) -> Result<(Self, Self), ArithError> {
        let (mut r0, mut r1) = (m.clone(), self.clone());
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.minus(&q.times(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let inv = r0.lead().inverse()?;
        Ok((r0.scale(&inv), s0.scale(&inv)))
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Result<Self, ArithError> {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative())?;
        let (q, _) = self.divrem(&g)?;
        q.monic()
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }
}

/// Discriminant of `a x^3 + b x^2 + c x + d`, valid over any commutative ring.
pub fn cubic_discriminant<R: Ring>(p: &UniPoly<R>) -> Option<R> {
    if p.degree() != Some(3) {
        return None;
    }
    Some(binary_cubic_discriminant(
        &p.coeff(3),
        &p.coeff(2),
        &p.coeff(1),
        &p.coeff(0),
    ))
}

/// Discriminant of the binary form `a u^3 + b u^2 v + c u v^2 + d v^3`.
pub fn binary_cubic_discriminant<R: Ring>(a: &R, b: &R, c: &R, d: &R) -> R {
    let i = R::from_i64;
    let t1 = b.times(b).times(c).times(c);
    let t2 = i(4).times(a).times(&c.pow_u(3));
    let t3 = i(4).times(&b.pow_u(3)).times(d);
    let t4 = i(27).times(a).times(a).times(d).times(d);
    let t5 = i(18).times(a).times(b).times(c).times(d);
    t1.minus(&t2).minus(&t3).minus(&t4).plus(&t5)
}

/// One irreducible factor over the rationals found by low degree factoring.
#[derive(Clone, Debug, PartialEq)]
pub enum LowFactor {
    Root(Rat),
    Quadratic(UniPoly<Rat>),
}

impl UniPoly<Rat> {
    /// Scales to integer coefficients with unit content and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }

    /// The polynomial scaled to integer coefficients, content one, positive lead.
    pub fn primitive(&self) -> UniPoly<Rat> {
        UniPoly::new(
            self.primitive_integer()
                .into_iter()
                .map(Rat::from_bigint)
                .collect(),
        )
    }

    /// Distinct rational roots in increasing order.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut p = self.squarefree().expect("rational field");
        if p.coeff(0).is_zero() {
            roots.push(Rat::zero());
            p = UniPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let ints = p.primitive_integer();
        let a0 = ints[0].abs().to_biguint().unwrap();
        let an = ints.last().unwrap().abs().to_biguint().unwrap();
        match (divisors(&a0), divisors(&an)) {
            (Some(dn), Some(dd)) => {
                for n in &dn {
                    for d in &dd {
                        for sgn in [1i32, -1] {
                            let num = BigInt::from(n.clone()) * sgn;
                            let r = Rat::from_big(num, BigInt::from(d.clone()));
                            if p.eval(&r).is_zero() && !roots.contains(&r) {
                                roots.push(r);
                            }
                        }
                    }
                }
            }
            _ => {
                // Coefficients too large to factor: try the rounded real roots exactly.
                let lead = Rat::from_bigint(ints.last().unwrap().clone());
                for x in p.approx_real_roots() {
                    let scaled = x * lead.to_f64();
                    for k in [-1i64, 0, 1] {
                        let cand = BigInt::from(scaled.round() as i64 + k);
                        let r = Rat::from_bigint(cand) / &lead;
                        if p.eval(&r).is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Factors the squarefree part into rational roots and irreducible quadratics.
    /// Returns the leftover factor of degree at least three when one remains.
    pub fn factor_low_degree(&self) -> (Vec<LowFactor>, Option<UniPoly<Rat>>) {
        let mut out = Vec::new();
        let mut p = match self.squarefree() {
            Ok(p) => p,
            Err(_) => return (out, None),
        };
        for r in self.rational_roots() {
            let lin = UniPoly::new(vec![-&r, Rat::one()]);
            p = p.exact_div(&lin).expect("root divides");
            out.push(LowFactor::Root(r));
        }
        match p.degree() {
            None | Some(0) => (out, None),
            Some(2) => {
                out.push(LowFactor::Quadratic(p.monic().unwrap()));
                (out, None)
            }
            Some(_) => (out, Some(p.monic().unwrap())),
        }
    }

    /// Approximate real roots by Durand-Kerner iteration, for display only.
    pub fn approx_real_roots(&self) -> Vec<f64> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Vec::new(),
        };
        let lead = self.lead().to_f64();
        let c: Vec<f64> = self.coeffs.iter().map(|x| x.to_f64() / lead).collect();
        if n == 1 {
            return vec![-c[0]];
        }
        if n == 2 {
            let disc = c[1] * c[1] - 4.0 * c[0];
            if disc < 0.0 {
                return Vec::new();
            }
            let s = disc.sqrt();
            let mut v = vec![(-c[1] - s) / 2.0, (-c[1] + s) / 2.0];
            v.dedup();
            return v;
        }
        let evalc = |z: (f64, f64)| {
            let mut acc = (1.0, 0.0);
            for k in (0..n).rev() {
                acc = (acc.0 * z.0 - acc.1 * z.1 + c[k], acc.0 * z.1 + acc.1 * z.0);
            }
            acc
        };
        let mut z: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let a = 0.4 + 0.9 * k as f64;
                let r = 1.0 + c.iter().map(|x| x.abs()).fold(0.0, f64::max);
                (r * a.cos(), r * a.sin())
            })
            .collect();
        for _ in 0..500 {
            for i in 0..n {
                let num = evalc(z[i]);
                let mut den = (1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                        den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                    }
                }
                let m = den.0 * den.0 + den.1 * den.1;
                if m == 0.0 {
                    continue;
                }
                let q = (
                    (num.0 * den.0 + num.1 * den.1) / m,
                    (num.1 * den.0 - num.0 * den.1) / m,
                );
                z[i] = (z[i].0 - q.0, z[i].1 - q.1);
            }
        }
        let mut v: Vec<f64> = z
            .into_iter()
            .filter(|w| w.1.abs() <= 1e-7 * (1.0 + w.0.abs()))
            .map(|w| w.0)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}


impl<R: Ring> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> UniPoly<Rat> {
        UniPoly::new(v.iter().map(|&x| Rat::from_int(x)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let a = p(&[2, -3, 0, 1]);
        let g = a.gcd(&a.derivative()).unwrap();
        assert_eq!(g, p(&[-1, 1]));
        assert_eq!(a.squarefree().unwrap(), p(&[-2, 1, 1]));
    }

    #[test]
    fn roots_and_factors() {
        // (2x - 1)(x^2 - 3)
        let a = p(&[3, -6, -1, 2]);
        assert_eq!(a.rational_roots(), vec![Rat::new(1, 2)]);
        let (fs, rest) = a.factor_low_degree();
        assert!(rest.is_none());
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[1], LowFactor::Quadratic(p(&[-3, 0, 1])));
    }

    #[test]
    fn discriminant_values() {
        // x^3 - x has roots 0, 1, -1: discriminant 4
        assert_eq!(cubic_discriminant(&p(&[0, -1, 0, 1])), Some(Rat::from_int(4)));
        // (x-1)^2 (x+2)
        assert_eq!(cubic_discriminant(&p(&[2, -3, 0, 1])), Some(Rat::zero()));
        assert_eq!(cubic_discriminant(&p(&[1, 1])), None);
    }

    #[test]
    fn render_form() {
        assert_eq!(p(&[-4, 0, 1]).render("t"), "t^2 - 4");
        assert_eq!(p(&[0, -2]).render("t"), "-2*t");
    }
}
