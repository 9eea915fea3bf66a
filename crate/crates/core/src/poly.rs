//! Sparse multivariate polynomials over an exact coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Field, Ring};
use crate::rat::Rat;

/// Largest number of variables any polynomial in this crate uses.
pub const MAX_VARS: usize = 6;

/// Exponent vector; entries past the owning polynomial's variable count stay zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Mono(e)
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        Mono(e)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut e = o.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        Mono(e)
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0.iter()) {
            *a = (*a).max(*b);
        }
        Mono(e)
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn render(&self, names: &[&str]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = names.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"));
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }
}

/// Polynomial in `nvars` variables. Terms with zero coefficient are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R> {
    nvars: usize,
    terms: BTreeMap<Mono, R>,
}

impl<R: Ring> Poly<R> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        Poly::monomial(nvars, Mono::one(), c)
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, R::one())
    }

    pub fn monomial(nvars: usize, m: Mono, c: R) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Poly::monomial(nvars, Mono::var(i), R::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, R)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Mono::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.deg() == 0)
    }

    pub fn add_term(&mut self, m: Mono, c: R) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.0[self.nvars..].iter().all(|&e| e == 0));
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.plus(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg()).max()
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.get(i)).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Terms of total degree below `d`.
    pub fn truncate_below(&self, d: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg() < d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.deg());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.nvars = self.nvars.max(o.nvars);
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn minus(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.nvars = self.nvars.max(o.nvars);
        for (m, c) in &o.terms {
            r.add_term(*m, c.negate());
        }
        r
    }

    pub fn negate(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.negate())).collect(),
        }
    }

    pub fn scale(&self, k: &R) -> Self {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.times(k))).collect(),
        }
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut r = Poly::zero(self.nvars.max(o.nvars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(ma.mul(mb), ca.times(cb));
            }
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &R) -> Self {
        let mut r = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            r.add_term(ma.mul(m), ca.times(c));
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    pub fn eval(&self, point: &[R]) -> R {
        assert!(point.len() >= self.nvars);
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for i in 0..self.nvars {
                let e = m.get(i);
                if e > 0 {
                    v = v.times(&point[i].pow_u(e as u32));
                }
            }
            acc = acc.plus(&v);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e > 0 {
                let mut m2 = *m;
                m2.0[i] -= 1;
                r.add_term(m2, c.times(&R::from_i64(e as i64)));
            }
        }
        r
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Replaces variable `i` by `subs[i]`; the result lives in the substitutes' ring.
    pub fn substitute(&self, subs: &[Poly<R>]) -> Self {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.iter().map(|s| s.nvars).max().unwrap_or(0);
        let mut cache: Vec<Vec<Poly<R>>> = subs.iter().map(|s| vec![Poly::one(n), s.clone()]).collect();
        let mut r = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for i in 0..self.nvars {
                let e = m.get(i) as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().times(&subs[i]);
                    cache[i].push(next);
                }
                t = t.times(&cache[i][e]);
            }
            r = r.plus(&t);
        }
        r.nvars = n;
        r
    }

    /// `f(x + p)`.
    pub fn translate(&self, p: &[R]) -> Self {
        let subs: Vec<Poly<R>> = (0..self.nvars)
            .map(|i| Poly::var(self.nvars, i).plus(&Poly::constant(self.nvars, p[i].clone())))
            .collect();
        self.substitute(&subs)
    }

    /// Homogenizes with a new last variable, to the total degree of `self`.
    pub fn homogenize(&self) -> Self {
        let d = self.total_degree().unwrap_or(0);
        let n = self.nvars + 1;
        assert!(n <= MAX_VARS);
        let mut r = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut m2 = *m;
            m2.0[self.nvars] = (d - m.deg()) as u16;
            r.add_term(m2, c.clone());
        }
        r
    }

    /// Sets variable `i` to the constant `v`, keeping the variable count.
    pub fn specialize(&self, i: usize, v: &R) -> Self {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2.0[i];
            m2.0[i] = 0;
            r.add_term(m2, c.times(&v.pow_u(e as u32)));
        }
        r
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]` of the result.
    pub fn permute_vars(&self, perm: &[usize], nvars: usize) -> Self {
        let mut r = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut m2 = Mono::one();
            for i in 0..self.nvars {
                if m.get(i) > 0 {
                    m2.0[perm[i]] += m.get(i);
                }
            }
            r.add_term(m2, c.clone());
        }
        r
    }

    /// Re-declares the variable count; panics if a dropped variable occurs.
    pub fn with_nvars(&self, n: usize) -> Self {
        for m in self.terms.keys() {
            assert!(m.0[n..].iter().all(|&e| e == 0), "variable in use");
        }
        Poly {
            nvars: n,
            terms: self.terms.clone(),
        }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            r.add_term(*m, f(c));
        }
        r
    }

    /// Human readable form using the given variable names, highest degree first.
    pub fn render(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut ts: Vec<(&Mono, &R)> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.deg().cmp(&a.0.deg()).then(b.0.cmp(a.0)));
        let mut out = String::new();
        for (m, c) in ts {
            let s = c.to_string();
            let compound = s.trim_start_matches('-').contains(['+', '-', ' ']);
            let (neg, body) = if compound {
                (false, format!("({s})"))
            } else if let Some(b) = s.strip_prefix('-') {
                (true, b.to_string())
            } else {
                (false, s)
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if mono.is_empty() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{body}*{mono}"));
            }
        }
        out
    }
}

impl<F: Field> Poly<F> {
    /// Divides every coefficient by the given nonzero scalar.
    pub fn div_scalar(&self, k: &F) -> Self {
        self.scale(&k.inverse().expect("nonzero scalar"))
    }
}

impl Poly<Rat> {
    /// Lifts into a coefficient field containing the rationals.
    pub fn lift<F: Field>(&self) -> Poly<F> {
        self.map_coeffs(F::from_rat)
    }
}

/// Default variable names `x0, x1, ...`.
pub const XNAMES: [&str; MAX_VARS] = ["x0", "x1", "x2", "x3", "x4", "x5"];

impl<R: Ring> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&XNAMES))
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly::zero(0)
    }
    fn one() -> Self {
        Poly::one(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        Poly::plus(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        Poly::minus(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        Poly::times(self, o)
    }
    fn negate(&self) -> Self {
        Poly::negate(self)
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(0, R::from_i64(n))
    }
}

/// Serialized form: variable count and `(exponents, coefficient)` pairs.
#[derive(Serialize, Deserialize)]
struct PolyRepr<R> {
    nvars: usize,
    terms: Vec<(Vec<u16>, R)>,
}

impl<R: Ring + Serialize> Serialize for Poly<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0[..self.nvars].to_vec(), c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, R: Ring + Deserialize<'de>> Deserialize<'de> for Poly<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRepr::<R>::deserialize(d)?;
        if r.nvars > MAX_VARS || r.terms.iter().any(|(e, _)| e.len() != r.nvars) {
            return Err(serde::de::Error::custom("bad polynomial shape"));
        }
        Ok(Poly::from_terms(r.nvars, r.terms.into_iter().map(|(e, c)| (Mono::from_exps(&e), c))))
    }
}
